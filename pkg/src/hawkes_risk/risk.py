"""Insurance surplus driven by marked Hawkes arrivals.

The surplus starts at the reserve u, grows at the premium rate rho, and pays
an i.i.d. claim at every arrival.  Light-tailed claims admit an adjustment
coefficient (the positive crossing of the compound CGF with rho * theta) that
governs exponential ruin decay, plus a finite-horizon decay rate; heavy-tailed
claims get integrated-tail asymptotics instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._solve import bisect
from .cgf import critical_pair, limit_cgf, limit_cgf_derivative
from .errors import DomainError, NetProfitError, WindowError
from .ldp import legendre_point
from .model import (
    ClaimLaw,
    HawkesModel,
    Pareto,
    branching_ratio,
    claim_is_heavy,
    claim_mean,
    claim_tail,
)
from .simulate import RngSpec, claim_args, replica_map, _kernel_args, _mark_args
from . import _backend
from .errors import ExplosionGuard, StabilityError
from .model import validate

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class RiskModel:
    """Hawkes arrivals, claim law, premium rate rho, initial reserve u."""

    hawkes: HawkesModel
    claims: ClaimLaw
    rho: float
    u: float

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError(f"premium rate must be positive, got {self.rho}")
        if not self.u > 0:
            raise ValueError(f"initial reserve must be positive, got {self.u}")


@dataclass(frozen=True)
class RuinEstimate:
    """Monte Carlo ruin probability with a Wilson 95% interval."""

    psi_hat: float
    ci_low: float
    ci_high: float
    replicas: int
    horizon: float


@dataclass(frozen=True)
class HeavyTailAsymptotics:
    """Subexponential ruin approximation K * factor * integrated tail."""

    constant: float
    factor: float
    psi: float


def compound_cgf(risk: RiskModel, theta: float) -> float:
    """Limit CGF of the claim total; +inf beyond the compound critical point."""
    return limit_cgf(risk.hawkes, theta, claims=risk.claims)


def net_profit_window(risk: RiskModel) -> tuple[float, float]:
    """Premium rates (rho_min, rho_max) between drift ruin and trivial safety.

    Below rho_min claims outpace premiums on average; above rho_max the
    adjustment equation loses its root inside the effective domain.
    """
    model = risk.hawkes
    rho_min = claim_mean(risk.claims) * model.nu / (1.0 - branching_ratio(model))
    if claim_mean(risk.claims) == 0.0:
        return 0.0, math.inf
    pair = critical_pair(model, claims=risk.claims)
    rho_max = model.nu * (pair.x_c - 1.0) / pair.theta_c
    return rho_min, rho_max


def lundberg_exponent(risk: RiskModel, tol: float = 1e-10) -> float:
    """Adjustment coefficient: the positive root of Gamma_C(theta) = rho * theta.

    Exists and is unique strictly inside (0, theta_c) whenever rho lies in
    the net-profit window; located by bisection of the convex difference.
    """
    if claim_mean(risk.claims) == 0.0:
        raise WindowError("zero claims: ruin is impossible and no root exists")
    rho_min, rho_max = net_profit_window(risk)
    if not rho_min < risk.rho < rho_max:
        raise WindowError(
            f"premium rate {risk.rho:.6g} outside the net-profit window "
            f"({rho_min:.6g}, {rho_max:.6g})"
        )
    theta_c = critical_pair(risk.hawkes, claims=risk.claims).theta_c

    def gap(theta: float) -> float:
        return compound_cgf(risk, theta) - risk.rho * theta

    # gap(0) = 0 with negative slope, gap(theta_c) > 0 inside the window:
    # bracket away from the root at zero.
    lo = theta_c * 1e-12
    while gap(lo) >= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise WindowError("no descent near zero; premium at window edge")
    theta_dagger, _ = bisect(gap, lo, theta_c)
    residual = abs(gap(theta_dagger))
    if residual > tol:
        raise DomainError(
            f"adjustment-coefficient residual {residual:.3g} above {tol:.3g}"
        )
    return theta_dagger


def finite_horizon_rate(risk: RiskModel, z: float) -> float:
    """Decay rate w(z) of ruin by time u * z, piecewise in the horizon scale.

    Below the knee 1 / (Gamma_C'(theta_dagger) - rho) the rate is
    z * Lambda_C(1/z + rho); at and beyond it the infinite-horizon exponent
    takes over.  Continuous at the knee.
    """
    if z <= 0:
        raise ValueError(f"horizon scale must be positive, got {z}")
    theta_dagger = lundberg_exponent(risk)
    growth = limit_cgf_derivative(risk.hawkes, theta_dagger, claims=risk.claims)
    knee = 1.0 / (growth - risk.rho)
    if z >= knee:
        return theta_dagger
    y = 1.0 / z + risk.rho
    lam = legendre_point(risk.hawkes, y, claims=risk.claims).lambda_value
    return z * lam


def _wilson(k: int, n: int) -> tuple[float, float]:
    p = k / n
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = _Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4 * n * n)) / denom
    return max(center - half, 0.0), min(center + half, 1.0)


def default_ruin_horizon(risk: RiskModel, u: float) -> float:
    """Horizon making the unsimulated ruin mass negligible for light tails."""
    rho_min = claim_mean(risk.claims) * risk.hawkes.nu / (
        1.0 - branching_ratio(risk.hawkes)
    )
    margin = risk.rho - rho_min
    if margin <= 0:
        raise NetProfitError(
            f"premium rate {risk.rho:.6g} at or below the mean outflow "
            f"{rho_min:.6g}; ruin is certain"
        )
    return 50.0 * u / margin


def ruin_mc(
    risk: RiskModel,
    u: float | None = None,
    horizon: float | None = None,
    replicas: int = 2000,
    rng: RngSpec = RngSpec(0),
    max_events: int = 10_000_000,
    workers: int | None = None,
) -> RuinEstimate:
    """Monte Carlo ruin probability over a finite horizon.

    The surplus only jumps downward at arrivals, so checking it there is
    exact.  Each replica draws an independent stream; ruined paths stop
    early.
    """
    if u is None:
        u = risk.u
    model = risk.hawkes
    report = validate(model)
    if not report.stability:
        raise StabilityError(
            f"branching ratio {report.branching_ratio:.6g} >= 1"
        )
    if horizon is None:
        horizon = default_ruin_horizon(risk, u)
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")

    kcode, k1, k2 = _kernel_args(model.kernel)
    mcode, m1, m2, mvals, mcdf = _mark_args(model.marks)
    ccode, c1, c2 = claim_args(risk.claims)

    def one(i: int) -> bool:
        try:
            ruined, _, _ = _backend.core.ruin_path(
                rng.substream(i).generator(), model.nu, horizon,
                kcode, k1, k2, mcode, m1, m2, mvals, mcdf,
                ccode, c1, c2, risk.rho, u, max_events,
            )
        except _backend.EventCapExceeded as exc:
            raise ExplosionGuard(str(exc)) from None
        return ruined

    flags = replica_map(one, replicas, workers)
    k = int(sum(flags))
    lo, hi = _wilson(k, replicas)
    return RuinEstimate(
        psi_hat=k / replicas,
        ci_low=lo,
        ci_high=hi,
        replicas=replicas,
        horizon=horizon,
    )


def integrated_tail(claims: ClaimLaw, x: float) -> float:
    """Normalized tail integral of the claim law at x.

    Equals one at zero and decreases to zero; closed form for the Pareto
    family, adaptive quadrature of the survival function otherwise.
    """
    if not claim_is_heavy(claims):
        raise ValueError("integrated tail is defined for heavy-tailed laws")
    if x <= 0:
        return 1.0
    if isinstance(claims, Pareto):
        return (claims.x_m / (claims.x_m + x)) ** claims.alpha
    mass, _ = integrate.quad(
        lambda y: claim_tail(claims, y), x, np.inf, epsrel=1e-8, limit=200
    )
    return mass / claim_mean(claims)


def _heavy_constant(risk: RiskModel) -> float:
    if not claim_is_heavy(risk.claims):
        raise ValueError("heavy-tail asymptotics require a heavy-tailed claim law")
    model = risk.hawkes
    inflow = risk.rho * (1.0 - branching_ratio(model))
    outflow = model.nu * claim_mean(risk.claims)
    if inflow <= outflow:
        raise NetProfitError(
            f"premium rate {risk.rho:.6g} violates the net-profit condition"
        )
    return outflow / (inflow - outflow)


def heavy_tail_infinite(risk: RiskModel, u: float) -> HeavyTailAsymptotics:
    """Infinite-horizon subexponential approximation K * integrated tail(u)."""
    K = _heavy_constant(risk)
    return HeavyTailAsymptotics(
        constant=K, factor=1.0, psi=K * integrated_tail(risk.claims, u)
    )


def heavy_tail_finite(risk: RiskModel, u: float, T: float) -> HeavyTailAsymptotics:
    """Finite-horizon (time u * T) subexponential approximation.

    Regularly varying tails (Pareto) and Gumbel-class tails (Weibull,
    lognormal) get different bracket factors, both increasing to one as the
    scaled horizon grows.
    """
    if T <= 0:
        raise ValueError(f"scaled horizon must be positive, got {T}")
    K = _heavy_constant(risk)
    model = risk.hawkes
    inflow = risk.rho * (1.0 - branching_ratio(model))
    r = (inflow - model.nu * claim_mean(risk.claims)) / inflow
    if isinstance(risk.claims, Pareto):
        alpha = risk.claims.alpha
        factor = 1.0 - (1.0 + r * T / alpha) ** (-alpha)
    else:
        factor = 1.0 - math.exp(-r * T)
    return HeavyTailAsymptotics(
        constant=K, factor=factor, psi=K * factor * integrated_tail(risk.claims, u)
    )
