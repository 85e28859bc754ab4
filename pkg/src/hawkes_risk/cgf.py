"""Limiting cumulant generating function of the event count (or claim total).

The time-normalized log moment generating function of N_t converges to
nu * (x(theta) - 1), where x(theta) is the minimal solution of

    x = g(theta) * M(x - 1),

with g(theta) = exp(theta) for the counting process and g(theta) = L(theta)
when every event carries an i.i.d. claim.  The solution exists up to a
critical theta_c where the curve g(theta) * M(x - 1) becomes tangent to the
identity; beyond it the limit is +inf.  Minimal-root selection is structural:
we bracket the stationary point of the defect function first, then bisect on
the left branch only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._solve import MAX_ITER, bisect, expand_upper, protected
from .errors import (
    DivergenceError,
    DomainError,
    NoConvergence,
    SteepnessError,
)
from .model import (
    ClaimLaw,
    HawkesModel,
    branching_ratio,
    claim_mgf,
    claim_mgf_inverse,
    claim_mgf_prime,
    kernel_kappa,
    kernel_phi,
    mark_mgf,
    mark_mgf_prime,
    mark_mgf_smax,
    validate,
)

TOL_FP = 1e-10

# Relative offset keeping bisection brackets strictly inside open transform
# domains.
_EDGE = 1e-13


@dataclass(frozen=True)
class FixedPointResult:
    """Minimal solution of x = g(theta) * M(x - 1); x_star is inf past theta_c."""

    theta: float
    x_star: float
    converged: bool
    iterations: int
    bracket: tuple[float, float]

    @property
    def finite(self) -> bool:
        return math.isfinite(self.x_star)


@dataclass(frozen=True)
class CriticalPair:
    """Tangency point (theta_c, x_c) bounding the effective domain."""

    theta_c: float
    x_c: float


def _growth(model: HawkesModel, theta: float, claims: ClaimLaw | None) -> float:
    if claims is None:
        return math.exp(theta)
    return claim_mgf(claims, theta)


def _growth_prime(model: HawkesModel, theta: float, claims: ClaimLaw | None) -> float:
    if claims is None:
        return math.exp(theta)
    return claim_mgf_prime(claims, theta)


def _upper_edge(model: HawkesModel) -> float:
    """Largest usable x for M(x - 1): just inside 1 + s_max when finite."""
    s_max = mark_mgf_smax(model)
    if math.isinf(s_max):
        return math.inf
    ub = 1.0 + s_max
    return ub - _EDGE * max(1.0, abs(ub))


def minimal_fixed_point(
    model: HawkesModel,
    theta: float,
    claims: ClaimLaw | None = None,
    tol: float = TOL_FP,
    max_iter: int = MAX_ITER,
) -> FixedPointResult:
    """Solve x = g(theta) * M(x - 1) for the minimal root.

    The defect phi(x) = g * M(x - 1) - x is convex with phi(0) > 0.  Its
    stationary point x_hat (where g * M'(x - 1) = 1) is located by bisection
    first; if phi(x_hat) > tol there is no real solution and the +inf
    sentinel is returned.  Otherwise the minimal root lies in [0, x_hat] and
    is bisected there, which selects it unconditionally.
    """
    g = _growth(model, theta, claims)

    if branching_ratio(model) == 0.0:
        # No excitation: phi is linear and g is the unique root.
        return FixedPointResult(theta, g, True, 0, (0.0, g))

    def phi(x: float) -> float:
        return g * mark_mgf(model, x - 1.0) - x

    def phi_prime(x: float) -> float:
        return g * mark_mgf_prime(model, x - 1.0) - 1.0

    hi = _upper_edge(model)
    if math.isinf(hi):
        hi = expand_upper(phi_prime, 0.0, 2.0)

    if protected(phi_prime, 0.0) >= 0.0:
        # phi is increasing on the whole domain and phi(0) > 0: no root.
        return FixedPointResult(theta, math.inf, True, 0, (0.0, hi))

    x_hat, _ = bisect(phi_prime, 0.0, hi, max_iter=max_iter)
    defect_min = phi(x_hat)
    if defect_min > tol:
        return FixedPointResult(theta, math.inf, True, 0, (0.0, x_hat))
    if defect_min >= 0.0:
        # Tangency within tolerance (theta at the critical point): the double
        # root sits at the stationary point itself.
        return FixedPointResult(theta, x_hat, True, 0, (0.0, x_hat))

    x_star, iterations = bisect(phi, 0.0, x_hat, max_iter=max_iter)
    converged = abs(phi(x_star)) < tol
    if not converged:
        raise NoConvergence(
            f"fixed-point residual {phi(x_star):.3g} above {tol:.3g} "
            f"after {iterations} bisections at theta={theta}"
        )
    return FixedPointResult(theta, x_star, converged, iterations, (0.0, x_hat))


def critical_pair(model: HawkesModel, claims: ClaimLaw | None = None) -> CriticalPair:
    """Locate the tangency (theta_c, x_c) of x = g(theta) * M(x - 1).

    x_c solves x * M'(x - 1) = M(x - 1) and does not depend on the claim
    law; theta_c then inverts g(theta_c) = 1 / M'(x_c - 1), which is a log
    for the counting process and the analytic inverse of L for compound
    impacts.
    """
    report = validate(model)
    if not report.steepness:
        raise SteepnessError(
            "impact H(a) is almost surely zero: the transform never becomes "
            "tangent to the identity and the critical point is infinite"
        )

    def psi(x: float) -> float:
        s = x - 1.0
        return x * mark_mgf_prime(model, s) - mark_mgf(model, s)

    hi = _upper_edge(model)
    if math.isinf(hi):
        hi = expand_upper(psi, 1.0, 2.0)
    x_c, _ = bisect(psi, 1.0, hi)

    target = 1.0 / mark_mgf_prime(model, x_c - 1.0)
    if claims is None:
        theta_c = -math.log(mark_mgf_prime(model, x_c - 1.0))
    else:
        theta_c = claim_mgf_inverse(claims, target)
    return CriticalPair(theta_c=theta_c, x_c=x_c)


def limit_cgf(model: HawkesModel, theta: float, claims: ClaimLaw | None = None) -> float:
    """Limit of log E[exp(theta N_t)] / t (or of the claim total): nu*(x-1)."""
    result = minimal_fixed_point(model, theta, claims)
    if not result.finite:
        return math.inf
    return model.nu * (result.x_star - 1.0)


def limit_cgf_derivative(
    model: HawkesModel, theta: float, claims: ClaimLaw | None = None
) -> float:
    """Derivative of the limit CGF, by implicit differentiation.

    Diverges at the tangency, so theta must lie strictly below theta_c.
    """
    result = minimal_fixed_point(model, theta, claims)
    if not result.finite:
        raise DomainError(f"theta={theta} is beyond the critical point")
    s = result.x_star - 1.0
    denom = 1.0 - _growth(model, theta, claims) * mark_mgf_prime(model, s)
    if denom <= 0.0:
        raise DomainError(
            f"theta={theta} is at or beyond the tangency; derivative diverges"
        )
    gp = _growth_prime(model, theta, claims)
    return model.nu * gp * mark_mgf(model, s) / denom


def cluster_mgf_path(
    model: HawkesModel,
    theta: float,
    horizon: float,
    grid_step: float | None = None,
    divergence_tol: float = 1e-3,
):
    """Finite-time MGF of one cluster's size, on a uniform grid.

    F(t) = E[exp(theta S_t)] satisfies a Volterra-type equation whose mark
    expectation collapses to M evaluated at the running convolution, because
    the kernels are multiplicative in the mark.  Implicit trapezoid stepping:
    the tiny diagonal weight makes the per-step fixed point a strong
    contraction.  Returns (grid, values); F is nondecreasing and approaches
    the minimal fixed point from below for theta <= theta_c.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if grid_step is None:
        grid_step = horizon / 2000.0
    n = max(1, int(round(horizon / grid_step)))
    dt = horizon / n
    grid = np.arange(n + 1) * dt

    kappa = kernel_kappa(model.kernel)
    phi = np.array([kernel_phi(model.kernel, t) for t in grid])
    s_max = mark_mgf_smax(model)

    try:
        ceiling = critical_pair(model).x_c * (1.0 + divergence_tol)
    except SteepnessError:
        ceiling = math.inf

    e_theta = math.exp(theta)
    F = np.empty(n + 1)
    F[0] = e_theta
    w0 = 0.5 * dt * phi[0]
    for k in range(1, n + 1):
        inner = float(np.dot(phi[1:k], F[k - 1:0:-1] - 1.0)) if k > 1 else 0.0
        known = dt * (inner + 0.5 * phi[k] * (F[0] - 1.0))
        f = F[k - 1]
        for _ in range(100):
            arg = (known + w0 * (f - 1.0)) / kappa
            if arg >= s_max:
                raise DivergenceError(
                    f"cluster MGF left the transform domain at t={grid[k]:.6g}; "
                    "theta exceeds the critical point"
                )
            f_new = e_theta * mark_mgf(model, arg)
            if abs(f_new - f) < 1e-13 * max(1.0, abs(f_new)):
                f = f_new
                break
            f = f_new
        else:
            raise NoConvergence(f"inner fixed point stalled at t={grid[k]:.6g}")
        if f > ceiling:
            raise DivergenceError(
                f"cluster MGF exceeded the critical value at t={grid[k]:.6g}; "
                "theta exceeds the critical point"
            )
        F[k] = f
    return grid, F
