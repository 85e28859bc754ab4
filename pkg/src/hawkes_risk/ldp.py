"""Large-deviations rate function and its independent oracles.

The rate function at a target mean rate x solves a two-equation system in
(theta_star, x_star).  Eliminating theta_star through the fixed-point
relation g(theta) = x_star / M(x_star - 1) leaves one scalar equation in
x_star, bisected on (0, x_c]; the value is theta_star * x - nu * (x_star - 1).

Two oracles check the solver from independent directions: a numeric
Legendre-Fenchel transform of the limit CGF (grid plus golden-section
refinement), and, for finite mark laws, a brute-force infimum of the
variational form over reweighted mark distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._solve import bisect, expand_upper
from .cgf import critical_pair, limit_cgf, limit_cgf_derivative
from .errors import DomainError, SteepnessError, StabilityError
from .model import (
    Categorical,
    ClaimLaw,
    Degenerate,
    Exponential,
    Gamma,
    HawkesModel,
    claim_mgf_inverse,
    claim_mgf_prime,
    kernel_kappa,
    mark_mgf,
    mark_mgf_prime,
    mark_mgf_smax,
    validate,
)

_BRACKET_EPS = 1e-12


@dataclass(frozen=True)
class RatePoint:
    """Solution of the rate-function system at target mean rate x."""

    x: float
    theta_star: float
    x_star: float
    lambda_value: float


@dataclass(frozen=True)
class VariationalResult:
    """Brute-force infimum over reweighted mark laws."""

    value: float
    weights: tuple[float, ...]


def _tilt_theta(model: HawkesModel, y: float, claims: ClaimLaw | None) -> float:
    """theta with g(theta) * M(y - 1) = y, from the fixed-point relation."""
    v = y / mark_mgf(model, y - 1.0)
    if claims is None:
        return math.log(v)
    return claim_mgf_inverse(claims, v)


def legendre_point(model: HawkesModel, x: float, claims: ClaimLaw | None = None) -> RatePoint:
    """Legendre-Fenchel transform of the limit CGF at x > 0, by bisection.

    Works for the counting process (claims=None) and for the compound
    claim-total process; the stationarity condition in x_star reads

        x * (1 - x_star * M'(s) / M(s)) = nu * g'(theta(x_star)) * M(s),

    with s = x_star - 1, positive at 0+ and negative at the tangency x_c.
    """
    if x <= 0:
        raise ValueError(f"target rate must be positive, got {x}")
    if not validate(model).stability:
        raise StabilityError("rate function requires a subcritical model")

    def defect(y: float) -> float:
        s = y - 1.0
        m = mark_mgf(model, s)
        theta = _tilt_theta(model, y, claims)
        if claims is None:
            gp = y / m
        else:
            gp = claim_mgf_prime(claims, theta)
        return x * (1.0 - y * mark_mgf_prime(model, s) / m) - model.nu * gp * m

    try:
        hi = critical_pair(model).x_c
    except SteepnessError:
        # No tangency (impact a.s. zero): the defect still turns negative.
        hi = expand_upper(lambda y: -defect(y), _BRACKET_EPS, 2.0)

    x_star, _ = bisect(defect, _BRACKET_EPS, hi)
    theta_star = _tilt_theta(model, x_star, claims)
    lam = theta_star * x - model.nu * (x_star - 1.0)
    return RatePoint(x=x, theta_star=theta_star, x_star=x_star, lambda_value=lam)


def rate_function(model: HawkesModel, x: float) -> RatePoint:
    """Rate of exponential decay of P(N_t / t near x).

    Vanishes exactly at the long-run mean rate; equals nu at x = 0 (only the
    void immigrant stream realizes an empty window) and is +inf for x < 0.
    """
    if x < 0:
        return RatePoint(x=x, theta_star=math.nan, x_star=math.nan,
                         lambda_value=math.inf)
    if x == 0:
        return RatePoint(x=0.0, theta_star=-math.inf, x_star=0.0,
                         lambda_value=model.nu)
    return legendre_point(model, x, claims=None)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol * max(1.0, abs(a), abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def legendre_numeric(model: HawkesModel, x: float, theta_grid=None) -> float:
    """sup over theta of theta * x - limit CGF, as a pure numeric oracle.

    Coarse grid (supplied or constructed inside the effective domain) plus
    golden-section refinement around the grid argmax.
    """
    if x < 0:
        return math.inf
    if x == 0:
        # The supremum is approached as theta -> -inf, where the CGF
        # flattens at -nu.
        return model.nu

    def objective(theta: float) -> float:
        return theta * x - limit_cgf(model, theta)

    if theta_grid is None:
        try:
            hi = critical_pair(model).theta_c
        except SteepnessError:
            hi = 1.0
            while limit_cgf_derivative(model, hi) < x:
                hi *= 2.0
        lo = -1.0
        while limit_cgf_derivative(model, lo) >= x:
            lo *= 2.0
        grid = np.linspace(lo, hi, 129)
    else:
        grid = np.asarray(theta_grid, dtype=np.float64)

    values = np.array([objective(t) for t in grid])
    i = int(np.argmax(values))
    lo_b = grid[max(i - 1, 0)]
    hi_b = grid[min(i + 1, len(grid) - 1)]
    if lo_b == hi_b:
        return float(values[i])
    _, best = _golden_max(objective, float(lo_b), float(hi_b))
    return max(best, float(values[i]))


def _simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All weight vectors with entries j / resolution summing to one."""
    if k == 1:
        return np.ones((1, 1))
    axes = np.meshgrid(*[np.arange(resolution + 1)] * (k - 1), indexing="ij")
    free = np.stack([ax.ravel() for ax in axes], axis=1)
    total = free.sum(axis=1)
    keep = total <= resolution
    free = free[keep]
    last = resolution - free.sum(axis=1, keepdims=True)
    return np.hstack([free, last]) / float(resolution)


def _variational_objective(x: float, nu: float, impacts: np.ndarray,
                           probs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    mean_impact = weights @ impacts
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(weights > 0, weights / probs, 1.0)
        kl = np.sum(np.where(weights > 0, weights * np.log(ratio), 0.0), axis=1)
    denom = x * mean_impact + nu
    return x * mean_impact + nu - x + x * np.log(x / denom) + x * kl


def variational_rate(
    model: HawkesModel,
    x: float,
    simplex_step: float = 1e-2,
    refine_step: float = 1e-4,
) -> VariationalResult:
    """Brute-force infimum of the variational rate form over reweighted marks.

    Restricted to finite mark laws with at most four atoms; a coarse scan of
    the simplex is followed by one local refinement pass around the argmin.
    Oracle only: cost over accuracy.
    """
    marks = model.marks
    if not isinstance(marks, Categorical):
        raise ValueError("variational oracle requires Categorical marks")
    if len(marks.values) > 4:
        raise ValueError("variational oracle supports at most 4 atoms")
    if x <= 0:
        raise ValueError(f"target rate must be positive, got {x}")

    kappa = kernel_kappa(model.kernel)
    impacts = kappa * np.asarray(marks.values)
    probs = np.asarray(marks.probs)
    k = len(marks.values)

    coarse = _simplex_grid(k, int(round(1.0 / simplex_step)))
    values = _variational_objective(x, model.nu, impacts, probs, coarse)
    best = int(np.argmin(values))
    best_w = coarse[best]
    best_v = float(values[best])

    if k > 1:
        ranges = []
        for j in range(k - 1):
            lo = max(0.0, best_w[j] - simplex_step)
            hi = min(1.0, best_w[j] + simplex_step)
            ranges.append(np.arange(lo, hi + refine_step / 2, refine_step))
        axes = np.meshgrid(*ranges, indexing="ij")
        free = np.stack([ax.ravel() for ax in axes], axis=1)
        last = 1.0 - free.sum(axis=1, keepdims=True)
        keep = last.ravel() >= 0.0
        fine = np.hstack([free, last])[keep]
        chunk = 1_000_000
        for start in range(0, len(fine), chunk):
            block = fine[start:start + chunk]
            vals = _variational_objective(x, model.nu, impacts, probs, block)
            i = int(np.argmin(vals))
            if vals[i] < best_v:
                best_v = float(vals[i])
                best_w = block[i]

    return VariationalResult(value=best_v, weights=tuple(float(w) for w in best_w))


def tilted_mark_law(model: HawkesModel, x_star: float):
    """Mark law reweighted by exp((x_star - 1) H(a)) / M(x_star - 1).

    Closed form per family: exponential and gamma laws stay in family with a
    shifted rate, finite laws are reweighted atom by atom, degenerate laws
    are unchanged.
    """
    s = x_star - 1.0
    if s >= mark_mgf_smax(model):
        raise DomainError(
            f"tilt x_star - 1 = {s} is outside the transform domain"
        )
    marks = model.marks
    kappa = kernel_kappa(model.kernel)
    if isinstance(marks, Degenerate):
        return marks
    if isinstance(marks, Exponential):
        return Exponential(rate=marks.rate - s * kappa)
    if isinstance(marks, Gamma):
        return Gamma(shape=marks.shape,
                     scale=marks.scale / (1.0 - s * kappa * marks.scale))
    norm = mark_mgf(model, s)
    weights = tuple(
        p * math.exp(s * kappa * v) / norm
        for p, v in zip(marks.probs, marks.values)
    )
    return Categorical(values=marks.values, probs=weights)


def closed_form_exp_marks(
    nu: float,
    lam: float,
    theta: float | None = None,
    x: float | None = None,
) -> float:
    """Printed closed forms for exponentially distributed impacts (oracle only).

    With H(a) ~ Exp(lam), lam > 1, the limit CGF and the rate function have
    explicit radical expressions; exactly one of theta (returns the CGF) or
    x (returns the rate) must be given.  The x-branch contains a
    sign-sensitive inner term and is validated against the numeric Legendre
    transform in the tests before being trusted.
    """
    if lam <= 1:
        raise ValueError("exponential impacts need lam > 1 for stability")
    if (theta is None) == (x is None):
        raise ValueError("give exactly one of theta or x")
    if theta is not None:
        boundary = math.log((lam + 1.0) ** 2 / (4.0 * lam))
        if theta > boundary + 1e-15:
            raise DomainError(f"theta={theta} beyond the boundary {boundary}")
        disc = max((lam + 1.0) ** 2 - 4.0 * lam * math.exp(theta), 0.0)
        return nu * ((lam + 1.0 - math.sqrt(disc)) / 2.0 - 1.0)
    if x < 0:
        return math.inf
    if x == 0:
        return nu
    root = math.sqrt(4.0 * x**2 + nu**2 * (lam + 1.0) ** 2)
    theta_star = math.log((-2.0 * x**2 + x * root) / (lam * nu**2))
    gamma_at_star = nu * ((lam + 1.0 - (-2.0 * x + root) / nu) / 2.0 - 1.0)
    return theta_star * x - gamma_at_star
