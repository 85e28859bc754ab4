"""Parametric kernels, mark laws and claim laws, with their moment transforms.

Kernels are multiplicatively marked: an event with mark ``a`` adds
``a * phi(t)`` to the intensity ``t`` time units later, so its total impact is
``H(a) = a * integral(phi) = kappa * a``.  All transforms below are closed
form, and every law carries its transform-domain boundary as data so solvers
can bracket safely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, HeavyTailError


# --------------------------------------------------------------------------
# Kernels
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpKernel:
    """h(t, a) = a * beta * exp(-beta * t); H(a) = a."""

    beta: float

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError(f"ExpKernel rate must be positive, got {self.beta}")


@dataclass(frozen=True)
class PowerKernel:
    """h(t, a) = a * c * (1 + t)**(-p); H(a) = a * c / (p - 1)."""

    p: float
    c: float

    def __post_init__(self) -> None:
        if not self.p > 1:
            raise ValueError(f"PowerKernel exponent must exceed 1, got {self.p}")
        if not self.c > 0:
            raise ValueError(f"PowerKernel scale must be positive, got {self.c}")


Kernel = ExpKernel | PowerKernel


def kernel_kappa(kernel: Kernel) -> float:
    """Total impact per unit mark, kappa = integral of phi over [0, inf)."""
    if isinstance(kernel, ExpKernel):
        return 1.0
    return kernel.c / (kernel.p - 1.0)


def kernel_phi(kernel: Kernel, t: float) -> float:
    """Unit-mark excitation phi(t) at lag t >= 0."""
    if isinstance(kernel, ExpKernel):
        return kernel.beta * math.exp(-kernel.beta * t)
    return kernel.c * (1.0 + t) ** (-kernel.p)


def kernel_phi_tail(kernel: Kernel, t: float) -> float:
    """Unit-mark tail mass: integral of phi over [t, inf)."""
    if isinstance(kernel, ExpKernel):
        return math.exp(-kernel.beta * t)
    return kernel.c / (kernel.p - 1.0) * (1.0 + t) ** (1.0 - kernel.p)


def integrated_kernel(kernel: Kernel, a: float) -> float:
    """Total impact H(a) of an event with mark a (exact, analytic)."""
    if a < 0:
        raise ValueError(f"mark must be nonnegative, got {a}")
    return kernel_kappa(kernel) * a


# --------------------------------------------------------------------------
# Mark laws (distribution of the raw mark a >= 0)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Degenerate:
    """All marks equal h0."""

    h0: float

    def __post_init__(self) -> None:
        if self.h0 < 0:
            raise ValueError(f"degenerate mark must be nonnegative, got {self.h0}")


@dataclass(frozen=True)
class Exponential:
    """Marks a ~ Exp(rate)."""

    rate: float

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise ValueError(f"exponential rate must be positive, got {self.rate}")


@dataclass(frozen=True)
class Gamma:
    """Marks a ~ Gamma(shape, scale)."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("gamma shape and scale must be positive")


@dataclass(frozen=True)
class Categorical:
    """Marks on a finite set of nonnegative atoms with simplex weights."""

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)
        if len(values) != len(probs) or not values:
            raise ValueError("values and probs must be nonempty and equal length")
        if any(v < 0 for v in values):
            raise ValueError("categorical mark values must be nonnegative")
        if any(p <= 0 for p in probs):
            raise ValueError("categorical probabilities must be strictly positive")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"categorical probabilities must sum to 1, got {sum(probs)}")


MarkLaw = Degenerate | Exponential | Gamma | Categorical


def mark_mean(marks: MarkLaw) -> float:
    """Mean of the raw mark a."""
    if isinstance(marks, Degenerate):
        return marks.h0
    if isinstance(marks, Exponential):
        return 1.0 / marks.rate
    if isinstance(marks, Gamma):
        return marks.shape * marks.scale
    return sum(p * v for p, v in zip(marks.probs, marks.values))


def mark_var(marks: MarkLaw) -> float:
    """Variance of the raw mark a."""
    if isinstance(marks, Degenerate):
        return 0.0
    if isinstance(marks, Exponential):
        return 1.0 / marks.rate**2
    if isinstance(marks, Gamma):
        return marks.shape * marks.scale**2
    m = mark_mean(marks)
    return sum(p * (v - m) ** 2 for p, v in zip(marks.probs, marks.values))


# --------------------------------------------------------------------------
# Hawkes model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HawkesModel:
    """Baseline intensity nu plus marked self-excitation."""

    nu: float
    kernel: Kernel
    marks: MarkLaw

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise ValueError(f"baseline intensity must be positive, got {self.nu}")


def branching_ratio(model: HawkesModel) -> float:
    """Mean offspring per event, E[H(a)] = kappa * E[a]."""
    return kernel_kappa(model.kernel) * mark_mean(model.marks)


def impact_variance(model: HawkesModel) -> float:
    """Var[H(a)] = kappa**2 * Var[a]."""
    return kernel_kappa(model.kernel) ** 2 * mark_var(model.marks)


def mark_mgf_smax(model: HawkesModel) -> float:
    """Supremum of the domain of M(s) = E[exp(s * H(a))]."""
    kappa = kernel_kappa(model.kernel)
    marks = model.marks
    if isinstance(marks, Exponential):
        return marks.rate / kappa
    if isinstance(marks, Gamma):
        return 1.0 / (marks.scale * kappa)
    return math.inf


def mark_mgf(model: HawkesModel, s: float) -> float:
    """M(s) = E[exp(s * H(a))], exact per family.

    Raises DomainError at or beyond the domain boundary.
    """
    kappa = kernel_kappa(model.kernel)
    marks = model.marks
    if s >= mark_mgf_smax(model):
        raise DomainError(
            f"mark transform diverges at s={s} (boundary {mark_mgf_smax(model)})"
        )
    if isinstance(marks, Degenerate):
        return math.exp(s * kappa * marks.h0)
    if isinstance(marks, Exponential):
        rate = marks.rate / kappa
        return rate / (rate - s)
    if isinstance(marks, Gamma):
        return (1.0 - s * kappa * marks.scale) ** (-marks.shape)
    return sum(p * math.exp(s * kappa * v) for p, v in zip(marks.probs, marks.values))


def mark_mgf_prime(model: HawkesModel, s: float) -> float:
    """M'(s) = E[H(a) * exp(s * H(a))], the analytic derivative of mark_mgf."""
    kappa = kernel_kappa(model.kernel)
    marks = model.marks
    if s >= mark_mgf_smax(model):
        raise DomainError(
            f"mark transform diverges at s={s} (boundary {mark_mgf_smax(model)})"
        )
    if isinstance(marks, Degenerate):
        h = kappa * marks.h0
        return h * math.exp(s * h)
    if isinstance(marks, Exponential):
        rate = marks.rate / kappa
        return rate / (rate - s) ** 2
    if isinstance(marks, Gamma):
        ks = marks.shape * kappa * marks.scale
        return ks * (1.0 - s * kappa * marks.scale) ** (-marks.shape - 1.0)
    return sum(
        p * kappa * v * math.exp(s * kappa * v)
        for p, v in zip(marks.probs, marks.values)
    )


# --------------------------------------------------------------------------
# Claim laws
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DegenerateClaim:
    c0: float

    def __post_init__(self) -> None:
        if self.c0 < 0:
            raise ValueError(f"claim size must be nonnegative, got {self.c0}")


@dataclass(frozen=True)
class ExpClaim:
    rate: float

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise ValueError(f"claim rate must be positive, got {self.rate}")


@dataclass(frozen=True)
class GammaClaim:
    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("claim shape and scale must be positive")


@dataclass(frozen=True)
class Pareto:
    """Shifted Pareto with survival (x_m / (x_m + x))**(alpha + 1) on [0, inf)."""

    alpha: float
    x_m: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.x_m > 0):
            raise ValueError("Pareto tail index and scale must be positive")


@dataclass(frozen=True)
class Weibull:
    """Heavy-tailed Weibull: shape < 1 puts it in the Gumbel attraction class."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (0 < self.shape < 1):
            raise ValueError(f"Weibull shape must lie in (0, 1), got {self.shape}")
        if not self.scale > 0:
            raise ValueError(f"Weibull scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class LogNormal:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"LogNormal sigma must be positive, got {self.sigma}")


ClaimLaw = DegenerateClaim | ExpClaim | GammaClaim | Pareto | Weibull | LogNormal

_HEAVY_CLAIMS = (Pareto, Weibull, LogNormal)


def claim_is_heavy(claims: ClaimLaw) -> bool:
    return isinstance(claims, _HEAVY_CLAIMS)


def claim_mean(claims: ClaimLaw) -> float:
    """E[C], finite for every supported family."""
    if isinstance(claims, DegenerateClaim):
        return claims.c0
    if isinstance(claims, ExpClaim):
        return 1.0 / claims.rate
    if isinstance(claims, GammaClaim):
        return claims.shape * claims.scale
    if isinstance(claims, Pareto):
        return claims.x_m / claims.alpha
    if isinstance(claims, Weibull):
        return claims.scale * math.gamma(1.0 + 1.0 / claims.shape)
    return math.exp(claims.mu + claims.sigma**2 / 2.0)


def claim_mgf_boundary(claims: ClaimLaw) -> float:
    """Supremum of the domain of L(theta) = E[exp(theta * C)] (light laws)."""
    if isinstance(claims, ExpClaim):
        return claims.rate
    if isinstance(claims, GammaClaim):
        return 1.0 / claims.scale
    if isinstance(claims, DegenerateClaim):
        return math.inf
    raise HeavyTailError(f"{type(claims).__name__} has no exponential moments")


def claim_mgf(claims: ClaimLaw, theta: float) -> float:
    """L(theta) = E[exp(theta * C)] for light claim laws."""
    if claim_is_heavy(claims):
        raise HeavyTailError(
            f"{type(claims).__name__} claims have no exponential moments"
        )
    if theta >= claim_mgf_boundary(claims):
        raise DomainError(
            f"claim transform diverges at theta={theta} "
            f"(boundary {claim_mgf_boundary(claims)})"
        )
    if isinstance(claims, DegenerateClaim):
        return math.exp(theta * claims.c0)
    if isinstance(claims, ExpClaim):
        return claims.rate / (claims.rate - theta)
    return (1.0 - theta * claims.scale) ** (-claims.shape)


def claim_mgf_prime(claims: ClaimLaw, theta: float) -> float:
    """L'(theta) = E[C * exp(theta * C)] for light claim laws."""
    if claim_is_heavy(claims):
        raise HeavyTailError(
            f"{type(claims).__name__} claims have no exponential moments"
        )
    if theta >= claim_mgf_boundary(claims):
        raise DomainError(
            f"claim transform diverges at theta={theta} "
            f"(boundary {claim_mgf_boundary(claims)})"
        )
    if isinstance(claims, DegenerateClaim):
        return claims.c0 * math.exp(theta * claims.c0)
    if isinstance(claims, ExpClaim):
        return claims.rate / (claims.rate - theta) ** 2
    ks = claims.shape * claims.scale
    return ks * (1.0 - theta * claims.scale) ** (-claims.shape - 1.0)


def claim_mgf_inverse(claims: ClaimLaw, value: float) -> float:
    """theta such that L(theta) = value; analytic per light family."""
    if claim_is_heavy(claims):
        raise HeavyTailError(
            f"{type(claims).__name__} claims have no exponential moments"
        )
    if value <= 0:
        raise DomainError(f"claim transform values are positive, got {value}")
    if isinstance(claims, DegenerateClaim):
        if claims.c0 == 0:
            raise DomainError("zero claims: transform is constant, not invertible")
        return math.log(value) / claims.c0
    if isinstance(claims, ExpClaim):
        return claims.rate * (1.0 - 1.0 / value)
    return (1.0 - value ** (-1.0 / claims.shape)) / claims.scale


def claim_tail(claims: ClaimLaw, x: float) -> float:
    """Survival function of a heavy-tailed claim law."""
    if not claim_is_heavy(claims):
        raise ValueError(f"{type(claims).__name__} does not expose a tail; use claim_mgf")
    if x <= 0:
        return 1.0
    if isinstance(claims, Pareto):
        return (claims.x_m / (claims.x_m + x)) ** (claims.alpha + 1.0)
    if isinstance(claims, Weibull):
        return math.exp(-((x / claims.scale) ** claims.shape))
    z = (math.log(x) - claims.mu) / claims.sigma
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    """Regularity flags; validation reports, it never raises."""

    stability: bool
    steepness: bool
    clt_condition: bool
    branching_ratio: float


def validate(model: HawkesModel) -> ValidationReport:
    """Check the three regularity conditions analytically per family.

    stability: mean offspring per event below one.
    steepness: the impact transform eventually outgrows any linear function,
        which holds exactly when H(a) is not almost surely zero.
    clt_condition: sqrt(t) times the kernel's tail mass vanishes; automatic
        for exponential kernels, and requires p > 3/2 for power kernels.
    """
    eta = branching_ratio(model)
    marks = model.marks
    if isinstance(marks, Degenerate):
        steep = marks.h0 > 0
    elif isinstance(marks, Categorical):
        steep = any(v > 0 for v in marks.values)
    else:
        steep = True
    if isinstance(model.kernel, ExpKernel):
        clt = True
    else:
        clt = model.kernel.p > 1.5
    return ValidationReport(
        stability=eta < 1.0,
        steepness=steep,
        clt_condition=clt,
        branching_ratio=eta,
    )
