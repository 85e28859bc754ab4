"""First- and second-order limits of the event count, with a Monte Carlo harness."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConditionWarning, StabilityError
from .model import HawkesModel, branching_ratio, impact_variance, validate
from .simulate import RngSpec, replica_map, simulate_thinning


def lln_mean(model: HawkesModel) -> float:
    """Long-run events per unit time: nu / (1 - E[H])."""
    eta = branching_ratio(model)
    if eta >= 1.0:
        raise StabilityError(f"branching ratio {eta:.6g} >= 1")
    return model.nu / (1.0 - eta)


def clt_variance(model: HawkesModel) -> float:
    """Gaussian variance rate: nu * (1 + Var[H]) / (1 - E[H])**3.

    Warns (ConditionWarning) when the kernel tail decays too slowly for the
    Gaussian limit to be guaranteed.
    """
    eta = branching_ratio(model)
    if eta >= 1.0:
        raise StabilityError(f"branching ratio {eta:.6g} >= 1")
    if not validate(model).clt_condition:
        warnings.warn(
            "kernel tail decays too slowly for the Gaussian limit",
            ConditionWarning,
            stacklevel=2,
        )
    return model.nu * (1.0 + impact_variance(model)) / (1.0 - eta) ** 3


def stationary_mean_intensity(alpha: float, beta: float, model: HawkesModel) -> float:
    """Stationary mean of the intensity alpha + beta * Z_t: alpha / (1 - beta E[H])."""
    scaled = beta * branching_ratio(model)
    if scaled >= 1.0:
        raise StabilityError(f"scaled branching ratio {scaled:.6g} >= 1")
    return alpha / (1.0 - scaled)


@dataclass(frozen=True)
class CltReport:
    """Monte Carlo comparison of standardized counts against the normal limit."""

    replicas: int
    horizon: float
    sample_mean_rate: float
    sample_var_rate: float
    ks_statistic: float
    p_value: float
    mu: float
    sigma2: float


def clt_check(
    model: HawkesModel,
    horizon: float,
    replicas: int,
    rng: RngSpec,
    workers: int | None = None,
) -> CltReport:
    """Simulate replicas, standardize N_T, and test against the normal limit."""
    if replicas < 2:
        raise ValueError("need at least two replicas")
    mu = lln_mean(model)
    sigma2 = clt_variance(model)

    def one(i: int) -> int:
        return simulate_thinning(model, horizon, rng.substream(i)).n_events

    counts = np.array(replica_map(one, replicas, workers), dtype=np.float64)
    z = (counts - mu * horizon) / np.sqrt(sigma2 * horizon)
    ks = stats.kstest(z, "norm")
    return CltReport(
        replicas=replicas,
        horizon=horizon,
        sample_mean_rate=float(counts.mean() / horizon),
        sample_var_rate=float(counts.var(ddof=1) / horizon),
        ks_statistic=float(ks.statistic),
        p_value=float(ks.pvalue),
        mu=mu,
        sigma2=sigma2,
    )
