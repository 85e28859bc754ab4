"""Exact samplers for the marked Hawkes process and intensity-path tools.

Two independent constructions of the same law are provided: Ogata thinning
driven by the conditional intensity, and the immigration-birth (cluster)
representation.  Both start from an empty past and count events on
[0, horizon).  Sampling is deterministic given an RngSpec; replicas use
consecutive stream indices and may run on several threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ExplosionGuard, StabilityError
from .model import (
    Degenerate,
    Exponential,
    ExpKernel,
    Gamma,
    HawkesModel,
    kernel_kappa,
    kernel_phi_tail,
    validate,
)

DEFAULT_MAX_EVENTS = 1_000_000

_EMPTY = np.empty(0, dtype=np.float64)


@dataclass(frozen=True)
class RngSpec:
    """Reproducible generator coordinates.

    The generator is PCG64 seeded with SeedSequence(seed, spawn_key=(stream,)),
    so identical (seed, stream) pairs give identical output on every platform,
    and distinct stream indices give independent replicas.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, offset: int) -> "RngSpec":
        return RngSpec(self.seed, self.stream + offset)


@dataclass(frozen=True, eq=False)
class EventStream:
    """Time-ordered marked events (tau_i, a_i) on [0, horizon)."""

    horizon: float
    times: np.ndarray
    marks: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        marks = np.asarray(self.marks, dtype=np.float64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "marks", marks)
        if self.horizon <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if times.shape != marks.shape or times.ndim != 1:
            raise ValueError("times and marks must be 1-d arrays of equal length")
        if times.size:
            if not np.all(np.diff(times) > 0):
                raise ValueError("event times must be strictly increasing")
            if times[0] < 0 or times[-1] >= self.horizon:
                raise ValueError("event times must lie in [0, horizon)")
            if np.any(marks < 0):
                raise ValueError("marks must be nonnegative")

    @property
    def n_events(self) -> int:
        return int(self.times.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (
            self.horizon == other.horizon
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.marks, other.marks)
        )


@dataclass(frozen=True)
class ClusterStats:
    """Branching diagnostics from one cluster-sampler run."""

    n_immigrants: int
    children_drawn: int


def _kernel_args(kernel) -> tuple[int, float, float]:
    if isinstance(kernel, ExpKernel):
        return 0, kernel.beta, 0.0
    return 1, kernel.p, kernel.c


def _mark_args(marks) -> tuple[int, float, float, np.ndarray, np.ndarray]:
    if isinstance(marks, Degenerate):
        return 0, marks.h0, 0.0, _EMPTY, _EMPTY
    if isinstance(marks, Exponential):
        return 1, marks.rate, 0.0, _EMPTY, _EMPTY
    if isinstance(marks, Gamma):
        return 2, marks.shape, marks.scale, _EMPTY, _EMPTY
    values = np.asarray(marks.values, dtype=np.float64)
    cdf = np.cumsum(np.asarray(marks.probs, dtype=np.float64))
    return 3, 0.0, 0.0, values, cdf


def claim_args(claims) -> tuple[int, float, float]:
    """Backend codes for a claim law (shared with ruin simulation)."""
    from .model import DegenerateClaim, ExpClaim, GammaClaim, Pareto, Weibull

    if isinstance(claims, DegenerateClaim):
        return 0, claims.c0, 0.0
    if isinstance(claims, ExpClaim):
        return 1, claims.rate, 0.0
    if isinstance(claims, GammaClaim):
        return 2, claims.shape, claims.scale
    if isinstance(claims, Pareto):
        return 3, claims.alpha, claims.x_m
    if isinstance(claims, Weibull):
        return 4, claims.shape, claims.scale
    return 5, claims.mu, claims.sigma


def _require_stable(model: HawkesModel) -> None:
    report = validate(model)
    if not report.stability:
        raise StabilityError(
            f"branching ratio {report.branching_ratio:.6g} >= 1; "
            "the simulation would explode in expectation"
        )


def simulate_thinning(
    model: HawkesModel,
    horizon: float,
    rng: RngSpec,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> EventStream:
    """Sample one path by Ogata thinning."""
    _require_stable(model)
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    kcode, k1, k2 = _kernel_args(model.kernel)
    mcode, m1, m2, mvals, mcdf = _mark_args(model.marks)
    try:
        times, marks = _backend.core.thinning(
            rng.generator(), model.nu, horizon, kcode, k1, k2,
            mcode, m1, m2, mvals, mcdf, max_events,
        )
    except _backend.EventCapExceeded as exc:
        raise ExplosionGuard(str(exc)) from None
    return EventStream(horizon=horizon, times=times, marks=marks)


def simulate_cluster(
    model: HawkesModel,
    horizon: float,
    rng: RngSpec,
    max_events: int = DEFAULT_MAX_EVENTS,
    stats: bool = False,
):
    """Sample one path by the immigration-birth construction.

    With stats=True returns (stream, ClusterStats); the diagnostics expose
    the immigrant count and the total offspring drawn, whose per-event mean
    estimates the branching ratio.
    """
    _require_stable(model)
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    kcode, k1, k2 = _kernel_args(model.kernel)
    mcode, m1, m2, mvals, mcdf = _mark_args(model.marks)
    kappa = kernel_kappa(model.kernel)
    try:
        times, marks, n_imm, children = _backend.core.cluster(
            rng.generator(), model.nu, horizon, kcode, k1, k2,
            mcode, m1, m2, mvals, mcdf, kappa, max_events,
        )
    except _backend.EventCapExceeded as exc:
        raise ExplosionGuard(str(exc)) from None
    stream = EventStream(horizon=horizon, times=times, marks=marks)
    if stats:
        return stream, ClusterStats(n_immigrants=n_imm, children_drawn=children)
    return stream


def intensity_path(model: HawkesModel, events: EventStream, grid) -> np.ndarray:
    """Left-continuous intensity nu + sum_{tau_i < t} h(t - tau_i, a_i) on a grid."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size and (grid.min() < 0 or grid.max() > events.horizon):
        raise ValueError("grid times must lie in [0, horizon]")
    out = np.full(grid.shape, model.nu, dtype=np.float64)
    times, marks = events.times, events.marks
    if times.size == 0:
        return out
    kernel = model.kernel
    for i, t in enumerate(grid):
        past = times < t
        if not np.any(past):
            continue
        lags = t - times[past]
        if isinstance(kernel, ExpKernel):
            contrib = marks[past] * kernel.beta * np.exp(-kernel.beta * lags)
        else:
            contrib = marks[past] * kernel.c * (1.0 + lags) ** (-kernel.p)
        out[i] += contrib.sum()
    return out


def integrated_intensity(model: HawkesModel, events: EventStream) -> float:
    """Compensator over [0, horizon), exact per kernel family."""
    T = events.horizon
    total = model.nu * T
    if events.n_events:
        lags = T - events.times
        kappa = kernel_kappa(model.kernel)
        spent = kappa - np.array([kernel_phi_tail(model.kernel, lag) for lag in lags])
        total += float(np.dot(events.marks, spent))
    return total


def residual_excitation(model: HawkesModel, events: EventStream) -> float:
    """Excitation mass scheduled after the horizon by events before it.

    Divided by sqrt(horizon) this is the error term whose vanishing underpins
    the Gaussian limit; useful as a finite-sample diagnostic.
    """
    if not events.n_events:
        return 0.0
    lags = events.horizon - events.times
    tails = np.array([kernel_phi_tail(model.kernel, lag) for lag in lags])
    return float(np.dot(events.marks, tails))


def default_workers() -> int:
    """Thread count for replica maps, from HAWKES_RISK_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("HAWKES_RISK_THREADS", "1")))
    except ValueError:
        return 1


def replica_map(fn, n_replicas: int, workers: int | None = None) -> list:
    """Evaluate fn(replica_index) for each replica, optionally on threads.

    Results are ordered by replica index, so the reduction is independent of
    scheduling; with independent substreams per replica the output is
    deterministic for any worker count.
    """
    if workers is None:
        workers = default_workers()
    if workers <= 1 or n_replicas <= 1:
        return [fn(i) for i in range(n_replicas)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_replicas)))
