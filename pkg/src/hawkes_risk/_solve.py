"""Bracketed scalar root finding used by the transform solvers.

Plain bisection is used everywhere on purpose: minimal-root selection and
tangency location rely on guaranteed brackets, never on the luck of a
Newton iterate.
"""

from __future__ import annotations

import math

from .errors import NoConvergence

MAX_ITER = 200


def protected(f, x: float) -> float:
    """Evaluate f, mapping overflow to +inf (monotone tails only)."""
    try:
        return f(x)
    except OverflowError:
        return math.inf


def bisect(f, lo: float, hi: float, *, max_iter: int = MAX_ITER,
           tol_x: float = 0.0) -> tuple[float, int]:
    """Root of f on [lo, hi] given a sign change; returns (root, iterations).

    Iterates to floating-point exhaustion of the bracket (or tol_x when
    positive).  Raises NoConvergence when the bracket has no sign change.
    """
    f_lo = protected(f, lo)
    f_hi = protected(f, hi)
    if f_lo == 0.0:
        return lo, 0
    if f_hi == 0.0:
        return hi, 0
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoConvergence(
            f"no sign change on bracket [{lo:.6g}, {hi:.6g}]: "
            f"f={f_lo:.6g}, {f_hi:.6g}"
        )
    it = 0
    while it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or (hi - lo) <= tol_x:
            break
        f_mid = protected(f, mid)
        it += 1
        if f_mid == 0.0:
            return mid, it
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi), it


def expand_upper(f, lo: float, hi: float, *, factor: float = 2.0,
                 max_expand: int = 200) -> float:
    """Grow hi geometrically until f(hi) > 0; f must eventually go positive."""
    value = protected(f, hi)
    n = 0
    while value <= 0.0:
        hi *= factor
        value = protected(f, hi)
        n += 1
        if n > max_expand:
            raise NoConvergence(f"no sign change found expanding past {hi:.6g}")
    return hi
