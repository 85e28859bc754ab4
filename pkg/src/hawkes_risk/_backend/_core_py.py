"""Pure-Python sampling kernels; reference implementation of the backend API.

Every function draws scalar variates from a numpy Generator in a fixed,
documented order.  The compiled backend consumes the identical bit stream
through numpy's C distribution functions, so for a given (seed, stream) both
backends produce bit-identical output.  Scalar math goes through the stdlib
``math`` module (libm), matching the C side exactly.

Family codes (shared with the compiled backend):
    kernel: 0 = exponential (k1=beta), 1 = power (k1=p, k2=c)
    marks:  0 = degenerate (m1=h0), 1 = exponential (m1=rate),
            2 = gamma (m1=shape, m2=scale), 3 = categorical (mvals, mcdf)
    claims: 0 = degenerate (c1=c0), 1 = exponential (c1=rate),
            2 = gamma (c1=shape, c2=scale), 3 = pareto (c1=alpha, c2=x_m),
            4 = weibull (c1=shape, c2=scale), 5 = lognormal (c1=mu, c2=sigma)
"""

from __future__ import annotations

import math

import numpy as np

COMPILED = False


class EventCapExceeded(RuntimeError):
    """Raised when a sampler exceeds its event-count cap."""


def _draw_mark(gen, mcode, m1, m2, mvals, mcdf):
    if mcode == 0:
        return m1
    if mcode == 1:
        return gen.standard_exponential() / m1
    if mcode == 2:
        return gen.gamma(m1, m2)
    u = gen.random()
    for j in range(len(mcdf)):
        if u < mcdf[j]:
            return mvals[j]
    return mvals[-1]


def _draw_claim(gen, ccode, c1, c2):
    if ccode == 0:
        return c1
    if ccode == 1:
        return gen.standard_exponential() / c1
    if ccode == 2:
        return gen.gamma(c1, c2)
    if ccode == 3:
        return c2 * gen.pareto(c1 + 1.0)
    if ccode == 4:
        return c2 * gen.weibull(c1)
    return gen.lognormal(c1, c2)


def _power_excitation(t, p, c, times, marks):
    z = 0.0
    for tau, a in zip(times, marks):
        z += a * c * (1.0 + t - tau) ** (-p)
    return z


def thinning(gen, nu, horizon, kcode, k1, k2, mcode, m1, m2, mvals, mcdf,
             max_events):
    """Ogata thinning with the post-event intensity as the dominating bound.

    Valid because both kernel families are non-increasing in the lag, so the
    intensity cannot rise between events; the bound is refreshed after every
    accepted or rejected candidate.
    """
    times: list[float] = []
    marks: list[float] = []
    t = 0.0
    if kcode == 0:
        beta = k1
        z = 0.0
        bound = nu
        while True:
            e = gen.standard_exponential()
            dt = e / bound
            t += dt
            if t >= horizon:
                break
            z *= math.exp(-beta * dt)
            lam = nu + z
            u = gen.random()
            if u * bound <= lam:
                a = _draw_mark(gen, mcode, m1, m2, mvals, mcdf)
                times.append(t)
                marks.append(a)
                if len(times) > max_events:
                    raise EventCapExceeded(f"more than {max_events} events")
                z += a * beta
                bound = nu + z
            else:
                bound = lam
    else:
        p, c = k1, k2
        bound = nu
        while True:
            e = gen.standard_exponential()
            t += e / bound
            if t >= horizon:
                break
            lam = nu + _power_excitation(t, p, c, times, marks)
            u = gen.random()
            if u * bound <= lam:
                a = _draw_mark(gen, mcode, m1, m2, mvals, mcdf)
                times.append(t)
                marks.append(a)
                if len(times) > max_events:
                    raise EventCapExceeded(f"more than {max_events} events")
                bound = lam + a * c
            else:
                bound = lam
    return np.asarray(times, dtype=np.float64), np.asarray(marks, dtype=np.float64)


def cluster(gen, nu, horizon, kcode, k1, k2, mcode, m1, m2, mvals, mcdf,
            kappa, max_events):
    """Immigration-birth sampler: Poisson immigrants, recursive offspring.

    Each event draws its mark, then K ~ Poisson(kappa * a) children at lags
    distributed like the normalized kernel.  Children born at or beyond the
    horizon are pruned together with their (necessarily later) subtrees.
    Returns (times, marks, n_immigrants, children_drawn).
    """
    n_imm = int(gen.poisson(nu * horizon))
    stack = [horizon * gen.random() for _ in range(n_imm)]
    times: list[float] = []
    marks: list[float] = []
    children_drawn = 0
    while stack:
        t = stack.pop()
        a = _draw_mark(gen, mcode, m1, m2, mvals, mcdf)
        times.append(t)
        marks.append(a)
        if len(times) > max_events:
            raise EventCapExceeded(f"more than {max_events} events")
        k = int(gen.poisson(kappa * a))
        children_drawn += k
        for _ in range(k):
            if kcode == 0:
                lag = gen.standard_exponential() / k1
            else:
                u = gen.random()
                lag = math.inf if u == 0.0 else u ** (-1.0 / (k1 - 1.0)) - 1.0
            tc = t + lag
            if tc < horizon:
                stack.append(tc)
    times_arr = np.asarray(times, dtype=np.float64)
    marks_arr = np.asarray(marks, dtype=np.float64)
    order = np.argsort(times_arr, kind="stable")
    return times_arr[order], marks_arr[order], n_imm, children_drawn


def ruin_path(gen, nu, horizon, kcode, k1, k2, mcode, m1, m2, mvals, mcdf,
              ccode, c1, c2, rho, u0, max_events):
    """One surplus path: thinning arrivals, one claim per arrival.

    The surplus only jumps down at arrivals, so ruin is checked there
    exactly.  Returns (ruined, ruin_time, n_events); ruin_time is -1.0 when
    the path survives to the horizon.
    """
    claims_sum = 0.0
    n = 0
    t = 0.0
    if kcode == 0:
        beta = k1
        z = 0.0
        bound = nu
        while True:
            e = gen.standard_exponential()
            dt = e / bound
            t += dt
            if t >= horizon:
                return False, -1.0, n
            z *= math.exp(-beta * dt)
            lam = nu + z
            u = gen.random()
            if u * bound <= lam:
                a = _draw_mark(gen, mcode, m1, m2, mvals, mcdf)
                claim = _draw_claim(gen, ccode, c1, c2)
                n += 1
                if n > max_events:
                    raise EventCapExceeded(f"more than {max_events} events")
                claims_sum += claim
                if u0 + rho * t - claims_sum <= 0.0:
                    return True, t, n
                z += a * beta
                bound = nu + z
            else:
                bound = lam
    else:
        p, c = k1, k2
        bound = nu
        times: list[float] = []
        marks: list[float] = []
        while True:
            e = gen.standard_exponential()
            t += e / bound
            if t >= horizon:
                return False, -1.0, n
            lam = nu + _power_excitation(t, p, c, times, marks)
            u = gen.random()
            if u * bound <= lam:
                a = _draw_mark(gen, mcode, m1, m2, mvals, mcdf)
                claim = _draw_claim(gen, ccode, c1, c2)
                n += 1
                if n > max_events:
                    raise EventCapExceeded(f"more than {max_events} events")
                claims_sum += claim
                if u0 + rho * t - claims_sum <= 0.0:
                    return True, t, n
                times.append(t)
                marks.append(a)
                bound = lam + a * c
            else:
                bound = lam
