#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Draw-for-draw identical to ``_core_py``: same variate order, same numpy bit
stream (via the C distribution functions), same libm scalar math.  The
extension is compiled with -ffp-contract=off so float arithmetic rounds
exactly like the interpreted reference.
"""

from libc.math cimport exp, pow, INFINITY
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential, random_standard_uniform, random_poisson,
    random_gamma, random_weibull, random_pareto, random_lognormal)

from hawkes_risk._backend._core_py import EventCapExceeded

COMPILED = True

DEF ERR_NONE = 0
DEF ERR_CAP = 1
DEF ERR_ALLOC = 2


cdef bitgen_t *_state(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline int _grow1(double **buf, long *cap) nogil:
    cdef long nc = cap[0] * 2
    cdef double *nb = <double *> realloc(buf[0], nc * sizeof(double))
    if nb == NULL:
        return ERR_ALLOC
    buf[0] = nb
    cap[0] = nc
    return ERR_NONE


cdef inline int _grow2(double **b1, double **b2, long *cap) nogil:
    cdef long nc = cap[0] * 2
    cdef double *p1 = <double *> realloc(b1[0], nc * sizeof(double))
    if p1 == NULL:
        return ERR_ALLOC
    b1[0] = p1
    cdef double *p2 = <double *> realloc(b2[0], nc * sizeof(double))
    if p2 == NULL:
        return ERR_ALLOC
    b2[0] = p2
    cap[0] = nc
    return ERR_NONE


cdef inline double _draw_mark(bitgen_t *state, int mcode, double m1, double m2,
                              const double *mvals, const double *mcdf,
                              int nm) nogil:
    cdef double u
    cdef int j
    if mcode == 0:
        return m1
    if mcode == 1:
        return random_standard_exponential(state) / m1
    if mcode == 2:
        return random_gamma(state, m1, m2)
    u = random_standard_uniform(state)
    for j in range(nm):
        if u < mcdf[j]:
            return mvals[j]
    return mvals[nm - 1]


cdef inline double _draw_claim(bitgen_t *state, int ccode, double c1,
                               double c2) nogil:
    if ccode == 0:
        return c1
    if ccode == 1:
        return random_standard_exponential(state) / c1
    if ccode == 2:
        return random_gamma(state, c1, c2)
    if ccode == 3:
        return c2 * random_pareto(state, c1 + 1.0)
    if ccode == 4:
        return c2 * random_weibull(state, c1)
    return random_lognormal(state, c1, c2)


cdef inline double _power_excitation(double t, double p, double c,
                                     const double *ts, const double *ms,
                                     long n) nogil:
    cdef double z = 0.0
    cdef long i
    for i in range(n):
        z += ms[i] * c * pow(1.0 + t - ts[i], -p)
    return z


cdef _wrap(double *buf, long n):
    # Copy a C buffer into a fresh numpy array and release it.
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view
    if n > 0:
        view = out
        memcpy(&view[0], buf, n * sizeof(double))
    free(buf)
    return out


def thinning(object gen, double nu, double horizon, int kcode, double k1,
             double k2, int mcode, double m1, double m2,
             double[::1] mvals, double[::1] mcdf, long max_events):
    cdef bitgen_t *state = _state(gen)
    cdef int nm = mvals.shape[0]
    cdef const double *vptr = NULL
    cdef const double *cptr = NULL
    if nm > 0:
        vptr = &mvals[0]
        cptr = &mcdf[0]

    cdef long cap = 1024
    cdef double *ts = <double *> malloc(cap * sizeof(double))
    cdef double *ms = <double *> malloc(cap * sizeof(double))
    if ts == NULL or ms == NULL:
        free(ts)
        free(ms)
        raise MemoryError()

    cdef long n = 0
    cdef int err = ERR_NONE
    cdef double t = 0.0, z = 0.0, bound = nu
    cdef double e, dt, lam, u, a
    cdef double beta = k1, p = k1, c = k2

    with gen.bit_generator.lock:
        with nogil:
            if kcode == 0:
                while True:
                    e = random_standard_exponential(state)
                    dt = e / bound
                    t = t + dt
                    if t >= horizon:
                        break
                    z = z * exp(-beta * dt)
                    lam = nu + z
                    u = random_standard_uniform(state)
                    if u * bound <= lam:
                        a = _draw_mark(state, mcode, m1, m2, vptr, cptr, nm)
                        if n == cap:
                            err = _grow2(&ts, &ms, &cap)
                            if err:
                                break
                        ts[n] = t
                        ms[n] = a
                        n += 1
                        if n > max_events:
                            err = ERR_CAP
                            break
                        z = z + a * beta
                        bound = nu + z
                    else:
                        bound = lam
            else:
                while True:
                    e = random_standard_exponential(state)
                    t = t + e / bound
                    if t >= horizon:
                        break
                    lam = nu + _power_excitation(t, p, c, ts, ms, n)
                    u = random_standard_uniform(state)
                    if u * bound <= lam:
                        a = _draw_mark(state, mcode, m1, m2, vptr, cptr, nm)
                        if n == cap:
                            err = _grow2(&ts, &ms, &cap)
                            if err:
                                break
                        ts[n] = t
                        ms[n] = a
                        n += 1
                        if n > max_events:
                            err = ERR_CAP
                            break
                        bound = lam + a * c
                    else:
                        bound = lam

    if err:
        free(ts)
        free(ms)
        if err == ERR_CAP:
            raise EventCapExceeded(f"more than {max_events} events")
        raise MemoryError()
    return _wrap(ts, n), _wrap(ms, n)


def cluster(object gen, double nu, double horizon, int kcode, double k1,
            double k2, int mcode, double m1, double m2,
            double[::1] mvals, double[::1] mcdf, double kappa,
            long max_events):
    cdef bitgen_t *state = _state(gen)
    cdef int nm = mvals.shape[0]
    cdef const double *vptr = NULL
    cdef const double *cptr = NULL
    if nm > 0:
        vptr = &mvals[0]
        cptr = &mcdf[0]

    cdef long cap = 1024, scap = 1024
    cdef double *ts = <double *> malloc(cap * sizeof(double))
    cdef double *ms = <double *> malloc(cap * sizeof(double))
    cdef double *stack = <double *> malloc(scap * sizeof(double))
    if ts == NULL or ms == NULL or stack == NULL:
        free(ts)
        free(ms)
        free(stack)
        raise MemoryError()

    cdef long n = 0, depth = 0, n_imm = 0, children = 0
    cdef long j, k, i
    cdef int err = ERR_NONE
    cdef double t, a, u, lag, tc

    with gen.bit_generator.lock:
        with nogil:
            n_imm = random_poisson(state, nu * horizon)
            for j in range(n_imm):
                if depth == scap:
                    err = _grow1(&stack, &scap)
                    if err:
                        break
                stack[depth] = horizon * random_standard_uniform(state)
                depth += 1
            while depth > 0 and not err:
                depth -= 1
                t = stack[depth]
                a = _draw_mark(state, mcode, m1, m2, vptr, cptr, nm)
                if n == cap:
                    err = _grow2(&ts, &ms, &cap)
                    if err:
                        break
                ts[n] = t
                ms[n] = a
                n += 1
                if n > max_events:
                    err = ERR_CAP
                    break
                k = random_poisson(state, kappa * a)
                children += k
                for i in range(k):
                    if kcode == 0:
                        lag = random_standard_exponential(state) / k1
                    else:
                        u = random_standard_uniform(state)
                        lag = INFINITY if u == 0.0 else pow(u, -1.0 / (k1 - 1.0)) - 1.0
                    tc = t + lag
                    if tc < horizon:
                        if depth == scap:
                            err = _grow1(&stack, &scap)
                            if err:
                                break
                        stack[depth] = tc
                        depth += 1
                if err:
                    break

    free(stack)
    if err:
        free(ts)
        free(ms)
        if err == ERR_CAP:
            raise EventCapExceeded(f"more than {max_events} events")
        raise MemoryError()
    times_arr = _wrap(ts, n)
    marks_arr = _wrap(ms, n)
    order = np.argsort(times_arr, kind="stable")
    return times_arr[order], marks_arr[order], n_imm, children


def ruin_path(object gen, double nu, double horizon, int kcode, double k1,
              double k2, int mcode, double m1, double m2,
              double[::1] mvals, double[::1] mcdf, int ccode, double c1,
              double c2, double rho, double u0, long max_events):
    cdef bitgen_t *state = _state(gen)
    cdef int nm = mvals.shape[0]
    cdef const double *vptr = NULL
    cdef const double *cptr = NULL
    if nm > 0:
        vptr = &mvals[0]
        cptr = &mcdf[0]

    cdef long cap = 0, n = 0, nh = 0
    cdef double *ts = NULL
    cdef double *ms = NULL
    if kcode != 0:
        cap = 1024
        ts = <double *> malloc(cap * sizeof(double))
        ms = <double *> malloc(cap * sizeof(double))
        if ts == NULL or ms == NULL:
            free(ts)
            free(ms)
            raise MemoryError()

    cdef int err = ERR_NONE
    cdef int ruined = 0
    cdef double ruin_time = -1.0
    cdef double t = 0.0, z = 0.0, bound = nu, claims_sum = 0.0
    cdef double e, dt, lam, u, a, claim
    cdef double beta = k1, p = k1, c = k2

    with gen.bit_generator.lock:
        with nogil:
            if kcode == 0:
                while True:
                    e = random_standard_exponential(state)
                    dt = e / bound
                    t = t + dt
                    if t >= horizon:
                        break
                    z = z * exp(-beta * dt)
                    lam = nu + z
                    u = random_standard_uniform(state)
                    if u * bound <= lam:
                        a = _draw_mark(state, mcode, m1, m2, vptr, cptr, nm)
                        claim = _draw_claim(state, ccode, c1, c2)
                        n += 1
                        if n > max_events:
                            err = ERR_CAP
                            break
                        claims_sum = claims_sum + claim
                        if u0 + rho * t - claims_sum <= 0.0:
                            ruined = 1
                            ruin_time = t
                            break
                        z = z + a * beta
                        bound = nu + z
                    else:
                        bound = lam
            else:
                while True:
                    e = random_standard_exponential(state)
                    t = t + e / bound
                    if t >= horizon:
                        break
                    lam = nu + _power_excitation(t, p, c, ts, ms, nh)
                    u = random_standard_uniform(state)
                    if u * bound <= lam:
                        a = _draw_mark(state, mcode, m1, m2, vptr, cptr, nm)
                        claim = _draw_claim(state, ccode, c1, c2)
                        n += 1
                        if n > max_events:
                            err = ERR_CAP
                            break
                        claims_sum = claims_sum + claim
                        if u0 + rho * t - claims_sum <= 0.0:
                            ruined = 1
                            ruin_time = t
                            break
                        if nh == cap:
                            err = _grow2(&ts, &ms, &cap)
                            if err:
                                break
                        ts[nh] = t
                        ms[nh] = a
                        nh += 1
                        bound = lam + a * c
                    else:
                        bound = lam

    free(ts)
    free(ms)
    if err:
        if err == ERR_CAP:
            raise EventCapExceeded(f"more than {max_events} events")
        raise MemoryError()
    return bool(ruined), ruin_time, n
