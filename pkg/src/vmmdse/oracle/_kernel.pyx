# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the chain simulation.

Consumes the exact random stream documented in the package docstring
(same batch seeding, same draw order as the NumPy fallback), streaming
the draws through scalar accumulation instead of materializing the
(batch, n, r) arrays.
"""

import numpy as np

from numpy.random import PCG64, SeedSequence

from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_normal,
    random_standard_uniform,
)


cdef inline Py_ssize_t _bisect_right(const double* a, Py_ssize_t size, double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = size, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if v < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def chain_error_batches(
    const double[:, ::1] inl,
    const double[:, ::1] sigma,
    Py_ssize_t n,
    Py_ssize_t r,
    Py_ssize_t trials,
    Py_ssize_t batch_size,
    object seed,
    object cdf,
    double pw,
    object x_fixed,
    object w_fixed,
):
    out_arr = np.empty(trials, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef bint sampled = x_fixed is None

    cdef const double[::1] cdf_v = np.empty(0, dtype=np.float64)
    cdef const long long[::1] xf = np.empty(0, dtype=np.int64)
    cdef const long long[::1] wf = np.empty(0, dtype=np.int64)
    cdef long long[::1] xbuf = np.empty(0, dtype=np.int64)
    cdef long long[::1] wbuf = np.empty(0, dtype=np.int64)
    cdef Py_ssize_t cdf_size = 0
    if sampled:
        cdf_v = np.ascontiguousarray(cdf, dtype=np.float64)
        cdf_size = cdf_v.shape[0]
        xbuf = np.empty(batch_size * n, dtype=np.int64)
        wbuf = np.empty(batch_size * n, dtype=np.int64)
    else:
        xf = np.ascontiguousarray(x_fixed, dtype=np.int64)
        wf = np.ascontiguousarray(w_fixed, dtype=np.int64)

    cdef bitgen_t* state
    cdef Py_ssize_t n_batches = (trials + batch_size - 1) // batch_size
    cdef Py_ssize_t b, lo, hi, mb, t, i, k, idx, pos
    cdef double acc, s, u
    cdef Py_ssize_t xi, wi

    for b in range(n_batches):
        lo = b * batch_size
        hi = lo + batch_size
        if hi > trials:
            hi = trials
        mb = hi - lo
        bg = PCG64(SeedSequence(seed, spawn_key=(b,)))
        capsule = bg.capsule
        state = <bitgen_t*> PyCapsule_GetPointer(capsule, "BitGenerator")
        if sampled:
            with nogil:
                for pos in range(mb * n):
                    u = random_standard_uniform(state)
                    idx = _bisect_right(&cdf_v[0], cdf_size, u)
                    if idx >= cdf_size:
                        idx = cdf_size - 1
                    xbuf[pos] = idx
                for pos in range(mb * n):
                    u = random_standard_uniform(state)
                    wbuf[pos] = 1 if u < pw else 0
                for t in range(mb):
                    acc = 0.0
                    for i in range(n):
                        xi = <Py_ssize_t> xbuf[t * n + i]
                        wi = <Py_ssize_t> wbuf[t * n + i]
                        s = 0.0
                        for k in range(r):
                            s += random_standard_normal(state)
                        acc += inl[xi, wi] + sigma[xi, wi] * s
                    out[lo + t] = acc / r
        else:
            with nogil:
                for t in range(mb):
                    acc = 0.0
                    for i in range(n):
                        xi = <Py_ssize_t> xf[i]
                        wi = <Py_ssize_t> wf[i]
                        s = 0.0
                        for k in range(r):
                            s += random_standard_normal(state)
                        acc += inl[xi, wi] + sigma[xi, wi] * s
                    out[lo + t] = acc / r
    return out_arr
