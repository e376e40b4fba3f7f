# cython: language_level=3
"""Compiled accumulation/sieve kernels.

Bit-compatible accelerated twins of ``zetakms._kernels_py``: the floating
point kernels perform the identical sequence of IEEE-754 operations (the
extension is compiled with contraction disabled), the integer kernels are
exact.  See ``_kernels_py`` for the contract docstrings.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def neumaier_sum(terms):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.ascontiguousarray(
        terms, dtype=np.float64)
    cdef Py_ssize_t i, n = arr.shape[0]
    cdef double s = 0.0, c = 0.0, x, t
    for i in range(n):
        x = arr[i]
        t = s + x
        if (s if s >= 0 else -s) >= (x if x >= 0 else -x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def neumaier_sum_c(terms):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = np.ascontiguousarray(
        terms, dtype=np.complex128)
    cdef Py_ssize_t i, n = arr.shape[0]
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    cdef double x, t
    for i in range(n):
        x = arr[i].real
        t = sr + x
        if (sr if sr >= 0 else -sr) >= (x if x >= 0 else -x):
            cr += (sr - t) + x
        else:
            cr += (x - t) + sr
        sr = t
        x = arr[i].imag
        t = si + x
        if (si if si >= 0 else -si) >= (x if x >= 0 else -x):
            ci += (si - t) + x
        else:
            ci += (x - t) + si
        si = t
    return complex(sr + cr, si + ci)


def sieve_arrays(limit):
    cdef Py_ssize_t n = int(limit)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] spf = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] big_omega = np.zeros(n + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] mobius = np.zeros(n + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] liouville = np.zeros(n + 1, dtype=np.int8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] squarefree = np.zeros(n + 1, dtype=np.uint8)
    cdef Py_ssize_t i, j, m
    cdef cnp.int64_t p

    if n >= 1:
        spf[1] = 1
        mobius[1] = 1
        liouville[1] = 1
        squarefree[1] = 1
    liouville[0] = 1
    for i in range(2, n + 1):
        if spf[i] == 0:
            j = i
            while j <= n:
                if spf[j] == 0:
                    spf[j] = i
                j += i
    # Completion DP over m = i / spf(i).
    for i in range(2, n + 1):
        p = spf[i]
        m = i // p
        big_omega[i] = big_omega[m] + 1
        liouville[i] = -liouville[m]
        if m % p == 0:
            squarefree[i] = 0
            mobius[i] = 0
        else:
            squarefree[i] = squarefree[m]
            mobius[i] = -mobius[m]
    return spf, mobius, liouville, big_omega, squarefree.view(np.bool_)


def divisor_convolve(kern, a):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] k = np.ascontiguousarray(
        kern, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] aa = np.ascontiguousarray(
        a, dtype=np.complex128)
    cdef Py_ssize_t n = aa.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.zeros(
        n + 1, dtype=np.complex128)
    # Interleaved (re, im) float64 view of b for in-place channel updates.
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = b.view(np.float64)
    cdef Py_ssize_t d, q, idx
    cdef double ar, ai, kv, pr, pi
    for d in range(1, n + 1):
        ar = aa[d].real
        ai = aa[d].imag
        if ar != 0.0 or ai != 0.0:
            idx = d
            for q in range(1, n // d + 1):
                kv = k[q]
                pr = kv * ar
                pi = kv * ai
                bv[2 * idx] = bv[2 * idx] + pr
                bv[2 * idx + 1] = bv[2 * idx + 1] + pi
                idx += d
    return b
