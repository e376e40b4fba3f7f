"""Pure-Python reference kernels.

These are the fallback implementations of the accumulation/sieve kernels that
``zetakms._kernels`` (the compiled extension) accelerates.  The two backends
must produce *bit-identical* results:

* the floating-point kernels accumulate in a fixed sequential order with
  Neumaier compensation, performing the same IEEE operations in the same
  order as the C loops;
* the integer kernels are exact, so any correct implementation agrees.

Callers generate term arrays with shared numpy code and hand them to these
kernels for ordered accumulation only.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def neumaier_sum(terms: np.ndarray) -> float:
    """Sum a float64 array in ascending index order with Neumaier compensation."""
    s = 0.0
    c = 0.0
    for x in np.asarray(terms, dtype=np.float64).tolist():
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def neumaier_sum_c(terms: np.ndarray) -> complex:
    """Sum a complex128 array in ascending index order (per-channel Neumaier)."""
    arr = np.asarray(terms, dtype=np.complex128)
    return complex(neumaier_sum(arr.real), neumaier_sum(arr.imag))


def sieve_arrays(limit: int):
    """Sieve smallest-prime-factor and multiplicative-function tables up to ``limit``.

    Returns ``(spf, mobius, liouville, big_omega, squarefree)``; each array has
    length ``limit + 1`` with index 0 unused and index 1 set to the empty-product
    conventions (spf = 1, mu = lambda = 1, Omega = 0, squarefree).
    """
    n = int(limit)
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        spf[1] = 1
    p = 2
    while p * p <= n:
        if spf[p] == 0:
            view = spf[p::p]
            view[view == 0] = p
        p += 1
    unmarked = spf == 0
    if n >= 1:
        unmarked[:2] = False
    spf[unmarked] = np.flatnonzero(unmarked)

    big_omega = np.zeros(n + 1, dtype=np.int32)
    squarefree = np.ones(n + 1, dtype=np.bool_)
    if n >= 0:
        squarefree[0] = False
    primes = np.flatnonzero(spf[2:] == np.arange(2, n + 1)) + 2 if n >= 2 else []
    for p in primes:
        pk = int(p)
        while pk <= n:
            big_omega[pk::pk] += 1
            pk *= int(p)
        sq = int(p) * int(p)
        if sq <= n:
            squarefree[sq::sq] = False

    liouville = np.where(big_omega % 2 == 0, 1, -1).astype(np.int8)
    if n >= 0:
        liouville[0] = 1
    mobius = np.where(squarefree, liouville, 0).astype(np.int8)
    return spf, mobius, liouville, big_omega, squarefree


def divisor_convolve(kern: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Dirichlet-convolve: ``b[n] = sum_{d | n} kern[n // d] * a[d]``.

    ``kern`` is real (float64), ``a`` complex128; both indexed 1..N with a
    dummy entry at index 0.  Updates run in ascending-``d`` order so that each
    ``b[n]`` accumulates its divisor contributions in the same order as the
    compiled kernel.
    """
    kern = np.asarray(kern, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    n = len(a) - 1
    b = np.zeros(n + 1, dtype=np.complex128)
    for d in range(1, n + 1):
        if a[d] != 0:
            b[d::d] += kern[1 : n // d + 1] * a[d]
    return b
