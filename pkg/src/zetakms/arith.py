"""Sieved arithmetic functions and tail-bounded Dirichlet/polylog series.

Numerical substrate for the zeta/eta identities: Mobius, Liouville and
squarefree tables up to a memory cap, truncated Dirichlet series with
integral-test tail bounds, polylogarithms at roots of unity, and exact
divisor-sum (Mobius) inversion.

All series are summed in ascending-n order with compensated accumulation so
identical inputs give bit-identical outputs regardless of backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

import numpy as np

from zetakms import _backend
from zetakms.errors import CapacityError, DomainError

#: Largest sieve limit accepted by default (~150 MB of tables).
DEFAULT_MEMORY_CAP = 10_000_000

RationalLike = Union[Fraction, int, str]


@dataclass(frozen=True)
class SeriesValue:
    """A truncated-series value with a rigorous truncation-tail bound.

    ``tail_bound`` bounds |exact - value| for the infinite series the caller
    evaluated, by the integral test; it is 0 for intrinsically finite sums.
    """

    value: complex
    tail_bound: float
    terms_used: int


@dataclass(frozen=True)
class ArithTable:
    """Sieved multiplicative-function tables for 1..limit (index 0 unused)."""

    limit: int
    mobius: np.ndarray
    liouville: np.ndarray
    big_omega: np.ndarray
    squarefree: np.ndarray
    spf: np.ndarray


def sieve(limit: int, *, memory_cap: int = DEFAULT_MEMORY_CAP) -> ArithTable:
    """Sieve mu, lambda, Omega, squarefree flags and smallest prime factors.

    Args:
        limit: table size N >= 1.
        memory_cap: largest accepted N (capacity error above it).

    Returns:
        An immutable ArithTable (arrays are read-only views).
    """
    limit = int(limit)
    if limit < 1:
        raise DomainError(f"sieve limit must be >= 1, got {limit}")
    if limit > memory_cap:
        raise CapacityError(
            f"sieve limit {limit} exceeds the memory cap {memory_cap}")
    spf, mobius, liouville, big_omega, squarefree = _backend.sieve_arrays(limit)
    for arr in (spf, mobius, liouville, big_omega, squarefree):
        arr.flags.writeable = False
    return ArithTable(
        limit=limit,
        mobius=mobius,
        liouville=liouville,
        big_omega=big_omega,
        squarefree=squarefree,
        spf=spf,
    )


def _check_abscissa(s: complex, abscissa: float) -> float:
    sigma = complex(s).real
    if not sigma > abscissa:
        raise DomainError(
            f"Re(s) = {sigma} is not above the abscissa of convergence "
            f"{abscissa}; no analytic continuation is attempted")
    return sigma


def _power_weights(n_terms: int, s: complex) -> np.ndarray:
    """n^(-s) for n = 1..n_terms (real array for real s, complex otherwise)."""
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    s = complex(s)
    if s.imag == 0.0:
        return n ** (-s.real)
    return np.exp(-s * np.log(n))


def dirichlet_series(
    coeff: np.ndarray,
    s: complex,
    n_terms: int | None = None,
    *,
    abscissa: float = 1.0,
) -> SeriesValue:
    """Evaluate sum_{n<=N} coeff[n] n^(-s) with an integral-test tail bound.

    Args:
        coeff: sequence indexed 1..N (entry 0 ignored), e.g. an ArithTable
            column or a plain array of Dirichlet coefficients.
        s: exponent with Re(s) above ``abscissa`` (default 1, the abscissa
            for bounded coefficients).
        n_terms: number of terms (defaults to the full table).

    Returns:
        SeriesValue with tail_bound = max|coeff| * N^(1-Re s) / (Re s - 1).
    """
    coeff = np.asarray(coeff)
    limit = len(coeff) - 1
    if n_terms is None:
        n_terms = limit
    if n_terms > limit:
        raise CapacityError(
            f"requested {n_terms} terms but the table holds {limit}")
    if n_terms < 1:
        raise DomainError("series needs at least one term")
    sigma = _check_abscissa(s, abscissa)

    head = coeff[1 : n_terms + 1]
    weights = _power_weights(n_terms, s)
    max_coeff = float(np.abs(head).max()) if n_terms else 0.0
    tail = max_coeff * n_terms ** (1.0 - sigma) / (sigma - 1.0)
    if np.iscomplexobj(head) or np.iscomplexobj(weights):
        terms = (head * weights).astype(np.complex128)
        value = _backend.neumaier_sum_c(terms)
    else:
        terms = (head * weights).astype(np.float64)
        value = _backend.neumaier_sum(terms)
    return SeriesValue(value=complex(value), tail_bound=tail, terms_used=n_terms)


def as_fraction(r: RationalLike) -> Fraction:
    """Normalize a rational label into [0, 1) in lowest terms."""
    return Fraction(r) % 1


def root_of_unity_powers(
    r: RationalLike, n_terms: int, *, galois_twist: int = 1
) -> np.ndarray:
    """zeta_r^n for n = 1..n_terms under the embedding zeta_r = e^(2 pi i r).

    The optional Galois twist a (a unit mod the denominator) replaces zeta_r
    by zeta_r^a.
    """
    r = as_fraction(r)
    q, p = r.denominator, r.numerator
    if gcd(int(galois_twist), q) != 1:
        raise DomainError(
            f"galois twist {galois_twist} is not a unit modulo {q}")
    # Angle-first division: equal rational angles j/q == j'/q' round to the
    # same double, so e(r)-value grids agree exactly across denominators.
    roots = np.exp(2j * np.pi * (np.arange(q, dtype=np.float64) / q))
    idx = (p * int(galois_twist) % q) * np.arange(1, n_terms + 1, dtype=np.int64) % q
    return roots[idx]


def polylog_root_of_unity(
    r: RationalLike,
    s: complex,
    n_terms: int,
    *,
    galois_twist: int = 1,
) -> SeriesValue:
    """Truncated polylogarithm Li_s(zeta_r) = sum zeta_r^n n^(-s), Re(s) > 1."""
    sigma = _check_abscissa(s, 1.0)
    powers = root_of_unity_powers(r, n_terms, galois_twist=galois_twist)
    weights = _power_weights(n_terms, s)
    terms = (powers * weights).astype(np.complex128)
    value = _backend.neumaier_sum_c(terms)
    tail = n_terms ** (1.0 - sigma) / (sigma - 1.0)
    return SeriesValue(value=complex(value), tail_bound=tail, terms_used=n_terms)


def mobius_invert(a: np.ndarray, table: ArithTable | None = None) -> np.ndarray:
    """Divisor-sum inversion b[n] = sum_{d | n} mu(n/d) a[d].

    On Dirichlet series this divides by zeta: sum b_n n^(-s) =
    (sum a_n n^(-s)) / zeta(s) on common truncations.

    Args:
        a: coefficients indexed 1..N (entry 0 ignored).
        table: sieve covering N (sieved on demand when omitted).

    Returns:
        complex128 array b indexed 1..N.
    """
    a = np.asarray(a)
    limit = len(a) - 1
    if table is None:
        table = sieve(limit)
    if table.limit < limit:
        raise CapacityError(
            f"table sieved to {table.limit} but coefficients reach {limit}")
    kern = table.mobius[: limit + 1].astype(np.float64)
    return _backend.divisor_convolve(kern, a.astype(np.complex128))


def divisor_sum(b: np.ndarray) -> np.ndarray:
    """Dirichlet convolution with the constant sequence: a[n] = sum_{d|n} b[d]."""
    b = np.asarray(b)
    kern = np.ones(len(b), dtype=np.float64)
    return _backend.divisor_convolve(kern, b.astype(np.complex128))
