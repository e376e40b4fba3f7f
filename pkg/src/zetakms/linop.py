"""Finite-rank truncated-operator engine.

Operators on a truncated basis come in three exact structures:

* ``diagonal`` — entrywise multiplication;
* ``monomial`` — a partial isometry pattern ``e_l -> scalar[l] * e_target[l]``
  where ``target[l]`` is a partial injection.  Besides valid indices the
  target map stores two sentinels: ``ZERO`` (the operator genuinely
  annihilates ``e_l``) and ``CLIPPED`` (the untruncated operator maps ``e_l``
  outside the truncation, so the finite realization returns 0 but the column
  is flagged and excluded from exact-identity checks).  Clipping propagates
  through composition; structural zeros absorb it.
* ``dense`` — an explicit matrix, capped at ``DENSE_CAP`` so exhaustive
  oracles stay tractable.

Compositions and sums stay in the smallest exact structure; operator norms
are exact maxima for diagonal/monomial and largest singular values for dense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from zetakms import _backend
from zetakms.arith import SeriesValue
from zetakms.errors import BasisMismatchError, CapacityError, DomainError

#: Sentinel target values for monomial structure.
ZERO = -1
CLIPPED = -2

#: Largest dimension for dense matrices / dense fallbacks.
DENSE_CAP = 4096


@dataclass(frozen=True)
class TruncatedOperator:
    """A finite-rank operator with exact sparsity structure."""

    dim: int
    basis_tag: str
    structure: str  # "diagonal" | "monomial" | "dense"
    diag: np.ndarray | None = None
    target: np.ndarray | None = None
    scalar: np.ndarray | None = None
    matrix: np.ndarray | None = None
    note: str | None = None


@dataclass(frozen=True)
class NormReport:
    value: float
    method: str  # "exact-max" | "svd"


@dataclass(frozen=True)
class SummabilityReport:
    kind: str  # "finite" | "theta"
    beta_grid: tuple[float, ...]
    traces: tuple[SeriesValue, ...]
    bound: tuple[float, ...] | None


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def diagonal_operator(values: Sequence[complex], basis_tag: str) -> TruncatedOperator:
    diag = _freeze(np.array(values, dtype=np.complex128))
    return TruncatedOperator(
        dim=len(diag), basis_tag=basis_tag, structure="diagonal", diag=diag)


def monomial_operator(
    target: Sequence[int],
    scalar: Sequence[complex],
    basis_tag: str,
    note: str | None = None,
) -> TruncatedOperator:
    target = np.array(target, dtype=np.int64)
    scalar = np.array(scalar, dtype=np.complex128)
    if len(target) != len(scalar):
        raise DomainError("target and scalar lengths differ")
    valid = target >= 0
    if valid.any():
        hit = target[valid]
        if hit.max() >= len(target):
            raise DomainError("monomial target out of range")
        if len(np.unique(hit)) != len(hit):
            raise DomainError("monomial target map is not a partial injection")
    scalar = np.where(valid, scalar, 0.0 + 0.0j)
    return TruncatedOperator(
        dim=len(target), basis_tag=basis_tag, structure="monomial",
        target=_freeze(target), scalar=_freeze(scalar), note=note)


def dense_operator(matrix: np.ndarray, basis_tag: str,
                   note: str | None = None) -> TruncatedOperator:
    matrix = np.array(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError("dense operator needs a square matrix")
    if matrix.shape[0] > DENSE_CAP:
        raise CapacityError(
            f"dense dimension {matrix.shape[0]} exceeds the cap {DENSE_CAP}")
    return TruncatedOperator(
        dim=matrix.shape[0], basis_tag=basis_tag, structure="dense",
        matrix=_freeze(matrix), note=note)


def identity(dim: int, basis_tag: str) -> TruncatedOperator:
    return diagonal_operator(np.ones(dim, dtype=np.complex128), basis_tag)


def zero_operator(dim: int, basis_tag: str) -> TruncatedOperator:
    return monomial_operator(
        np.full(dim, ZERO, dtype=np.int64), np.zeros(dim, dtype=np.complex128),
        basis_tag)


def _check_bases(a: TruncatedOperator, b: TruncatedOperator) -> None:
    if a.dim != b.dim or a.basis_tag != b.basis_tag:
        raise BasisMismatchError(
            f"operands live on different bases: "
            f"({a.dim}, {a.basis_tag!r}) vs ({b.dim}, {b.basis_tag!r})")


def to_dense(a: TruncatedOperator) -> np.ndarray:
    """Exact dense matrix of the truncated realization (clipped columns are 0)."""
    if a.dim > DENSE_CAP:
        raise CapacityError(
            f"dimension {a.dim} exceeds the dense cap {DENSE_CAP}")
    if a.structure == "diagonal":
        return np.diag(a.diag)
    if a.structure == "dense":
        return a.matrix.copy()
    mat = np.zeros((a.dim, a.dim), dtype=np.complex128)
    valid = a.target >= 0
    mat[a.target[valid], np.flatnonzero(valid)] = a.scalar[valid]
    return mat


def _as_monomial(a: TruncatedOperator) -> tuple[np.ndarray, np.ndarray]:
    """(target, scalar) view of a diagonal/monomial operator."""
    if a.structure == "diagonal":
        return np.arange(a.dim, dtype=np.int64), a.diag
    return a.target, a.scalar


def compose(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """Operator product a.b (apply b first)."""
    _check_bases(a, b)
    if a.structure == "diagonal" and b.structure == "diagonal":
        return diagonal_operator(a.diag * b.diag, a.basis_tag)
    if a.structure != "dense" and b.structure != "dense":
        ta, sa = _as_monomial(a)
        tb, sb = _as_monomial(b)
        target = np.full(a.dim, ZERO, dtype=np.int64)
        scalar = np.zeros(a.dim, dtype=np.complex128)
        ok_b = tb >= 0
        mid = tb[ok_b]
        target[ok_b] = ta[mid]
        scalar[ok_b] = sa[mid] * sb[ok_b]
        # A clipped stage anywhere in the word taints the column.
        target[tb == CLIPPED] = CLIPPED
        scalar[target < 0] = 0
        return monomial_operator(target, scalar, a.basis_tag)
    return dense_operator(to_dense(a) @ to_dense(b), a.basis_tag)


def adjoint(a: TruncatedOperator) -> TruncatedOperator:
    """Adjoint of the truncated realization.

    Compression commutes with adjoints, so the result carries no clipped
    flags: columns outside the image of the target map are structural zeros.
    """
    if a.structure == "diagonal":
        return diagonal_operator(np.conj(a.diag), a.basis_tag)
    if a.structure == "dense":
        return dense_operator(a.matrix.conj().T, a.basis_tag)
    target = np.full(a.dim, ZERO, dtype=np.int64)
    scalar = np.zeros(a.dim, dtype=np.complex128)
    valid = np.flatnonzero(a.target >= 0)
    target[a.target[valid]] = valid
    scalar[a.target[valid]] = np.conj(a.scalar[valid])
    return monomial_operator(target, scalar, a.basis_tag)


def scale(a: TruncatedOperator, c: complex) -> TruncatedOperator:
    if a.structure == "diagonal":
        return diagonal_operator(c * a.diag, a.basis_tag)
    if a.structure == "dense":
        return dense_operator(c * a.matrix, a.basis_tag)
    return monomial_operator(a.target, c * a.scalar, a.basis_tag, note=a.note)


def add(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """Sum, staying exact: falls back to dense only on structure clashes.

    Monomial sums stay monomial when at most one operand is nonzero per
    column (shared target maps or disjoint supports); a clipped column in
    either operand taints the sum's column.
    """
    _check_bases(a, b)
    if a.structure == "diagonal" and b.structure == "diagonal":
        return diagonal_operator(a.diag + b.diag, a.basis_tag)
    if a.structure != "dense" and b.structure != "dense":
        ta, sa = _as_monomial(a)
        tb, sb = _as_monomial(b)
        both = (ta >= 0) & (tb >= 0)
        if not np.any(both & (ta != tb)):
            target = np.where(ta >= 0, ta, np.where(tb >= 0, tb, ZERO))
            scalar = (np.where(ta >= 0, sa, 0.0 + 0.0j)
                      + np.where(tb >= 0, sb, 0.0 + 0.0j))
            clip = (ta == CLIPPED) | (tb == CLIPPED)
            target = np.where(clip, CLIPPED, target)
            scalar = np.where(clip, 0.0 + 0.0j, scalar)
            hit = target[target >= 0]
            if len(np.unique(hit)) == len(hit):
                return monomial_operator(target, scalar, a.basis_tag)
    return dense_operator(to_dense(a) + to_dense(b), a.basis_tag,
                          note="dense fallback; clipped columns realized as 0")


def op_norm_report(a: TruncatedOperator) -> NormReport:
    """Operator norm: exact max for diagonal/monomial, largest singular value else."""
    if a.structure == "diagonal":
        return NormReport(float(np.abs(a.diag).max(initial=0.0)), "exact-max")
    if a.structure == "monomial":
        valid = a.target >= 0
        mags = np.abs(a.scalar[valid])
        return NormReport(float(mags.max(initial=0.0)), "exact-max")
    return NormReport(float(np.linalg.norm(a.matrix, 2)), "svd")


def op_norm(a: TruncatedOperator) -> float:
    return op_norm_report(a).value


def diagonal_entries(a: TruncatedOperator) -> np.ndarray:
    if a.structure == "diagonal":
        return a.diag
    if a.structure == "dense":
        return np.diagonal(a.matrix)
    fixed = a.target == np.arange(a.dim, dtype=np.int64)
    return np.where(fixed, a.scalar, 0.0 + 0.0j)


def weighted_trace(a: TruncatedOperator, weight: np.ndarray) -> SeriesValue:
    """sum_k weight[k] <e_k, A e_k> in ascending index order, compensated."""
    weight = np.asarray(weight)
    if len(weight) != a.dim:
        raise BasisMismatchError(
            f"weight length {len(weight)} != dim {a.dim}")
    terms = (diagonal_entries(a) * weight).astype(np.complex128)
    value = _backend.neumaier_sum_c(terms)
    return SeriesValue(value=complex(value), tail_bound=0.0, terms_used=a.dim)


def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    return add(compose(a, b), scale(compose(b, a), -1))


def twisted_commutator(
    d: TruncatedOperator,
    a: TruncatedOperator,
    sigma_of_a: TruncatedOperator,
) -> TruncatedOperator:
    """D.a - sigma(a).D, the twisted commutator certified by the triples."""
    return add(compose(d, a), scale(compose(sigma_of_a, d), -1))


def unclipped_mask(a: TruncatedOperator) -> np.ndarray:
    """Boolean mask of columns untouched by truncation clipping."""
    if a.structure == "monomial":
        return a.target != CLIPPED
    return np.ones(a.dim, dtype=bool)


def clipped_fraction(a: TruncatedOperator) -> float:
    mask = unclipped_mask(a)
    return float(np.count_nonzero(~mask)) / a.dim


def columns_equal(
    a: TruncatedOperator,
    b: TruncatedOperator,
    *,
    rtol: float = 0.0,
) -> list[tuple[int, tuple, tuple]]:
    """Compare two diagonal/monomial operators column by column.

    Only columns unclipped in *both* operands participate.  Returns mismatch
    witnesses ``(index, (target_a, scalar_a), (target_b, scalar_b))``; empty
    means the operators agree exactly (or within ``rtol`` when given) on the
    shared unclipped domain.
    """
    _check_bases(a, b)
    ta, sa = _as_monomial(a)
    tb, sb = _as_monomial(b)
    shared = (ta != CLIPPED) & (tb != CLIPPED)
    # Normalize "valid target with scalar 0" to a structural zero, then a
    # vectorized equality test short-circuits the witness loop.
    ea = np.where((ta >= 0) & (sa != 0), ta, ZERO)
    eb = np.where((tb >= 0) & (sb != 0), tb, ZERO)
    if rtol == 0.0 and np.all(
            (ea == eb)[shared]) and np.all(
            (np.where(ea >= 0, sa, 0) == np.where(eb >= 0, sb, 0))[shared]):
        return []
    witnesses = []
    for k in np.flatnonzero(shared):
        da = (int(ta[k]), complex(sa[k])) if ta[k] >= 0 and sa[k] != 0 else None
        db = (int(tb[k]), complex(sb[k])) if tb[k] >= 0 and sb[k] != 0 else None
        same = da == db
        if not same and rtol and da is not None and db is not None:
            same = da[0] == db[0] and abs(da[1] - db[1]) <= rtol * max(
                abs(da[1]), abs(db[1]))
        if not same:
            witnesses.append((int(k), da, db))
    return witnesses


def summability_scan(
    eigenvalues: np.ndarray,
    kind: str,
    beta_grid: Sequence[float],
    *,
    analytic_bound: str | None = None,
) -> SummabilityReport:
    """Truncated summability traces over a beta grid.

    ``finite`` computes Tr |D|^(-beta) and requires a trivial kernel (zero
    eigenvalues must be excluded by the caller first); ``theta`` computes
    Tr e^(-beta D^2).  ``analytic_bound="bc_theta"`` attaches the integral
    comparison bound 1 + sqrt(pi) e^(1/(4 beta)) for log-spectrum theta traces.
    """
    eigs = np.asarray(eigenvalues, dtype=np.float64)
    if kind not in ("finite", "theta"):
        raise DomainError(f"unknown summability kind {kind!r}")
    if kind == "finite" and np.any(eigs == 0.0):
        raise DomainError(
            "finite summability needs a trivial kernel: exclude zero "
            "eigenvalues before the scan")
    traces = []
    for beta in beta_grid:
        beta = float(beta)
        if kind == "finite":
            terms = np.abs(eigs) ** (-beta)
        else:
            terms = np.exp(-beta * eigs * eigs)
        traces.append(SeriesValue(
            value=complex(_backend.neumaier_sum(terms)),
            tail_bound=0.0,
            terms_used=len(eigs)))
    bound = None
    if analytic_bound == "bc_theta":
        bound = tuple(
            1.0 + np.sqrt(np.pi) * np.exp(1.0 / (4.0 * float(b)))
            for b in beta_grid)
    elif analytic_bound is not None:
        raise DomainError(f"unknown analytic bound {analytic_bound!r}")
    return SummabilityReport(
        kind=kind, beta_grid=tuple(float(b) for b in beta_grid),
        traces=tuple(traces), bound=bound)
