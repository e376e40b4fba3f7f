"""The supersymmetric Riemann gas on squarefree indices.

Compressing the arithmetic representation by the projection onto squarefree
basis vectors yields the fermionic algebra with generators mu~_n (n
squarefree): partial isometries that multiply indices by n when coprimality
keeps the product squarefree.  The Mobius sign F = diag(mu(l)) grades the
space by fermion parity; the signed partition function is the Witten index
1/zeta(beta), and the sign-twisted commutators with D = F diag(log l) stay
bounded while the Lipschitz (|D|) version fails for mu(n) = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from zetakms import _backend, arith, bc, linop
from zetakms.arith import ArithTable, RationalLike, SeriesValue
from zetakms.errors import BasisMismatchError, DomainError
from zetakms.linop import CLIPPED, ZERO, TruncatedOperator


@dataclass(frozen=True)
class FermionicBasis:
    """Squarefree sub-basis {n <= N : mu(n) != 0} of the 1..N truncation."""

    N: int
    indices: np.ndarray   # ascending squarefree integers
    inverse: np.ndarray   # index -> position, -1 off the basis
    table: ArithTable

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def basis_tag(self) -> str:
        return f"sf:{self.N}"


def fermionic_basis(N: int, table: ArithTable | None = None) -> FermionicBasis:
    if table is None:
        table = arith.sieve(N)
    if table.limit < N:
        raise DomainError(f"table sieved to {table.limit} < N = {N}")
    indices = np.flatnonzero(table.squarefree[: N + 1]).astype(np.int64)
    inverse = np.full(N + 1, -1, dtype=np.int64)
    inverse[indices] = np.arange(len(indices))
    indices.flags.writeable = False
    inverse.flags.writeable = False
    return FermionicBasis(N=int(N), indices=indices, inverse=inverse, table=table)


def compress(op: TruncatedOperator, fb: FermionicBasis) -> TruncatedOperator:
    """Pi_F . op . Pi_F restricted to the squarefree sub-basis."""
    if op.dim != fb.N or not op.basis_tag.startswith(f"bc:{fb.N}:"):
        raise BasisMismatchError(
            f"cannot compress operator on {op.basis_tag!r} (dim {op.dim}) "
            f"to the squarefree basis of N = {fb.N}")
    idx = fb.indices
    if op.structure == "diagonal":
        return linop.diagonal_operator(op.diag[idx - 1], fb.basis_tag)
    if op.structure == "dense":
        sub = op.matrix[np.ix_(idx - 1, idx - 1)]
        return linop.dense_operator(sub, fb.basis_tag)
    old_t = op.target[idx - 1]
    old_s = op.scalar[idx - 1]
    target = np.full(fb.dim, ZERO, dtype=np.int64)
    scalar = np.zeros(fb.dim, dtype=np.complex128)
    valid = old_t >= 0
    image_idx = old_t[valid] + 1
    new_pos = fb.inverse[image_idx]
    keep = new_pos >= 0
    rows = np.flatnonzero(valid)
    target[rows[keep]] = new_pos[keep]
    scalar[rows[keep]] = old_s[valid][keep]
    target[old_t == CLIPPED] = CLIPPED
    return linop.monomial_operator(target, scalar, fb.basis_tag)


def mu_tilde(n: int, fb: FermionicBasis) -> TruncatedOperator:
    """Fermionic isometry mu~_n: e_l -> e_{n l} when gcd(n, l) = 1.

    Non-squarefree n compress to the zero operator (flagged in ``note``).
    """
    n = int(n)
    if n < 1:
        raise DomainError("generator index must be positive")
    if n > fb.N or not fb.table.squarefree[n]:
        op = linop.zero_operator(fb.dim, fb.basis_tag)
        return TruncatedOperator(
            dim=op.dim, basis_tag=op.basis_tag, structure=op.structure,
            target=op.target, scalar=op.scalar,
            note=f"zero operator: {n} is not a squarefree index <= {fb.N}")
    ell = fb.indices
    coprime = np.gcd(ell, n) == 1
    image = ell * n
    ok = coprime & (image <= fb.N)
    target = np.full(fb.dim, ZERO, dtype=np.int64)
    scalar = np.zeros(fb.dim, dtype=np.complex128)
    target[ok] = fb.inverse[image[ok]]
    scalar[ok] = 1.0
    target[coprime & ~ok] = CLIPPED
    return linop.monomial_operator(target, scalar, fb.basis_tag)


def mobius_sign(fb: FermionicBasis) -> TruncatedOperator:
    """F = diag(mu(l)) on the squarefree basis (fermion-parity sign)."""
    return linop.diagonal_operator(
        fb.table.mobius[fb.indices].astype(np.complex128), fb.basis_tag)


def dirac_signed(fb: FermionicBasis) -> TruncatedOperator:
    """D = F . diag(log l) on the squarefree basis."""
    signs = fb.table.mobius[fb.indices].astype(np.float64)
    return linop.diagonal_operator(
        signs * np.log(fb.indices.astype(np.float64)), fb.basis_tag)


def log_hamiltonian(fb: FermionicBasis) -> TruncatedOperator:
    """|D| = diag(log l) on the squarefree basis."""
    return linop.diagonal_operator(
        np.log(fb.indices.astype(np.float64)), fb.basis_tag)


def group_diagonal(r: RationalLike, fb: FermionicBasis,
                   *, galois_twist: int = 1) -> TruncatedOperator:
    """pi~(e(r)) = diag(zeta_r^l) restricted to squarefree l."""
    frac = arith.as_fraction(r)
    vals = bc._group_values(((frac, 1.0 + 0j),), fb.indices, galois_twist)
    return linop.diagonal_operator(vals, fb.basis_tag)


def _boltzmann(fb: FermionicBasis, beta: float) -> np.ndarray:
    return fb.indices.astype(np.float64) ** (-float(beta))


def witten_index(beta: float, fb: FermionicBasis) -> SeriesValue:
    """Tr(F e^(-beta |D|)) = sum_{squarefree} mu(n) n^(-beta) -> 1/zeta(beta)."""
    beta = bc._check_beta(beta)
    sv = linop.weighted_trace(mobius_sign(fb), _boltzmann(fb, beta))
    tail = fb.N ** (1.0 - beta) / (beta - 1.0)
    return SeriesValue(value=sv.value, tail_bound=tail, terms_used=fb.dim)


def squarefree_zeta(beta: float, fb: FermionicBasis) -> SeriesValue:
    """Tr |D~|^(-beta) on the fermionic space: sum_{squarefree} n^(-beta)."""
    beta = bc._check_beta(beta)
    sv = linop.weighted_trace(
        linop.identity(fb.dim, fb.basis_tag), _boltzmann(fb, beta))
    tail = fb.N ** (1.0 - beta) / (beta - 1.0)
    return SeriesValue(value=sv.value, tail_bound=tail, terms_used=fb.dim)


def eta_functional(r: RationalLike, beta: float,
                   fb: FermionicBasis) -> SeriesValue:
    """phi_beta(e(r)) = sum mu(n) zeta_r^n n^(-beta) (pointwise Mobius weights)."""
    beta = bc._check_beta(beta)
    signs = fb.table.mobius[fb.indices].astype(np.float64)
    powers = bc._group_values(
        ((arith.as_fraction(r), 1.0 + 0j),), fb.indices, 1)
    terms = (signs * powers * _boltzmann(fb, beta)).astype(np.complex128)
    value = complex(_backend.neumaier_sum_c(terms))
    tail = fb.N ** (1.0 - beta) / (beta - 1.0)
    return SeriesValue(value=value, tail_bound=tail, terms_used=fb.dim)


def eta_state(op: TruncatedOperator, beta: float,
              fb: FermionicBasis) -> complex:
    """Tr(F . op . e^(-beta |D|)) for an operator on the fermionic basis."""
    beta = bc._check_beta(beta)
    signed = (fb.table.mobius[fb.indices].astype(np.float64)
              * _boltzmann(fb, beta))
    return linop.weighted_trace(op, signed).value


@dataclass(frozen=True)
class RelationCheck:
    relation_id: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class GasRelationReport:
    N: int
    n_max: int
    checks: tuple[RelationCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[RelationCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _equal_check(relation_id: str, lhs: TruncatedOperator,
                 rhs: TruncatedOperator) -> RelationCheck:
    witnesses = linop.columns_equal(lhs, rhs)
    if not witnesses:
        return RelationCheck(relation_id, True)
    k, da, db = witnesses[0]
    return RelationCheck(
        relation_id, False,
        witness=f"column {k}: lhs {da!r} vs rhs {db!r}")


def relation_suite(
    N: int,
    n_max: int = 30,
    r_list: tuple[RationalLike, ...] = ("0", "1/2", "1/3"),
    table: ArithTable | None = None,
) -> GasRelationReport:
    """Verify the fermionic generator relations as exact operator identities.

    All identities are compared column-by-column on indices unclipped on both
    sides; each failure names the relation, the witness index and both
    entries.
    """
    fb = fermionic_basis(N, table)
    rep = bc.bc_representation(N, table=fb.table)
    checks: list[RelationCheck] = []
    sf = [k for k in range(2, n_max + 1) if fb.table.squarefree[k]]
    ops = {k: mu_tilde(k, fb) for k in sf}
    stars = {k: linop.adjoint(ops[k]) for k in sf}
    one = linop.identity(fb.dim, fb.basis_tag)

    for n in sf:
        for m in sf:
            prod = linop.compose(ops[n], ops[m])
            if math.gcd(n, m) != 1:
                checks.append(_equal_check(
                    f"mu~_{n} mu~_{m} = 0 (gcd != 1)",
                    prod, linop.zero_operator(fb.dim, fb.basis_tag)))
            else:
                if n * m <= N:
                    checks.append(_equal_check(
                        f"mu~_{n} mu~_{m} = mu~_{n * m}",
                        prod, mu_tilde(n * m, fb)))
                checks.append(_equal_check(
                    f"mu~_{n} mu~_{m} = mu~_{m} mu~_{n}",
                    prod, linop.compose(ops[m], ops[n])))
                checks.append(_equal_check(
                    f"mu~_{m}* mu~_{n} = mu~_{n} mu~_{m}*",
                    linop.compose(stars[m], ops[n]),
                    linop.compose(ops[n], stars[m])))

    for n in sf:
        p_n = linop.compose(stars[n], ops[n])
        q_n = linop.compose(ops[n], stars[n])
        checks.append(_equal_check(
            f"P_{n} idempotent", linop.compose(p_n, p_n), p_n))
        checks.append(_equal_check(
            f"Q_{n} idempotent", linop.compose(q_n, q_n), q_n))
        checks.append(_equal_check(
            f"P_{n} self-adjoint", linop.adjoint(p_n), p_n))
        checks.append(_equal_check(
            f"Q_{n} self-adjoint", linop.adjoint(q_n), q_n))
        if fb.table.big_omega[n] == 1:  # n prime
            checks.append(_equal_check(
                f"P_{n} + Q_{n} = 1 (prime)", linop.add(p_n, q_n), one))

    # Compression is multiplicative on the normal-form monomials.
    for n in sf[:5]:
        for m in sf[:5]:
            full = compress(represent_full(n, m, rep), fb)
            split = linop.compose(
                compress(bc.represent(bc.mu(n), rep), fb),
                compress(bc.represent(bc.mu_star(m), rep), fb))
            checks.append(_equal_check(
                f"Pi mu_{n} mu_{m}* Pi = (Pi mu_{n} Pi)(Pi mu_{m}* Pi)",
                full, split))

    for r in r_list:
        frac = arith.as_fraction(r)
        e_r = group_diagonal(frac, fb)
        for n in sf:
            e_nr = group_diagonal(frac * n, fb)
            checks.append(_equal_check(
                f"e({frac}) mu~_{n} = mu~_{n} e({frac * n % 1})",
                linop.compose(e_r, ops[n]), linop.compose(ops[n], e_nr)))
            checks.append(_equal_check(
                f"mu~_{n}* e({frac}) = e({frac * n % 1}) mu~_{n}*",
                linop.compose(stars[n], e_r), linop.compose(e_nr, stars[n])))

    return GasRelationReport(N=N, n_max=n_max, checks=tuple(checks))


def represent_full(n: int, m: int, rep: bc.BCRepresentation) -> TruncatedOperator:
    """pi(mu_n mu_m*) on the ambient 1..N basis."""
    return bc.represent(bc.monomial(n=n, m=m), rep)


def gas_twisted_certificate(n: int, rep_sizes) -> bc.TwistedCertificate:
    """Twisted-commutator certificate for mu~_n on the fermionic basis.

    The twisted norm with sigma(mu~_n) = mu(n) mu~_n equals log n at every
    size; the Lipschitz variant (|D| in place of D) grows without bound when
    mu(n) = -1 and stays at log n when mu(n) = +1.
    """
    n = int(n)
    sizes = tuple(int(s) for s in rep_sizes)
    twisted, untwisted, lipschitz = [], [], []
    sign = 0
    for size in sizes:
        fb = fermionic_basis(size)
        if not fb.table.squarefree[n]:
            raise DomainError(f"generator {n} must be squarefree")
        sign = int(fb.table.mobius[n])
        op = mu_tilde(n, fb)
        sigma_op = linop.scale(op, sign)
        d_signed = dirac_signed(fb)
        d_abs = log_hamiltonian(fb)
        twisted.append(linop.op_norm(
            linop.twisted_commutator(d_signed, op, sigma_op)))
        untwisted.append(linop.op_norm(linop.commutator(d_signed, op)))
        lipschitz.append(linop.op_norm(
            linop.twisted_commutator(d_abs, op, sigma_op)))
    return bc.TwistedCertificate(
        generator=n, sizes=sizes, sign=sign, expected_twisted=math.log(n),
        twisted_norms=tuple(twisted), untwisted_norms=tuple(untwisted),
        lipschitz_norms=tuple(lipschitz))
