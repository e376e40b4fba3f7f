"""The Bost-Connes system on a truncated basis.

Realizes the rational-group-ring-plus-isometries algebra on l^2({1..N}):
monomials x.mu_n.mu_m* (x a finite Q/Z group-ring element) act by
e_l -> x(n l / m) e_{n l / m} on indices with m | l, with images beyond N
clipped and accounted.  On top of the representation sit the Hamiltonian
H = diag(log l), the Liouville sign F, Gibbs/KMS states, the sign-twisted
KMS functional, and the twisted-commutator boundedness certificates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from zetakms import _backend, arith, linop
from zetakms.arith import ArithTable, RationalLike, SeriesValue, as_fraction
from zetakms.errors import DomainError, TruncationError, TruncationWarning
from zetakms.linop import CLIPPED, ZERO, TruncatedOperator

GroupRing = tuple[tuple[Fraction, complex], ...]


@dataclass(frozen=True)
class BCMonomial:
    """Symbolic normal-form element x.mu_n.mu_m* of the arithmetic algebra.

    ``coeffs`` is the group-ring part x as (rational label in [0,1) lowest
    terms, coefficient) pairs; ``n``/``m`` are the isometry powers.  Words are
    assumed already reduced to this normal form (mu_n* mu_n = 1).
    """

    coeffs: GroupRing
    n: int
    m: int


def _normalize_group(pairs) -> GroupRing:
    acc: dict[Fraction, complex] = {}
    for r, c in pairs:
        r = as_fraction(r)
        acc[r] = acc.get(r, 0j) + complex(c)
    return tuple(sorted(
        ((r, c) for r, c in acc.items() if c != 0), key=lambda rc: rc[0]))


def monomial(x=None, n: int = 1, m: int = 1) -> BCMonomial:
    """General constructor; ``x`` maps rational labels to coefficients."""
    if n < 1 or m < 1:
        raise DomainError("isometry indices must be positive")
    if x is None:
        pairs = [(Fraction(0), 1.0 + 0j)]
    elif isinstance(x, dict):
        pairs = list(x.items())
    else:
        pairs = list(x)
    return BCMonomial(coeffs=_normalize_group(pairs), n=int(n), m=int(m))


def e(r: RationalLike) -> BCMonomial:
    """Group-ring generator e(r)."""
    return monomial({as_fraction(r): 1.0 + 0j})


def mu(n: int) -> BCMonomial:
    return monomial(n=n)


def mu_star(m: int) -> BCMonomial:
    return monomial(m=m)


def scaled(mono: BCMonomial, c: complex) -> BCMonomial:
    return BCMonomial(
        coeffs=_normalize_group((r, cv * c) for r, cv in mono.coeffs),
        n=mono.n, m=mono.m)


def adjoint_monomial(mono: BCMonomial) -> BCMonomial:
    """(x mu_n mu_m*)* = sigma-shifted conjugate; valid for pure e(r) factors.

    For x = sum c_r e(r): (x mu_n mu_m*)* = mu_m x* mu_n* = rho-type element;
    in the normal form supported here we require x to commute past mu_m,
    which holds exactly when x is scalar (coeff at r = 0 only).  For general
    x use the representation-level adjoint instead.
    """
    if any(r != 0 for r, _ in mono.coeffs):
        raise DomainError(
            "symbolic adjoint only supported for scalar group parts; "
            "use linop.adjoint on the represented operator")
    return BCMonomial(
        coeffs=_normalize_group((r, np.conj(c)) for r, c in mono.coeffs),
        n=mono.m, m=mono.n)


def sigma_n_group(coeffs: GroupRing, n: int) -> GroupRing:
    """sigma_n(e(r)) = e(n r): the n-th power endomorphism on the group ring."""
    return _normalize_group(((r * n) % 1, c) for r, c in coeffs)


def rho_n_group(coeffs: GroupRing, n: int) -> GroupRing:
    """rho_n(e(r)) = (1/n) sum over the n labels s with n s = r."""
    out = []
    for r, c in coeffs:
        for k in range(n):
            out.append(((r + k) / n, c / n))
    return _normalize_group(out)


@dataclass(frozen=True)
class BCRepresentation:
    """Truncated covariant representation on l^2({1..N}).

    ``galois_twist`` selects the root-of-unity embedding e(r) -> e^(2 pi i a r);
    ``clip_threshold`` (fraction of clipped columns) escalates to a warning,
    or to an error when ``strict``.
    """

    N: int
    table: ArithTable
    galois_twist: int = 1
    clip_threshold: float | None = None
    strict: bool = False

    @property
    def basis_tag(self) -> str:
        return f"bc:{self.N}:a{self.galois_twist}"

    @property
    def indices(self) -> np.ndarray:
        return np.arange(1, self.N + 1, dtype=np.int64)


def bc_representation(
    N: int,
    *,
    galois_twist: int = 1,
    clip_threshold: float | None = None,
    strict: bool = False,
    table: ArithTable | None = None,
) -> BCRepresentation:
    if table is None:
        table = arith.sieve(N)
    if table.limit < N:
        raise DomainError(f"table sieved to {table.limit} < N = {N}")
    return BCRepresentation(
        N=int(N), table=table, galois_twist=int(galois_twist),
        clip_threshold=clip_threshold, strict=strict)


def _group_values(coeffs: GroupRing, at: np.ndarray, twist: int) -> np.ndarray:
    """Evaluate x = sum c_r e(r) at basis indices: sum c_r zeta_r^(a k)."""
    vals = np.zeros(len(at), dtype=np.complex128)
    for r, c in coeffs:
        q, p = r.denominator, r.numerator
        if math.gcd(twist, q) != 1:
            raise DomainError(f"galois twist {twist} is not a unit modulo {q}")
        # Angle-first division keeps equal rational angles bit-equal across
        # denominators (see arith.root_of_unity_powers).
        roots = np.exp(2j * np.pi * (np.arange(q, dtype=np.float64) / q))
        vals += c * roots[(p * twist % q) * (at % q) % q]
    return vals


def represent(mono: BCMonomial, rep: BCRepresentation) -> TruncatedOperator:
    """pi(x mu_n mu_m*) on the truncation, with clipped columns flagged."""
    ell = rep.indices
    n, m = mono.n, mono.m
    if n == 1 and m == 1:
        return linop.diagonal_operator(
            _group_values(mono.coeffs, ell, rep.galois_twist), rep.basis_tag)

    divisible = ell % m == 0
    image = np.where(divisible, ell // m * n, 0)
    ok = divisible & (image <= rep.N)
    target = np.full(rep.N, ZERO, dtype=np.int64)
    target[ok] = image[ok] - 1
    target[divisible & ~ok] = CLIPPED
    scalar = np.zeros(rep.N, dtype=np.complex128)
    if ok.any():
        scalar[ok] = _group_values(mono.coeffs, image[ok], rep.galois_twist)

    frac = float(np.count_nonzero(target == CLIPPED)) / rep.N
    if rep.clip_threshold is not None and frac > rep.clip_threshold:
        msg = (f"clipped column fraction {frac:.3g} exceeds threshold "
               f"{rep.clip_threshold:.3g} for mu_{n} mu_{m}* at N={rep.N}")
        if rep.strict:
            raise TruncationError(msg)
        warnings.warn(msg, TruncationWarning)
    return linop.monomial_operator(target, scalar, rep.basis_tag)


def clipped_mass_fraction(mono: BCMonomial, rep: BCRepresentation) -> float:
    return linop.clipped_fraction(represent(mono, rep))


def hamiltonian(rep: BCRepresentation) -> TruncatedOperator:
    """H = diag(log l); partition function Tr e^(-beta H) = truncated zeta."""
    return linop.diagonal_operator(
        np.log(rep.indices.astype(np.float64)), rep.basis_tag)


def liouville_sign(rep: BCRepresentation) -> TruncatedOperator:
    """F = diag(lambda(l)), the Liouville grading-like sign."""
    return linop.diagonal_operator(
        rep.table.liouville[1 : rep.N + 1].astype(np.complex128), rep.basis_tag)


def dirac_signed(rep: BCRepresentation) -> TruncatedOperator:
    """D = F . diag(log l), the sign-twisted log Hamiltonian."""
    ell = rep.indices.astype(np.float64)
    signs = rep.table.liouville[1 : rep.N + 1].astype(np.float64)
    return linop.diagonal_operator(signs * np.log(ell), rep.basis_tag)


def dirac_tilde(rep: BCRepresentation) -> TruncatedOperator:
    """D~ = F . diag(l): the rescaled Dirac whose absolute value has
    spectrum 1..N, so Tr |D~|^(-s) is the truncated Riemann zeta."""
    ell = rep.indices.astype(np.float64)
    signs = rep.table.liouville[1 : rep.N + 1].astype(np.float64)
    return linop.diagonal_operator(signs * ell, rep.basis_tag)


def liouville_of(k: int, table: ArithTable) -> int:
    if k <= table.limit:
        return int(table.liouville[k])
    count = 0
    m = k
    p = 2
    while p * p <= m:
        while m % p == 0:
            m //= p
            count += 1
        p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def sigma_automorphism(mono: BCMonomial, rep: BCRepresentation) -> BCMonomial:
    """sigma(x mu_n mu_m*) = lambda(n) lambda(m) x mu_n mu_m* (identity on x)."""
    sign = liouville_of(mono.n, rep.table) * liouville_of(mono.m, rep.table)
    return scaled(mono, sign)


def _boltzmann(rep: BCRepresentation, beta: float) -> np.ndarray:
    return rep.indices.astype(np.float64) ** (-beta)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 1.0:
        raise DomainError(
            f"beta = {beta} <= 1: the partition function zeta(beta) diverges "
            "at and below the critical inverse temperature 1")
    return beta


def partition_function(beta: float, rep: BCRepresentation) -> SeriesValue:
    """Tr e^(-beta H) = sum_{l<=N} l^(-beta), with tail bound."""
    beta = _check_beta(beta)
    ones = np.ones(rep.N + 1)
    return arith.dirichlet_series(ones, beta, rep.N)


def gibbs_state(mono: BCMonomial, beta: float,
                rep: BCRepresentation) -> SeriesValue:
    """phi_beta(mono) = Tr(pi(mono) e^(-beta H)) / Tr(e^(-beta H))."""
    beta = _check_beta(beta)
    op = represent(mono, rep)
    num = linop.weighted_trace(op, _boltzmann(rep, beta)).value
    den_sv = partition_function(beta, rep)
    den = den_sv.value.real
    value = num / den

    coeff_mass = float(sum(abs(c) for _, c in mono.coeffs))
    tail_num = (coeff_mass * rep.N ** (1.0 - beta) / (beta - 1.0)
                if mono.n == mono.m else 0.0)
    tail = (tail_num + abs(value) * den_sv.tail_bound) / (den - den_sv.tail_bound)
    return SeriesValue(value=value, tail_bound=tail, terms_used=rep.N)


def gibbs_state_mobius_form(r: RationalLike, beta: float,
                            rep: BCRepresentation) -> SeriesValue:
    """Divisor-inverted Gibbs evaluation: sum_n b_n n^(-beta), b = mu * zeta_r^(.).

    Dividing the polylog coefficients by zeta via exact divisor-sum inversion
    builds the 1/zeta(beta) normalization into the coefficients, so the plain
    truncated Dirichlet sum of b already approximates the Gibbs value.
    """
    beta = _check_beta(beta)
    coeffs = np.zeros(rep.N + 1, dtype=np.complex128)
    coeffs[1:] = arith.root_of_unity_powers(
        r, rep.N, galois_twist=rep.galois_twist)
    b = arith.mobius_invert(coeffs, rep.table)
    weights = rep.indices.astype(np.float64) ** (-beta)
    value = complex(_backend.neumaier_sum_c(b[1:] * weights))
    # |b_n| <= d(n); sum_{n>N} d(n) n^(-beta) <= (ln N + 1 + zeta(beta)) tail.
    zeta_upper = arith.dirichlet_series(
        np.ones(min(rep.N, 10_000) + 1), beta)
    zeta_cap = zeta_upper.value.real + zeta_upper.tail_bound
    tail = ((math.log(rep.N) + 1.0 + zeta_cap)
            * rep.N ** (1.0 - beta) / (beta - 1.0))
    return SeriesValue(value=value, tail_bound=tail, terms_used=rep.N)


def _sigma_i_beta_scale(mono: BCMonomial, beta: float) -> float:
    """Analytic-continuation scalar: sigma_{i beta}(x mu_n mu_m*) multiplier."""
    return float(mono.n) ** (-beta) * float(mono.m) ** beta


def kms_residual(a: BCMonomial, b: BCMonomial, beta: float,
                 rep: BCRepresentation) -> float:
    """|phi(ab) - phi(b sigma_{i beta}(a))| for the Gibbs state (matrix products)."""
    beta = _check_beta(beta)
    weight = _boltzmann(rep, beta)
    z = partition_function(beta, rep).value.real
    op_a = represent(a, rep)
    op_b = represent(b, rep)
    lhs = linop.weighted_trace(linop.compose(op_a, op_b), weight).value / z
    rhs = (_sigma_i_beta_scale(a, beta)
           * linop.weighted_trace(linop.compose(op_b, op_a), weight).value / z)
    return abs(lhs - rhs)


def twisted_kms_residual(a: BCMonomial, b: BCMonomial, beta: float,
                         rep: BCRepresentation) -> float:
    """|phi~(ab) - phi~(b sigma_{i beta}(sigma(a)))| for phi~ = Tr(F . e^(-beta H))."""
    beta = _check_beta(beta)
    signed_weight = (rep.table.liouville[1 : rep.N + 1].astype(np.float64)
                     * _boltzmann(rep, beta))
    op_a = represent(a, rep)
    op_b = represent(b, rep)
    sign = liouville_of(a.n, rep.table) * liouville_of(a.m, rep.table)
    lhs = linop.weighted_trace(linop.compose(op_a, op_b), signed_weight).value
    rhs = (sign * _sigma_i_beta_scale(a, beta)
           * linop.weighted_trace(linop.compose(op_b, op_a), signed_weight).value)
    return abs(lhs - rhs)


def bc_eta(beta: float, rep: BCRepresentation) -> SeriesValue:
    """Tr(F e^(-beta H)) = sum lambda(n) n^(-beta) -> zeta(2 beta)/zeta(beta)."""
    beta = _check_beta(beta)
    return arith.dirichlet_series(rep.table.liouville[: rep.N + 1], beta, rep.N)


@dataclass(frozen=True)
class TwistedCertificate:
    """Boundedness trends of twisted vs. untwisted commutators across sizes."""

    generator: int
    sizes: tuple[int, ...]
    sign: int                      # lambda(n) or mu(n) of the generator
    expected_twisted: float        # log n
    twisted_norms: tuple[float, ...]
    untwisted_norms: tuple[float, ...]
    lipschitz_norms: tuple[float, ...]

    @property
    def twisted_bounded(self) -> bool:
        return all(abs(t - self.expected_twisted) <= 1e-12
                   for t in self.twisted_norms)

    @property
    def untwisted_increasing(self) -> bool:
        return all(x < y for x, y in zip(self.untwisted_norms,
                                         self.untwisted_norms[1:]))

    @property
    def lipschitz_increasing(self) -> bool:
        return all(x < y for x, y in zip(self.lipschitz_norms,
                                         self.lipschitz_norms[1:]))


def twisted_commutator_certificate(
    n: int, rep_sizes, *, galois_twist: int = 1) -> TwistedCertificate:
    """Certify: ||D mu_n - sigma(mu_n) D|| = log n at every truncation size,
    while the untwisted commutator norm grows whenever lambda(n) = -1.
    """
    if n < 2:
        raise DomainError("generator index must be >= 2")
    sizes = tuple(int(s) for s in rep_sizes)
    twisted, untwisted, lipschitz = [], [], []
    sign = 0
    for size in sizes:
        rep = bc_representation(size, galois_twist=galois_twist)
        sign = liouville_of(n, rep.table)
        d_signed = dirac_signed(rep)
        d_abs = hamiltonian(rep)
        op = represent(mu(n), rep)
        sigma_op = linop.scale(op, sign)
        twisted.append(linop.op_norm(
            linop.twisted_commutator(d_signed, op, sigma_op)))
        untwisted.append(linop.op_norm(linop.commutator(d_signed, op)))
        lipschitz.append(linop.op_norm(
            linop.twisted_commutator(d_abs, op, sigma_op)))
    return TwistedCertificate(
        generator=n, sizes=sizes, sign=sign,
        expected_twisted=math.log(n),
        twisted_norms=tuple(twisted),
        untwisted_norms=tuple(untwisted),
        lipschitz_norms=tuple(lipschitz))
