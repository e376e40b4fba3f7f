"""Crossed product of the tree boundary by the free group.

The rank-``g`` free group acts on its boundary; the Patterson-Sullivan
measure of exponent ``delta = log(2g-1)`` is quasi-invariant with
Radon-Nikodym derivative ``exp(-delta * B)`` where ``B`` is the integer
Busemann cocycle ``B(x0, gamma x0, xi) = 2k - |gamma|`` (``k`` the length of
the common prefix of ``gamma`` and ``xi``).

The truncated crossed-product Hilbert space is spanned by
``1_cylinder (x) delta_group`` keys with cylinder words at a common depth and
group words of length at most ``group_cap``.  Operators act exactly on these
keys: the unitaries scale by the square root of the cylinder-mass ratio (an
integer power of ``2g - 1``), so norms, time evolution, the KMS property of
the Patterson-Sullivan state, and the twisted-commutator certificates for
the type-III triple can all be checked per basis vector, with integer
Busemann values wherever exactness matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from zetakms import linop, words
from zetakms.errors import (BasisMismatchError, CapacityError, DomainError,
                            ResolutionError)
from zetakms.words import Word

#: Hard cap on enumerated (cylinder x group) bases.
BASIS_CAP = 300_000


def _check_rank(g: int) -> None:
    if g < 2:
        raise DomainError(f"free-group rank must be >= 2, got {g}")


def _check_word(w: Word, g: int, what: str) -> None:
    if not words.is_reduced(w):
        raise DomainError(f"{what} {w!r} is not reduced")
    if w and max(w) >= 2 * g:
        raise DomainError(f"{what} {w!r} uses letters outside rank {g}")


def busemann(gamma: Word, xi_prefix: Word, g: int) -> int:
    """Busemann cocycle ``B(x0, gamma x0, xi) = 2k - |gamma|``.

    ``xi`` is specified by a prefix; the prefix must resolve at least
    ``|gamma|`` letters, otherwise the value is not yet determined by the
    truncation and `ResolutionError` is raised.
    """
    _check_rank(g)
    _check_word(gamma, g, "group word")
    _check_word(xi_prefix, g, "boundary prefix")
    if len(xi_prefix) < len(gamma):
        raise ResolutionError(
            f"prefix of length {len(xi_prefix)} cannot resolve the cocycle"
            f" of a length-{len(gamma)} group element")
    return 2 * words.common_prefix_len(gamma, xi_prefix) - len(gamma)


def cylinder_busemann(gamma: Word, cylinder: Word, g: int) -> int:
    """Busemann value on a whole cylinder, when constant there.

    Constancy holds exactly when the common prefix of ``gamma`` and the
    cylinder word either exhausts ``gamma`` or strictly diverges inside the
    word; otherwise deeper letters could still change the value and
    `ResolutionError` is raised.
    """
    _check_rank(g)
    k = words.common_prefix_len(gamma, cylinder)
    if k == len(cylinder) and k < len(gamma):
        raise ResolutionError(
            f"cylinder {cylinder!r} does not resolve the cocycle of"
            f" {gamma!r}")
    return 2 * k - len(gamma)


def group_elements(g: int, max_len: int) -> tuple[Word, ...]:
    """All reduced group words of length ``<= max_len``, by (length, lex)."""
    _check_rank(g)
    if max_len < 0:
        raise DomainError(f"max_len must be >= 0, got {max_len}")
    out: list[Word] = [()]
    for n in range(1, max_len + 1):
        out.extend(words.reduced_words(g, n))
    return tuple(out)


@dataclass(frozen=True)
class BoundarySpace:
    """Truncation parameters of the crossed-product Hilbert space.

    ``depth`` is the cylinder resolution ``M``, ``group_cap`` the largest
    retained group-word length ``L``; ``depth >= group_cap`` keeps the
    Busemann Hamiltonian well defined on every basis key.
    """

    g: int
    depth: int
    group_cap: int

    def __post_init__(self) -> None:
        _check_rank(self.g)
        if self.depth < 0 or self.group_cap < 0:
            raise DomainError("depth and group_cap must be >= 0")
        if self.depth < self.group_cap:
            raise DomainError(
                f"depth {self.depth} must be >= group_cap {self.group_cap}"
                " so the Hamiltonian resolves on every key")
        n_cyl = 1 if self.depth == 0 else 2 * self.g * (
            2 * self.g - 1) ** (self.depth - 1)
        n_grp = len(group_elements(self.g, self.group_cap))
        if n_cyl * n_grp > BASIS_CAP:
            raise CapacityError(
                f"basis of size {n_cyl * n_grp} exceeds cap {BASIS_CAP}")

    @property
    def basis_tag(self) -> str:
        return f"boundary:{self.g}:{self.depth}:{self.group_cap}"

    def cylinder_mass(self, w: Word) -> Fraction:
        return words.cylinder_mass(w, self.g)


@dataclass
class BoundaryVector:
    """Finite vector ``sum c * 1_cylinder (x) delta_group``.

    All cylinder keys share a common ``depth``; expanding an indicator to a
    deeper level replaces it by the sum of its children with the same
    coefficient, which is exact.
    """

    space: BoundarySpace
    depth: int
    coeffs: dict[tuple[Word, Word], complex] = field(default_factory=dict)

    def expanded(self, new_depth: int) -> "BoundaryVector":
        if new_depth < self.depth:
            raise DomainError(
                f"cannot coarsen vector from depth {self.depth} to"
                f" {new_depth}")
        if new_depth == self.depth:
            return self
        out: dict[tuple[Word, Word], complex] = {}
        for (w, gamma), c in self.coeffs.items():
            for child in _descendants(w, new_depth, self.space.g):
                out[(child, gamma)] = out.get((child, gamma), 0.0) + c
        return BoundaryVector(space=self.space, depth=new_depth, coeffs=out)

    def norm_squared(self) -> float:
        total = 0.0
        for (w, _), c in self.coeffs.items():
            total += (c.real * c.real + c.imag * c.imag) * float(
                self.space.cylinder_mass(w))
        return total

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def sub(self, other: "BoundaryVector") -> "BoundaryVector":
        if self.space.basis_tag != other.space.basis_tag:
            raise BasisMismatchError(
                f"vectors live on {self.space.basis_tag} vs"
                f" {other.space.basis_tag}")
        depth = max(self.depth, other.depth)
        a = self.expanded(depth)
        b = other.expanded(depth)
        out = dict(a.coeffs)
        for key, c in b.coeffs.items():
            out[key] = out.get(key, 0.0) - c
        return BoundaryVector(space=self.space, depth=depth, coeffs=out)


def _descendants(w: Word, depth: int, g: int) -> list[Word]:
    """All reduced extensions of ``w`` to length ``depth``."""
    level = [w]
    for _ in range(depth - len(w)):
        nxt = []
        for u in level:
            for letter in range(2 * g):
                if u and letter == words.inverse_letter(u[-1]):
                    continue
                nxt.append(u + (letter,))
        level = nxt
    return level


def basis_vector(w: Word, gamma: Word, space: BoundarySpace) -> BoundaryVector:
    """Normalized basis key ``1_w (x) delta_gamma / ||1_w||``."""
    _check_word(w, space.g, "cylinder word")
    _check_word(gamma, space.g, "group word")
    if len(gamma) > space.group_cap:
        raise DomainError(f"group word longer than cap {space.group_cap}")
    scale = 1.0 / math.sqrt(float(space.cylinder_mass(w)))
    return BoundaryVector(space=space, depth=len(w),
                          coeffs={(w, gamma): scale})


@dataclass(frozen=True)
class CrossedMonomial:
    """Algebra element ``f U_gamma`` with ``f`` constant on depth-``level``
    cylinders.

    ``values`` maps each reduced word of length ``level`` to the value of
    ``f`` on its cylinder; missing words mean 0, ``values=None`` means the
    constant function 1 (at level 0).
    """

    g: int
    gamma: Word
    level: int = 0
    values: tuple[tuple[Word, complex], ...] | None = None

    def __post_init__(self) -> None:
        _check_rank(self.g)
        _check_word(self.gamma, self.g, "group word")
        if self.values is not None:
            for w, _ in self.values:
                _check_word(w, self.g, "cylinder word")
                if len(w) != self.level:
                    raise DomainError(
                        f"value word {w!r} is not at level {self.level}")
        object.__setattr__(self, "_lookup",
                           None if self.values is None else dict(self.values))

    def f_at(self, prefix: Word) -> complex:
        """Value of ``f`` on any cylinder refining ``prefix[:level]``."""
        if len(prefix) < self.level:
            raise ResolutionError(
                f"word of length {len(prefix)} does not resolve a"
                f" level-{self.level} function")
        lookup = self._lookup
        if lookup is None:
            return 1.0
        return lookup.get(prefix[:self.level], 0.0)


def unitary_monomial(gamma: Word, g: int) -> CrossedMonomial:
    """The crossed-product unitary ``U_gamma``."""
    return CrossedMonomial(g=g, gamma=gamma)


def indicator_monomial(w: Word, gamma: Word, g: int) -> CrossedMonomial:
    """``1_w U_gamma``."""
    return CrossedMonomial(g=g, gamma=gamma, level=len(w),
                           values=((w, 1.0 + 0.0j),))


@dataclass(frozen=True)
class ApplyResult:
    """Image vector plus the squared mass lost to group-leg clipping."""

    vector: BoundaryVector
    clipped_mass: float


def apply_crossed(mono: CrossedMonomial, vec: BoundaryVector) -> ApplyResult:
    """Apply ``pi(f U_gamma)`` exactly to a keyed vector.

    On a key ``1_v (x) delta_gp`` the unitary part sends the cylinder to
    ``gamma . v`` (reduced concatenation) scaled by
    ``(2g-1)^(B/2) = sqrt(mass(v)/mass(gamma.v))`` and the group leg to
    ``gamma gp``; keys whose group leg leaves the truncation are dropped and
    their squared mass reported.  The operand is first expanded so every
    image cylinder resolves both ``f`` and the Busemann cocycle.
    """
    space = vec.space
    g = space.g
    if mono.g != g:
        raise BasisMismatchError(f"monomial rank {mono.g} vs space rank {g}")
    glen = len(mono.gamma)
    depth = max(vec.depth, glen + max(1, mono.level))
    operand = vec.expanded(depth)
    raw: list[tuple[Word, Word, complex]] = []
    clipped = 0.0
    out_depth = max(space.group_cap, operand.depth)
    for (v, gp), c in operand.coeffs.items():
        new_gp = words.concat(mono.gamma, gp)
        if len(new_gp) > space.group_cap:
            clipped += abs(c) ** 2 * float(space.cylinder_mass(v))
            continue
        u = words.concat(mono.gamma, v)
        b_val = cylinder_busemann(mono.gamma, u, g)
        scale = (2 * g - 1) ** (0.5 * b_val)
        fval = mono.f_at(u)
        if fval == 0.0:
            continue
        raw.append((u, new_gp, c * fval * scale))
        out_depth = max(out_depth, len(u))
    out: dict[tuple[Word, Word], complex] = {}
    for u, new_gp, c in raw:
        for child in _descendants(u, out_depth, g):
            key = (child, new_gp)
            out[key] = out.get(key, 0.0) + c
    return ApplyResult(vector=BoundaryVector(space=space, depth=out_depth,
                                             coeffs=out),
                       clipped_mass=clipped)


def crossed_product(a: CrossedMonomial, b: CrossedMonomial) -> CrossedMonomial:
    """Algebra product ``(f U_gamma)(f' U_gamma') = f . (f' o gamma^-1)
    U_(gamma gamma')``."""
    if a.g != b.g:
        raise BasisMismatchError(f"ranks differ: {a.g} vs {b.g}")
    g = a.g
    gamma = words.concat(a.gamma, b.gamma)
    level = max(a.level, len(a.gamma) + b.level)
    vals = []
    for u in words.reduced_words(g, level) if level else [()]:
        translated = words.concat(words.inverse_word(a.gamma), u)
        value = a.f_at(u) * b.f_at(translated)
        if value != 0.0:
            vals.append((u, complex(value)))
    if level == 0 and len(vals) == 1 and vals[0][1] == 1.0:
        return CrossedMonomial(g=g, gamma=gamma)
    return CrossedMonomial(g=g, gamma=gamma, level=level, values=tuple(vals))


def crossed_adjoint(a: CrossedMonomial) -> CrossedMonomial:
    """``(f U_gamma)* = (conj(f) o gamma) U_(gamma^-1)``."""
    g = a.g
    gamma_inv = words.inverse_word(a.gamma)
    level = len(a.gamma) + a.level
    vals = []
    for u in words.reduced_words(g, level) if level else [()]:
        value = complex(a.f_at(words.concat(a.gamma, u))).conjugate()
        if value != 0.0:
            vals.append((u, value))
    if level == 0 and len(vals) == 1 and vals[0][1] == 1.0:
        return CrossedMonomial(g=g, gamma=gamma_inv)
    return CrossedMonomial(g=g, gamma=gamma_inv, level=level,
                           values=tuple(vals))


def scaled_monomial(a: CrossedMonomial, c: complex) -> CrossedMonomial:
    """``c * (f U_gamma)``, folding the scalar into ``f``."""
    if a.values is None:
        base: list[tuple[Word, complex]] = (
            [((), 1.0 + 0.0j)] if a.level == 0 else [])
        vals = base
    else:
        vals = list(a.values)
    return CrossedMonomial(g=a.g, gamma=a.gamma, level=a.level,
                           values=tuple((w, complex(c) * v)
                                        for w, v in vals))


def vacuum_state(a: CrossedMonomial) -> complex:
    """Patterson-Sullivan state ``phi(f U_gamma) = int f dmu`` if
    ``gamma = e``, else 0."""
    if a.gamma != ():
        return 0.0
    if a.values is None:
        return 1.0
    total = 0.0 + 0.0j
    for w, v in a.values:
        total += v * float(words.cylinder_mass(w, a.g))
    return complex(total)


def _cocycle_weighted(a: CrossedMonomial, factor) -> CrossedMonomial:
    """Multiply ``f`` by a function of the Busemann cocycle of ``gamma``."""
    g = a.g
    level = max(a.level, len(a.gamma))
    vals = []
    for u in words.reduced_words(g, level) if level else [()]:
        b_val = cylinder_busemann(a.gamma, u, g)
        value = complex(a.f_at(u)) * factor(b_val)
        if value != 0.0:
            vals.append((u, value))
    return CrossedMonomial(g=g, gamma=a.gamma, level=level,
                           values=tuple(vals))


def time_evolved(a: CrossedMonomial, t: float) -> CrossedMonomial:
    """``sigma_t(f U_gamma) = e^(i t B(x0, gamma x0, .)) f U_gamma``."""
    return _cocycle_weighted(a, lambda b: complex(math.cos(t * b),
                                                  math.sin(t * b)))


def imaginary_time(a: CrossedMonomial, beta: float) -> CrossedMonomial:
    """Analytic continuation ``sigma_(i beta)(f U_gamma) =
    e^(-beta B(x0, gamma x0, .)) f U_gamma``."""
    return _cocycle_weighted(a, lambda b: complex(math.exp(-beta * b)))


def hamiltonian(space: BoundarySpace) -> linop.TruncatedOperator:
    """Diagonal Busemann Hamiltonian on the enumerated truncated basis.

    Basis keys are ordered group-major (group words by length then lex,
    cylinder words lex within each group word); the eigenvalue on
    ``1_w (x) delta_gamma`` is the integer ``B(x0, gamma x0, Lambda(w))``,
    so the spectrum lies in ``[-group_cap, group_cap]``.
    """
    cylinders = (words.reduced_words(space.g, space.depth)
                 if space.depth else [()])
    diag = []
    for gamma in group_elements(space.g, space.group_cap):
        for w in cylinders:
            diag.append(float(cylinder_busemann(gamma, w, space.g)))
    return linop.diagonal_operator(np.array(diag, dtype=np.complex128),
                                   space.basis_tag)


def _phase_weighted(vec: BoundaryVector, t: float) -> BoundaryVector:
    """Apply ``e^(i t H)`` keywise; every key must resolve its cocycle."""
    out = {}
    for (w, gamma), c in vec.coeffs.items():
        b_val = cylinder_busemann(gamma, w, vec.space.g)
        out[(w, gamma)] = c * complex(math.cos(t * b_val),
                                      math.sin(t * b_val))
    return BoundaryVector(space=vec.space, depth=vec.depth, coeffs=out)


def time_evolution_residual(a: CrossedMonomial, t: float,
                            space: BoundarySpace) -> float:
    """Compare ``e^(itH) pi(a) e^(-itH)`` with ``pi(sigma_t(a))`` key by key.

    Returns the largest L2 discrepancy over all normalized basis keys.
    Group-leg clipping removes the same keys from both routes, so the
    comparison is over the retained subspace.
    """
    evolved = time_evolved(a, t)
    worst = 0.0
    cylinders = (words.reduced_words(space.g, space.depth)
                 if space.depth else [()])
    for gamma in group_elements(space.g, space.group_cap):
        for w in cylinders:
            e = basis_vector(w, gamma, space)
            conj = _phase_weighted(
                apply_crossed(a, _phase_weighted(e, -t)).vector, t)
            direct = apply_crossed(evolved, e).vector
            worst = max(worst, conj.sub(direct).norm())
    return worst


def ps_kms_residual(a: CrossedMonomial, b: CrossedMonomial,
                    beta: float) -> float:
    """KMS defect ``|phi(a sigma_(i beta)(b)) - phi(b a)|`` of the
    Patterson-Sullivan state at inverse temperature ``beta``.

    The defect vanishes (to roundoff) exactly at ``beta = log(2g - 1)``,
    the critical exponent of the group.
    """
    lhs = vacuum_state(crossed_product(a, imaginary_time(b, beta)))
    rhs = vacuum_state(crossed_product(b, a))
    return abs(lhs - rhs)


def rn_equals_busemann(gamma: Word, depth: int, g: int) -> Fraction:
    """Exact max deviation between the mass-ratio cocycle and
    ``(2g-1)^(-B)`` over all depth-``depth`` cylinders.

    The Radon-Nikodym derivative of ``mu o gamma`` on a cylinder ``w`` is
    the mass ratio ``mu(gamma . w)/mu(w)``; rational arithmetic gives the
    deviation from ``exp(-delta B)`` with no rounding at all, so the return
    value is exactly ``Fraction(0)`` when the identity holds.
    """
    _check_rank(g)
    _check_word(gamma, g, "group word")
    if depth <= len(gamma):
        raise DomainError(
            f"depth {depth} must exceed |gamma| = {len(gamma)} so every"
            " translated cylinder is again a cylinder")
    worst = Fraction(0)
    for w in words.reduced_words(g, depth):
        u = words.concat(gamma, w)
        ratio = words.cylinder_mass(u, g) / words.cylinder_mass(w, g)
        b_val = cylinder_busemann(gamma, u, g)
        predicted = Fraction(2 * g - 1) ** (-b_val)
        worst = max(worst, abs(ratio - predicted))
    return worst


@dataclass(frozen=True)
class Type3Certificate:
    """Twisted vs. plain commutator norms of ``U_gamma`` against the signed
    Busemann Dirac operator, across group truncations.

    ``twisted_norms[i]`` is ``||D pi(U_gamma) - F pi(U_gamma) F D||`` on the
    truncation with ``group_cap = group_caps[i]`` (``F`` the group-length
    parity grading); the integer coefficient on each basis key is
    ``B(x0, gamma x0, .)`` evaluated on the translated cylinder, so the
    twisted norm equals ``max |B| <= |gamma|`` exactly and is constant in
    the cap, while the plain commutator picks up ``2 B_in`` terms and grows.
    """

    gamma: Word
    dirac_mode: str
    depth: int
    group_caps: tuple[int, ...]
    twisted_norms: tuple[float, ...]
    untwisted_norms: tuple[float, ...]
    parity_is_homomorphism: bool

    @property
    def twisted_bounded(self) -> bool:
        return all(v <= len(self.gamma) for v in self.twisted_norms)

    @property
    def twisted_constant(self) -> bool:
        return len(set(self.twisted_norms)) <= 1

    @property
    def untwisted_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.untwisted_norms,
                                         self.untwisted_norms[1:]))


def type3_triple_certificate(gamma: Word, group_caps: tuple[int, ...],
                             g: int, *, dirac_mode: str = "signed",
                             depth: int | None = None) -> Type3Certificate:
    """Exhaustive integer-arithmetic commutator norms over basis keys.

    ``dirac_mode="signed"`` takes the Hamiltonian itself as the absolute
    value of the Dirac operator (its natural signed convention);
    ``"absolute"`` replaces each eigenvalue by its magnitude.  In both modes
    the twisted coefficient on an unclipped key is
    ``h(out) - h(in)`` and the plain one ``(-1)^(len) h(out) -/+ h(in)``
    with ``h`` the (possibly absolute) Busemann value; norms are exact
    maxima of integers.
    """
    _check_rank(g)
    _check_word(gamma, g, "group word")
    if dirac_mode not in ("signed", "absolute"):
        raise DomainError(f"unknown dirac_mode {dirac_mode!r}")
    if not group_caps or any(c < 1 for c in group_caps):
        raise DomainError("group_caps must be positive")
    caps = tuple(sorted(group_caps))
    if depth is None:
        depth = max(caps) + len(gamma) + 1
    if depth < max(caps) + len(gamma):
        raise DomainError(
            f"depth {depth} cannot resolve all cocycles; need"
            f" >= {max(caps) + len(gamma)}")
    h_of = (lambda b: b) if dirac_mode == "signed" else abs

    elements = group_elements(g, max(caps))
    parity_ok = all(
        (len(words.concat(x, y)) - len(x) - len(y)) % 2 == 0
        for x in elements for y in elements)

    twisted = []
    plain = []
    cylinders = words.reduced_words(g, depth)
    for cap in caps:
        worst_twisted = 0
        worst_plain = 0
        for gp in elements:
            if len(gp) > cap:
                continue
            new_gp = words.concat(gamma, gp)
            if len(new_gp) > cap:
                continue  # clipped on this truncation
            sign = -1 if (len(gamma) % 2) else 1
            for w in cylinders:
                u = words.concat(gamma, w)
                h_out = h_of(cylinder_busemann(new_gp, u, g))
                h_in = h_of(cylinder_busemann(gp, w, g))
                worst_twisted = max(worst_twisted, abs(h_out - h_in))
                worst_plain = max(worst_plain, abs(h_out - sign * h_in))
        twisted.append(float(worst_twisted))
        plain.append(float(worst_plain))
    return Type3Certificate(gamma=gamma, dirac_mode=dirac_mode, depth=depth,
                            group_caps=caps, twisted_norms=tuple(twisted),
                            untwisted_norms=tuple(plain),
                            parity_is_homomorphism=parity_ok)


def representation_defect(a: CrossedMonomial, b: CrossedMonomial,
                          space: BoundarySpace) -> float:
    """Largest per-key defect ``||pi(a) pi(b) e - pi(a b) e||``.

    Exhausts every basis key of the truncation; keys clipped by either
    route are excluded on both sides (a longer intermediate group word can
    clip ``pi(a) pi(b)`` where ``pi(a b)`` survives, so only keys with no
    clipped mass anywhere count).
    """
    product = crossed_product(a, b)
    worst = 0.0
    cylinders = (words.reduced_words(space.g, space.depth)
                 if space.depth else [()])
    for gamma in group_elements(space.g, space.group_cap):
        for w in cylinders:
            e = basis_vector(w, gamma, space)
            step = apply_crossed(b, e)
            two = apply_crossed(a, step.vector)
            one = apply_crossed(product, e)
            if (step.clipped_mass or two.clipped_mass
                    or one.clipped_mass):
                continue
            worst = max(worst, two.vector.sub(one.vector).norm())
    return worst
