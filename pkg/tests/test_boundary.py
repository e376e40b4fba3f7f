"""Tests for the free-group boundary crossed product and its KMS structure."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zetakms import boundary, words
from zetakms.errors import CapacityError, DomainError, ResolutionError

SPACE = boundary.BoundarySpace(g=2, depth=4, group_cap=3)


# ---------------------------------------------------------------------------
# Busemann cocycle
# ---------------------------------------------------------------------------


def test_busemann_frozen_values():
    assert boundary.busemann((0,), (0,), 2) == 1
    assert boundary.busemann((0,), (1,), 2) == -1
    assert boundary.busemann((0, 2), (0, 2, 1), 2) == 2
    assert boundary.busemann((), (0, 2), 2) == 0


def test_busemann_is_two_overlap_minus_length():
    """B(gamma, xi) = 2 * |common prefix of gamma and xi| - |gamma|."""
    gamma = (0, 2, 0)
    for xi in ((0, 2, 0, 0, 2), (0, 2, 1, 1, 2), (1, 1, 1, 1, 1)):
        k = words.common_prefix_len(gamma, xi)
        assert boundary.busemann(gamma, xi, 2) == 2 * k - len(gamma)


def test_busemann_rejects_unreduced_input():
    with pytest.raises(DomainError):
        boundary.busemann((0, 1), (0,), 2)
    with pytest.raises(DomainError):
        boundary.busemann((0,), (2, 3), 2)


_SMALL = [(), (0,), (1,), (2,), (3,), (0, 2), (1, 3), (0, 0), (2, 1)]
_DEEP = [(0, 2, 0, 2, 0), (1, 1, 1, 1, 1), (3, 0, 3, 0, 3), (2, 1, 2, 1, 2)]


@given(
    gamma=st.sampled_from(_SMALL),
    delta=st.sampled_from(_SMALL),
    xi=st.sampled_from(_DEEP),
)
def test_busemann_cocycle_identity(gamma, delta, xi):
    """B(gamma delta, xi) = B(gamma, xi) + B(delta, gamma^{-1} xi)."""
    lhs = boundary.busemann(words.concat(gamma, delta), xi, 2)
    shifted = words.concat(words.inverse_word(gamma), xi)
    rhs = boundary.busemann(gamma, xi, 2) + boundary.busemann(delta, shifted, 2)
    assert lhs == rhs


def test_cylinder_busemann_requires_resolution():
    with pytest.raises(ResolutionError):
        boundary.cylinder_busemann((0, 2), (0,), 2)
    assert boundary.cylinder_busemann((0, 2), (1,), 2) == -2
    assert boundary.cylinder_busemann((0, 2), (0, 2), 2) == 2


# ---------------------------------------------------------------------------
# Group enumeration and the truncated space
# ---------------------------------------------------------------------------


def test_group_elements_enumeration():
    elements = boundary.group_elements(2, 2)
    assert len(elements) == 17  # 1 + 4 + 12
    assert elements[0] == ()
    assert all(words.is_reduced(w) for w in elements)
    lengths = [len(w) for w in elements]
    assert lengths == sorted(lengths)


def test_space_dimension_is_leaves_times_group(table_10k):
    del table_10k
    ham = boundary.hamiltonian(SPACE)
    assert ham.structure == "diagonal"
    n_leaves = 4 * 3**3
    n_group = 1 + 4 + 12 + 36
    assert ham.dim == n_leaves * n_group


def test_hamiltonian_spectrum_is_integer_busemann_range():
    diag = boundary.hamiltonian(SPACE).diag.real
    np.testing.assert_allclose(diag, np.round(diag), atol=0.0)
    assert diag.min() == -3.0 and diag.max() == 3.0


def test_space_depth_must_exceed_group_cap():
    with pytest.raises(DomainError):
        boundary.hamiltonian(boundary.BoundarySpace(2, 2, 3))


def test_space_capacity_guard():
    with pytest.raises(CapacityError):
        boundary.hamiltonian(boundary.BoundarySpace(2, 12, 3))


def test_basis_vector_has_unit_measure_norm():
    vec = boundary.basis_vector((0, 2), (1,), SPACE)
    ((key, coeff),) = vec.coeffs.items()
    assert key == ((0, 2), (1,))
    mass = float(boundary.cylinder_busemann((), (0, 2), 2) * 0 + 1) / 12.0
    assert abs(coeff) ** 2 * mass == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Crossed-product monomials
# ---------------------------------------------------------------------------


def test_vacuum_state_values():
    assert boundary.vacuum_state(boundary.unitary_monomial((), 2)) == 1.0
    assert boundary.vacuum_state(boundary.unitary_monomial((0,), 2)) == 0.0
    ind = boundary.indicator_monomial((1,), (), 2)
    assert boundary.vacuum_state(ind) == pytest.approx(0.25)


def test_unitary_is_unitary():
    u = boundary.unitary_monomial((0,), 2)
    prod = boundary.crossed_product(boundary.crossed_adjoint(u), u)
    assert prod.gamma == ()
    for _, coeff in prod.values:
        assert coeff == pytest.approx(1.0)


def test_crossed_product_multiplies_group_parts():
    u0 = boundary.unitary_monomial((0,), 2)
    u2 = boundary.unitary_monomial((2,), 2)
    assert boundary.crossed_product(u0, u2).gamma == (0, 2)
    u_inv = boundary.unitary_monomial((1,), 2)
    assert boundary.crossed_product(u0, u_inv).gamma == ()


def test_scaled_monomial():
    # A bare unitary carries an implicit constant-1 coefficient function.
    u = boundary.unitary_monomial((0,), 2)
    assert boundary.scaled_monomial(u, 2.0j).values == (((), 2.0j),)
    ind = boundary.indicator_monomial((1,), (0,), 2)
    assert boundary.scaled_monomial(ind, -3.0).values == (((1,), -3.0 + 0.0j),)


def test_representation_defect_is_zero(table_10k):
    del table_10k
    space = boundary.BoundarySpace(2, 3, 2)
    u0 = boundary.unitary_monomial((0,), 2)
    u1 = boundary.unitary_monomial((1,), 2)
    ind = boundary.indicator_monomial((1,), (0,), 2)
    assert boundary.representation_defect(u0, u1, space) < 1e-12
    assert boundary.representation_defect(u0, ind, space) < 1e-12
    assert boundary.representation_defect(ind, ind, space) < 1e-12


def test_apply_crossed_annihilates_mismatched_cylinder():
    vec = boundary.basis_vector((0, 2), (1,), SPACE)
    ind = boundary.indicator_monomial((1,), (0,), 2)
    result = boundary.apply_crossed(ind, vec)
    assert result.vector.coeffs == {}
    assert result.clipped_mass == 0.0


# ---------------------------------------------------------------------------
# Time evolution
# ---------------------------------------------------------------------------


def test_time_evolved_phases_follow_busemann():
    u = boundary.unitary_monomial((0,), 2)
    evolved = boundary.time_evolved(u, 0.5)
    lookup = dict(evolved.values)
    assert lookup[(0,)] == pytest.approx(complex(math.cos(0.5), math.sin(0.5)))
    assert lookup[(1,)] == pytest.approx(complex(math.cos(0.5), -math.sin(0.5)))


def test_imaginary_time_weights_follow_busemann():
    u = boundary.unitary_monomial((0,), 2)
    weighted = boundary.imaginary_time(u, 0.5)
    lookup = dict(weighted.values)
    assert lookup[(0,)] == pytest.approx(math.exp(-0.5))
    assert lookup[(1,)] == pytest.approx(math.exp(0.5))


def test_time_evolution_residual_small_for_generators():
    for gamma in ((0,), (1,), (0, 2)):
        u = boundary.unitary_monomial(gamma, 2)
        assert boundary.time_evolution_residual(u, 0.7, SPACE) < 1e-12
    ind = boundary.indicator_monomial((1,), (0,), 2)
    assert boundary.time_evolution_residual(ind, 0.7, SPACE) < 1e-12


# ---------------------------------------------------------------------------
# KMS condition for the Patterson-Sullivan state
# ---------------------------------------------------------------------------


def test_kms_residual_vanishes_at_critical_temperature():
    a = boundary.unitary_monomial((0,), 2)
    b = boundary.unitary_monomial((1,), 2)
    assert boundary.ps_kms_residual(a, b, math.log(3.0)) == 0.0


def test_kms_residual_detects_wrong_temperature():
    a = boundary.unitary_monomial((0,), 2)
    b = boundary.unitary_monomial((1,), 2)
    low = boundary.ps_kms_residual(a, b, math.log(3.0) - 0.2)
    high = boundary.ps_kms_residual(a, b, math.log(3.0) + 0.2)
    assert low > 1e-3 and high > 1e-3


def test_kms_residual_matches_hand_computation():
    """For a = U_gamma, b = U_gamma^{-1} the twisted side telescopes to
    phi(a sigma_{i beta}(b)) = mu(cyl gamma) e^{beta} + (1 - mu) e^{-beta}.
    """
    a = boundary.unitary_monomial((0,), 2)
    b = boundary.unitary_monomial((1,), 2)
    for beta in (0.5, math.log(3.0), 1.5, 2.0):
        expected = abs(0.25 * math.exp(beta) + 0.75 * math.exp(-beta) - 1.0)
        assert boundary.ps_kms_residual(a, b, beta) == pytest.approx(
            expected, abs=1e-13
        )


def test_kms_vanishing_identifies_log_of_ball_growth():
    """exp(beta)/4 + 3 exp(-beta)/4 = 1 has the unique positive root log 3."""
    beta = math.log(3.0)
    assert 0.25 * math.exp(beta) + 0.75 * math.exp(-beta) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Radon-Nikodym derivative against the cocycle
# ---------------------------------------------------------------------------


def test_rn_derivative_matches_busemann_exactly():
    for gamma in ((0,), (0, 2), (1, 3)):
        assert boundary.rn_equals_busemann(gamma, 4, 2) == Fraction(0)


def test_rn_requires_depth_beyond_gamma():
    with pytest.raises(DomainError):
        boundary.rn_equals_busemann((0, 2), 2, 2)


# ---------------------------------------------------------------------------
# Type III obstruction certificate
# ---------------------------------------------------------------------------


def test_type3_odd_generator_separates_twists():
    cert = boundary.type3_triple_certificate((0,), (1, 2, 3), 2)
    assert cert.twisted_norms == pytest.approx((1.0, 1.0, 1.0))
    assert cert.untwisted_norms == pytest.approx((1.0, 3.0, 5.0))
    assert cert.parity_is_homomorphism


def test_type3_even_word_has_trivial_twist():
    cert = boundary.type3_triple_certificate((0, 0), (1, 2, 3), 2)
    assert cert.twisted_norms == cert.untwisted_norms
    assert cert.twisted_norms == pytest.approx((2.0, 2.0, 2.0))


def test_type3_rejects_unknown_dirac_mode():
    with pytest.raises(DomainError):
        boundary.type3_triple_certificate((0,), (1, 2), 2, dirac_mode="plain")
