"""Tests for the Cantor-set filtration, zeta functions, and grading checks."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from zetakms import cantor
from zetakms.errors import CapacityError, DomainError


@pytest.fixture(scope="module")
def tree_4():
    return cantor.build_filtration(2, 4)


@pytest.fixture(scope="module")
def basis_4(tree_4):
    return cantor.gram_schmidt_basis(tree_4)


# ---------------------------------------------------------------------------
# Filtration geometry
# ---------------------------------------------------------------------------


def test_filtration_dimensions_follow_word_counts(tree_4):
    assert tree_4.dims == (1, 4, 12, 36, 108)
    assert tree_4.multiplicities == (1, 3, 8, 24, 72)
    assert [len(level) for level in tree_4.levels] == [1, 4, 12, 36, 108]
    assert tree_4.levels[1] == ((0,), (1,), (2,), (3,))


def test_eigenvalues_are_cubes_of_dimensions(tree_4):
    assert tree_4.eigenvalues == (1, 64, 1728, 46656, 1259712)
    for d, lam in zip(tree_4.dims, tree_4.eigenvalues):
        assert lam == (d**3 if lam > 1 else 1)


def test_filtration_rank_three(basis_4):
    del basis_4  # trigger fixture only once; the rank-3 tree goes here
    tree = cantor.build_filtration(3, 2)
    assert tree.dims == (1, 6, 30)
    assert tree.eigenvalues == (1, 216, 27000)


def test_level_dimension_closed_form():
    for n in range(1, 8):
        assert cantor.level_dimension(2, n) == 4 * 3 ** (n - 1)
        assert cantor.level_dimension(3, n) == 6 * 5 ** (n - 1)
    assert cantor.level_dimension(2, 0) == 1


def test_tree_capacity_guard():
    with pytest.raises(CapacityError):
        cantor.build_filtration(2, 12)


def test_cylinder_measure_values():
    assert cantor.cylinder_measure((), 2) == Fraction(1)
    assert cantor.cylinder_measure((0,), 2) == Fraction(1, 4)
    assert cantor.cylinder_measure((0, 2), 2) == Fraction(1, 12)
    assert cantor.cylinder_measure((0,), 3) == Fraction(1, 6)


# ---------------------------------------------------------------------------
# Locally constant functions
# ---------------------------------------------------------------------------


def test_indicator_integral_is_cylinder_mass(tree_4):
    f = cantor.indicator((0,), tree_4)
    assert cantor.integral(f) == pytest.approx(0.25)
    h = cantor.indicator((0, 2), tree_4)
    assert cantor.integral(h) == pytest.approx(1.0 / 12.0)


def test_refine_preserves_integral_and_inner(tree_4):
    f = cantor.indicator((0,), tree_4)
    fine = cantor.refine(f, 4)
    assert fine.level == 4
    assert cantor.integral(fine) == pytest.approx(cantor.integral(f).real)
    assert cantor.inner(f, f) == pytest.approx(0.25)
    assert cantor.inner(fine, fine) == pytest.approx(0.25)


def test_pointwise_product_of_nested_indicators(tree_4):
    outer = cantor.indicator((0,), tree_4)
    inner_word = cantor.indicator((0, 2), tree_4)
    prod = cantor.pointwise_product(outer, inner_word)
    assert cantor.integral(prod) == pytest.approx(1.0 / 12.0)


def test_pointwise_product_of_disjoint_indicators_vanishes(tree_4):
    a = cantor.indicator((0,), tree_4)
    b = cantor.indicator((1,), tree_4)
    prod = cantor.pointwise_product(a, b)
    assert np.all(prod.values == 0.0)


def test_constant_function_has_unit_mass(tree_4):
    one = cantor.constant(1.0, tree_4)
    assert cantor.integral(one) == pytest.approx(1.0)
    assert cantor.inner(one, one) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Eigenbasis
# ---------------------------------------------------------------------------


def test_gram_schmidt_rows_are_orthonormal(tree_4, basis_4):
    gram = basis_4.leaf_mass * basis_4.vectors @ basis_4.vectors.T
    np.testing.assert_allclose(gram, np.eye(tree_4.dims[-1]), atol=1e-12)


def test_row_levels_count_multiplicities(tree_4, basis_4):
    counts = np.bincount(basis_4.row_levels)
    assert list(counts) == list(tree_4.multiplicities)
    for level, lam in enumerate(tree_4.eigenvalues):
        rows = basis_4.row_eigenvalues[basis_4.row_levels == level]
        assert np.all(rows == lam)


def test_indicator_expands_in_eigenbasis(tree_4, basis_4):
    """Parseval: projecting onto the rows reconstructs the function."""
    f = cantor.refine(cantor.indicator((0, 2), tree_4), 4)
    coeffs = basis_4.leaf_mass * (basis_4.vectors @ f.values)
    reconstructed = basis_4.vectors.T @ coeffs
    np.testing.assert_allclose(reconstructed, f.values, atol=1e-12)


# ---------------------------------------------------------------------------
# Spectral zeta function
# ---------------------------------------------------------------------------


def test_dirac_zeta_matches_closed_form():
    for s in (1.0, 2.0):
        val = cantor.dirac_zeta(s, 2, 40)
        closed = cantor.dirac_zeta_closed_form(s, 2)
        assert abs(val.value - closed) <= 1e-10


def test_dirac_zeta_half_sits_on_its_tail_bound():
    """At s = 1/2 and depth 40 the truncation error saturates the tail."""
    val = cantor.dirac_zeta(0.5, 2, 40)
    closed = cantor.dirac_zeta_closed_form(0.5, 2)
    err = abs(val.value - closed)
    assert err <= val.tail_bound
    assert val.tail_bound > 1e-10  # the 1e-10 target is out of reach here


def test_dirac_zeta_finite_at_one():
    val = cantor.dirac_zeta(1.0, 2, 40)
    assert np.isfinite(val.value.real)
    closed = cantor.dirac_zeta_closed_form(1.0, 2)
    assert val.value.real == pytest.approx(closed.real, abs=1e-10)
    assert 1.0 < val.value.real < 1.1


def test_dirac_zeta_pole_and_divergence():
    with pytest.raises(DomainError):
        cantor.dirac_zeta(1.0 / 3.0, 2, 40)
    with pytest.raises(DomainError):
        cantor.dirac_zeta(0.33, 2, 40)


def test_dirac_zeta_converges_slowly_above_abscissa():
    shallow = cantor.dirac_zeta(0.34, 2, 40)
    deep = cantor.dirac_zeta(0.34, 2, 120)
    assert deep.tail_bound < shallow.tail_bound
    closed = cantor.dirac_zeta_closed_form(0.34, 2)
    roundoff = 1e-12 * abs(closed)
    assert abs(deep.value - closed) <= deep.tail_bound + roundoff


def test_dirac_zeta_survives_huge_depth():
    """Multiplicities near 3^4000 must not overflow the float path."""
    val = cantor.dirac_zeta(2.0, 2, 4000)
    closed = cantor.dirac_zeta_closed_form(2.0, 2)
    assert abs(val.value - closed) <= 1e-12


def test_complex_argument_matches_brute_force():
    s = 0.8 + 1.3j
    val = cantor.dirac_zeta(s, 2, 60)
    dims = [1] + [4 * 3 ** (n - 1) for n in range(1, 61)]
    mults = [1] + [dims[n] - dims[n - 1] for n in range(1, 61)]
    brute = sum(
        m * (d**3) ** (-s) for m, d in zip(mults[1:], dims[1:], strict=True)
    ) + 1.0
    assert val.value == pytest.approx(brute, abs=1e-12)


def test_abscissa_residue_and_pole_lattice():
    assert cantor.zeta_abscissa(2) == pytest.approx(1.0 / 3.0)
    assert cantor.zeta_abscissa(3) == pytest.approx(1.0 / 3.0)
    assert cantor.residue_at_abscissa(2) == pytest.approx(
        0.20227538369485276, abs=1e-14
    )
    lattice = cantor.zeta_pole_lattice(2, 2)
    np.testing.assert_allclose(lattice.real, 1.0 / 3.0, atol=1e-14)
    spacing = 2.0 * math.pi / (3.0 * math.log(3.0))
    np.testing.assert_allclose(np.diff(lattice.imag), spacing, atol=1e-12)


def test_zeta_a_of_constant_matches_dirac_zeta(tree_4):
    one = cantor.constant(1.0, tree_4)
    weighted = cantor.zeta_a(one, 2.0)
    plain = cantor.dirac_zeta(2.0, 2, tree_4.depth if hasattr(tree_4, "depth") else 4)
    assert weighted.value == pytest.approx(plain.value, abs=1e-12)


# ---------------------------------------------------------------------------
# Gibbs state against the zeta quotient
# ---------------------------------------------------------------------------


def test_gibbs_equals_zeta_for_cylinders(tree_4, basis_4):
    for word, mass in (((0,), 0.25), ((0, 2), 1.0 / 12.0)):
        f = cantor.indicator(word, tree_4)
        for beta in (1.0, 2.0):
            report = cantor.gibbs_equals_zeta(f, beta, basis_4)
            assert report.residual < 1e-10
            assert report.zeta_quotient_value.real == pytest.approx(
                mass, abs=1e-9
            )


# ---------------------------------------------------------------------------
# Inner time evolution
# ---------------------------------------------------------------------------


def _level_state(tree, basis, level, row_offset=0):
    row = tree.dims[level - 1] + row_offset
    return cantor.BoundaryFunction(
        tree=tree, level=tree.dims.index(tree.dims[-1]),
        values=basis.vectors[row].copy())


def test_inner_time_evolution_dual_route(tree_4, basis_4):
    for lv_phi in (1, 2, 3):
        for lv_psi in (1, 2, 3):
            phi = _level_state(tree_4, basis_4, lv_phi)
            psi = _level_state(tree_4, basis_4, lv_psi)
            report = cantor.inner_time_evolution(phi, psi, 0.7, basis_4)
            assert report.discrepancy < 1e-12
            assert report.psi_level == lv_psi


def test_inner_time_evolution_at_time_zero(tree_4, basis_4):
    phi = _level_state(tree_4, basis_4, 2)
    report = cantor.inner_time_evolution(phi, phi, 0.0, basis_4)
    assert report.formula_values == pytest.approx(
        report.conjugation_values, abs=1e-13
    )


def test_inner_time_evolution_rejects_mixed_levels(tree_4, basis_4):
    phi = _level_state(tree_4, basis_4, 1)
    mixed = cantor.refine(cantor.indicator((0,), tree_4), 4)
    with pytest.raises(DomainError):
        cantor.inner_time_evolution(phi, mixed, 0.5, basis_4)


# ---------------------------------------------------------------------------
# Grading obstruction
# ---------------------------------------------------------------------------


def test_grading_commutant_dimension_small_depths():
    one = cantor.grading_obstruction_check(2, 1)
    assert one.commutant_dim == 4
    assert one.expected_commutant_dim == 4
    assert one.candidates_scanned == 256
    assert one.min_anticommutator_norm == pytest.approx(
        103.27917525299382, rel=1e-12
    )
    assert one.witness is not None


def test_grading_scan_can_be_skipped():
    rep = cantor.grading_obstruction_check(2, 2, scan=False)
    assert rep.commutant_dim == 12
    assert rep.expected_commutant_dim == 12
    assert rep.candidates_scanned == 0
    assert rep.min_anticommutator_norm is None


def test_grading_depth_capacity_guard():
    with pytest.raises(CapacityError):
        cantor.grading_obstruction_check(2, 9)
