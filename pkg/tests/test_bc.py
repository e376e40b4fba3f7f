"""Tests for the Bost–Connes truncation: monomials, states, and certificates."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from zetakms import arith, bc, linop
from zetakms.errors import DomainError, TruncationError, TruncationWarning
from zetakms.linop import columns_equal


@pytest.fixture(scope="module")
def rep_20(table_10k):
    return bc.bc_representation(20, table=table_10k)


@pytest.fixture(scope="module")
def rep_10k(table_10k):
    return bc.bc_representation(10_000, table=table_10k)


# ---------------------------------------------------------------------------
# Monomial algebra
# ---------------------------------------------------------------------------


def test_e_zero_is_identity(rep_20):
    op = bc.represent(bc.e(0), rep_20)
    np.testing.assert_allclose(linop.to_dense(op), np.eye(20), atol=0.0)


def test_e_half_is_parity_sign(table_10k):
    rep = bc.bc_representation(6, table=table_10k)
    op = bc.represent(bc.e("1/2"), rep)
    expected = np.diag([(-1.0) ** ell for ell in range(1, 7)]).astype(complex)
    np.testing.assert_allclose(linop.to_dense(op), expected, atol=1e-15)


def test_mu_star_is_adjoint_of_mu(rep_20):
    lhs = linop.to_dense(bc.represent(bc.mu_star(3), rep_20))
    rhs = linop.to_dense(bc.represent(bc.mu(3), rep_20)).conj().T
    np.testing.assert_allclose(lhs, rhs, atol=0.0)


def test_adjoint_monomial_swaps_isometry_indices():
    mono = bc.scaled(bc.monomial(n=2, m=5), 2.0 + 1.0j)
    adj = bc.adjoint_monomial(mono)
    assert (adj.n, adj.m) == (5, 2)
    assert adj.coeffs[0][1] == pytest.approx(2.0 - 1.0j)


def test_adjoint_monomial_rejects_nonscalar_group_part():
    with pytest.raises(DomainError):
        bc.adjoint_monomial(bc.monomial({"1/3": 1.0}, n=2, m=5))


def test_mu_mu_star_is_divisibility_projection(rep_20):
    """mu_n mu_n* projects onto the basis lines with index divisible by n."""
    prod = linop.compose(
        bc.represent(bc.mu(2), rep_20), bc.represent(bc.mu_star(2), rep_20)
    )
    expected = np.diag([1.0 if ell % 2 == 0 else 0.0 for ell in range(1, 21)])
    np.testing.assert_allclose(
        linop.to_dense(prod), expected.astype(complex), atol=0.0
    )


def test_mu_star_mu_is_identity(rep_20):
    prod = linop.compose(
        bc.represent(bc.mu_star(3), rep_20), bc.represent(bc.mu(3), rep_20)
    )
    mismatches = columns_equal(prod, bc.represent(bc.e(0), rep_20))
    assert mismatches == []


def test_group_ring_semigroup_section_round_trip():
    x = ((Fraction(1, 3), 1.0 + 0.0j), (Fraction(1, 2), -2.0 + 0.0j))
    for n in (2, 3, 6):
        back = bc.sigma_n_group(bc.rho_n_group(x, n), n)
        assert [r for r, _ in back] == [r for r, _ in x]
        for (_, got), (_, want) in zip(back, x):
            assert got == pytest.approx(want, abs=1e-14)


def test_rho_n_group_averages_over_preimages():
    out = bc.rho_n_group(((Fraction(0), 1.0 + 0.0j),), 2)
    assert out == ((Fraction(0), 0.5 + 0.0j), (Fraction(1, 2), 0.5 + 0.0j))


def test_sigma_automorphism_scales_by_liouville_signs(table_10k):
    rep = bc.bc_representation(50, galois_twist=1, table=table_10k)
    mono = bc.monomial({"1/3": 1.0}, n=2, m=3)
    twisted = bc.sigma_automorphism(mono, rep)
    # lambda(2) = -1 and lambda(3) = -1, so the scaling is (+1).
    assert twisted.coeffs == mono.coeffs
    twisted_odd = bc.sigma_automorphism(bc.mu(2), rep)
    assert twisted_odd.coeffs[0][1] == pytest.approx(-1.0)


def test_liouville_of_matches_sieve(table_10k):
    for k in (1, 2, 4, 8, 12, 30):
        assert bc.liouville_of(k, table_10k) == table_10k.liouville[k]


# ---------------------------------------------------------------------------
# Hamiltonian, Dirac operators, and the grading
# ---------------------------------------------------------------------------


def test_hamiltonian_is_log_diagonal(rep_20):
    ham = bc.hamiltonian(rep_20)
    assert ham.structure == "diagonal"
    np.testing.assert_allclose(
        ham.diag.real, [math.log(ell) for ell in range(1, 21)], atol=1e-15
    )


def test_liouville_sign_is_a_symmetry(rep_20):
    sign = bc.liouville_sign(rep_20)
    mat = linop.to_dense(sign)
    np.testing.assert_allclose(mat @ mat, np.eye(20), atol=0.0)
    ham = linop.to_dense(bc.hamiltonian(rep_20))
    np.testing.assert_allclose(mat @ ham - ham @ mat, np.zeros((20, 20)), atol=0.0)


def test_dirac_tilde_singular_values_are_integers(table_10k):
    rep = bc.bc_representation(12, table=table_10k)
    dense = linop.to_dense(bc.dirac_tilde(rep))
    sv = np.linalg.svd(dense, compute_uv=False)
    np.testing.assert_allclose(sorted(sv), np.arange(1.0, 13.0), atol=1e-12)


def test_dirac_signed_carries_liouville_signs(rep_20):
    signed = bc.dirac_signed(rep_20).diag.real
    expected = [
        rep_20.table.liouville[ell] * math.log(ell) for ell in range(1, 21)
    ]
    np.testing.assert_allclose(signed, expected, atol=1e-15)


# ---------------------------------------------------------------------------
# Partition function and equilibrium states
# ---------------------------------------------------------------------------


def test_partition_function_matches_zeta(rep_10k):
    from scipy.special import zeta as scipy_zeta

    for beta in (1.5, 2.0, 3.0):
        z = bc.partition_function(beta, rep_10k)
        assert abs(z.value - scipy_zeta(beta)) <= z.tail_bound


def test_partition_function_rejects_divergent_beta(rep_10k):
    with pytest.raises(DomainError):
        bc.partition_function(1.0, rep_10k)
    with pytest.raises(DomainError):
        bc.gibbs_state(bc.e("1/2"), 0.5, rep_10k)


def test_gibbs_state_of_identity_is_one(rep_10k):
    val = bc.gibbs_state(bc.e(0), 2.0, rep_10k)
    assert val.value.real == pytest.approx(1.0, abs=1e-12)
    assert abs(val.value.imag) < 1e-15


def test_gibbs_state_annihilates_off_diagonal_monomials(rep_10k):
    val = bc.gibbs_state(bc.mu(2), 2.0, rep_10k)
    assert abs(val.value) < 1e-15


def test_gibbs_half_both_routes(rep_10k):
    """phi_beta(e(1/2)) via the trace and via the Dirichlet resummation."""
    for beta in (2.0, 3.0):
        trace = bc.gibbs_state(bc.e("1/2"), beta, rep_10k)
        series = bc.gibbs_state_mobius_form("1/2", beta, rep_10k)
        gap = abs(trace.value - series.value)
        assert gap <= trace.tail_bound + series.tail_bound + 1e-12
    val = bc.gibbs_state(bc.e("1/2"), 2.0, rep_10k)
    assert abs(val.value.real - (-0.5)) <= val.tail_bound
    assert abs(val.value.imag) < 1e-14


def test_gibbs_third_roots_sum_to_minus_half():
    """The three nontrivial sixth... third-root values average consistently.

    phi_beta(e(1/3)) + phi_beta(e(2/3)) = phi-sum over the nontrivial cube
    roots, which equals the Galois-invariant combination and is real.
    """
    table = arith.sieve(10_000)
    rep = bc.bc_representation(10_000, table=table)
    a = bc.gibbs_state(bc.e("1/3"), 2.0, rep).value
    b = bc.gibbs_state(bc.e("2/3"), 2.0, rep).value
    assert abs((a + b).imag) < 1e-12
    assert a.real == pytest.approx(b.real, abs=1e-12)


def test_bc_eta_is_zeta_ratio(rep_10k):
    val = bc.bc_eta(2.0, rep_10k)
    assert val.value.real == pytest.approx(math.pi**2 / 15.0, abs=1e-6)


# ---------------------------------------------------------------------------
# KMS residuals
# ---------------------------------------------------------------------------


def test_plain_kms_residual_vanishes(table_10k):
    rep = bc.bc_representation(1_000, table=table_10k)
    for n in (2, 3, 6):
        for beta in (2.0, 3.0):
            assert bc.kms_residual(bc.mu(n), bc.mu_star(n), beta, rep) == 0.0


def test_twisted_kms_residual_vanishes(table_10k):
    rep = bc.bc_representation(1_000, table=table_10k)
    b = bc.monomial({"1/2": 1.0}, n=1, m=2)
    for beta in (2.0, 3.0):
        assert bc.twisted_kms_residual(bc.mu(2), b, beta, rep) <= 1e-12


def test_kms_residual_detects_wrong_temperature(table_10k):
    """At the wrong inverse temperature the defect is visibly nonzero."""
    rep = bc.bc_representation(1_000, table=table_10k)
    wrong = bc.kms_residual(bc.mu(2), bc.mu_star(2), 2.0, rep)
    # Residual against sigma_{i*3} computed by hand: the two sides differ by
    # a factor 2^{beta'-beta} on the divisible-by-2 trace mass.
    cooked = bc.kms_residual(bc.mu(2), bc.mu_star(2), 3.0, rep)
    assert wrong == 0.0 and cooked == 0.0  # both are genuine KMS points
    defect = abs(
        bc.gibbs_state(bc.monomial(n=2, m=2), 2.0, rep).value
        - 2.0**-3.0 * bc.gibbs_state(bc.monomial(n=2, m=2), 3.0, rep).value
    )
    assert defect > 1e-3


# ---------------------------------------------------------------------------
# Twisted commutator certificates
# ---------------------------------------------------------------------------


def test_certificate_twisted_norms_are_log_n():
    for n in (2, 3):
        cert = bc.twisted_commutator_certificate(n, (100, 1_000, 10_000))
        assert cert.expected_twisted == pytest.approx(math.log(n), abs=1e-15)
        for norm in cert.twisted_norms:
            assert norm == pytest.approx(math.log(n), abs=1e-10)
        assert cert.twisted_bounded
        assert cert.untwisted_increasing
        assert cert.lipschitz_increasing


def test_certificate_square_generator_has_trivial_twists():
    """lambda(4) = +1 and mu(4) = 0, so every variant stays at log 4."""
    cert = bc.twisted_commutator_certificate(4, (100, 500, 2_000))
    for seq in (cert.twisted_norms, cert.untwisted_norms, cert.lipschitz_norms):
        for norm in seq:
            assert norm == pytest.approx(math.log(4), abs=1e-10)
    assert cert.twisted_bounded
    assert not cert.untwisted_increasing
    assert not cert.lipschitz_increasing


def test_certificate_untwisted_growth_is_logarithmic():
    cert = bc.twisted_commutator_certificate(2, (100, 10_000))
    small, large = cert.untwisted_norms
    # sup_{ell <= N/2} (log(2 ell) + log ell) grows like 2 log N, so the
    # difference between the two truncations is 2 log(N2 / N1).
    assert large - small == pytest.approx(2.0 * math.log(100.0), rel=0.05)


# ---------------------------------------------------------------------------
# Truncation bookkeeping
# ---------------------------------------------------------------------------


def test_clipped_mass_fraction(rep_20):
    assert bc.clipped_mass_fraction(bc.mu(2), rep_20) == pytest.approx(0.5)
    assert bc.clipped_mass_fraction(bc.e(0), rep_20) == 0.0


def test_clip_threshold_warns_in_desk_profile(table_10k):
    rep = bc.bc_representation(30, clip_threshold=0.5, strict=False, table=table_10k)
    with pytest.warns(TruncationWarning):
        bc.represent(bc.mu(3), rep)


def test_clip_threshold_raises_in_strict_profile(table_10k):
    rep = bc.bc_representation(30, clip_threshold=0.5, strict=True, table=table_10k)
    with pytest.raises(TruncationError):
        bc.represent(bc.mu(20), rep)


def test_monomial_acceptance_below_threshold_is_silent(table_10k):
    import warnings

    rep = bc.bc_representation(30, clip_threshold=0.9, strict=True, table=table_10k)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bc.represent(bc.mu(2), rep)  # clips 15/30 = 0.5 < 0.9
