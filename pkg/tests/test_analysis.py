"""
Testes de core.analysis: recursão do erro, certificados do produto e da
soma, cotas exponenciais, estudo a.co e ajuste da taxa.
"""

import logging
import math

import numpy as np
import pytest

from core.analysis import (
    BOUNDS_COLUMNS,
    STUDY_COLUMNS,
    BoundParams,
    aco_study,
    bounds_certificate,
    compare_rate,
    error_recursion_check,
    fit_lemma1,
    fit_lemma2_constant,
    hoeffding_bound,
    hoeffding_series,
    lemma2_sum,
    lemma2_sums,
    measure_noise_floor,
    pinelis_bound,
    product_norm,
    product_norm_table,
    rate_fit,
)
from core.exceptions import FitError, InputError, UnsupportedInputError, VerificationFailure
from core.rm import NoiseModel, RMConfig, make_stream, sample_noise_block
from core.tridiag import TriDiag, spectrum

# ── RNG reprodutível ──────────────────────────────────────────────────
RNG = np.random.default_rng(0)

# ── tolerâncias ──────────────────────────────────────────────────────
RECURSION_TOL = 1e-10
RTOL = 1e-10
SLACK = 1.0 + 1e-12

# A = [1]: ∏_{j=i+1}^{k}(1 − 1/j) = i/k
SCALAR_ONE = TriDiag(1, [], [1.0], [])


@pytest.fixture
def sine_rhs():
    u = np.sin(np.pi * np.arange(1, 10) / 10)
    return TriDiag.constant(9, 0.0, 1.0).to_dense() @ u


@pytest.fixture(scope="module")
def certificate():
    """Certificado completo para CN(a = 1, N = 10) em 1 ≤ i ≤ k ≤ 2000."""
    return bounds_certificate(TriDiag.constant(9, 4.0, -1.0), 2000, b=0.1)


def dense_product(A, i, k, c=1.0):
    dense = A.to_dense()
    P = np.eye(A.n)
    for j in range(i + 1, k + 1):
        P = (np.eye(A.n) - (c / j) * dense) @ P
    return P


# ======================================================================
#  error_recursion_check — oráculo da iteração direta
# ======================================================================

class TestErrorRecursion:
    def test_zero_noise(self, cn_a1_n10, sine_rhs):
        draws = np.zeros((60, 9))
        assert error_recursion_check(cn_a1_n10, np.zeros(9), sine_rhs, draws, 60) <= RECURSION_TOL

    def test_recorded_noise(self, cn_a1_n10, sine_rhs):
        draws = sample_noise_block(NoiseModel.uniform(9, 0.1), make_stream(11), 100)
        x_init = RNG.normal(size=9)
        assert error_recursion_check(cn_a1_n10, x_init, sine_rhs, draws, 100) <= RECURSION_TOL

    def test_general_gain_and_exponent(self, cn_a1_n10, sine_rhs):
        draws = sample_noise_block(NoiseModel.uniform(9, 0.1), make_stream(12), 80)
        dev = error_recursion_check(cn_a1_n10, np.zeros(9), sine_rhs, draws, 80, c=0.5, theta=0.8)
        assert dev <= RECURSION_TOL

    def test_not_enough_draws(self, cn_a1_n10, sine_rhs):
        with pytest.raises(InputError):
            error_recursion_check(cn_a1_n10, np.zeros(9), sine_rhs, np.zeros((5, 9)), 10)


# ======================================================================
#  product_norm — produto denso explícito e norma espectral
# ======================================================================

class TestProductNorm:
    def test_matches_dense_product(self, cn_a1_n10):
        expected = np.linalg.norm(dense_product(cn_a1_n10, 10, 100), 2)
        assert product_norm(cn_a1_n10, 10, 100) == pytest.approx(expected, rel=RTOL)

    def test_early_indices_with_gain(self, cn_a1_n10):
        expected = np.linalg.norm(dense_product(cn_a1_n10, 1, 12, c=0.7), 2)
        assert product_norm(cn_a1_n10, 1, 12, c=0.7) == pytest.approx(expected, rel=RTOL)

    def test_empty_product(self, cn_a1_n10):
        assert product_norm(cn_a1_n10, 7, 7) == 1.0

    @pytest.mark.parametrize("k", [1, 2, 5, 100])
    def test_scalar_telescopes(self, k):
        assert product_norm(SCALAR_ONE, 1, k) == pytest.approx(1.0 / k, rel=1e-12)

    @pytest.mark.parametrize("i, k", [(1, 2), (3, 50), (10, 11), (1, 200)])
    def test_one_more_factor_bounded_by_its_norm(self, cn_a1_n10, i, k):
        lam = spectrum(cn_a1_n10).eigenvalues
        factor = np.max(np.abs(1.0 - lam / k))
        assert product_norm(cn_a1_n10, i, k) <= product_norm(cn_a1_n10, i, k - 1) * factor * SLACK

    def test_table_agrees_with_pointwise(self, cn_a1_n10):
        table = product_norm_table(cn_a1_n10, 40)
        for i, k in [(1, 1), (1, 40), (3, 17), (25, 40)]:
            assert table[i, k] == pytest.approx(product_norm(cn_a1_n10, i, k), rel=1e-12)
        assert table[5, 4] == 0.0

    def test_asymmetric_unsupported(self):
        with pytest.raises(UnsupportedInputError):
            product_norm(TriDiag.constant(3, 4.0, -1.0, sup=-2.0), 1, 5)

    def test_bad_indices(self, cn_a1_n10):
        with pytest.raises(InputError):
            product_norm(cn_a1_n10, 5, 3)


# ======================================================================
#  fit_lemma1 — verificação exaustiva na grade
# ======================================================================

class TestLemma1:
    def test_cn_certificate_holds_everywhere(self, certificate):
        fit = certificate.lemma1
        assert fit.p > 0.5
        table = product_norm_table(TriDiag.constant(9, 4.0, -1.0), 2000)
        i, k = np.triu_indices(2001)
        keep = i >= 1
        i, k = i[keep], k[keep]
        bound = fit.gamma * ((i + 1.0) / (k + 1.0)) ** fit.p
        assert np.all(table[i, k] <= bound * SLACK)

    def test_cn_exponent_tracks_smallest_eigenvalue(self, certificate):
        lam_min = 4.0 - 2.0 * math.cos(math.pi / 10)
        assert certificate.lemma1.p == pytest.approx(lam_min, abs=0.1)

    def test_unpacks(self, cn_a1_n10):
        gamma, p = fit_lemma1(cn_a1_n10, 200)
        assert gamma >= 1.0 and p > 0.0

    def test_scalar_identity_gain(self):
        fit = fit_lemma1(SCALAR_ONE, 400)
        assert fit.p == 1.0
        assert fit.gamma == pytest.approx(1.0, rel=1e-12)

    def test_negative_definite_fails(self):
        with pytest.raises(VerificationFailure) as info:
            fit_lemma1(TriDiag.constant(3, -1.0, 0.0), 100)
        assert info.value.table is not None
        assert not info.value.table["feasible"].any()

    def test_walk_certificate_reported(self, certificate):
        assert certificate.walk is not None
        assert certificate.walk.form == "walk"


# ======================================================================
#  Somas dos quadrados: constante C ajustada
# ======================================================================

class TestLemma2:
    def test_all_rows_hold(self, certificate):
        assert list(certificate.table.columns) == BOUNDS_COLUMNS
        assert len(certificate.table) == 2000
        assert certificate.all_hold

    def test_alpha_derivation(self, certificate):
        params = certificate.params
        assert params.alpha == pytest.approx(8.0 * params.C * (params.gamma * 0.1) ** 2)

    def test_pointwise_sum_matches_table(self, cn_a1_n10, certificate):
        sums = lemma2_sums(product_norm_table(cn_a1_n10, 2000))
        total, bound, holds = lemma2_sum(cn_a1_n10, 750, 1.0, certificate.params)
        assert total == pytest.approx(sums[750], rel=1e-12)
        assert holds and total <= bound * SLACK

    @pytest.mark.parametrize("k", [1, 2, 10, 500])
    def test_scalar_sum_is_one_over_k(self, k):
        # Σ_{i=1}^{k} ((i/k)·(1/i))² = 1/k ≤ 2/(k+1)
        params = BoundParams.derive(gamma=1.0, p=0.5, C=2.0, b=0.1)
        total, bound, holds = lemma2_sum(SCALAR_ONE, k, 1.0, params)
        assert total == pytest.approx(1.0 / k, rel=1e-12)
        assert bound == pytest.approx(2.0 / (k + 1.0))
        assert holds

    def test_constant_is_tight(self, cn_a1_n10):
        table = product_norm_table(cn_a1_n10, 100)
        sums = lemma2_sums(table)
        gamma, p = 2.0, 1.0
        C = fit_lemma2_constant(sums, gamma, p)
        k = np.arange(1, 101)
        ratio = sums[1:] * (k + 1.0) ** 2 / (C * gamma**2)
        assert ratio.max() == pytest.approx(1.0)


# ======================================================================
#  Cotas exponenciais
# ======================================================================

class TestExponentialBounds:
    def test_hoeffding_value(self):
        assert hoeffding_bound(1.0, 1, 4.0, 0.5) == pytest.approx(2.0 * math.exp(-0.5))

    def test_hoeffding_unit_constants(self):
        assert hoeffding_bound(1.0, 1, 1.0, 0.5) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-12)

    def test_hoeffding_tends_to_two_as_epsilon_vanishes(self):
        assert hoeffding_bound(0.0, 10, 1.0, 0.5) == 2.0
        assert hoeffding_bound(1e-9, 10, 1.0, 0.5) == pytest.approx(2.0)

    def test_hoeffding_vectorized_and_decreasing(self):
        values = hoeffding_bound(0.1, np.arange(1, 50), 1.0, 0.75)
        assert values.shape == (49,)
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("alpha, p", [(0.0, 1.0), (1.0, 0.0)])
    def test_hoeffding_invalid(self, alpha, p):
        with pytest.raises(InputError):
            hoeffding_bound(0.1, 5, alpha, p)

    def test_series_converges_for_large_p(self):
        partial, converged = hoeffding_series(0.5, 1.0, 1.0, 200)
        assert converged
        assert partial[-1] == pytest.approx(partial[-2])

    def test_series_not_converged_for_tiny_p(self):
        _, converged = hoeffding_series(0.01, 10.0, 0.1, 100)
        assert not converged

    def test_pinelis_decreases_with_epsilon(self, cn_a1_n10):
        values = [pinelis_bound(cn_a1_n10, eps, 1000, 0.1) for eps in (0.001, 0.01, 0.1)]
        assert values[0] > values[1] > values[2]
        assert pinelis_bound(cn_a1_n10, 0.01, 1000, 0.0) == 0.0


# ======================================================================
#  Estudo a.co
# ======================================================================

STUDY_CHECKPOINTS = (100, 1000, 10_000)


@pytest.fixture
def study_setup(cn_a1_n10, sine_rhs):
    cfg = RMConfig(max_iters=10_000, seed=2024, checkpoints=STUDY_CHECKPOINTS)
    return cn_a1_n10, sine_rhs, cfg, NoiseModel.uniform(9, 0.1)


class TestAcoStudy:
    def test_report_shape_and_monotone_sums(self, study_setup):
        A, rhs, cfg, noise = study_setup
        report = aco_study(A, rhs, cfg, noise, epsilon=0.002, R=20, alpha=1.0, p=1.0, workers=2)
        frame = report.to_frame()
        assert list(frame.columns) == STUDY_COLUMNS
        assert list(frame["k"]) == list(STUDY_CHECKPOINTS)
        assert np.all(np.diff(report.partial_sums) >= 0)
        assert np.all((report.tail_probs >= 0) & (report.tail_probs <= 1))
        assert np.all(frame["hoeffding_bound"] <= 1.0)
        assert report.pinelis is not None
        assert np.all(report.q10_err <= report.median_err) and np.all(report.median_err <= report.q90_err)

    def test_independent_of_worker_count(self, study_setup):
        A, rhs, cfg, noise = study_setup
        one = aco_study(A, rhs, cfg, noise, epsilon=0.002, R=12, workers=1, keep_errors=True)
        many = aco_study(A, rhs, cfg, noise, epsilon=0.002, R=12, workers=4, keep_errors=True)
        np.testing.assert_array_equal(one.errors, many.errors)
        np.testing.assert_array_equal(one.tail_probs, many.tail_probs)

    def test_median_error_decays(self, study_setup):
        A, rhs, cfg, noise = study_setup
        report = aco_study(A, rhs, cfg, noise, epsilon=0.002, R=20)
        assert np.all(np.diff(report.median_err) < 0)
        assert report.absorption_k is not None

    def test_zero_noise_is_degenerate(self, study_setup):
        A, rhs, cfg, _ = study_setup
        report = aco_study(A, rhs, cfg, NoiseModel.zero(A.n), epsilon=0.002, R=4, workers=2)
        assert np.all(np.isin(report.tail_probs, (0.0, 1.0)))
        assert np.all(report.q10_err == report.q90_err)
        assert report.pinelis is None

    def test_invalid_arguments(self, study_setup):
        A, rhs, cfg, noise = study_setup
        with pytest.raises(InputError):
            aco_study(A, rhs, cfg, noise, epsilon=0.0, R=10)
        with pytest.raises(InputError):
            aco_study(A, rhs, cfg, noise, epsilon=0.1, R=1)

    @pytest.mark.slow
    def test_almost_complete_convergence(self, cn_a1_n10, sine_rhs, certificate):
        checkpoints = (100, 1000, 10_000, 100_000)
        cfg = RMConfig(max_iters=100_000, seed=20240917, checkpoints=checkpoints)
        noise = NoiseModel.uniform(9, 0.1)
        floor = measure_noise_floor(cn_a1_n10, sine_rhs, cfg, noise, pilot_R=10)
        assert floor > 0.0
        report = aco_study(
            cn_a1_n10, sine_rhs, cfg, noise, epsilon=3.0 * floor, R=200,
            alpha=certificate.params.alpha, p=certificate.params.p,
        )
        assert report.tail_probs[-1] == 0.0
        assert report.partial_sums[-1] == report.partial_sums[-2] == report.partial_sums[-3]
        assert 0.3 <= report.fitted_rate <= 1.2
        comparison = compare_rate(report.fitted_rate, certificate.params.p)
        assert comparison.claimed == pytest.approx(2.0 * certificate.params.p)


# ======================================================================
#  rate_fit / compare_rate — taxa de decaimento
# ======================================================================

class TestRate:
    def test_exact_power_law(self):
        ks = np.array([100, 1000, 10_000, 100_000])
        assert rate_fit(3.0 * ks**-0.5, ks) == pytest.approx(0.5, rel=1e-12)

    def test_non_positive_medians_dropped(self):
        ks = np.array([10, 100, 1000, 10_000])
        med = np.array([0.0, 1e-1, 1e-2, 1e-3])
        assert rate_fit(med, ks) == pytest.approx(1.0, rel=1e-12)

    def test_too_few_points(self):
        with pytest.raises(FitError):
            rate_fit([0.1, 0.01], [10, 100])

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            rate_fit([0.1, 0.01, 0.001], [10, 100])

    def test_agreement(self):
        result = compare_rate(1.1, 0.5)
        assert result.claimed == 1.0 and result.agree

    def test_disagreement_logged(self, caplog):
        with caplog.at_level(logging.WARNING, logger="core.analysis"):
            result = compare_rate(0.5, 2.1)
        assert not result.agree
        assert "disagrees" in caplog.text
