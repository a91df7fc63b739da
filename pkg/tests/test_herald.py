import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpscat import herald, oracle, special, targets
from gpscat.errors import ConditionViolated, DomainError, NearConditionWarning, ZeroProbability
from gpscat.gaussian import (
    BeamSplitter,
    SigmaMatrix,
    SqueezerPair,
    build_sigma,
    db_to_r,
    gps_sigma,
    output_squeezing,
    reflectance_for_sigma11,
)
from gpscat.special import integrate


def sigma_at(level_db, s11):
    sq = SqueezerPair.from_db(level_db)
    return build_sigma(sq, reflectance_for_sigma11(sq, s11))


class TestClosedForm:
    def test_n0_is_gaussian(self, sigma_5db):
        x = np.linspace(-5, 5, 201)
        psi = herald.herald_wavefunction_closed(sigma_5db, 0, x)
        beta = (sigma_5db.det + sigma_5db.s22) / 4
        ratio = psi / np.exp(-beta * x * x)
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
        assert np.all(psi > 0)

    def test_norm_equals_prob(self, sigma_5db):
        norm = integrate(lambda x: herald.herald_wavefunction_closed(sigma_5db, 10, x) ** 2,
                         herald.herald(sigma_5db, 10).grid())
        assert norm == pytest.approx(herald.prob_closed(sigma_5db, 10), abs=1e-9)

    @pytest.mark.parametrize("n", [1, 3, 11, 25])
    def test_odd_vanishes_at_origin(self, sigma_5db, n):
        assert herald.herald_wavefunction_closed(sigma_5db, n, 0.0) == 0.0

    def test_rejects_off_condition(self):
        with pytest.raises(ConditionViolated):
            herald.herald_wavefunction_closed(sigma_at(5, 1.4), 3, 0.2)
        with pytest.raises(ConditionViolated):
            herald.prob_closed(sigma_at(5, 0.6), 3)

    @pytest.mark.parametrize("n", [0, 4, 10, 30])
    def test_scaling_covariance(self, sigma_10db, n):
        x = np.linspace(0.3, 4, 40)
        beta = (sigma_10db.det + sigma_10db.s22) / 4
        ratio = herald.herald_wavefunction_closed(sigma_10db, n, x) / (x**n * np.exp(-beta * x * x))
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-10)

    def test_large_n_finite(self, sigma_10db):
        x = np.linspace(-8, 8, 81)
        psi = herald.herald_wavefunction_closed(sigma_10db, 200, x)
        assert np.all(np.isfinite(psi))


class TestProbClosed:
    def test_15db_anchor(self, sigma_15db):
        assert herald.prob_closed(sigma_15db, 10) == pytest.approx(0.023, abs=0.001)

    def test_matches_textbook_formula(self, sigma_5db):
        s = sigma_5db
        for n in range(8):
            ref = (math.sqrt(s.det) * math.factorial(2 * n) * s.s12 ** (2 * n) / (8**n * math.factorial(n) ** 2)
                   * ((s.det + s.s22) / 2) ** (-n - 0.5))
            assert herald.prob_closed(s, n) == pytest.approx(ref, rel=1e-12)

    def test_weak_correlation_vanishes(self):
        sq = SqueezerPair(1e-4, -1e-4)
        s = gps_sigma(1e-4)
        assert abs(s.s12) < 1e-3
        p = [herald.prob_closed(s, n) for n in range(1, 5)]
        assert p[0] < 1e-7
        assert all(b < a * 1e-6 for a, b in zip(p, p[1:]))
        assert sq.r1 > 0

    def test_completeness_10db(self, sigma_10db):
        total = math.fsum(herald.prob_closed(sigma_10db, n) for n in range(81))
        assert abs(1 - total) < 1e-6

    @pytest.mark.parametrize("level", [2.0, 6.0, 10.0, 12.0])
    def test_partial_sums_and_tail(self, level):
        r = db_to_r(level)
        s = gps_sigma(r)
        cut = int(math.ceil(4 * math.exp(2 * r)))
        p = np.array([herald.prob_closed(s, n) for n in range(cut + 400)])
        partial = np.cumsum(p)
        assert np.all(np.diff(partial) >= 0)
        assert partial[-1] == pytest.approx(1, abs=1e-10)
        assert 1 - partial[cut] < 1e-4

    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_single_maximum_in_r(self, n):
        rs = np.round(np.arange(0.01, 2.5 + 1e-9, 0.01), 10)
        p = np.array([herald.prob_closed(gps_sigma(r), n) for r in rs])
        inner = (p[1:-1] > p[:-2]) & (p[1:-1] > p[2:])
        assert inner.sum() == 1

    def test_log_prob_consistent(self, sigma_10db):
        for n in (0, 7, 150):
            assert math.exp(herald.log_prob_closed(sigma_10db, n)) == pytest.approx(
                herald.prob_closed(sigma_10db, n), rel=1e-12)


class TestGeneralRoute:
    @pytest.mark.parametrize("n", range(0, 21))
    def test_agrees_with_closed(self, sigma_5db, n):
        x = herald.herald(sigma_5db, n).grid(40).nodes
        diff = herald.herald_wavefunction_general(sigma_5db, n, x) - herald.herald_wavefunction_closed(sigma_5db, n, x)
        assert np.max(np.abs(diff)) < 1e-8
        assert herald.prob_general(sigma_5db, n) == pytest.approx(herald.prob_closed(sigma_5db, n), abs=1e-8)

    def test_vacuum_heralds_vacuum(self):
        assert herald.prob_general(SigmaMatrix.identity(), 0) == pytest.approx(1.0, abs=1e-12)

    def test_conventional_setting_vs_oracle(self):
        r1, R = 1.151, 0.05
        s = build_sigma(SqueezerPair(r1, 0.0), BeamSplitter(R))
        with warnings.catch_warnings():
            warnings.simplefilter("error", NearConditionWarning)
            for n in range(9):
                assert herald.prob_general(s, n) == pytest.approx(oracle.conventional_ps_probability(r1, R, n, 100),
                                                                  abs=1e-5)

    @given(st.floats(0.05, 1.5), st.floats(-1.5, -0.05), st.floats(0.02, 0.98), st.integers(0, 12))
    def test_parity(self, r1, r2, R, n):
        s = build_sigma(SqueezerPair(r1, r2), BeamSplitter(R))
        x = np.linspace(0.1, 3, 7)
        a = herald.herald_wavefunction_general(s, n, x)
        b = herald.herald_wavefunction_general(s, n, -x)
        # Psi is O(1) at most; cancellation in H_n leaves ~1e-17 absolute noise
        np.testing.assert_allclose(b, (-1) ** n * a, rtol=0, atol=1e-14)

    def test_near_condition_warns(self, sigma_5db):
        near = SigmaMatrix(1.0 + 1e-7, sigma_5db.s12, sigma_5db.s22)
        with pytest.warns(NearConditionWarning):
            herald.prob_general(near, 4)

    def test_low_s11_two_peaks(self):
        o = herald.herald(sigma_at(5, 0.6), 10)
        x = np.linspace(-o.support(1e-6), o.support(1e-6), 4001)
        a = np.abs(o.psi(x))
        peaks = np.nonzero((a[1:-1] > a[:-2]) & (a[1:-1] >= a[2:]))[0] + 1
        big = peaks[a[peaks] > 0.05 * a.max()]
        assert len(big) == 2
        assert herald.outcome_oscillation(o) < herald.OSCILLATION_THRESHOLD

    def test_high_s11_oscillates(self):
        o = herald.herald(sigma_at(5, 1.4), 10)
        assert herald.outcome_oscillation(o) > herald.OSCILLATION_THRESHOLD

    def test_oscillation_metric_toy(self):
        assert herald.oscillation_metric([0, 1, 0, 1, 0]) == 0.0
        assert herald.oscillation_metric([0, 1, 0, 0.2, 0, 1, 0]) == pytest.approx(0.2)


class TestExtraConvolution:
    def test_s11_06(self):
        assert herald.extra_convolution_check(sigma_at(5, 0.6), 10) < 1e-7

    def test_s11_close_to_one(self):
        for a in (0.99, 0.999, 0.99999):
            assert herald.extra_convolution_check(sigma_at(5, a), 5) < 1e-6

    @pytest.mark.parametrize("a", [1.0, 1.2])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            herald.extra_convolution_check(sigma_at(5, a), 5)


class TestHeraldOutcome:
    def test_normalized(self, sigma_5db):
        o = herald.herald(sigma_5db, 10)
        assert integrate(lambda x: o.psi(x) ** 2, o.grid()) == pytest.approx(1, abs=1e-8)

    def test_matches_scaled_closed_form(self, sigma_5db):
        o = herald.herald(sigma_5db, 10)
        x = np.linspace(-5, 5, 101)
        np.testing.assert_allclose(o.psi(x), herald.herald_wavefunction_closed(sigma_5db, 10, x) / math.sqrt(o.prob),
                                   rtol=1e-12, atol=1e-300)

    def test_fidelity_with_cat(self, sigma_5db):
        o = herald.herald(sigma_5db, 10)
        cat = targets.CatTarget(math.sqrt(10), 10, o.r_c)
        assert targets.fidelity(o.psi, cat, o.grid(200)) == pytest.approx(0.997, abs=0.002)

    def test_metadata(self, sigma_5db):
        o = herald.herald(sigma_5db, 3)
        assert o.closed and o.r_c == output_squeezing(sigma_5db)
        assert 0 <= o.prob <= 1
        g = herald.herald(sigma_at(5, 1.4), 3)
        assert not g.closed and g.r_c is None

    @pytest.mark.parametrize("n", [0, 1, 6, 13])
    def test_zero_count_and_sign(self, sigma_10db, n):
        o = herald.herald(sigma_10db, n)
        x = np.linspace(1e-3, 6, 500)
        v = o.psi(x)
        assert np.all(np.sign(v) == np.sign(v[0]))
        assert np.all(o.psi(-x) == pytest.approx((-1) ** n * v, rel=1e-14))

    def test_zero_probability(self):
        s = gps_sigma(1e-6)
        with pytest.raises(ZeroProbability):
            herald.herald(s, 40)

    @pytest.mark.parametrize("n", [0, 5, 12])
    def test_general_outcome_normalized(self, n):
        o = herald.herald(sigma_at(5, 1.4), n)
        assert integrate(lambda x: o.psi(x) ** 2, o.grid()) == pytest.approx(1, abs=1e-8)


class TestPDomain:
    def test_n0_reciprocal_gaussian(self, sigma_5db):
        o = herald.herald(sigma_5db, 0)
        beta = herald.closed_decay(sigma_5db)
        p = np.linspace(-4, 4, 41)
        ref = (2 * beta / math.pi) ** 0.25 * np.sqrt(1 / (2 * beta)) * np.exp(-p * p / (4 * beta))
        np.testing.assert_allclose(np.abs(herald.p_domain_wavefunction(o, p)), ref, atol=1e-10)

    @pytest.mark.parametrize("n", [0, 3, 10])
    def test_matches_closed_transform(self, sigma_5db, n):
        o = herald.herald(sigma_5db, n)
        p = np.linspace(-6, 6, 61)
        num = herald.p_domain_wavefunction(o, p)
        np.testing.assert_allclose(np.abs(num), np.abs(herald.p_domain_closed(o, p)), atol=1e-7)

    @pytest.mark.parametrize("s11,n", [(1.0, 10), (0.6, 6), (1.4, 10)])
    def test_parseval(self, s11, n):
        o = herald.herald(sigma_at(5, s11), n)
        # |psi~|^2 falls off like exp(-p^2 / (2 decay))
        g = special.hermite_grid(2 * n + 40, 1.0 / (2 * o.decay))
        norm = integrate(lambda p: np.abs(herald.p_domain_closed(o, p) if o.closed
                                          else herald.p_domain_wavefunction(o, p)) ** 2, g)
        assert norm == pytest.approx(1, abs=1e-8)

    def test_cosine_structure_like_cat(self, sigma_5db):
        o = herald.herald(sigma_5db, 10)
        cat = targets.CatTarget(math.sqrt(10), 10, o.r_c)
        p = np.linspace(-8, 8, 1601)
        a = np.abs(herald.p_domain_closed(o, p))
        b = np.abs(targets.cat_wavefunction_p(cat, p))
        # same fringe count and matching moduli up to the 0.3% infidelity
        fringes = lambda v: int(np.sum((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]) & (v[1:-1] > 0.05 * v.max())))  # noqa: E731
        assert fringes(a) == fringes(b) >= 3
        assert np.max(np.abs(a - b)) < 0.1 * b.max()

    def test_closed_transform_needs_condition(self):
        with pytest.raises(ConditionViolated):
            herald.p_domain_closed(herald.herald(sigma_at(5, 0.6), 2), 0.0)
