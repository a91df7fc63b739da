import math

import numpy as np
import pytest

from gpscat import herald, oracle, special, targets
from gpscat.errors import TruncationError, ZeroProbability
from gpscat.gaussian import GaussianStateSpec, SqueezerPair, build_sigma, build_sigma_inverse, db_to_r, solve_reflectance
from gpscat.gaussian import BeamSplitter
from gpscat.special import QuadratureGrid, integrate


def gps_setup(level_db, nmax, tail_limit=oracle.TAIL_LIMIT):
    sq = SqueezerPair.from_db(level_db)
    bs = solve_reflectance(sq)
    return build_sigma(sq, bs), oracle.gps_fock_state(sq.r1, sq.r2, bs.R, nmax, tail_limit)


def cross_infidelity(sigma, state, n):
    _, h = oracle.herald_fock(state, n)
    o = herald.herald(sigma, n)
    return 1 - targets.fidelity(o.psi, lambda x: oracle.fock_to_wavefunction(h, x), o.grid(2 * state.cutoff + 40))


class TestSqueezedVacuum:
    def test_r0_is_vacuum(self):
        st = oracle.squeezed_vacuum_fock(0.0, 10)
        np.testing.assert_array_equal(st.amps, np.eye(11)[0])

    def test_5db_truncation_and_wavefunction(self):
        r = 0.576
        st = oracle.squeezed_vacuum_fock(r, 40)
        assert st.tail < 1e-10
        ref = lambda x: math.exp(r / 2) * special.eval_phi(0, math.exp(r) * x)  # noqa: E731
        f = targets.fidelity(ref, lambda x: oracle.fock_to_wavefunction(st, x), QuadratureGrid(80))
        assert f >= 1 - 1e-8

    def test_5db_pointwise(self):
        r = 0.576
        st = oracle.squeezed_vacuum_fock(r, 60)
        x = np.linspace(-4, 4, 41)
        ref = math.exp(r / 2) * special.eval_phi(0, math.exp(r) * x)
        assert np.max(np.abs(oracle.fock_to_wavefunction(st, x) - ref)) < 1e-7

    def test_mean_photon(self):
        st = oracle.squeezed_vacuum_fock(1.0, 60)
        assert st.mean_photon() == pytest.approx(math.sinh(1.0) ** 2, abs=1e-6)

    def test_odd_amplitudes_zero(self):
        st = oracle.squeezed_vacuum_fock(-0.8, 41)
        assert np.all(st.amps[1::2] == 0)

    def test_truncation_error(self):
        with pytest.raises(TruncationError):
            oracle.squeezed_vacuum_fock(db_to_r(15), 20)

    def test_auto_nmax(self):
        r = db_to_r(10)
        n = oracle.auto_nmax(r)
        assert oracle.squeezed_vacuum_tail(r, n) <= 1e-8
        assert n % 20 == 0


class TestBeamSplitter:
    def test_full_reflection_is_identity(self):
        u = oracle.beam_splitter_unitary(1.0, 10)
        for total in range(11):
            np.testing.assert_allclose(u.block(total), np.eye(total + 1), atol=1e-15)

    def test_single_photon_balanced(self):
        u = oracle.beam_splitter_unitary(0.5, 2)
        out = u.apply(oracle.product_state(oracle.fock_basis_state(1, 1), oracle.fock_basis_state(0, 1)))
        assert abs(out.amps[1, 0]) ** 2 == pytest.approx(0.5, abs=1e-14)
        assert abs(out.amps[0, 1]) ** 2 == pytest.approx(0.5, abs=1e-14)
        assert out.amps[1, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-14)

    @pytest.mark.parametrize("R", [0.0, 0.05, 0.24, 0.5, 1.0])
    def test_unitarity(self, R):
        u = oracle.beam_splitter_unitary(R, 60)
        assert max(u.unitarity_residual(t) for t in range(0, 121)) < 1e-10

    def test_block_conservation(self):
        rng = np.random.default_rng(1)
        c = rng.normal(size=(9, 9))
        mask = np.add.outer(np.arange(9), np.arange(9)) == 6
        c[~mask] = 0
        out = oracle.beam_splitter_unitary(0.3, 8).apply(oracle.FockState(c / np.linalg.norm(c)))
        total = np.add.outer(np.arange(out.amps.shape[0]), np.arange(out.amps.shape[1]))
        assert np.all(out.amps[total != 6] == 0)
        assert out.norm2 == pytest.approx(1, abs=1e-13)

    def test_moments_match_sigma_inverse(self):
        sq, bs = SqueezerPair(0.576, -0.576), BeamSplitter(0.2403)
        st = oracle.gps_fock_state(sq.r1, sq.r2, bs.R, 40)
        two_cov = 2 * oracle.x_second_moments(st)
        inv = build_sigma_inverse(sq, bs).as_array()
        np.testing.assert_allclose(np.diag(two_cov), np.diag(inv), atol=1e-8)
        np.testing.assert_allclose(two_cov, inv, atol=1e-8)

    def test_convention_pinned_by_gaussian_overlap(self):
        sq, bs = SqueezerPair(0.576, -0.3), BeamSplitter(0.37)
        st = oracle.gps_fock_state(sq.r1, sq.r2, bs.R, 30)
        g = QuadratureGrid(60)
        x1, x2 = np.meshgrid(g.nodes, g.nodes, indexing="ij")
        w = np.outer(g.weights, g.weights)
        phis = special.eval_phi_all(st.cutoff, g.nodes)
        fock_wf = phis.T @ st.amps @ phis
        gauss_wf = GaussianStateSpec(build_sigma(sq, bs)).amplitude(x1, x2)
        overlap = np.sum(w * fock_wf * gauss_wf)
        assert overlap >= 1 - 1e-8


class TestHeraldFock:
    def test_uncorrelated_herald(self):
        psi = oracle.squeezed_vacuum_fock(0.4, 30)
        vac = oracle.fock_basis_state(0, 30)
        p, h = oracle.herald_fock(oracle.product_state(vac, psi), 0)
        assert p == pytest.approx(1 - psi.tail, abs=1e-14)
        np.testing.assert_allclose(h.amps, psi.amps / math.sqrt(p), atol=1e-15)

    def test_5db_n10_probability(self):
        sigma, st = gps_setup(5, 60)
        p, _ = oracle.herald_fock(st, 10)
        assert p == pytest.approx(herald.prob_closed(sigma, 10), abs=1e-5)

    def test_completeness(self):
        _, st = gps_setup(5, 60)
        assert oracle.herald_distribution(st).sum() == pytest.approx(1 - st.tail, abs=1e-8)

    def test_parity_selection(self):
        _, st = gps_setup(5, 40)
        for n in (3, 4):
            _, h = oracle.herald_fock(st, n)
            support = np.nonzero(np.abs(h.amps) > 0)[0]
            assert np.all(support % 2 == n % 2)

    def test_zero_probability(self):
        st = oracle.product_state(oracle.fock_basis_state(0, 5), oracle.fock_basis_state(0, 5))
        with pytest.raises(ZeroProbability):
            oracle.herald_fock(st, 2)

    def test_fock_to_wavefunction_vacuum(self):
        x = np.linspace(-3, 3, 7)
        np.testing.assert_allclose(oracle.fock_to_wavefunction(oracle.fock_basis_state(0, 4), x),
                                   special.eval_phi(0, x), rtol=1e-15)

    def test_heralded_5db_n10_fidelity(self):
        sigma, st = gps_setup(5, 60)
        assert cross_infidelity(sigma, st, 10) <= 1e-6


_FIDELITY_10DB_SHORTFALL = pytest.mark.xfail(
    strict=True, reason="N_max = 60 input truncation leaves 1e-6..7e-6 infidelity at 10 dB; see decisions ledger")


class TestAnalyticAgreement:
    @pytest.mark.parametrize("level", [5, 10])
    def test_probabilities(self, level):
        sigma, st = gps_setup(level, 60)
        worst = max(abs(oracle.herald_fock(st, n)[0] - herald.prob_closed(sigma, n)) for n in range(13))
        assert worst < 1e-5

    @pytest.mark.parametrize("n", range(13))
    def test_fidelity_5db(self, n):
        sigma, st = gps_setup(5, 60)
        assert cross_infidelity(sigma, st, n) <= 1e-6

    @pytest.mark.parametrize("n", [pytest.param(n, marks=_FIDELITY_10DB_SHORTFALL) if n >= 5 else n for n in range(13)])
    def test_fidelity_10db(self, n):
        sigma, st = gps_setup(10, 60)
        assert cross_infidelity(sigma, st, n) <= 1e-6

    @pytest.mark.parametrize("n", [0, 5, 8, 12])
    def test_fidelity_10db_larger_cutoff(self, n):
        sigma, st = gps_setup(10, 120)
        assert cross_infidelity(sigma, st, n) <= 1e-9
        assert oracle.herald_fock(st, n)[0] == pytest.approx(herald.prob_closed(sigma, n), abs=1e-12)


class TestTruncationMonotonicity:
    def test_5db(self):
        _, a = gps_setup(5, 40)
        _, b = gps_setup(5, 60)
        assert max(abs(oracle.herald_fock(a, n)[0] - oracle.herald_fock(b, n)[0]) for n in range(11)) < 1e-7

    def test_10db_cutoff_40_exceeds_tail_limit(self):
        with pytest.raises(TruncationError):
            gps_setup(10, 40)

    @pytest.mark.xfail(strict=True, reason="10 dB squeezed vacuum keeps ~1e-5 mass above 40 photons; "
                                           "see decisions ledger")
    def test_10db(self):
        _, a = gps_setup(10, 40, tail_limit=1.0)
        _, b = gps_setup(10, 60)
        assert max(abs(oracle.herald_fock(a, n)[0] - oracle.herald_fock(b, n)[0]) for n in range(11)) < 1e-7


class TestConventional:
    def test_rn_scaling(self):
        r = db_to_r(10)
        p2 = oracle.conventional_ps_probability(r, 0.05, 2)
        p4 = oracle.conventional_ps_probability(r, 0.05, 4)
        assert p4 / p2 < 4 * 0.05

    def test_no_tap(self):
        r = db_to_r(10)
        assert oracle.conventional_ps_probability(r, 0.0, 0) == pytest.approx(1, abs=1e-8)
        # expm of the swap generator leaves ~1e-31 roundoff
        assert all(oracle.conventional_ps_probability(r, 0.0, n) < 1e-25 for n in range(1, 6))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
    def test_positive(self, n):
        assert oracle.conventional_ps_probability(db_to_r(5), 0.05, n) > 0

    @pytest.mark.parametrize("level", [5, 10])
    def test_gps_beats_conventional_by_1e3(self, level):
        r = db_to_r(level)
        gps = herald.prob_closed(build_sigma(SqueezerPair.opposite(r), solve_reflectance(SqueezerPair.opposite(r))), 10)
        assert gps / oracle.conventional_ps_probability(r, 0.05, 10) >= 1e3

    def test_vacuum_probability_closed_form(self):
        # Gaussian route for the same r2 = 0 configuration
        r, R = db_to_r(10), 0.05
        s = build_sigma(SqueezerPair(r, 0.0), BeamSplitter(R))
        assert oracle.conventional_ps_probability(r, R, 0) == pytest.approx(herald.prob_general(s, 0), abs=1e-9)
