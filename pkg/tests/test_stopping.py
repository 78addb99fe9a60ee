"""Bayes-factor stop rule: density oracles, BF identities, decisiveness."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlmtrial.errors import ConfigError, DegenerateData, InsufficientData
from dlmtrial.stopping import (BFPriors, TwoSampleSummary, bayes_factor_01,
                               is_decisive, t_density_ls, t_logdensity_ls,
                               two_sample_summary)


class TestTwoSampleSummary:
    def test_identical_samples(self):
        s = two_sample_summary([1.0, 3.0], [1.0, 3.0])
        assert s.t == 0.0 and s.nu == 2 and s.n_delta == 1.0

    def test_hand_computation(self):
        s = two_sample_summary([2.0, 4.0, 6.0], [1.0, 2.0, 3.0])
        # means 4 and 2, pooled variance (8+2)/4 = 2.5
        assert s.t == pytest.approx(2.0 / math.sqrt(2.5 * (2.0 / 3.0)))
        assert s.t == pytest.approx(1.5492, abs=1e-4)
        assert s.nu == 4
        assert s.n_delta == pytest.approx(1.5)

    def test_insufficient_samples(self):
        with pytest.raises(InsufficientData):
            two_sample_summary([1.0], [1.0, 2.0])

    def test_zero_pooled_variance(self):
        with pytest.raises(DegenerateData):
            two_sample_summary([0.0] * 4, [1.0] * 4)

    def test_shift_and_scale_invariance_of_t(self):
        a, b = [2.0, 4.0, 6.0], [1.0, 2.0, 3.0]
        t0 = two_sample_summary(a, b).t
        assert two_sample_summary([x + 7 for x in a],
                                  [x + 7 for x in b]).t \
            == pytest.approx(t0, rel=1e-12)
        assert two_sample_summary([3 * x for x in a],
                                  [3 * x for x in b]).t \
            == pytest.approx(t0, rel=1e-12)


class TestTDensity:
    def test_standard_cauchy_at_zero(self):
        assert t_density_ls(0.0, 1.0, 0.0, 1.0) \
            == pytest.approx(1.0 / math.pi, rel=1e-12)

    def test_scale_division_oracle(self):
        # g_20(0) = Gamma(10.5) / (Gamma(10) * sqrt(20 pi))
        g20 = math.exp(math.lgamma(10.5) - math.lgamma(10.0)
                       - 0.5 * math.log(20.0 * math.pi))
        assert t_density_ls(0.0, 20.0, 0.0, 11.0) \
            == pytest.approx(g20 / math.sqrt(11.0), rel=1e-12)

    def test_integrates_to_one(self):
        nu, mu, sigma_sq = 5.0, 1.5, 4.0
        sigma = math.sqrt(sigma_sq)
        grid = np.linspace(mu - 50 * sigma, mu + 50 * sigma, 400_001)
        dens = [t_density_ls(float(t), nu, mu, sigma_sq) for t in grid]
        total = np.trapezoid(dens, grid)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_matches_scipy(self):
        from scipy.stats import t as t_dist
        for x in (-3.0, 0.0, 0.7, 5.5):
            assert t_density_ls(x, 7.0, 0.5, 2.0) \
                == pytest.approx(t_dist.pdf(x, 7.0, loc=0.5,
                                            scale=math.sqrt(2.0)), rel=1e-12)

    def test_invalid_parameters(self):
        with pytest.raises(ConfigError):
            t_logdensity_ls(0.0, 0.0, 0.0, 1.0)
        with pytest.raises(ConfigError):
            t_logdensity_ls(0.0, 1.0, 0.0, 0.0)

    @given(st.floats(-50, 50), st.floats(-20, 20))
    @settings(deadline=None)
    def test_shift_invariance(self, t, c):
        base = t_logdensity_ls(t, 6.0, 1.0, 3.0)
        assert t_logdensity_ls(t + c, 6.0, 1.0 + c, 3.0) \
            == pytest.approx(base, rel=1e-12, abs=1e-12)


class TestBayesFactor:
    def test_ratio_of_scales_at_zero(self):
        s = TwoSampleSummary(nA=11, nB=11, t=0.0, nu=20, n_delta=5.0)
        bf = bayes_factor_01(s, BFPriors(lam=0.0, sigma_delta_sq=2.0))
        assert bf == pytest.approx(math.sqrt(11.0), rel=1e-12)

    def test_null_prior_collapses_to_one(self):
        p = BFPriors(lam=0.0, sigma_delta_sq=0.0)
        for t in (-4.0, 0.0, 1.3, 9.9):
            s = TwoSampleSummary(nA=5, nB=5, t=t, nu=8, n_delta=2.5)
            assert bayes_factor_01(s, p) == pytest.approx(1.0, rel=1e-12)

    def test_decreasing_in_abs_t(self):
        p = BFPriors(lam=0.0, sigma_delta_sq=1.0)
        ts = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]
        bfs = [bayes_factor_01(
            TwoSampleSummary(nA=10, nB=10, t=t, nu=18, n_delta=5.0), p)
            for t in ts]
        assert all(a > b for a, b in zip(bfs, bfs[1:]))
        assert bfs[-1] < 1.0

    def test_even_in_t_for_symmetric_prior(self):
        p = BFPriors(lam=0.0, sigma_delta_sq=3.0)
        for t in (0.3, 1.7, 6.0):
            pos = bayes_factor_01(
                TwoSampleSummary(nA=6, nB=8, t=t, nu=12, n_delta=3.0), p)
            neg = bayes_factor_01(
                TwoSampleSummary(nA=6, nB=8, t=-t, nu=12, n_delta=3.0), p)
            assert pos == pytest.approx(neg, rel=1e-12)

    def test_always_positive_and_capped(self):
        p = BFPriors(lam=50.0, sigma_delta_sq=1e-12)
        s = TwoSampleSummary(nA=500, nB=500, t=0.0, nu=998, n_delta=250.0)
        bf = bayes_factor_01(s, p)
        assert 0.0 < bf <= 1e300


class TestIsDecisive:
    def test_below_threshold(self):
        assert is_decisive(0.009, BFPriors())

    def test_boundary_is_strict(self):
        assert not is_decisive(0.0100, BFPriors())

    def test_large_bf(self):
        assert not is_decisive(3.3, BFPriors())


class TestPriorValidation:
    def test_negative_variance_rejected(self):
        with pytest.raises(ConfigError):
            BFPriors(sigma_delta_sq=-1.0)

    def test_threshold_range(self):
        with pytest.raises(ConfigError):
            BFPriors(threshold=1.0)
        with pytest.raises(ConfigError):
            BFPriors(threshold=0.0)


@given(st.floats(0.0, 30.0), st.floats(0.1, 100.0),
       st.integers(2, 50), st.integers(2, 50))
@settings(deadline=None)
def test_bf_even_and_positive_property(t, sig_sq, nA, nB):
    p = BFPriors(lam=0.0, sigma_delta_sq=sig_sq)
    n_delta = 1.0 / (1.0 / nA + 1.0 / nB)
    s_pos = TwoSampleSummary(nA=nA, nB=nB, t=t, nu=nA + nB - 2,
                             n_delta=n_delta)
    s_neg = TwoSampleSummary(nA=nA, nB=nB, t=-t, nu=nA + nB - 2,
                             n_delta=n_delta)
    bf = bayes_factor_01(s_pos, p)
    assert bf > 0.0
    assert bf == pytest.approx(bayes_factor_01(s_neg, p), rel=1e-9)
