import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povline import (DegenerateError, FixedLine, MeanLine, QuantileLine, Sample, SingularCovarianceError,
                     ValidationError, fgt, proportionality_test, sen, wald_test)
from povline.inference import chisq_cdf, chisq_sf, normal_cdf, two_sided_p

import oracles


class TestSpecialFunctions:
    def test_values(self):
        assert normal_cdf(0) == 0.5
        assert normal_cdf(1.959964) == pytest.approx(0.975, abs=1e-6)
        assert two_sided_p(0.0) == 1.0
        assert two_sided_p(-1.959964) == pytest.approx(0.05, abs=1e-6)

    def test_normal_against_series(self):
        for x in np.linspace(-8, 8, 161):
            assert abs(normal_cdf(x) - oracles.normal_cdf(x)) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 700))
    def test_chisq_df2_closed_form(self, x):
        assert abs(chisq_cdf(x, 2) - (-math.expm1(-x / 2))) < 1e-12

    def test_chisq_against_mpmath(self):
        import mpmath

        for df in (1, 3, 7, 20, 50):
            for x in (0.1, 1.0, 5.0, 30.0, 100.0):
                ref = float(mpmath.gammainc(df / 2, 0, x / 2, regularized=True))
                assert chisq_cdf(x, df) == pytest.approx(ref, rel=1e-10)
                upper = float(mpmath.gammainc(df / 2, x / 2, mpmath.inf, regularized=True))
                assert chisq_sf(x, df) == pytest.approx(upper, rel=1e-10)

    def test_monotone(self):
        x = np.linspace(-10, 10, 2001)
        assert np.all(np.diff(normal_cdf(x)) >= 0)
        c = chisq_cdf(np.linspace(0, 60, 601), 3)
        assert c[0] == 0 and np.all(np.diff(c) >= 0)

    def test_bad_df(self):
        with pytest.raises(ValueError):
            chisq_cdf(1.0, 0)
        with pytest.raises(ValueError):
            chisq_cdf(1.0, 1.5)


@pytest.fixture
def pair(rng):
    return Sample.from_values(rng.exponential(2, 400)), Sample.from_values(rng.exponential(2, 300))


class TestProportionality:
    def test_identical_samples(self, exp_sample):
        r = proportionality_test(exp_sample, exp_sample, sen(), 1.0, MeanLine(1), MeanLine(1))
        assert r.statistic == 0 and r.p_value == 1
        assert r.reject_at == {0.10: False, 0.05: False, 0.01: False}

    def test_antisymmetric(self, pair):
        a, b = pair
        line = FixedLine(1.5)
        t1 = proportionality_test(a, b, fgt(1), 1.0, line, line).statistic
        t2 = proportionality_test(b, a, fgt(1), 1.0, line, line).statistic
        assert t1 == -t2

    def test_coef_zero_needs_poor(self):
        rich = Sample.from_values([5.0, 6.0, 7.0, 8.0])
        with pytest.warns(RuntimeWarning), pytest.raises(DegenerateError):
            proportionality_test(rich, rich, fgt(1), 0.0, FixedLine(1.0), FixedLine(1.0))

    def test_pooled_variance(self, pair):
        a, b = pair
        r = proportionality_test(a, b, fgt(2), 0.8, MeanLine(1), QuantileLine(0.5, 0.6))
        c = r.components
        assert c["pooled_variance"] == pytest.approx(c["F"]["variance"] + 0.64 * c["G"]["variance"])
        assert r.statistic == pytest.approx(c["difference"] / math.sqrt(c["pooled_variance"]))
        assert 0 <= r.p_value <= 1

    def test_empty(self, exp_sample):
        with pytest.raises(ValidationError):
            proportionality_test(exp_sample, None, fgt(1), 1.0, MeanLine(1), MeanLine(1))


class TestWald:
    M3 = [fgt(1), fgt(2), sen()]

    def test_identical_samples(self, exp_sample):
        r = wald_test(exp_sample, exp_sample, self.M3, [1, 1, 1], MeanLine(1), MeanLine(1))
        assert r.statistic == 0 and r.p_value == 1 and r.df == 3

    def test_duplicate_is_singular(self, pair):
        with pytest.raises(SingularCovarianceError) as info:
            wald_test(*pair, [fgt(1), sen(), fgt(1)], [1, 1, 1], MeanLine(1), MeanLine(1))
        assert info.value.pair == ("fgt:1", "fgt:1")

    def test_permutation_invariant(self, pair):
        coefs = [1.0, 0.9, 1.1]
        w = wald_test(*pair, self.M3, coefs, MeanLine(1), MeanLine(1)).statistic
        for perm in ([2, 0, 1], [1, 2, 0], [2, 1, 0]):
            wp = wald_test(*pair, [self.M3[i] for i in perm], [coefs[i] for i in perm],
                           MeanLine(1), MeanLine(1)).statistic
            assert wp == pytest.approx(w, rel=1e-9)
        assert w >= 0

    def test_one_dimension_is_squared_t(self, pair):
        t = proportionality_test(*pair, sen(), 1.0, MeanLine(1), MeanLine(1)).statistic
        w = wald_test(*pair, [sen()], [1.0], MeanLine(1), MeanLine(1))
        assert w.statistic == pytest.approx(t * t, rel=1e-10)
        assert w.p_value == pytest.approx(two_sided_p(t), rel=1e-9)

    def test_against_explicit_inverse(self, pair):
        r = wald_test(*pair, self.M3, [1, 1, 1], MeanLine(1), MeanLine(1))
        d = np.array(r.components["difference"])
        cov = np.array(r.components["pooled_covariance"])
        assert r.statistic == pytest.approx(float(d @ np.linalg.inv(cov) @ d), rel=1e-9)

    def test_arguments(self, pair):
        with pytest.raises(ValueError):
            wald_test(*pair, self.M3, [1, 1], MeanLine(1), MeanLine(1))
        with pytest.raises(ValueError):
            wald_test(*pair, self.M3, [1, 0, 1], MeanLine(1), MeanLine(1))
