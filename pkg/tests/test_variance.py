import numpy as np
import pytest

from povline import (Exponential, FixedLine, MeanLine, QuantileLine, Sample, a_factor, delta_hat, fgt,
                     gamma_hat, gamma_matrix, kakwani, sen, shorrocks, sigma_hat, variance_components, watts)
from povline.estimation import FORMS
from povline.lines import kde_estimator
from povline.variance import influence_vector, sigma_terms
from povline._poor import PoorSet

import oracles

PAIRS = [((fgt(1), ("fgt", 1)), (fgt(2), ("fgt", 2))),
         ((sen(), ("sen", 0)), (sen(), ("sen", 0))),
         ((sen(), ("sen", 0)), (fgt(2), ("fgt", 2))),
         ((kakwani(2), ("kakwani", 2)), (shorrocks(), ("shorrocks", 0))),
         ((watts(), ("watts", 0)), (kakwani(3), ("kakwani", 3)))]
IDS = [f"{a[0].label}-{b[0].label}" for a, b in PAIRS]


@pytest.fixture
def small(rng):
    return rng.exponential(2.0, 41)


@pytest.mark.parametrize("k,l", PAIRS, ids=IDS)
def test_classical_double_sum(k, l, small):
    s = Sample.from_values(small)
    got = sigma_hat(s, k[0], l[0], 1.8, form="classical")
    assert got == pytest.approx(oracles.sigma_classical(small, k[1], l[1], 1.8), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("k,l", PAIRS, ids=IDS)
def test_influence_sigma_is_psi_covariance(k, l, small):
    s = Sample.from_values(small)
    pk, pl = oracles.psi(small, *k[1], 1.8), oracles.psi(small, *l[1], 1.8)
    ref = sum(a * b for a, b in zip(pk, pl)) / len(small)
    assert sigma_hat(s, k[0], l[0], 1.8) == pytest.approx(ref, rel=1e-10, abs=1e-14)
    np.testing.assert_allclose(influence_vector(PoorSet(s, k[0], 1.8)), pk, rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("k,l", PAIRS, ids=IDS)
def test_influence_gamma_oracle(k, l, small):
    s = Sample.from_values(small)
    line = MeanLine(0.8)
    z = line.estimate(s)
    g = float(kde_estimator(s)(z))
    ak = oracles.a_factor(small, *k[1], z, g)
    al = oracles.a_factor(small, *l[1], z, g)
    zeta = [0.8 * y for y in sorted(small)]
    xk = [p + ak * t for p, t in zip(oracles.psi(small, *k[1], z), zeta)]
    xl = [p + al * t for p, t in zip(oracles.psi(small, *l[1], z), zeta)]
    assert gamma_hat(s, k[0], l[0], line) == pytest.approx(oracles.covariance(xk, xl), rel=1e-10)


@pytest.mark.parametrize("form", FORMS)
def test_fgt_rank_terms_vanish(form, rng):
    s = Sample.from_values(rng.exponential(2, 300))
    for a in (0, 0.5, 1, 2, 3.5):
        for b in (0, 1, 2):
            t = sigma_terms(s, fgt(a), fgt(b), 2.0, form=form)
            assert t.rank_terms == (0.0, 0.0, 0.0, 0.0)
            assert t.rank_cross == 0.0


def test_forms_agree_for_additive_measures(exp_sample):
    for line in (FixedLine(2), MeanLine(1), QuantileLine(0.5, 0.6)):
        for m in (fgt(0), fgt(1), fgt(2), watts()):
            a = gamma_hat(exp_sample, m, m, line, form="influence")
            b = gamma_hat(exp_sample, m, m, line, form="classical")
            assert a == pytest.approx(b, rel=1e-12)
    # off the diagonal the forms differ only in which a-factor meets which cross term
    assert sigma_hat(exp_sample, fgt(1), fgt(2), 2.0, form="influence") == pytest.approx(
        sigma_hat(exp_sample, fgt(1), fgt(2), 2.0, form="classical"), rel=1e-12)


@pytest.mark.parametrize("form", FORMS)
@pytest.mark.parametrize("m", [fgt(1), sen(), watts()], ids=lambda m: m.label)
def test_fixed_line_gamma_equals_sigma(m, form, exp_sample):
    assert gamma_hat(exp_sample, m, m, FixedLine(2.0), form=form) == sigma_hat(exp_sample, m, m, 2.0, form=form)
    assert delta_hat(exp_sample, m, FixedLine(2.0), form=form) == 0


@pytest.mark.parametrize("form", FORMS)
def test_gamma_minus_sigma_is_delta(form, rng):
    measures = [fgt(0), fgt(1), fgt(2), sen(), shorrocks(), kakwani(2), watts()]
    lines = [MeanLine(0.5), MeanLine(1.0), QuantileLine(0.5, 0.6), QuantileLine(0.4, 1.0)]
    for _ in range(40):
        s = Sample.from_values(rng.lognormal(size=int(rng.integers(30, 400))))
        m = measures[rng.integers(len(measures))]
        line = lines[rng.integers(len(lines))]
        c = variance_components(s, m, line, form=form)
        sig = sigma_hat(s, m, m, c.z_hat, form=form)
        g = gamma_hat(s, m, m, line, form=form)
        d = delta_hat(s, m, line, form=form)
        assert g - sig == pytest.approx(d, rel=1e-9, abs=1e-12 * abs(g))
        assert (c.sigma, c.gamma) == pytest.approx((sig, g), rel=1e-13)


def test_delta_zero_when_a_is_zero(exp_sample):
    # headcount in the unscaled mode has no line sensitivity
    assert a_factor(exp_sample, fgt(0), 2.0, 0.5, mode="unscaled") == 0
    assert delta_hat(exp_sample, fgt(0), MeanLine(1), a_mode="unscaled") == 0


@pytest.mark.parametrize("form", FORMS)
def test_symmetry(form, exp_sample):
    for line in (MeanLine(1), QuantileLine(0.5, 0.6)):
        a = gamma_hat(exp_sample, sen(), fgt(2), line, form=form)
        b = gamma_hat(exp_sample, fgt(2), sen(), line, form=form)
        assert a == pytest.approx(b, rel=1e-9)
        cm = gamma_matrix(exp_sample, [fgt(1), fgt(2), sen()], line, form=form)
        np.testing.assert_array_equal(cm.matrix, cm.matrix.T)
        assert cm.asymmetry < 1e-9


def test_matrix(exp_sample):
    one = gamma_matrix(exp_sample, [sen()], MeanLine(1))
    assert one.dim == 1 and one.matrix[0, 0] == pytest.approx(gamma_hat(exp_sample, sen(), sen(), MeanLine(1)))
    fm = gamma_matrix(exp_sample, [fgt(0), fgt(1), fgt(2)], FixedLine(2))
    for i, a in enumerate((0, 1, 2)):
        for j, b in enumerate((0, 1, 2)):
            assert fm.matrix[i, j] == pytest.approx(sigma_hat(exp_sample, fgt(a), fgt(b), 2.0), rel=1e-12)
    dup = gamma_matrix(exp_sample, [fgt(1), fgt(1)], MeanLine(1))
    assert np.linalg.matrix_rank(dup.matrix) == 1
    assert fm.matrix[1, 2] > 0


def test_q_equals_one_hand_expansion():
    s = Sample.from_values([0.5, 2.0, 3.0, 4.0, 5.0])
    n, z = 5, 1.0
    f = 1 - 0.5 / z
    h = 2 * (1 - 1) * f  # Sen weight at u = v = 1/n is 0
    A, B = (-2 * n) * f, 2 * (1 / n) / (1 / n) ** 2 * f
    # classical: h1^2/n - (h1/n)^2 + a1..a4 cells at i = j = 1
    v = 1 / n
    classical = (h * h / n - (h / n) ** 2
                 + (A * A * (1 / n - 1 / n ** 2) + 2 * A * B * (1 - v) / n + B * B * v * (1 - v)) / n ** 2)
    assert sigma_hat(s, sen(), sen(), z, form="classical") == pytest.approx(classical, rel=1e-12)
    # influence: psi takes one value at Y_1 and another at the rest
    p1 = h - h / n + A * (1 - 1 / n) / n + (1 - v) * B / n
    pr = -h / n - A / n ** 2 - v * B / n
    assert sigma_hat(s, sen(), sen(), z) == pytest.approx((p1 ** 2 + (n - 1) * pr ** 2) / n, rel=1e-12)
    # additive measure at q = 1: only the h terms remain
    hf = 1 - 0.5 / z
    assert sigma_hat(s, fgt(1), fgt(1), z) == pytest.approx(hf ** 2 / n - (hf / n) ** 2, rel=1e-14)


def test_no_poor_gives_zero():
    s = Sample.from_values([3.0, 4.0])
    assert sigma_hat(s, sen(), sen(), 1.0) == 0
    assert sigma_terms(s, sen(), sen(), 1.0).q == 0


def test_true_density_option(exp_sample):
    d = Exponential(0.5)
    a = gamma_hat(exp_sample, fgt(1), fgt(1), QuantileLine(0.5, 1), density=d.pdf)
    b = gamma_hat(exp_sample, fgt(1), fgt(1), QuantileLine(0.5, 1))
    assert a > 0 and b > 0 and a != b
