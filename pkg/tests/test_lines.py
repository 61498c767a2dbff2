import math

import numpy as np
import pytest

from povline import (DegenerateError, DomainError, Exponential, FixedLine, Lognormal, MeanLine,
                     QuantileLine, Sample, parse_distribution, parse_line)
from povline.simulation import replication_stream, sample_dist

S4 = Sample.from_values([1, 2, 3, 4])


def test_estimates():
    assert FixedLine(2.5).estimate(S4) == 2.5
    assert MeanLine(1).estimate(S4) == 2.5
    assert QuantileLine(0.5, 0.6).estimate(S4) == pytest.approx(1.2)


def test_influence():
    assert FixedLine(2.5).influence(S4, 100.0) == 0
    assert MeanLine(0.5).influence(S4, 4.0) == 2
    s = Sample.from_values(np.linspace(1, 10, 40))
    line = QuantileLine(0.5, 1.0)
    assert line.influence(s, 9.0) == 0
    assert line.influence(s, 1.0) < 0


def test_quantile_influence_centres_to_zero_in_mean():
    # zeta is -k/g below the median, so its sample mean is close to -k p / g
    d = Exponential(0.5)
    s = Sample.from_values(sample_dist(d, 5000, replication_stream(1, 0)))
    line = QuantileLine(0.5, 1.0)
    z = line.influence(s, s.values, density=d.pdf)
    g = float(d.pdf(s.quantile(0.5)))
    assert z.mean() == pytest.approx(-0.5 / g, rel=1e-3)


def test_density_floor():
    s = Sample.from_values([1.0, 1.0, 1.0, 2.0])
    with pytest.raises(DegenerateError):
        QuantileLine(0.5, 1.0).influence(s, 1.0, density=lambda y: 0.0)


def test_theoretical():
    assert MeanLine(1).theoretical(Exponential(0.5)) == pytest.approx(2.0)
    assert QuantileLine(0.5, 1).theoretical(Exponential(0.5)) == pytest.approx(2 * math.log(2), rel=1e-14)
    assert MeanLine(1).theoretical(Lognormal(0, 1)) == pytest.approx(math.exp(0.5), rel=1e-14)
    assert FixedLine(3).theoretical(Lognormal(0, 1)) == 3


def test_mean_line_zeta_variance(rng):
    s = Sample.from_values(rng.exponential(2, 300))
    z = MeanLine(0.7).influence(s, s.values)
    assert np.var(z) == pytest.approx(0.49 * np.var(s.values), rel=1e-12)


def test_consistency():
    d = Exponential(0.5)
    errs = [abs(MeanLine(1).estimate(Sample.from_values(sample_dist(d, 10_000, replication_stream(s, 0)))) - 2)
            for s in range(100)]
    assert np.median(errs) < 0.05


@pytest.mark.parametrize("line", [MeanLine(0.6), QuantileLine(0.5, 0.6), QuantileLine(0.3, 1.0)])
def test_scale_equivariant(line, rng):
    s = Sample.from_values(rng.lognormal(size=101))
    assert line.estimate(s.scaled(12.5)) == pytest.approx(12.5 * line.estimate(s), rel=1e-14)


@pytest.mark.parametrize("text,cls", [("fixed:2.5", FixedLine), ("mean:0.5", MeanLine),
                                      ("median:0.6", QuantileLine), ("quantile:0.4:1", QuantileLine)])
def test_parse(text, cls):
    line = parse_line(text)
    assert isinstance(line, cls)
    assert parse_line(line.label) == line


def test_median_sugar():
    assert parse_line("median:0.6") == QuantileLine(0.5, 0.6)
    assert parse_line("median:0.6").label == "median:0.6"


@pytest.mark.parametrize("text", ["fixed:-1", "mean:0", "quantile:1.2:1", "median:1:2", "poverty:2", "mean:abc"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_line(text)


class TestDistributions:
    @pytest.mark.parametrize("d", [Exponential(0.5), Lognormal(0, 1), Lognormal(1.2, 0.4)])
    def test_quantile_inverts_cdf(self, d):
        p = np.linspace(1e-6, 1 - 1e-6, 501)
        np.testing.assert_allclose(d.cdf(d.quantile(p)), p, atol=1e-10)

    def test_parse(self):
        assert parse_distribution("exp:0.5") == Exponential(0.5)
        assert parse_distribution("lognormal:0:1") == Lognormal(0, 1)
        with pytest.raises(DomainError):
            parse_distribution("gamma:2")
        with pytest.raises(DomainError):
            parse_distribution("exp:-1")
