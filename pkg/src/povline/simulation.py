"""Monte Carlo studies of the estimators' sampling behaviour.

Every replication draws from its own counter-based stream
(Philox keyed by ``SeedSequence([seed, replication])``) so results do not
depend on how replications are scheduled across worker processes.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .distributions import Distribution
from .empirical import Sample
from .errors import DegenerateError, PovlineError, ValidationError
from .estimation import j_relative, j_theoretical
from .inference import proportionality_test, two_sided_p, wald_test
from .lines import LineSpec
from .measures import Measure

__all__ = [
    "replication_stream",
    "sample_dist",
    "StudyConfig",
    "StudyReport",
    "run_normality_study",
    "SizeReport",
    "run_size_study",
    "Z_975",
]

Z_975 = 1.959964


def replication_stream(seed: int, rep: int, sub: int = 0) -> np.random.Generator:
    """Independent generator for replication ``rep`` (and sub-stream ``sub``)."""
    if seed < 0 or rep < 0 or sub < 0:
        raise ValueError("seed, replication and sub-stream indices must be non-negative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, rep, sub])))


def sample_dist(d: Distribution, n: int, stream: np.random.Generator) -> np.ndarray:
    """``n`` incomes from ``d``: inverse transform for the exponential,
    ``exp(mu + sigma Z)`` for the lognormal."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    return d.sample(n, stream)


@dataclass(frozen=True)
class StudyConfig:
    dist: Distribution
    n: int
    reps: int
    measure: Measure
    line: LineSpec
    seed: int
    use_true_density: bool = False
    form: str = "influence"
    a_mode: str = "consistent"
    max_excluded_fraction: float = 0.01

    def __post_init__(self):
        if self.n < 10:
            raise ValidationError(f"study sample size must be >= 10, got {self.n}")
        if self.reps < 1:
            raise ValidationError(f"number of replications must be >= 1, got {self.reps}")
        if self.seed < 0:
            raise ValidationError("seed must be a non-negative integer")

    def to_dict(self) -> dict:
        return {
            "dist": self.dist.label,
            "n": self.n,
            "reps": self.reps,
            "measure": self.measure.label,
            "line": self.line.label,
            "seed": self.seed,
            "use_true_density": self.use_true_density,
            "form": self.form,
            "a_mode": self.a_mode,
            "max_excluded_fraction": self.max_excluded_fraction,
        }


@dataclass
class StudyReport:
    """Outcome of :func:`run_normality_study`.

    ``statistics`` holds the signed standardised values
    ``(J_hat - J) / sigma_hat`` of the retained replications (indices in
    ``replications``) and
    ``p_values`` their two-sided normal p-values. ``ks_statistic`` /
    ``ks_p`` compare the standardised values with ``N(0, 1)``;
    ``ks_uniform_p`` compares the p-values with ``U(0, 1)``.
    """

    config: dict
    j_theoretical: float
    replications: np.ndarray
    statistics: np.ndarray
    p_values: np.ndarray
    j_hats: np.ndarray
    gamma_hats: np.ndarray
    excluded: int
    excluded_reps: list
    ks_statistic: float
    ks_p: float
    ks_uniform_p: float
    mean_p: float
    coverage_95: float
    mc_variance: float
    mean_gamma_hat: float

    def summary(self) -> dict:
        keys = ("j_theoretical", "excluded", "ks_statistic", "ks_p", "ks_uniform_p",
                "mean_p", "coverage_95", "mc_variance", "mean_gamma_hat")
        out = {k: getattr(self, k) for k in keys}
        out["retained"] = int(self.statistics.size)
        out["mean_statistic"] = float(self.statistics.mean()) if self.statistics.size else float("nan")
        out["var_statistic"] = (
            float(self.statistics.var(ddof=1)) if self.statistics.size > 1 else float("nan")
        )
        return out

    def to_dict(self) -> dict:
        out = {"config": self.config, **self.summary(), "excluded_reps": list(self.excluded_reps)}
        return out


def _one_rep(cfg: StudyConfig, r: int, j_true: float):
    rng = replication_stream(cfg.seed, r)
    s = Sample.from_values(sample_dist(cfg.dist, cfg.n, rng))
    density = cfg.dist.pdf if cfg.use_true_density else None
    try:
        rep = j_relative(s, cfg.measure, cfg.line, form=cfg.form, a_mode=cfg.a_mode, density=density)
    except DegenerateError:
        return r, None, None
    if rep.degenerate or rep.flagged:
        return r, rep.j_hat, None
    return r, rep.j_hat, rep.gamma_hat


def _chunk(args):
    cfg, reps, j_true = args
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return [_one_rep(cfg, r, j_true) for r in reps]


def _map_reps(cfg, j_true, jobs):
    idx = list(range(cfg.reps))
    if jobs <= 1 or cfg.reps < 2:
        return _chunk((cfg, idx, j_true))
    size = math.ceil(cfg.reps / (4 * jobs))
    chunks = [(cfg, idx[i:i + size], j_true) for i in range(0, cfg.reps, size)]
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part in ex.map(_chunk, chunks):
            out.extend(part)
    return out


def run_normality_study(cfg: StudyConfig, jobs: int = 1) -> StudyReport:
    """Standardise ``J_hat`` by ``sqrt(Gamma_hat / n)`` over ``cfg.reps`` samples.

    Replications with no poor or an unusable variance are excluded and
    listed. If they exceed ``cfg.max_excluded_fraction`` of the
    replications a :class:`DegenerateError` is raised with the partial
    report attached as ``exc.report``.
    """
    j_true = j_theoretical(cfg.dist, cfg.measure, cfg.line)
    rows = _map_reps(cfg, j_true, jobs)
    n = cfg.n
    kept = [(r, j, g) for r, j, g in rows if g is not None]
    excluded = [r for r, j, g in rows if g is None]
    j_hats = np.array([j for _, j, _ in kept])
    gammas = np.array([g for _, _, g in kept])
    t = (j_hats - j_true) / np.sqrt(gammas / n) if kept else np.zeros(0)
    p = np.asarray(two_sided_p(t)) if kept else np.zeros(0)
    if t.size:
        ks = stats.kstest(t, "norm")
        ks_u = stats.kstest(p, "uniform")
        ks_stat, ks_p, ks_up = float(ks.statistic), float(ks.pvalue), float(ks_u.pvalue)
        cover = float(np.mean(np.abs(t) <= Z_975))
        mean_p = float(p.mean())
        mean_g = float(gammas.mean())
    else:
        ks_stat = ks_p = ks_up = cover = mean_p = mean_g = float("nan")
    dev = np.sqrt(n) * (j_hats - j_true)
    mc_var = float(dev.var(ddof=1)) if dev.size > 1 else float("nan")
    report = StudyReport(
        config=cfg.to_dict(),
        j_theoretical=j_true,
        replications=np.array([r for r, _, _ in kept], dtype=int),
        statistics=t,
        p_values=p,
        j_hats=j_hats,
        gamma_hats=gammas,
        excluded=len(excluded),
        excluded_reps=excluded,
        ks_statistic=ks_stat,
        ks_p=ks_p,
        ks_uniform_p=ks_up,
        mean_p=mean_p,
        coverage_95=cover,
        mc_variance=mc_var,
        mean_gamma_hat=mean_g,
    )
    if len(excluded) > cfg.max_excluded_fraction * cfg.reps:
        err = DegenerateError(
            f"{len(excluded)} of {cfg.reps} replications had degenerate variance "
            f"(limit {cfg.max_excluded_fraction:.0%})"
        )
        err.report = report
        raise err
    return report


@dataclass
class SizeReport:
    """Empirical rejection rate of a two-sample test under a true null."""

    test: str
    level: float
    reps: int
    rejections: int
    failures: int
    p_values: np.ndarray = field(repr=False)

    @property
    def rejection_rate(self) -> float:
        used = self.reps - self.failures
        return self.rejections / used if used else float("nan")


def run_size_study(
    dist: Distribution,
    n: int,
    reps: int,
    measures: Sequence[Measure],
    line: LineSpec,
    seed: int,
    test: str = "proportionality",
    level: float = 0.05,
    coefs: Optional[Sequence[float]] = None,
    form: str = "influence",
) -> SizeReport:
    """Draw two independent samples from ``dist`` per replication and test
    equality (proportionality with ``coef = 1`` or Wald with ``M = I``)."""
    if test not in ("proportionality", "wald"):
        raise ValueError(f"unknown test {test!r}")
    pvals = []
    failures = 0
    for r in range(reps):
        sF = Sample.from_values(sample_dist(dist, n, replication_stream(seed, r, 0)))
        sG = Sample.from_values(sample_dist(dist, n, replication_stream(seed, r, 1)))
        try:
            if test == "proportionality":
                res = proportionality_test(sF, sG, measures[0], 1.0, line, line, form=form)
            else:
                res = wald_test(sF, sG, measures, coefs or [1.0] * len(measures), line, line, form=form)
        except PovlineError:
            failures += 1
            continue
        pvals.append(res.p_value)
    pvals = np.array(pvals)
    return SizeReport(test, level, reps, int(np.sum(pvals < level)), failures, pvals)
