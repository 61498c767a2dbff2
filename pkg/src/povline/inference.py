"""Two-population tests on poverty indices.

* :func:`proportionality_test` -- ``H0: J_F = c J_G`` for one index,
  ``T = (J_F - c J_G) / sigma`` with
  ``sigma^2 = Gamma_F / n_F + c^2 Gamma_G / n_G``.
* :func:`wald_test` -- ``H0: I_F = M I_G`` for a vector of ``d`` indices with
  ``M = diag(c_1, ..., c_d)``; ``W`` is asymptotically ``chi^2(d)``.

Both populations are independent samples, so the pooled covariance is the
sum of the per-sample covariances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import linalg, special

from .empirical import Sample
from .errors import DegenerateError, SingularCovarianceError, ValidationError
from .estimation import j_relative
from .lines import LineSpec
from .measures import Measure
from .variance import gamma_matrix

__all__ = [
    "TestResult",
    "normal_cdf",
    "chisq_cdf",
    "chisq_sf",
    "two_sided_p",
    "proportionality_test",
    "wald_test",
    "DEFAULT_LEVELS",
    "PIVOT_TOL",
]

DEFAULT_LEVELS = (0.10, 0.05, 0.01)
PIVOT_TOL = 1e-10
_SQRT2 = math.sqrt(2.0)


def normal_cdf(x):
    """Standard normal CDF via the complementary error function."""
    x = np.asarray(x, dtype=float)
    r = 0.5 * special.erfc(-x / _SQRT2)
    return r.item() if r.ndim == 0 else r


def two_sided_p(t):
    """``2 (1 - Phi(|t|))``, evaluated without cancellation."""
    t = np.abs(np.asarray(t, dtype=float))
    r = special.erfc(t / _SQRT2)
    return r.item() if r.ndim == 0 else r


def chisq_cdf(x, df: int):
    """``chi^2(df)`` CDF as the regularised lower incomplete gamma ``P(df/2, x/2)``."""
    if int(df) != df or df < 1:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df}")
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    r = special.gammainc(0.5 * df, 0.5 * x)
    return r.item() if r.ndim == 0 else r


def chisq_sf(x, df: int):
    if int(df) != df or df < 1:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df}")
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    r = special.gammaincc(0.5 * df, 0.5 * x)
    return r.item() if r.ndim == 0 else r


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    df: Optional[int]
    reject_at: dict
    components: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "df": self.df,
            "reject_at": {f"{k:g}": v for k, v in self.reject_at.items()},
            "components": self.components,
        }


def _require_samples(*samples):
    for s in samples:
        if s is None or len(s) == 0:
            raise ValidationError("both samples must be nonempty")


def proportionality_test(
    sF: Sample,
    sG: Sample,
    m: Measure,
    coef: float,
    lineF: LineSpec,
    lineG: LineSpec,
    *,
    levels: Sequence[float] = DEFAULT_LEVELS,
    form: str = "influence",
    a_mode: str = "consistent",
) -> TestResult:
    """Two-sided test of ``J_F = coef * J_G``.

    Raises
    ------
    DegenerateError
        If either sample has no poor or a non-positive variance estimate,
        or the pooled variance is zero.
    """
    _require_samples(sF, sG)
    if not coef >= 0:
        raise ValueError(f"proportionality coefficient must be >= 0, got {coef}")
    rF = j_relative(sF, m, lineF, form=form, a_mode=a_mode)
    rG = j_relative(sG, m, lineG, form=form, a_mode=a_mode)
    for name, r in (("F", rF), ("G", rG)):
        # with coef = 0 the G sample does not enter the statistic
        if name == "G" and coef == 0:
            continue
        if r.degenerate or r.flagged:
            raise DegenerateError(
                f"sample {name}: variance estimate unusable (q={r.q}, gamma_hat={r.gamma_hat:.3g})"
            )
    var_g = rG.variance if coef != 0 else 0.0
    pooled = rF.variance + coef * coef * var_g
    if not pooled > 0:
        raise DegenerateError("pooled variance is zero; the statistic is undefined")
    diff = rF.j_hat - coef * rG.j_hat
    t = diff / math.sqrt(pooled)
    p = float(two_sided_p(t))
    return TestResult(
        statistic=t,
        p_value=p,
        df=None,
        reject_at={lv: p < lv for lv in levels},
        components={
            "coef": coef,
            "difference": diff,
            "pooled_variance": pooled,
            "F": rF.to_dict(),
            "G": rG.to_dict(),
        },
    )


def _cholesky(a: np.ndarray, labels) -> np.ndarray:
    """Lower Cholesky factor, refusing pivots below ``PIVOT_TOL * max pivot``."""
    d = a.shape[0]
    L = np.zeros_like(a)
    scale = float(np.max(np.abs(np.diag(a))))
    if not scale > 0:
        raise SingularCovarianceError("pooled covariance has no positive diagonal entry")
    for j in range(d):
        piv = a[j, j] - float(L[j, :j] @ L[j, :j])
        if not piv > PIVOT_TOL * scale:
            # name the earlier coordinate this one is most collinear with
            pair = None
            if j > 0:
                corr = np.abs(a[j, :j]) / np.sqrt(np.diag(a)[:j] * a[j, j])
                pair = (labels[int(np.argmax(corr))], labels[j])
            msg = f"pooled covariance is singular at coordinate {j} ({labels[j]})"
            if pair:
                msg += f"; collinear measure pair {pair[0]!r} / {pair[1]!r}"
            raise SingularCovarianceError(msg, pair=pair)
        L[j, j] = math.sqrt(piv)
        for i in range(j + 1, d):
            L[i, j] = (a[i, j] - float(L[i, :j] @ L[j, :j])) / L[j, j]
    return L


def wald_test(
    sF: Sample,
    sG: Sample,
    measures: Sequence[Measure],
    coefs: Sequence[float],
    lineF: LineSpec,
    lineG: LineSpec,
    *,
    levels: Sequence[float] = DEFAULT_LEVELS,
    form: str = "influence",
    a_mode: str = "consistent",
) -> TestResult:
    """Joint Wald test of ``I_F = diag(coefs) I_G`` over ``d`` indices.

    The pooled covariance ``Gamma_F / n_F + M Gamma_G M / n_G`` is factored
    by Cholesky (no explicit inverse) and ``p = 1 - F_{chi^2(d)}(W)``.

    Raises
    ------
    SingularCovarianceError
        If a Cholesky pivot falls below ``PIVOT_TOL`` times the largest
        diagonal entry, e.g. for a duplicated measure.
    """
    _require_samples(sF, sG)
    d = len(measures)
    if d < 1:
        raise ValueError("wald_test needs at least one measure")
    if len(coefs) != d:
        raise ValueError(f"got {len(coefs)} coefficients for {d} measures")
    M = np.asarray(coefs, dtype=float)
    if np.any(M <= 0):
        raise ValueError("Wald coefficients must be positive")
    cF = gamma_matrix(sF, measures, lineF, form=form, a_mode=a_mode)
    cG = gamma_matrix(sG, measures, lineG, form=form, a_mode=a_mode)
    for name, c in (("F", cF), ("G", cG)):
        if c.q == 0:
            raise DegenerateError(f"sample {name} has no income at or below its poverty line")
    pooled = cF.matrix / sF.n + np.outer(M, M) * cG.matrix / sG.n
    diff = cF.estimates - M * cG.estimates
    labels = [m.label for m in measures]
    L = _cholesky(pooled, labels)
    y = linalg.solve_triangular(L, diff, lower=True)
    w = float(y @ y)
    p = float(chisq_sf(w, d))
    return TestResult(
        statistic=w,
        p_value=p,
        df=d,
        reject_at={lv: p < lv for lv in levels},
        components={
            "measures": labels,
            "coefs": M.tolist(),
            "difference": diff.tolist(),
            "pooled_covariance": pooled.tolist(),
            "F": {"estimates": cF.estimates.tolist(), "z_hat": cF.z_hat, "q": cF.q, "n": cF.n,
                  "gamma": cF.matrix.tolist()},
            "G": {"estimates": cG.estimates.tolist(), "z_hat": cG.z_hat, "q": cG.q, "n": cG.n,
                  "gamma": cG.matrix.tolist()},
        },
    )
