"""Plug-in poverty-index estimators and the theoretical index.

``j_fixed`` evaluates the empirical index at a given line,

    J_n = (1/n) sum_{j <= q} w(j/n, q/n) f(Y_{j,n}, z),

with ranks ``G_n(Y_{j,n}) = j/n`` and the poverty indicator ``Y <= z``.
``j_relative`` plugs in an estimated line and attaches the asymptotic
variance; ``j_theoretical`` integrates the population functional for a
known distribution.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ._poor import PoorSet
from .distributions import Distribution
from .empirical import Sample
from .errors import DegenerateError, DomainError
from .lines import LineSpec
from .measures import Measure
from .quadrature import adaptive_simpson

__all__ = [
    "EstimateReport",
    "j_fixed",
    "j_relative",
    "j_theoretical",
    "a_factor",
    "A_MODES",
    "FORMS",
]

A_MODES = ("consistent", "unscaled")
FORMS = ("influence", "classical")


def _check_modes(form, a_mode):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    if a_mode not in A_MODES:
        raise ValueError(f"a_mode must be one of {A_MODES}, got {a_mode!r}")


def j_fixed(s: Sample, m: Measure, z: float) -> float:
    """Empirical index at a fixed poverty line ``z``."""
    if not z > 0:
        raise DomainError(f"poverty line must be positive, got {z}")
    return PoorSet(s, m, z).index


def a_factor(
    s: Sample,
    m: Measure,
    z_hat: float,
    g_hat_at_z: float,
    mode: str = "consistent",
) -> float:
    """Sensitivity of the index to the poverty line, ``dJ/dz``.

    ``mode="consistent"`` computes

        (1/n) sum_{i<=q} [dw/dv(i/n, q/n) f(y_i, z) g(z) + df/dz(y_i, z) w(i/n, q/n)]
        + w(q/n, q/n) f(z, z) g(z)

    The last (boundary) term vanishes for every focal measure and equals
    ``g(z)`` for the headcount ratio. ``mode="unscaled"`` drops both the
    density factor and the boundary term.
    """
    if mode not in A_MODES:
        raise ValueError(f"a_mode must be one of {A_MODES}, got {mode!r}")
    ps = PoorSet(s, m, z_hat)
    if ps.q == 0:
        return 0.0
    fz = np.asarray(m.deprivation_dz(ps.y, ps.z), dtype=float)
    if mode == "unscaled":
        return float((ps.B + fz * ps.w).sum() / ps.n)
    core = (ps.B * g_hat_at_z + fz * ps.w).sum() / ps.n
    edge = float(m.weight(ps.v, ps.v)) * float(m.deprivation(ps.z, ps.z)) * g_hat_at_z
    return float(core + edge)


@dataclass
class EstimateReport:
    """Point estimate with its asymptotic variance.

    ``gamma_hat``, ``sigma_hat`` and ``delta_hat`` are on the asymptotic
    scale (variance of ``sqrt(n) (J_hat - J)``); ``variance = gamma_hat / n``
    is the variance of the estimate itself and ``std_error`` its square
    root. ``degenerate`` is set when the sample has no poor (q = 0);
    ``flagged`` when the variance estimate is not strictly positive.
    """

    measure: str
    line: str
    n: int
    q: int
    z_hat: float
    j_hat: float
    gamma_hat: float
    sigma_hat: float
    delta_hat: float
    variance: float
    std_error: float
    a_hat: Optional[float]
    a_mode: str
    form: str
    degenerate: bool = False
    flagged: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def j_relative(
    s: Sample,
    m: Measure,
    line: LineSpec,
    *,
    form: str = "influence",
    a_mode: str = "consistent",
    density=None,
) -> EstimateReport:
    """Index at an estimated (or fixed) poverty line, with its variance.

    Parameters
    ----------
    form : {"influence", "classical"}
        Covariance estimator; see :mod:`povline.variance`.
    a_mode : {"consistent", "unscaled"}
        Variant of :func:`a_factor`.
    density : callable, optional
        Income density used for ``g(z_hat)`` and for the quantile-line
        influence. Defaults to a Gaussian KDE at the Silverman bandwidth.
    """
    from . import variance

    _check_modes(form, a_mode)
    z_hat = line.estimate(s)
    ps = PoorSet(s, m, z_hat)
    j_hat = ps.index
    if ps.q == 0:
        warnings.warn(
            f"no income at or below the poverty line {z_hat:g}; index is 0 and its variance undefined",
            RuntimeWarning,
            stacklevel=2,
        )
        nan = float("nan")
        return EstimateReport(
            m.label, line.label, s.n, 0, z_hat, j_hat, nan, nan, nan, nan, nan,
            None, a_mode, form, degenerate=True, flagged=True,
        )
    try:
        comp = variance.variance_components(s, m, line, form=form, a_mode=a_mode, density=density)
    except DegenerateError as exc:
        # the index is still defined; only its variance is not
        warnings.warn(f"variance unavailable: {exc}", RuntimeWarning, stacklevel=2)
        nan = float("nan")
        return EstimateReport(
            m.label, line.label, s.n, ps.q, z_hat, j_hat, nan, nan, nan, nan, nan,
            None, a_mode, form, flagged=True,
        )
    gamma = comp.gamma
    var = gamma / s.n
    flagged = not (gamma > 0 and math.isfinite(gamma))
    return EstimateReport(
        measure=m.label,
        line=line.label,
        n=s.n,
        q=ps.q,
        z_hat=z_hat,
        j_hat=j_hat,
        gamma_hat=gamma,
        sigma_hat=comp.sigma,
        delta_hat=comp.delta,
        variance=var,
        std_error=math.sqrt(var) if var >= 0 else float("nan"),
        a_hat=comp.a_hat,
        a_mode=a_mode,
        form=form,
        flagged=flagged,
    )


def j_theoretical(
    d: Distribution,
    m: Measure,
    line: LineSpec,
    tol: float = 1e-10,
) -> float:
    """Population index ``int_0^z w[G(y), G(z)] f(y, z) g(y) dy``.

    Integrated by adaptive Simpson in ``t = log y`` (which removes the
    logarithmic singularity of the Watts deprivation at 0), starting at the
    ``1e-12`` quantile.
    """
    z = float(line.theoretical(d))
    lo = float(d.quantile(1e-12))
    if z <= lo:
        return 0.0
    v = float(d.cdf(z))

    def integrand(t):
        y = min(math.exp(t), z)
        u = min(float(d.cdf(y)), v)
        return float(m.weight(u, v)) * float(m.deprivation(y, z)) * float(d.pdf(y)) * y

    return adaptive_simpson(integrand, math.log(lo), math.log(z), tol=tol)
