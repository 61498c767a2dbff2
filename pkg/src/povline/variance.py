"""Asymptotic covariance estimators for poverty indices.

For indices ``k, l`` evaluated on the same sample the estimators target the
covariance of ``sqrt(n) (J_hat - J)``. With a fixed line this is ``Sigma``;
with an estimated line ``Gamma = Sigma + (line-error terms)``.

Two estimator forms are available.

``form="influence"`` (default)
    Empirical covariance of the complete linearisation of each index,

        psi(y) = h(y) - J
                 + (1/n) sum_{i<=q} (dw/du)_i f_i [1{y <= Y_i} - i/n]
                 + [1{y <= z} - q/n] (1/n) sum_{i<=q} (dw/dv)_i f_i,

    so ``Sigma_kl = mean(psi_k psi_l)``. Written as sums this is the six
    classical terms (variance of ``h``, and the four rank double sums
    ``a1 .. a4``) plus ``rank_cross``, the covariance between ``h`` and the
    rank terms. Note that the ``a2``/``a3`` weights attach to the index of
    the ``dw/du`` factor. With an estimated line each ``psi_k`` gains
    ``a_k (zeta - mean zeta)``, and ``Gamma_kl`` is the empirical covariance
    of the augmented vectors (exactly symmetric and positive semidefinite).

``form="classical"``
    The classical term layout: the six-term double sum with the ``a2``/``a3``
    weights on the ``dw/dv`` index, no ``rank_cross`` term, and line-error
    terms built from ``h`` alone. For ``w == 1`` measures both forms agree.
    For rank-weighted measures such as Sen this form is not calibrated.

All rank sums are evaluated in O(q) with prefix/suffix sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from ._poor import PoorSet
from .empirical import Sample
from .errors import PovlineError
from .estimation import FORMS, a_factor, _check_modes
from .lines import LineSpec, kde_estimator
from .measures import Measure

__all__ = [
    "SigmaTerms",
    "CovMatrix",
    "VarianceComponents",
    "sigma_terms",
    "sigma_hat",
    "gamma_hat",
    "gamma_matrix",
    "delta_hat",
    "influence_vector",
    "variance_components",
]


@dataclass(frozen=True)
class SigmaTerms:
    """Additive pieces of ``Sigma_hat_{k,l}``.

    ``total = product - mean_product + a1 + a2 + a3 + a4 + rank_cross``.
    """

    product: float
    mean_product: float
    a1: float
    a2: float
    a3: float
    a4: float
    rank_cross: float
    q: int
    form: str

    @property
    def rank_terms(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4)

    @property
    def total(self) -> float:
        return (
            self.product - self.mean_product
            + self.a1 + self.a2 + self.a3 + self.a4
            + self.rank_cross
        )


def _check_form(form):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def _suffix(x):
    return np.cumsum(x[::-1])[::-1]


def _terms(pk: PoorSet, pl: PoorSet, form: str) -> SigmaTerms:
    n, q, v = pk.n, pk.q, pk.v
    if q == 0:
        return SigmaTerms(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, form)
    u = pk.u
    hk, hl = pk.h, pl.h
    product = float((hk * hl).sum() / n)
    mean_product = float(hk.sum() / n) * float(hl.sum() / n)

    Ak, Bk, Al, Bl = pk.A, pk.B, pl.A, pl.B
    sAk_u, sAl_u = float((Ak * u).sum()), float((Al * u).sum())
    sBk, sBl = float(Bk.sum()), float(Bl.sum())
    n2 = float(n) * n

    # sum_ij X_i Y_j min(u_i, u_j) = (1/n) sum_t (sum_{i>=t} X_i)(sum_{j>=t} Y_j)
    a1 = float(((_suffix(Ak) * _suffix(Al)).sum() / n - sAk_u * sAl_u) / n2)
    if form == "influence":
        a2 = (1.0 - v) * sAk_u * sBl / n2
        a3 = (1.0 - v) * sBk * sAl_u / n2
    else:
        a2 = (1.0 - v) * float(Ak.sum()) * float((Bl * u).sum()) / n2
        a3 = (1.0 - v) * float((Bk * u).sum()) * float(Al.sum()) / n2
    a4 = v * (1.0 - v) * sBk * sBl / n2

    rank_cross = 0.0
    if form == "influence":
        rank_cross = _h_rank_cov(hk, Al, sAl_u, sBl, u, n, v) + _h_rank_cov(
            hl, Ak, sAk_u, sBk, u, n, v
        )
    return SigmaTerms(product, mean_product, a1, a2, a3, a4, rank_cross, q, form)


def _h_rank_cov(h, A, sA_u, sB, u, n, v):
    # covariance of h (one index) with the rank part of the other index's psi
    if not (A.any() or sB):
        return 0.0
    hbar = float(h.sum() / n)
    prefix = np.cumsum(h)
    return float((A * prefix).sum() / n / n - hbar * sA_u / n + (1.0 - v) * hbar * sB / n)


def sigma_terms(s: Sample, mk: Measure, ml: Measure, z: float, form: str = "influence") -> SigmaTerms:
    """Term-by-term ``Sigma_hat_{k,l}`` at line ``z`` (``q = n G_n(z)``)."""
    _check_form(form)
    return _terms(PoorSet(s, mk, z), PoorSet(s, ml, z), form)


def sigma_hat(s: Sample, mk: Measure, ml: Measure, z: float, form: str = "influence") -> float:
    """Fixed-line asymptotic covariance ``Sigma_hat_{k,l}``; 0 when q = 0."""
    return sigma_terms(s, mk, ml, z, form).total


def influence_vector(ps: PoorSet) -> np.ndarray:
    """Empirical linearisation ``psi(Y_{m,n})`` for ``m = 1..n`` (see module doc)."""
    n, q, v = ps.n, ps.q, ps.v
    psi = ps.h_full - ps.h.sum() / n
    if q == 0 or ps.measure.rank_free:
        return psi
    A, B = ps.A, ps.B
    psi[:q] += _suffix(A) / n
    psi -= float((A * ps.u).sum()) / n
    indicator = np.zeros(n)
    indicator[:q] = 1.0
    psi += (indicator - v) * float(B.sum()) / n
    return psi


class _LineContext:
    """Estimated line, centred influence and density for one sample."""

    def __init__(self, s: Sample, line: LineSpec, a_mode: str, density=None):
        self.sample = s
        self.line = line
        self.a_mode = a_mode
        self.z_hat = line.estimate(s)
        self._density = density

    @cached_property
    def density(self):
        return self._density if self._density is not None else kde_estimator(self.sample)

    @cached_property
    def zeta(self) -> np.ndarray:
        if not self.line.relative:
            return np.zeros(self.sample.n)
        return np.asarray(
            self.line.influence(self.sample, self.sample.values, density=self.density), dtype=float
        )

    @cached_property
    def g_at_z(self) -> float:
        if self.a_mode == "unscaled":
            return 1.0
        return float(self.density(self.z_hat))

    def a_hat(self, m: Measure) -> float:
        if not self.line.relative:
            return 0.0
        return a_factor(self.sample, m, self.z_hat, self.g_at_z, mode=self.a_mode)


def _cross(x: np.ndarray, zeta: np.ndarray) -> float:
    # (1/n) sum x zeta - (1/n^2) sum x sum zeta
    n = x.size
    return float((x * zeta).sum() / n - x.sum() * zeta.sum() / (float(n) * n))


def _zeta_var(zeta: np.ndarray) -> float:
    c = zeta - zeta.sum() / zeta.size
    return float((c * c).sum() / zeta.size)


def _gamma_entry(ctx: _LineContext, pk, pl, ak, al, form) -> tuple:
    terms = _terms(pk, pl, form)
    zeta = ctx.zeta
    if not ctx.line.relative:
        return terms.total, terms
    if form == "influence":
        xk, xl = influence_vector(pk), influence_vector(pl)
        # Cov(psi_k + a_k zeta, psi_l + a_l zeta)
        extra = al * _cross(xk, zeta) + ak * _cross(xl, zeta) + ak * al * _zeta_var(zeta)
    else:
        extra = ak * _cross(pk.h_full, zeta) + al * _cross(pl.h_full, zeta) + ak * al * _zeta_var(zeta)
    return terms.total + extra, terms


def gamma_hat(
    s: Sample,
    mk: Measure,
    ml: Measure,
    line: LineSpec,
    *,
    form: str = "influence",
    a_mode: str = "consistent",
    density=None,
) -> float:
    """Asymptotic covariance ``Gamma_hat_{k,l}`` with the line estimated by ``line``."""
    _check_modes(form, a_mode)
    ctx = _LineContext(s, line, a_mode, density)
    pk, pl = PoorSet(s, mk, ctx.z_hat), PoorSet(s, ml, ctx.z_hat)
    if pk.q == 0:
        return 0.0
    return _gamma_entry(ctx, pk, pl, ctx.a_hat(mk), ctx.a_hat(ml), form)[0]


def delta_hat(
    s: Sample,
    m: Measure,
    line: LineSpec,
    *,
    form: str = "influence",
    a_mode: str = "consistent",
    density=None,
) -> float:
    """Extra variance from estimating the line, ``Gamma_hat - Sigma_hat`` (k = l).

    Evaluated from its own closed form,

        2 a [(1/n) sum x_i zeta_i - zeta_bar (1/n) sum x_i] + a^2 (1/n) sum (zeta_i - zeta_bar)^2,

    where ``x = h`` for ``form="classical"`` and ``x = psi`` for
    ``form="influence"``.
    """
    _check_modes(form, a_mode)
    ctx = _LineContext(s, line, a_mode, density)
    if not line.relative:
        return 0.0
    ps = PoorSet(s, m, ctx.z_hat)
    if ps.q == 0:
        return 0.0
    return _delta(ctx, ps, ctx.a_hat(m), form)


def _delta(ctx, ps, a, form):
    n = ps.n
    zeta = ctx.zeta
    zbar = float(zeta.mean())
    x = ps.h_full if form == "classical" else influence_vector(ps)
    lin = float((x * zeta).sum() / n) - zbar * float(x.sum() / n)
    quad = float(((zeta - zbar) ** 2).sum() / n)
    return 2.0 * a * lin + a * a * quad


@dataclass(frozen=True)
class VarianceComponents:
    z_hat: float
    q: int
    sigma: float
    delta: float
    gamma: float
    a_hat: Optional[float]


def variance_components(
    s: Sample,
    m: Measure,
    line: LineSpec,
    *,
    form: str = "influence",
    a_mode: str = "consistent",
    density=None,
) -> VarianceComponents:
    """``Sigma_hat``, ``Delta_hat`` and ``Gamma_hat`` for one measure, sharing work."""
    _check_modes(form, a_mode)
    ctx = _LineContext(s, line, a_mode, density)
    ps = PoorSet(s, m, ctx.z_hat)
    if ps.q == 0:
        return VarianceComponents(ctx.z_hat, 0, 0.0, 0.0, 0.0, None)
    a = ctx.a_hat(m) if line.relative else None
    gamma, terms = _gamma_entry(ctx, ps, ps, a or 0.0, a or 0.0, form)
    delta = _delta(ctx, ps, a, form) if line.relative else 0.0
    return VarianceComponents(ctx.z_hat, ps.q, terms.total, delta, gamma, a)


@dataclass(frozen=True)
class CovMatrix:
    """Asymptotic covariance matrix of a vector of indices.

    ``matrix`` is symmetrised as ``(A + A.T) / 2``; ``asymmetry`` records
    the largest relative asymmetry before symmetrisation. ``flagged`` is set
    when a diagonal entry is not strictly positive.
    """

    matrix: np.ndarray
    labels: tuple
    asymmetry: float
    flagged: bool
    estimates: np.ndarray
    z_hat: float
    q: int
    n: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def gamma_matrix(
    s: Sample,
    measures: Sequence[Measure],
    line: LineSpec,
    *,
    form: str = "influence",
    a_mode: str = "consistent",
    density=None,
) -> CovMatrix:
    """Entrywise ``Gamma_hat`` for ``measures`` on one sample."""
    _check_modes(form, a_mode)
    if len(measures) < 1:
        raise ValueError("gamma_matrix needs at least one measure")
    ctx = _LineContext(s, line, a_mode, density)
    sets = [PoorSet(s, m, ctx.z_hat) for m in measures]
    d = len(measures)
    raw = np.zeros((d, d))
    if sets[0].q > 0:
        avec = []
        for i, m in enumerate(measures):
            try:
                avec.append(ctx.a_hat(m))
            except PovlineError as exc:
                raise type(exc)(f"entry ({i}, {i}) [{m.label}]: {exc}") from exc
        for i in range(d):
            for j in range(d):
                try:
                    raw[i, j] = _gamma_entry(ctx, sets[i], sets[j], avec[i], avec[j], form)[0]
                except PovlineError as exc:
                    raise type(exc)(
                        f"entry ({i}, {j}) [{measures[i].label}, {measures[j].label}]: {exc}"
                    ) from exc
    scale = max(float(np.abs(raw).max()), np.finfo(float).tiny)
    asym = float(np.abs(raw - raw.T).max() / scale)
    mat = 0.5 * (raw + raw.T)
    diag = np.diag(mat)
    flagged = bool(np.any(~np.isfinite(diag)) or np.any(diag <= 0))
    return CovMatrix(
        matrix=mat,
        labels=tuple(m.label for m in measures),
        asymmetry=asym,
        flagged=flagged,
        estimates=np.array([ps.index for ps in sets]),
        z_hat=ctx.z_hat,
        q=sets[0].q,
        n=s.n,
    )
