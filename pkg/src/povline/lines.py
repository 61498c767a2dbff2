"""Poverty-line rules, their sample estimates and influence functions.

An estimated line admits the linearisation
``z_hat = z + (1/n) sum zeta(Y_j) + o_P(n^{-1/2})`` (up to centring of
``zeta``). Only the centred values of ``zeta`` enter the variance formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .distributions import Distribution
from .empirical import Sample, kde_density, silverman_bandwidth
from .errors import DegenerateError, DomainError

__all__ = [
    "LineSpec",
    "FixedLine",
    "MeanLine",
    "QuantileLine",
    "parse_line",
    "kde_estimator",
    "DENSITY_FLOOR",
    "LINE_GRAMMAR",
]

LINE_GRAMMAR = "fixed:<z> | mean:<k> | quantile:<p>:<k> | median:<k>"
DENSITY_FLOOR = 1e-12

Density = Callable[[float], float]


def kde_estimator(s: Sample) -> Density:
    """Gaussian KDE of ``s`` at the Silverman bandwidth, as a callable."""
    h = silverman_bandwidth(s)
    return lambda y: kde_density(s, y, h)


class LineSpec:
    label = "line"
    relative = True

    def estimate(self, s: Sample) -> float:
        raise NotImplementedError

    def influence(self, s: Sample, y, density: Optional[Density] = None):
        raise NotImplementedError

    def theoretical(self, d: Distribution) -> float:
        raise NotImplementedError

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class FixedLine(LineSpec):
    """Absolute line; ``zeta == 0``."""

    z: float
    relative = False

    def __post_init__(self):
        if not (self.z > 0 and math.isfinite(self.z)):
            raise DomainError(f"fixed poverty line must be positive, got {self.z}")

    @property
    def label(self):
        return f"fixed:{self.z:g}"

    def estimate(self, s):
        return float(self.z)

    def influence(self, s, y, density=None):
        return np.zeros(np.shape(y))

    def theoretical(self, d):
        return float(self.z)


@dataclass(frozen=True)
class MeanLine(LineSpec):
    """``z = k * mean``; ``zeta(y) = k y``."""

    k: float = 1.0

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"line fraction k must be positive, got {self.k}")

    @property
    def label(self):
        return f"mean:{self.k:g}"

    def estimate(self, s):
        return self.k * s.mean()

    def influence(self, s, y, density=None):
        return self.k * np.asarray(y, dtype=float)

    def theoretical(self, d):
        return self.k * float(d.mean())


@dataclass(frozen=True)
class QuantileLine(LineSpec):
    """``z = k * G^{-1}(p)``.

    By the Bahadur representation the estimated quantile moves *down* when
    more mass falls below it, so ``zeta(y) = -k / g(q_p) * 1{y <= q_p}``,
    evaluated at the sample quantile with ``g`` from ``density`` (KDE by
    default).
    """

    p: float = 0.5
    k: float = 1.0

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"line fraction k must be positive, got {self.k}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"quantile level must lie in (0, 1), got {self.p}")

    @property
    def label(self):
        if self.p == 0.5:
            return f"median:{self.k:g}"
        return f"quantile:{self.p:g}:{self.k:g}"

    def estimate(self, s):
        return self.k * s.quantile(self.p)

    def density_at_quantile(self, s: Sample, density: Optional[Density] = None) -> float:
        qp = s.quantile(self.p)
        g = float((density or kde_estimator(s))(qp))
        if not g > DENSITY_FLOOR:
            raise DegenerateError(
                f"density at the {self.p:g}-quantile is {g:.3g}; quantile-line influence is unbounded"
            )
        return g

    def influence(self, s, y, density=None):
        qp = s.quantile(self.p)
        g = self.density_at_quantile(s, density)
        y = np.asarray(y, dtype=float)
        return np.where(y <= qp, -self.k / g, 0.0)

    def theoretical(self, d):
        return self.k * float(d.quantile(self.p))


def parse_line(text: str) -> LineSpec:
    """Parse ``fixed:<z>``, ``mean:<k>``, ``quantile:<p>:<k>`` or ``median:<k>``."""
    head, *args = text.strip().lower().split(":")
    try:
        if head == "fixed" and len(args) == 1:
            return FixedLine(float(args[0]))
        if head == "mean" and len(args) <= 1:
            return MeanLine(float(args[0]) if args else 1.0)
        if head == "median" and len(args) <= 1:
            return QuantileLine(0.5, float(args[0]) if args else 1.0)
        if head == "quantile" and len(args) == 2:
            return QuantileLine(float(args[0]), float(args[1]))
    except ValueError as exc:
        raise DomainError(f"bad poverty line {text!r}: {exc}; expected {LINE_GRAMMAR}") from exc
    raise DomainError(f"unknown poverty line {text!r}; expected {LINE_GRAMMAR}")
