"""Per-(sample, measure, line) arrays shared by estimators and variances."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .empirical import Sample
from .measures import Measure


class PoorSet:
    """The ``q`` poor observations ``Y_{i,n} <= z`` with rank ``u_i = i/n``.

    ``w``, ``f`` and the rank derivatives ``A = (dw/du) f``, ``B = (dw/dv) f``
    are evaluated at ``(i/n, q/n)`` and ``(Y_{i,n}, z)``.
    """

    def __init__(self, s: Sample, m: Measure, z: float):
        self.sample = s
        self.measure = m
        self.z = float(z)
        self.n = s.n
        self.q = s.count_le(self.z)
        self.v = self.q / self.n
        self.y = s.values[: self.q]
        self.u = np.arange(1, self.q + 1) / self.n

    @cached_property
    def w(self) -> np.ndarray:
        if self.q == 0:
            return np.zeros(0)
        return np.asarray(self.measure.weight(self.u, self.v), dtype=float)

    @cached_property
    def f(self) -> np.ndarray:
        if self.q == 0:
            return np.zeros(0)
        return np.asarray(self.measure.deprivation(self.y, self.z), dtype=float)

    @cached_property
    def h(self) -> np.ndarray:
        """``w f`` on the poor set (length ``q``)."""
        return self.w * self.f

    @cached_property
    def h_full(self) -> np.ndarray:
        """``h(Y_{j,n})`` for all ``n`` order statistics, zero above ``z``."""
        out = np.zeros(self.n)
        out[: self.q] = self.h
        return out

    @cached_property
    def A(self) -> np.ndarray:
        if self.q == 0:
            return np.zeros(0)
        return np.asarray(self.measure.weight_du(self.u, self.v), dtype=float) * self.f

    @cached_property
    def B(self) -> np.ndarray:
        if self.q == 0:
            return np.zeros(0)
        return np.asarray(self.measure.weight_dv(self.u, self.v), dtype=float) * self.f

    @cached_property
    def index(self) -> float:
        return float(self.h.sum() / self.n)
