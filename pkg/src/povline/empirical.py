"""Income samples: order statistics, empirical CDF, quantiles and a KDE."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DomainError, ValidationError

__all__ = ["Sample", "silverman_bandwidth", "kde_density"]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class Sample:
    """Sorted, validated incomes ``Y_{1,n} <= ... <= Y_{n,n}``.

    Build with :meth:`from_values`; the stored array is read-only.
    """

    values: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValidationError("a sample needs at least one income")
        if np.any(np.diff(v) < 0):
            raise ValidationError("Sample values must be sorted; use Sample.from_values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", int(v.size))

    @classmethod
    def from_values(cls, raw) -> "Sample":
        """Validate and sort raw incomes.

        Raises
        ------
        ValidationError
            On empty input or the first non-finite / non-positive entry,
            whose row index is named in the message.
        """
        arr = np.asarray(raw, dtype=float).ravel()
        if arr.size == 0:
            raise ValidationError("empty income sample")
        bad = ~np.isfinite(arr) | (arr <= 0)
        if bad.any():
            i = int(np.argmax(bad))
            raise ValidationError(
                f"row {i}: income must be finite and positive, got {arr[i]!r}"
            )
        return cls(np.sort(arr, kind="stable"))

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Sample(n={self.n}, min={self.values[0]:g}, max={self.values[-1]:g})"

    def scaled(self, c: float) -> "Sample":
        return Sample(self.values * float(c))

    def count_le(self, y) -> np.ndarray | int:
        """Number of incomes ``<= y`` (ties counted with multiplicity)."""
        r = np.searchsorted(self.values, y, side="right")
        return int(r) if np.ndim(r) == 0 else r

    def ecdf(self, y):
        """Right-continuous empirical CDF ``G_n(y)``."""
        c = self.count_le(y)
        return c / self.n

    def quantile(self, p: float) -> float:
        """Left-continuous inverse ``G_n^{-1}(p) = Y_{ceil(np), n}``.

        The rank is the smallest ``j`` with ``j / n >= p``, computed so that
        floating-point noise in ``n * p`` cannot bump it by one.
        """
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile level must lie in (0, 1), got {p}")
        j = math.ceil(self.n * p)
        while j > 1 and (j - 1) / self.n >= p:
            j -= 1
        while j < self.n and j / self.n < p:
            j += 1
        return float(self.values[j - 1])

    def mean(self) -> float:
        return float(self.values.mean())


def silverman_bandwidth(s: Sample) -> float:
    """Rule-of-thumb ``1.06 * min(sd, IQR / 1.34) * n^(-1/5)``.

    ``sd`` uses ``ddof=1``; the quartiles follow :meth:`Sample.quantile`.
    A zero IQR (heavy ties) falls back to ``sd``.
    """
    if s.n < 2:
        raise DegenerateError("bandwidth needs at least two observations")
    sd = float(np.std(s.values, ddof=1))
    iqr = s.quantile(0.75) - s.quantile(0.25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    if not spread > 0:
        raise DegenerateError("all incomes are equal; density bandwidth is zero")
    return 1.06 * spread * s.n ** -0.2


def kde_density(s: Sample, y, h: float):
    """Gaussian-kernel density estimate ``(1/nh) sum phi((y - Y_j) / h)``."""
    if not h > 0:
        raise DomainError(f"bandwidth must be positive, got {h}")
    y = np.asarray(y, dtype=float)
    t = (y[..., None] - s.values) / h
    dens = np.exp(-0.5 * t * t).sum(axis=-1) / (s.n * h * _SQRT_2PI)
    return dens.item() if dens.ndim == 0 else dens
