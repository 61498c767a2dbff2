"""Weighting and deprivation functions of rank-weighted poverty indices.

A poverty index is the functional

    J(w, f) = int_0^z w[G(y), G(z)] f(y, z) dG(y)

where ``w(u, v)`` weights a poor individual of rank ``u`` when the poor
fraction is ``v`` and ``f(y, z)`` is the individual deprivation. Every
measure exposes ``w``, ``f`` and their four first-order partials, which the
variance formulas consume directly.

All evaluation methods accept scalars or numpy arrays and broadcast.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "Family",
    "Measure",
    "MeasureSpec",
    "CustomMeasure",
    "fgt",
    "sen",
    "shorrocks",
    "kakwani",
    "watts",
    "parse_measure",
    "register_measure",
    "MEASURE_GRAMMAR",
]

MEASURE_GRAMMAR = "fgt:<alpha> | sen | shorrocks | kakwani:<k> | watts"


class Family(enum.Enum):
    FGT = "fgt"
    SEN = "sen"
    SHORROCKS = "shorrocks"
    KAKWANI = "kakwani"
    WATTS = "watts"


def _out(x):
    # scalars in, scalars out
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


class Measure:
    """Interface shared by catalog and user-defined measures."""

    label = "measure"

    def weight(self, u, v):
        raise NotImplementedError

    def weight_du(self, u, v):
        raise NotImplementedError

    def weight_dv(self, u, v):
        raise NotImplementedError

    def deprivation(self, y, z):
        raise NotImplementedError

    def deprivation_dy(self, y, z):
        raise NotImplementedError

    def deprivation_dz(self, y, z):
        raise NotImplementedError

    @property
    def rank_free(self) -> bool:
        """True when ``w`` is constant, so every rank term vanishes."""
        return False

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class MeasureSpec(Measure):
    """A member of the built-in catalog.

    Parameters
    ----------
    family : Family
    alpha : float
        FGT poverty-aversion exponent, ``alpha >= 0``. ``alpha = 0`` is the
        headcount ratio, for which ``f == 1`` and the deprivation
        derivatives are taken to be zero.
    k_order : float
        Kakwani order, ``k_order >= 1``. ``k_order = 1`` gives the Sen
        weight.
    """

    family: Family
    alpha: float = 0.0
    k_order: float = 1.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "k_order", float(self.k_order))
        if fam is Family.FGT and not (self.alpha >= 0 and np.isfinite(self.alpha)):
            raise DomainError(f"FGT requires alpha >= 0, got {self.alpha}")
        if fam is Family.KAKWANI and not (self.k_order >= 1 and np.isfinite(self.k_order)):
            raise DomainError(f"Kakwani requires k >= 1, got {self.k_order}")

    @property
    def label(self) -> str:
        if self.family is Family.FGT:
            return f"fgt:{self.alpha:g}"
        if self.family is Family.KAKWANI:
            return f"kakwani:{self.k_order:g}"
        return self.family.value

    @property
    def rank_free(self) -> bool:
        return self.family in (Family.FGT, Family.WATTS)

    # -- weighting function -------------------------------------------------

    def _uv(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if np.any(u < 0) or np.any(u > 1) or np.any(v < 0) or np.any(v > 1):
            raise DomainError("weight arguments must lie in [0, 1]")
        if self.family in (Family.SEN, Family.KAKWANI):
            if np.any(v <= 0):
                raise DomainError(f"{self.label}: weight needs v > 0")
            if np.any(u > v):
                raise DomainError(f"{self.label}: weight needs u <= v")
        return u, v

    def weight(self, u, v):
        u, v = self._uv(u, v)
        fam = self.family
        if fam is Family.SEN:
            r = 2.0 * (1.0 - u / v)
        elif fam is Family.SHORROCKS:
            r = 2.0 * (1.0 - u) + 0.0 * v
        elif fam is Family.KAKWANI:
            k = self.k_order
            r = (k + 1.0) * (1.0 - u / v) ** k
        else:
            r = np.ones(np.broadcast(u, v).shape)
        return _out(r)

    def weight_du(self, u, v):
        u, v = self._uv(u, v)
        fam = self.family
        if fam is Family.SEN:
            r = -2.0 / v + 0.0 * u
        elif fam is Family.SHORROCKS:
            r = np.full(np.broadcast(u, v).shape, -2.0)
        elif fam is Family.KAKWANI:
            k = self.k_order
            r = -k * (k + 1.0) * (1.0 - u / v) ** (k - 1.0) / v
        else:
            r = np.zeros(np.broadcast(u, v).shape)
        return _out(r)

    def weight_dv(self, u, v):
        u, v = self._uv(u, v)
        fam = self.family
        if fam is Family.SEN:
            r = 2.0 * u / v**2
        elif fam is Family.KAKWANI:
            k = self.k_order
            r = k * (k + 1.0) * (1.0 - u / v) ** (k - 1.0) * u / v**2
        else:
            # Shorrocks ignores the poor fraction
            r = np.zeros(np.broadcast(u, v).shape)
        return _out(r)

    # -- deprivation function -----------------------------------------------

    @staticmethod
    def _yz(y, z):
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(y <= 0) or np.any(z <= 0):
            raise DomainError("deprivation needs y > 0 and z > 0")
        return y, z

    def _power(self):
        if self.family is Family.FGT:
            return self.alpha
        if self.family is Family.KAKWANI:
            return self.k_order
        return 1.0

    def deprivation(self, y, z):
        y, z = self._yz(y, z)
        if self.family is Family.WATTS:
            r = np.log(z / y)
        else:
            p = self._power()
            if p == 0.0:
                r = np.ones(np.broadcast(y, z).shape)
            else:
                r = (1.0 - y / z) ** p
        return _out(r)

    def _dpow(self, y, z):
        # p (1 - y/z)^(p-1), raising where it diverges at y = z
        p = self._power()
        gap = 1.0 - y / z
        if p < 1.0 and np.any(gap == 0):
            raise DomainError(
                f"{self.label}: non-finite deprivation derivative at y = z"
            )
        return p * gap ** (p - 1.0)

    def deprivation_dy(self, y, z):
        y, z = self._yz(y, z)
        if self.family is Family.WATTS:
            r = -1.0 / y + 0.0 * z
        elif self._power() == 0.0:
            r = np.zeros(np.broadcast(y, z).shape)
        else:
            r = -self._dpow(y, z) / z
        return _out(r)

    def deprivation_dz(self, y, z):
        y, z = self._yz(y, z)
        if self.family is Family.WATTS:
            r = 1.0 / z + 0.0 * y
        elif self._power() == 0.0:
            r = np.zeros(np.broadcast(y, z).shape)
        else:
            r = self._dpow(y, z) * y / z**2
        return _out(r)


def fgt(alpha: float) -> MeasureSpec:
    return MeasureSpec(Family.FGT, alpha=alpha)


def sen() -> MeasureSpec:
    return MeasureSpec(Family.SEN)


def shorrocks() -> MeasureSpec:
    return MeasureSpec(Family.SHORROCKS)


def kakwani(k: float) -> MeasureSpec:
    return MeasureSpec(Family.KAKWANI, k_order=k)


def watts() -> MeasureSpec:
    return MeasureSpec(Family.WATTS)


class CustomMeasure(Measure):
    """User-supplied ``(w, f)`` pair.

    All six callables are required: the variance formulas use the analytic
    partials and there is no finite-difference fallback. Callables must
    accept numpy arrays and broadcast.
    """

    def __init__(
        self,
        name: str,
        weight: Callable,
        weight_du: Callable,
        weight_dv: Callable,
        deprivation: Callable,
        deprivation_dy: Callable,
        deprivation_dz: Callable,
        rank_free: bool = False,
    ):
        self.label = name
        self._w, self._wu, self._wv = weight, weight_du, weight_dv
        self._f, self._fy, self._fz = deprivation, deprivation_dy, deprivation_dz
        self._rank_free = rank_free

    @property
    def rank_free(self) -> bool:
        return self._rank_free

    @staticmethod
    def _call(fn, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return _out(np.broadcast_to(np.asarray(fn(a, b), dtype=float),
                                    np.broadcast(a, b).shape).copy())

    def weight(self, u, v):
        return self._call(self._w, u, v)

    def weight_du(self, u, v):
        return self._call(self._wu, u, v)

    def weight_dv(self, u, v):
        return self._call(self._wv, u, v)

    def deprivation(self, y, z):
        return self._call(self._f, y, z)

    def deprivation_dy(self, y, z):
        return self._call(self._fy, y, z)

    def deprivation_dz(self, y, z):
        return self._call(self._fz, y, z)

    def __repr__(self):
        return f"CustomMeasure({self.label!r})"


_REGISTRY: dict[str, Callable[..., Measure]] = {}


def register_measure(prefix: str, factory: Callable[..., Measure]) -> None:
    """Make ``prefix[:arg...]`` parseable by :func:`parse_measure`.

    ``factory`` receives the colon-separated arguments as strings.
    """
    prefix = prefix.lower()
    if prefix in ("fgt", "sen", "shorrocks", "kakwani", "watts"):
        raise ValueError(f"{prefix!r} is a built-in measure")
    _REGISTRY[prefix] = factory


def parse_measure(text: str) -> Measure:
    """Parse ``fgt:<alpha>``, ``sen``, ``shorrocks``, ``kakwani:<k>``, ``watts``."""
    head, *args = text.strip().lower().split(":")
    try:
        if head == "fgt" and len(args) == 1:
            return fgt(float(args[0]))
        if head == "kakwani" and len(args) == 1:
            return kakwani(float(args[0]))
        if head in ("sen", "shorrocks", "watts") and not args:
            return MeasureSpec(Family(head))
        if head in _REGISTRY:
            return _REGISTRY[head](*args)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad measure {text!r}: {exc}; expected {MEASURE_GRAMMAR}") from exc
    raise DomainError(f"unknown measure {text!r}; expected {MEASURE_GRAMMAR}")
