"""Spherical Lissajous curves, their sampling times and self-intersections.

The curve with frequencies ``m = (m1, m2)`` and rotation parameter ``alpha``
(in units of pi) is

    l(t) = (sin(m2 t) cos(m1 t - alpha pi),
            sin(m2 t) sin(m1 t - alpha pi),
            cos(m2 t)).

For non-coprime frequencies the curve is a reparametrisation of the reduced
curve, ``l^(m)(t) = l^(m/g)(g t)`` with ``g = gcd(m1, m2)``; every function in
this module that needs coprime frequencies performs that reduction itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FrequencyPair:
    """Frequency vector ``(m1, m2)`` of a spherical Lissajous curve."""

    m1: int
    m2: int
    g: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("m1", "m2"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        object.__setattr__(self, "g", math.gcd(self.m1, self.m2))

    @property
    def reduced(self) -> "FrequencyPair":
        return FrequencyPair(self.m1 // self.g, self.m2 // self.g)

    @property
    def is_coprime(self) -> bool:
        return self.g == 1

    def require_even(self) -> "FrequencyPair":
        """Return ``self``, raising ``ValueError`` if ``m2`` is odd.

        The node sets, spectral sets and transforms are only defined for
        even ``m2``.
        """
        if self.m2 % 2:
            raise ValueError(f"m2 must be even for interpolation, got m = ({self.m1}, {self.m2})")
        return self

    def __iter__(self):
        yield self.m1
        yield self.m2


def as_pair(m, even: bool = False) -> FrequencyPair:
    """Coerce a ``FrequencyPair`` or a 2-sequence of ints to ``FrequencyPair``."""
    if not isinstance(m, FrequencyPair):
        m1, m2 = m
        m = FrequencyPair(m1, m2)
    if even:
        m.require_even()
    return m


@dataclass(frozen=True)
class CurveParams:
    m: FrequencyPair
    alpha: float = 0.0  # units of pi

    def __post_init__(self):
        object.__setattr__(self, "m", as_pair(self.m))


@dataclass(frozen=True)
class IntersectionSummary:
    pole_count: int
    pole_traversals: int
    double_point_count: int
    total: int


def eval_curve(p: CurveParams, t):
    """Points of the curve at time(s) ``t``; returns shape ``t.shape + (3,)``."""
    t = np.asarray(t, dtype=float)
    m1, m2 = p.m
    s = np.sin(m2 * t)
    arg = m1 * t - p.alpha * np.pi
    return np.stack([s * np.cos(arg), s * np.sin(arg), np.cos(m2 * t)], axis=-1)


def sample_times(m, shifted: bool = False) -> np.ndarray:
    """The ``2 m1 m2`` equidistant times ``l pi / (m1 m2)`` (or ``(l + 1/2) pi / (m1 m2)``)."""
    m = as_pair(m)
    n = m.m1 * m.m2
    l = np.arange(2 * n, dtype=float)
    if shifted:
        l += 0.5
    return l * np.pi / n


def _grid_position(n: int, t: float, tol: float):
    # Position of t on the grid pi/n * Z, reduced mod 2n. Returns (k, half)
    # where the snapped time is (k + half/2) pi / n, or None when off-grid.
    t = math.fmod(t, 2 * math.pi)
    if t < 0:
        t += 2 * math.pi
    x = 2 * t * n / math.pi
    k2 = round(x)
    if abs(x - k2) * math.pi / (2 * n) >= tol:
        return None
    k2 %= 4 * n
    return k2 // 2, k2 % 2


def classify_time(m, t: float, tol: float = 1e-9) -> int:
    """Multiplicity ``#{s in [0, 2pi): l(s) = l(t)}`` of the reduced curve.

    ``t`` is snapped to the sampling grid when it lies within ``tol`` of a
    grid time; the result is ``m2`` at pole times, ``2`` at double-point
    times and ``1`` otherwise (all for the coprime reduction ``m / g``, at the
    rescaled time ``g t``).
    """
    m = as_pair(m)
    r = m.reduced
    n = r.m1 * r.m2
    pos = _grid_position(n, m.g * float(t), tol * m.g)
    if pos is None:
        return 1
    l, half = pos
    if not half and l % r.m1 == 0:
        return r.m2
    if r.m2 % 2 == 0:
        return 1 if half else 2
    return 2 if half else 1


def intersection_summary(m) -> IntersectionSummary:
    """Number and type of self-intersection points of the (reduced) curve."""
    r = as_pair(m).reduced
    m1, m2 = r
    if m2 % 2 == 0:
        double = m2 * (m1 - 1)
        return IntersectionSummary(2, m2, double, double + 2)
    if m2 > 1:
        return IntersectionSummary(2, m2, m1 * m2, m1 * m2 + 2)
    return IntersectionSummary(0, 0, m1, m1)
