"""Index sets of the spherical Lissajous nodes and their coordinates.

For ``m = (m1, m2)`` with ``m2`` even the index set ``I`` consists of the pairs
``(i1, i2)`` with ``0 <= i1 <= m1``, ``0 <= i2 < 2 m2``, ``i1 + i2`` even and
``i2 < m2`` whenever ``i1`` is ``0`` or ``m1``.  An index is mapped to the
spherical angles ``theta = i1 pi / m1``, ``phi = i2 pi / m2``.  All indices with
``i1 = 0`` (resp. ``m1``) describe the north (resp. south) pole; the reduced set
``I_S`` keeps a single representative (``i2 in {0, 1}``) for each pole.

All arrays exported here use the lexicographic ``(i1, i2)`` ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .curve import CurveParams, as_pair, eval_curve, sample_times


@dataclass(frozen=True)
class NodeIndex:
    i1: int
    i2: int

    @property
    def parity(self) -> int:
        """0 for ``I_0`` (both even), 1 for ``I_1`` (both odd)."""
        return self.i1 % 2

    def __iter__(self):
        yield self.i1
        yield self.i2


@dataclass(frozen=True)
class SphericalPoint:
    theta: float
    phi: float


@dataclass(frozen=True)
class ClassDecomposition:
    l: int
    rho: int
    v: int
    i: NodeIndex


def in_index_set(m, i1: int, i2: int) -> bool:
    m1, m2 = m
    if not (0 <= i1 <= m1 and 0 <= i2 < 2 * m2):
        return False
    if (i1 + i2) % 2:
        return False
    return not (i1 in (0, m1) and i2 >= m2)


class IndexSet:
    """The index set ``I^(m)`` with parity classes and the ``I_S`` flag."""

    def __init__(self, m):
        self.m = as_pair(m, even=True)
        m1, m2 = self.m
        i1, i2 = np.meshgrid(np.arange(m1 + 1), np.arange(2 * m2), indexing="ij")
        i1, i2 = i1.ravel(), i2.ravel()
        keep = ((i1 + i2) % 2 == 0) & ~(((i1 == 0) | (i1 == m1)) & (i2 >= m2))
        self.i1 = i1[keep]
        self.i2 = i2[keep]
        self.parity = self.i1 % 2
        pole = (self.i1 == 0) | (self.i1 == m1)
        self.in_IS = ~pole | (self.i2 <= 1)
        self._position = {(int(a), int(b)): k for k, (a, b) in enumerate(zip(self.i1, self.i2))}

    def __len__(self):
        return len(self.i1)

    def __iter__(self):
        for a, b in zip(self.i1, self.i2):
            yield NodeIndex(int(a), int(b))

    def __contains__(self, i):
        return tuple(int(v) for v in i) in self._position

    def position(self, i) -> int:
        """Position of index ``i`` in the canonical ordering."""
        key = tuple(int(v) for v in i)
        try:
            return self._position[key]
        except KeyError:
            raise KeyError(f"{key} is not in I^{tuple(self.m)}") from None

    @property
    def members(self) -> list[NodeIndex]:
        return list(self)

    @property
    def reduced_positions(self) -> np.ndarray:
        """Positions of the members of ``I_S``."""
        return np.flatnonzero(self.in_IS)

    @property
    def class0(self) -> np.ndarray:
        return np.flatnonzero(self.parity == 0)

    @property
    def class1(self) -> np.ndarray:
        return np.flatnonzero(self.parity == 1)

    @cached_property
    def theta(self) -> np.ndarray:
        return self.i1 * np.pi / self.m.m1

    @cached_property
    def phi(self) -> np.ndarray:
        return self.i2 * np.pi / self.m.m2

    @cached_property
    def points(self) -> np.ndarray:
        """Cartesian node points, shape ``(len(self), 3)``."""
        x = spherical_to_cartesian(self.theta, self.phi)
        x[self.i1 == 0] = (0.0, 0.0, 1.0)
        x[self.i1 == self.m.m1] = (0.0, 0.0, -1.0)
        return x

    def pole_mask(self) -> np.ndarray:
        return (self.i1 == 0) | (self.i1 == self.m.m1)


_INDEX_CACHE: dict = {}


def build_index_set(m) -> IndexSet:
    m = as_pair(m, even=True)
    if m not in _INDEX_CACHE:
        _INDEX_CACHE[m] = IndexSet(m)
    return _INDEX_CACHE[m]


def spherical_to_cartesian(theta, phi) -> np.ndarray:
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def cartesian_to_spherical(x):
    """``(theta, phi)`` of points ``x`` (last axis of length 3) with ``phi in [0, 2pi)``."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    theta = np.arccos(np.clip(x[..., 2] / r, -1.0, 1.0))
    phi = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2 * np.pi)
    return theta, phi


def node_point(m, i):
    """Spherical and Cartesian coordinates of the node with index ``i``."""
    m = as_pair(m, even=True)
    i1, i2 = i
    if not in_index_set(m, i1, i2):
        raise ValueError(f"{(i1, i2)} is not in I^{tuple(m)}")
    theta = i1 * np.pi / m.m1
    phi = i2 * np.pi / m.m2
    x = spherical_to_cartesian(theta, phi)
    # exact poles: sin(pi) is not exactly zero in floating point
    if i1 == 0:
        x = np.array([0.0, 0.0, 1.0])
    elif i1 == m.m1:
        x = np.array([0.0, 0.0, -1.0])
    return SphericalPoint(theta, phi), x


def class_map(m, l: int, rho: int) -> ClassDecomposition:
    """The unique ``(i, v)`` with ``i1 = v l (mod 2 m1)`` and
    ``i2 = l - 2 rho m2/g - (1 - v)/2 m2 (mod 2 m2)``."""
    m = as_pair(m, even=True)
    m1, m2, g = m.m1, m.m2, m.g
    if not 0 <= l < 2 * m1 * m2 // g:
        raise ValueError(f"l={l} outside H^{tuple(m)} = [0, {2 * m1 * m2 // g})")
    if not 0 <= rho < g:
        raise ValueError(f"rho={rho} outside R^{tuple(m)} = [0, {g})")
    for v in (1, -1):
        i1 = (v * l) % (2 * m1)
        i2 = (l - 2 * rho * (m2 // g) - (1 - v) // 2 * m2) % (2 * m2)
        if in_index_set(m, i1, i2):
            return ClassDecomposition(l, rho, v, NodeIndex(i1, i2))
    raise AssertionError("no admissible (i, v); m2 must be even")  # pragma: no cover


def curve_cover(m) -> dict:
    """Map ``(rho, l) -> NodeIndex`` realising the nodes as curve samples.

    The curve point ``l_{2 rho/m2}(t_l)`` has ``theta = l pi/m1`` folded into
    ``[0, pi]`` (sign ``v``) and ``phi = (l - 2 rho) pi/m2``, shifted by ``pi`` when
    ``v = -1``; the index is computed with integer arithmetic.  Note that the
    ``rho`` labels differ from those of ``class_map`` unless ``g = m2``.
    """
    m = as_pair(m, even=True)
    m1, m2 = m
    n_l = 2 * m1 * m2 // m.g
    out = {}
    for rho in range(m.g):
        for l in range(n_l):
            r = l % (2 * m1)
            v = 1 if r <= m1 else -1
            i1 = r if v == 1 else 2 * m1 - r
            i2 = (l - 2 * rho - (1 - v) // 2 * m2) % (2 * m2)
            if i1 in (0, m1):
                i2 %= m2
            out[(rho, l)] = NodeIndex(i1, i2)
    return out


def cover_points(m) -> np.ndarray:
    """Curve samples ``l_{2 rho/m2}(t_l)`` for all ``(rho, l)``, shape ``(g * n_l, 3)``."""
    m = as_pair(m, even=True)
    n_l = 2 * m.m1 * m.m2 // m.g
    t = sample_times(m)[:n_l]
    return np.concatenate([
        eval_curve(CurveParams(m, 2 * rho / m.m2), t) for rho in range(m.g)
    ])
