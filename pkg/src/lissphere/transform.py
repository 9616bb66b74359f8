"""Forward and inverse transforms between node data and spectral coefficients.

Coefficients of every flavour live in one dense array of shape
``(m1 + 1, 2 m2 + 1)`` indexed by ``[gamma1, gamma2 + m2]``; entries outside
the relevant spectral set are zero.

Forward transform: extend the data to the group ``Z/2m1 x Z/2m2`` using the
flip ``i* = (-i1 mod 2m1, i2 + m2 mod 2m2)``, take one 2-D FFT ``ghat``, then
read off ``c_gamma = ghat(gamma) / ||chi_gamma||^2``.  The inverse places the
coefficients (and their mirrored copies at ``2 m1 - gamma1``) on the group and
applies one inverse FFT.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .curve import FrequencyPair, as_pair
from .nodes import build_index_set
from .spectral import (
    EXCLUDE_U,
    LOWER,
    UPPER,
    build_spectral_set,
    chi,
    chi_norm_sq_array,
    chi_real_norm_sq_array,
    real_uses_real_part,
)

COMPLEX, REAL, AVERAGED = "complex", "real", "averaged"
FLAVORS = (COMPLEX, REAL, AVERAGED)

_CHUNK = 65536


def _workers():
    n = os.environ.get("LISSPHERE_THREADS")
    return int(n) if n else None


@dataclass
class NodeData:
    """Data values on ``I^(m)`` in canonical (lexicographic) order."""

    m: FrequencyPair
    values: np.ndarray

    def __post_init__(self):
        self.m = as_pair(self.m, even=True)
        self.values = np.asarray(self.values)
        n = self.m.m1 * self.m.m2
        if self.values.shape != (n,):
            raise ValueError(f"node data for m = {tuple(self.m)} needs {n} values, got shape {self.values.shape}")

    @property
    def pole_consistent(self) -> bool:
        """True if the data is constant over each pole (i.e. lies in ``L_S``)."""
        idx = build_index_set(self.m)
        for i1 in (0, self.m.m1):
            v = self.values[idx.i1 == i1]
            if np.any(np.abs(v - v[0]) > 1e-13 * max(1.0, abs(v[0]))):
                return False
        return True

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values) or not np.any(self.values.imag)

    def reduced(self) -> np.ndarray:
        """Values on ``I_S`` (one value per node point)."""
        return self.values[build_index_set(self.m).in_IS]

    @classmethod
    def from_function(cls, m, sampler) -> "NodeData":
        """Sample ``sampler(theta, phi)`` at the node coordinates."""
        idx = build_index_set(m)
        return cls(idx.m, np.asarray(sampler(idx.theta, idx.phi)))

    @classmethod
    def from_cartesian(cls, m, fn) -> "NodeData":
        """Sample ``fn(x)`` (``x`` of shape ``(n, 3)``) at the Cartesian node points."""
        idx = build_index_set(m)
        return cls(idx.m, np.asarray(fn(idx.points)))

    @classmethod
    def from_reduced(cls, m, values) -> "NodeData":
        """Expand values given on ``I_S`` to ``I`` by copying the pole values."""
        idx = build_index_set(m)
        values = np.asarray(values)
        if values.shape != (int(idx.in_IS.sum()),):
            raise ValueError(f"expected {int(idx.in_IS.sum())} values on I_S, got shape {values.shape}")
        out = np.zeros(len(idx), dtype=values.dtype)
        out[idx.in_IS] = values
        for i1 in (0, idx.m.m1):
            rows = idx.i1 == i1
            out[rows] = values[np.flatnonzero(rows[idx.in_IS])[0]]
        return cls(idx.m, out)


@dataclass
class Interpolant:
    """Spectral coefficients of an interpolant, evaluable anywhere on the sphere."""

    m: FrequencyPair
    flavor: str
    coeffs: np.ndarray
    variant: str = EXCLUDE_U
    pole_warning: bool = False
    _complex: np.ndarray = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.m = as_pair(self.m, even=True)
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}, got {self.flavor!r}")
        shape = (self.m.m1 + 1, 2 * self.m.m2 + 1)
        self.coeffs = np.asarray(self.coeffs)
        if self.coeffs.shape != shape:
            raise ValueError(f"coefficient array must have shape {shape}, got {self.coeffs.shape}")

    def coefficient(self, gamma):
        g1, g2 = gamma
        return self.coeffs[g1, g2 + self.m.m2]

    def complex_coefficients(self) -> np.ndarray:
        """Coefficients with respect to the complex basis ``X_gamma``.

        For the real flavour ``Re X = (X + conj X)/2`` and
        ``conj X_(g1,g2) = (-1)^g2 X_(g1,-g2)`` spread each coefficient over
        ``gamma`` and its mirror ``(g1, -g2)``.
        """
        if self._complex is not None:
            return self._complex
        if self.flavor != REAL:
            out = self.coeffs.astype(complex)
        else:
            m1, m2 = self.m
            a, b = np.nonzero(self.coeffs)
            g2 = b - m2
            c = self.coeffs[a, b]
            sign = np.where(g2 % 2, -1.0, 1.0)
            use_re = real_uses_real_part(self.m, a, g2)
            here = np.where(use_re, c / 2, c / 2j)
            there = np.where(use_re, sign * c / 2, -sign * c / 2j)
            out = np.zeros(self.coeffs.shape, dtype=complex)
            np.add.at(out, (a, b), here)
            np.add.at(out, (a, m2 - g2), there)
        self._complex = out
        return out

    # ------------------------------------------------------------ evaluation
    def _tables(self, theta):
        a = np.arange(self.m.m1 + 1)
        arg = np.multiply.outer(theta, a)
        return np.cos(arg), np.sin(arg), a

    def _split(self):
        C = self.complex_coefficients()
        g2 = np.arange(-self.m.m2, self.m.m2 + 1)
        odd = (g2 % 2 == 1)
        Ce = np.where(odd[None, :], 0, C)
        Co = np.where(odd[None, :], C, 0)
        return Ce, Co, g2

    def _finish(self, value):
        return value.real if self.flavor == REAL else value

    def evaluate(self, theta, phi):
        """``sum_gamma c_gamma X_gamma(theta, phi)``, broadcasting ``theta`` and ``phi``."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        shape = theta.shape
        theta, phi = theta.ravel(), phi.ravel()
        Ce, Co, g2 = self._split()
        out = np.empty(theta.size, dtype=complex)
        for s in range(0, theta.size, _CHUNK):
            t, p = theta[s:s + _CHUNK], phi[s:s + _CHUNK]
            cosT, sinT, _ = self._tables(t)
            E = np.exp(1j * np.multiply.outer(p, g2))
            out[s:s + _CHUNK] = np.sum((cosT @ Ce + 1j * (sinT @ Co)) * E, axis=1)
        return self._finish(out.reshape(shape))

    def evaluate_grid(self, thetas, phis):
        """Values on the tensor grid ``thetas x phis``, shape ``(len(thetas), len(phis))``."""
        thetas = np.asarray(thetas, float)
        phis = np.asarray(phis, float)
        Ce, Co, g2 = self._split()
        cosT, sinT, _ = self._tables(thetas)
        E = np.exp(1j * np.multiply.outer(g2, phis))
        return self._finish((cosT @ Ce + 1j * (sinT @ Co)) @ E)

    def gradient(self, theta, phi):
        """Partial derivatives ``(dP/dtheta, dP/dphi)`` at the given points."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        shape = theta.shape
        theta, phi = theta.ravel(), phi.ravel()
        Ce, Co, g2 = self._split()
        cosT, sinT, a = self._tables(theta)
        E = np.exp(1j * np.multiply.outer(phi, g2))
        radial = cosT @ Ce + 1j * (sinT @ Co)
        d_radial = (-sinT * a) @ Ce + 1j * ((cosT * a) @ Co)
        dtheta = np.sum(d_radial * E, axis=1)
        dphi = np.sum(radial * (1j * g2) * E, axis=1)
        return self._finish(dtheta.reshape(shape)), self._finish(dphi.reshape(shape))

    def __call__(self, theta, phi):
        return self.evaluate(theta, phi)

    # ---------------------------------------------------------- serialisation
    def entries(self):
        """Nonzero coefficients as ``(g1, g2, value)`` triples in lexicographic order."""
        a, b = np.nonzero(self.coeffs)
        return [(int(x), int(y) - self.m.m2, self.coeffs[x, y]) for x, y in zip(a, b)]

    def to_dict(self) -> dict:
        return {
            "m": [self.m.m1, self.m.m2],
            "flavor": self.flavor,
            "variant": self.variant,
            "entries": [
                {"g1": g1, "g2": g2, "re": float(np.real(v)), "im": float(np.imag(v))}
                for g1, g2, v in self.entries()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Interpolant":
        m = as_pair(data["m"], even=True)
        flavor = data["flavor"]
        dtype = float if flavor == REAL else complex
        C = np.zeros((m.m1 + 1, 2 * m.m2 + 1), dtype=dtype)
        for e in data["entries"]:
            g1, g2 = int(e["g1"]), int(e["g2"])
            if not (0 <= g1 <= m.m1 and abs(g2) <= m.m2):
                raise ValueError(f"coefficient index {(g1, g2)} outside the range of m = {tuple(m)}")
            v = e["re"] + 1j * e.get("im", 0.0)
            C[g1, g2 + m.m2] = v.real if flavor == REAL else v
        return cls(m, flavor, C, data.get("variant", EXCLUDE_U))


def _as_node_data(f, m=None) -> NodeData:
    if isinstance(f, NodeData):
        return f
    if m is None:
        raise TypeError("raw value arrays need the frequency pair m")
    return NodeData(m, f)


def extend_to_group(f: NodeData) -> np.ndarray:
    """The flip-symmetric extension ``g`` of ``f`` to the grid ``2 m1 x 2 m2``."""
    m1, m2 = f.m
    idx = build_index_set(f.m)
    g = np.zeros((2 * m1, 2 * m2), dtype=np.result_type(f.values.dtype, float))
    w = f.values / (2 * m1 * m2)
    g[idx.i1, idx.i2] = w
    g[(2 * m1 - idx.i1) % (2 * m1), (idx.i2 + m2) % (2 * m2)] = w
    return g


def group_spectrum(f: NodeData) -> np.ndarray:
    """``ghat(gamma) = sum_j g(j) exp(-1j (gamma1 j1 pi/m1 + gamma2 j2 pi/m2))``."""
    return scipy.fft.fft2(extend_to_group(f), workers=_workers())


def forward(f, flavor: str = COMPLEX, variant: str = EXCLUDE_U, m=None) -> Interpolant:
    """Interpolant of the node data ``f`` (``NodeData`` or raw values plus ``m``)."""
    f = _as_node_data(f, m)
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    m = f.m
    m1, m2 = m
    ghat = group_spectrum(f)
    S = build_spectral_set(m, variant)
    warn = not f.pole_consistent

    if flavor == REAL:
        if variant != EXCLUDE_U:
            raise ValueError("the real basis is defined for variant 'excludeU' only")
        if not f.is_real:
            raise ValueError("real flavor needs real-valued data")
        g1, g2 = S.gamma
        gh = ghat[g1, g2 % (2 * m2)]
        val = np.where(real_uses_real_part(m, g1, g2), gh.real, -gh.imag)
        C = np.zeros((m1 + 1, 2 * m2 + 1))
        C[g1, g2 + m2] = val / chi_real_norm_sq_array(m, g1, g2)
        return Interpolant(m, REAL, C, variant, warn)

    if flavor == COMPLEX:
        g1, g2 = S.gamma
        keep = np.ones(len(g1), bool)
    else:
        g1, g2 = S.g1, S.g2
        keep = ~(S.mask(UPPER) | S.mask(LOWER))
    C = np.zeros((m1 + 1, 2 * m2 + 1), dtype=complex)
    c = ghat[g1, g2 % (2 * m2)] / chi_norm_sq_array(m, g1)
    C[g1, g2 + m2] = np.where(keep, c, c / 2)
    return Interpolant(m, flavor, C, variant, warn)


def inverse(p: Interpolant) -> NodeData:
    """Node values ``sum_gamma c_gamma chi_gamma(i)`` via one inverse 2-D FFT."""
    m1, m2 = p.m
    C = p.complex_coefficients()
    a, b = np.nonzero(C)
    g2 = b - m2
    c = C[a, b]
    col = g2 % (2 * m2)
    h = np.zeros((2 * m1, 2 * m2), dtype=complex)
    edge = (a == 0) | (a == m1)
    # chi vanishes on I for gamma1 in {0, m1} with odd gamma2
    ok = edge & (g2 % 2 == 0)
    np.add.at(h, (a[ok], col[ok]), c[ok])
    inner = ~edge
    np.add.at(h, (a[inner], col[inner]), c[inner] / 2)
    sign = np.where(g2[inner] % 2, -1.0, 1.0)
    np.add.at(h, ((2 * m1 - a[inner]) % (2 * m1), col[inner]), sign * c[inner] / 2)
    full = scipy.fft.ifft2(h, workers=_workers()) * (4 * m1 * m2)
    idx = build_index_set(p.m)
    values = full[idx.i1, idx.i2]
    if p.flavor == REAL:
        values = values.real
    return NodeData(p.m, values)


def forward_direct(f, flavor: str = COMPLEX, variant: str = EXCLUDE_U, m=None) -> Interpolant:
    """Coefficients by direct O((m1 m2)^2) summation of ``<f, chi_gamma> / ||chi_gamma||^2``."""
    f = _as_node_data(f, m)
    m = f.m
    m1, m2 = m
    idx = build_index_set(m)
    S = build_spectral_set(m, variant)
    g1, g2 = (S.g1, S.g2) if flavor == AVERAGED else S.gamma
    X = chi(m, (g1[None, :], g2[None, :]), (idx.i1[:, None], idx.i2[:, None]))
    n = m1 * m2
    if flavor == REAL:
        Xr = np.where(real_uses_real_part(m, g1, g2)[None, :], X.real, X.imag)
        c = (f.values @ Xr) / n / chi_real_norm_sq_array(m, g1, g2)
        C = np.zeros((m1 + 1, 2 * m2 + 1))
    else:
        c = (f.values @ X.conj()) / n / chi_norm_sq_array(m, g1)
        if flavor == AVERAGED:
            halve = (S.cls == UPPER) | (S.cls == LOWER)
            c = np.where(halve, c / 2, c)
        C = np.zeros((m1 + 1, 2 * m2 + 1), dtype=complex)
    C[g1, g2 + m2] = c
    return Interpolant(m, flavor, C, variant, not f.pole_consistent)


# -------------------------------------------------------------- Lagrange basis

def lagrange_coefficients(m, variant: str = EXCLUDE_U) -> np.ndarray:
    """Coefficients of all Lagrange functions, shape ``(#I, m1 + 1, 2 m2 + 1)``.

    ``L_i = (1/(m1 m2)) sum_{gamma in Gamma} conj(chi_gamma(i)) / ||chi_gamma||^2 X_gamma``.
    """
    m = as_pair(m, even=True)
    m1, m2 = m
    idx = build_index_set(m)
    g1, g2 = build_spectral_set(m, variant).gamma
    X = chi(m, (g1[None, :], g2[None, :]), (idx.i1[:, None], idx.i2[:, None]))
    out = np.zeros((len(idx), m1 + 1, 2 * m2 + 1), dtype=complex)
    out[:, g1, g2 + m2] = X.conj() / chi_norm_sq_array(m, g1)[None, :] / (m1 * m2)
    return out


def _lagrange_interpolant(m, i, variant, reduced):
    m = as_pair(m, even=True)
    idx = build_index_set(m)
    pos = idx.position(i)
    if reduced and not idx.in_IS[pos]:
        raise ValueError(f"{tuple(i)} is not in I_S^{tuple(m)}")
    coeffs = lagrange_coefficients(m, variant)
    if reduced and idx.pole_mask()[pos]:
        C = coeffs[idx.i1 == idx.i1[pos]].sum(axis=0)
    else:
        C = coeffs[pos]
    return Interpolant(m, COMPLEX, C, variant)


def lagrange(m, i, theta, phi, variant: str = EXCLUDE_U):
    """Lagrange function ``L_i`` for ``i in I`` evaluated at ``(theta, phi)``."""
    return _lagrange_interpolant(m, i, variant, reduced=False).evaluate(theta, phi)


def lagrange_S(m, i, theta, phi, variant: str = EXCLUDE_U):
    """Reduced Lagrange function for ``i in I_S`` (pole duplicates summed)."""
    return _lagrange_interpolant(m, i, variant, reduced=True).evaluate(theta, phi)


def interpolate_samples(sampler, m, flavor: str = COMPLEX, variant: str = EXCLUDE_U) -> Interpolant:
    """Sample ``sampler(theta, phi)`` at the nodes and interpolate."""
    return forward(NodeData.from_function(m, sampler), flavor, variant)
