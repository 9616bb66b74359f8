"""Spectral index sets and the parity-modified double Fourier basis.

Discrete basis on the index set ``I``::

    chi_gamma(i) = cos(g1 i1 pi/m1) exp(1j g2 i2 pi/m2)        g2 even
                 = 1j sin(g1 i1 pi/m1) exp(1j g2 i2 pi/m2)     g2 odd

and its continuous counterpart ``X_gamma(theta, phi)`` obtained by replacing
``i1 pi/m1 -> theta`` and ``i2 pi/m2 -> phi``.

The full spectral set ``Gamma_bar`` holds ``m1 m2 + g - 1`` frequencies; the
upper (``U``) and lower (``D``) anti-diagonal classes each have ``g - 1``
members and removing one of them gives the unisolvent set ``Gamma`` of size
``m1 m2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import as_pair

EXCLUDE_U = "excludeU"
EXCLUDE_D = "excludeD"
VARIANTS = (EXCLUDE_U, EXCLUDE_D)

AXIS, INTERIOR, UPPER, LOWER = "axis", "interior", "U", "D"


@dataclass(frozen=True)
class SpectralIndex:
    gamma1: int
    gamma2: int
    cls: str

    def __iter__(self):
        yield self.gamma1
        yield self.gamma2


def in_gamma_bar(m, g1: int, g2: int) -> bool:
    m1, m2 = m
    if g1 == 0:
        return g2 % 2 == 0 and abs(g2) < m2
    return 1 <= g1 <= m1 and g1 * m2 + abs(g2) * m1 <= m1 * m2


def spectral_class(m, g1: int, g2: int) -> str:
    m1, m2 = m
    if g2 != 0 and g1 * m2 + g2 * m1 == m1 * m2:
        return UPPER
    if g2 != 0 and g1 * m2 - g2 * m1 == m1 * m2:
        return LOWER
    return AXIS if g1 == 0 else INTERIOR


class SpectralSet:
    """``Gamma_bar`` with class tags and the selected unisolvent subset.

    Members are ordered lexicographically in ``(gamma1, gamma2)``.
    ``selected`` marks ``Gamma``: ``Gamma_bar`` minus the ``U`` class for the
    default variant, minus the ``D`` class for ``variant="excludeD"``.
    """

    def __init__(self, m, variant: str = EXCLUDE_U):
        self.m = as_pair(m, even=True)
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        self.variant = variant
        m1, m2 = self.m
        pairs = [(a, b) for a in range(m1 + 1) for b in range(-m2, m2 + 1) if in_gamma_bar(self.m, a, b)]
        self.g1 = np.array([p[0] for p in pairs], dtype=int)
        self.g2 = np.array([p[1] for p in pairs], dtype=int)
        self.cls = np.array([spectral_class(self.m, a, b) for a, b in pairs])
        removed = UPPER if variant == EXCLUDE_U else LOWER
        self.selected = self.cls != removed

    def __len__(self):
        return len(self.g1)

    def members(self, selected_only: bool = False) -> list[SpectralIndex]:
        keep = self.selected if selected_only else np.ones(len(self), bool)
        return [SpectralIndex(int(a), int(b), str(c))
                for a, b, c, k in zip(self.g1, self.g2, self.cls, keep) if k]

    def mask(self, cls: str) -> np.ndarray:
        return self.cls == cls

    @property
    def gamma(self):
        """``(g1, g2)`` arrays of the selected set ``Gamma``."""
        return self.g1[self.selected], self.g2[self.selected]

    @property
    def upper(self):
        return self.g1[self.cls == UPPER], self.g2[self.cls == UPPER]

    @property
    def lower(self):
        return self.g1[self.cls == LOWER], self.g2[self.cls == LOWER]


_SPECTRAL_CACHE: dict = {}


def build_spectral_set(m, variant: str = EXCLUDE_U) -> SpectralSet:
    key = (as_pair(m, even=True), variant)
    if key not in _SPECTRAL_CACHE:
        _SPECTRAL_CACHE[key] = SpectralSet(*key)
    return _SPECTRAL_CACHE[key]


# ---------------------------------------------------------------- discrete basis

def chi(m, gamma, i):
    """``chi_gamma(i)``; ``gamma`` and ``i`` are pairs of ints or int arrays (broadcast)."""
    m1, m2 = as_pair(m)
    g1, g2 = (np.asarray(v) for v in gamma)
    i1, i2 = (np.asarray(v) for v in i)
    # reduce the integer phases first so large frequencies stay exact
    a = np.mod(g1 * i1, 2 * m1) * (np.pi / m1)
    b = np.mod(g2 * i2, 2 * m2) * (np.pi / m2)
    odd = np.mod(g2, 2) == 1
    radial = np.where(odd, 1j * np.sin(a), np.cos(a))
    return radial * np.exp(1j * b)


def chi_matrix(m, g1, g2, index_set=None) -> np.ndarray:
    """Matrix ``[chi_gamma(i)]`` with rows over ``I`` and columns over the given gammas."""
    from .nodes import build_index_set

    idx = index_set if index_set is not None else build_index_set(m)
    return chi(m, (np.asarray(g1)[None, :], np.asarray(g2)[None, :]),
               (idx.i1[:, None], idx.i2[:, None]))


def chi_norm_sq(m, gamma) -> float:
    """Squared norm of ``chi_gamma``: ``1`` if ``gamma1 in {0, m1}``, else ``1/2``."""
    m = as_pair(m, even=True)
    g1, g2 = gamma
    if not in_gamma_bar(m, g1, g2):
        raise ValueError(f"{(g1, g2)} is not a spectral index of m = {tuple(m)}")
    return 1.0 if g1 in (0, m.m1) else 0.5


def chi_norm_sq_array(m, g1) -> np.ndarray:
    m1 = as_pair(m).m1
    g1 = np.asarray(g1)
    return np.where((g1 == 0) | (g1 == m1), 1.0, 0.5)


def real_uses_real_part(m, g1, g2):
    """Whether the real basis element for ``gamma`` is ``Re chi`` (else ``Im chi``).

    On the ``D`` class the choice is by ``gamma1 <= m1/2``, elsewhere by
    ``gamma2 <= 0``.
    """
    m1, m2 = as_pair(m)
    g1 = np.asarray(g1)
    g2 = np.asarray(g2)
    lower = (g2 != 0) & (g1 * m2 - g2 * m1 == m1 * m2)
    return np.where(lower, 2 * g1 <= m1, g2 <= 0)


def chi_real(m, gamma, i):
    m = as_pair(m, even=True)
    g1, g2 = gamma
    val = chi(m, gamma, i)
    return np.where(real_uses_real_part(m, g1, g2), val.real, val.imag)


def chi_real_norm_sq_array(m, g1, g2) -> np.ndarray:
    m1, m2 = as_pair(m)
    g1 = np.asarray(g1)
    g2 = np.asarray(g2)
    out = np.full(np.broadcast(g1, g2).shape, 0.25)
    out = np.where((g1 == 0) | (g2 == 0), 0.5, out)
    out = np.where((2 * g1 == m1) & (2 * g2 == -m2), 0.5, out)
    out = np.where(((g1 == 0) | (g1 == m1)) & (g2 == 0), 1.0, out)
    return out


def chi_real_norm_sq(m, gamma) -> float:
    m = as_pair(m, even=True)
    g1, g2 = gamma
    if not (in_gamma_bar(m, g1, g2) and spectral_class(m, g1, g2) != UPPER):
        raise ValueError(f"{(g1, g2)} is not in Gamma for m = {tuple(m)}")
    return float(chi_real_norm_sq_array(m, g1, g2))


def inner_product(m, f, h) -> complex:
    """Normalised discrete inner product ``(1/(m1 m2)) sum_i f(i) conj(h(i))``."""
    m = as_pair(m, even=True)
    f = np.asarray(f)
    h = np.asarray(h)
    n = m.m1 * m.m2
    if f.shape != (n,) or h.shape != (n,):
        raise ValueError(f"expected two vectors of length {n}, got {f.shape} and {h.shape}")
    return complex(np.sum(f * np.conj(h)) / n)


def orthogonality_condition(m, gamma) -> bool:
    """``gamma = (h1 m1, h2 m2)`` with ``h1 + h2`` even."""
    m1, m2 = as_pair(m)
    g1, g2 = gamma
    if g1 % m1 or g2 % m2:
        return False
    return (g1 // m1 + g2 // m2) % 2 == 0


def mean(m, gamma) -> complex:
    """Discrete mean of ``chi_gamma`` over ``I``, by direct summation."""
    from .nodes import build_index_set

    idx = build_index_set(m)
    return complex(np.mean(chi(m, gamma, (idx.i1, idx.i2))))


# -------------------------------------------------------------- continuous basis

def basis_X(gamma, theta, phi):
    """``X_gamma(theta, phi)``, broadcasting over all arguments."""
    g1, g2 = (np.asarray(v) for v in gamma)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    radial = np.where(np.mod(g2, 2) == 1, 1j * np.sin(g1 * theta), np.cos(g1 * theta))
    return radial * np.exp(1j * g2 * phi)


def basis_X_real(m, gamma, theta, phi):
    """Real basis ``X_R,gamma``: ``Re X_gamma`` or ``Im X_gamma`` by the same rule as ``chi_real``."""
    g1, g2 = gamma
    val = basis_X(gamma, theta, phi)
    return np.where(real_uses_real_part(m, g1, g2), val.real, val.imag)
