"""Clenshaw-Curtis type quadrature on the sphere at the Lissajous nodes.

Integrals are normalised by the sphere area, i.e. computed against
``sin(theta) dtheta dphi / (4 pi)``.  With that normalisation

    mean of X_gamma = 1 / (1 - gamma1^2)   if gamma2 == 0 and gamma1 even,
                    = 0                    otherwise,

so integrating the interpolant only needs the coefficients ``c_(2k, 0)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import FrequencyPair, as_pair
from .nodes import NodeIndex, build_index_set
from .transform import COMPLEX, Interpolant, NodeData, forward


def basis_integral(gamma) -> float:
    """Normalised surface mean of ``X_gamma``."""
    g1, g2 = gamma
    if g2 != 0 or g1 % 2:
        return 0.0
    return 1.0 / (1.0 - g1 * g1)


def integrate_coefficients(p: Interpolant):
    """``sum_k c_(2k,0) / (1 - 4 k^2)``, the normalised integral of ``p``."""
    C = p.complex_coefficients()
    k = np.arange(0, p.m.m1 // 2 + 1)
    total = complex(np.sum(C[2 * k, p.m.m2] / (1.0 - 4.0 * k * k)))
    return total.real if p.flavor == "real" else total


def integrate_samples(f, m=None, flavor: str = COMPLEX):
    """Quadrature of node data, or of a sampler ``f(theta, phi)`` when ``m`` is given."""
    if callable(f) and not isinstance(f, NodeData):
        if m is None:
            raise TypeError("integrating a sampler needs the frequency pair m")
        f = NodeData.from_function(m, f)
    elif not isinstance(f, NodeData):
        f = NodeData(m, f)
    return integrate_coefficients(forward(f, flavor))


@dataclass(frozen=True)
class QuadratureRule:
    """Weights on ``I_S`` for the normalised surface integral."""

    m: FrequencyPair
    indices: tuple
    weights: np.ndarray

    @property
    def min_weight(self) -> float:
        return float(self.weights.min())

    @property
    def max_weight(self) -> float:
        return float(self.weights.max())

    def apply(self, values):
        """Apply the rule to values on ``I_S`` (or ``NodeData`` on ``I``)."""
        if isinstance(values, NodeData):
            values = values.reduced()
        values = np.asarray(values)
        if values.shape != self.weights.shape:
            raise ValueError(f"expected {self.weights.size} values on I_S, got shape {values.shape}")
        return values @ self.weights


_RULES: dict = {}


def extract_weights(m) -> QuadratureRule:
    """Weights ``w_i`` = integral of the reduced Lagrange function ``L_S,i``.

    Each weight is computed by transforming the indicator of the node (all pole
    duplicates at once for the two poles) and integrating the coefficients.
    """
    m = as_pair(m, even=True)
    if m in _RULES:
        return _RULES[m]
    idx = build_index_set(m)
    positions = idx.reduced_positions
    weights = np.empty(len(positions))
    for k, pos in enumerate(positions):
        delta = np.zeros(len(idx))
        if idx.pole_mask()[pos]:
            delta[idx.i1 == idx.i1[pos]] = 1.0
        else:
            delta[pos] = 1.0
        weights[k] = np.real(integrate_coefficients(forward(NodeData(m, delta))))
    rule = QuadratureRule(
        m,
        tuple(NodeIndex(int(idx.i1[p]), int(idx.i2[p])) for p in positions),
        weights,
    )
    _RULES[m] = rule
    return rule
