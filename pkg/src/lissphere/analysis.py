"""Numerical checks of approximation quality: Lebesgue constants and sup-norm errors.

Both quantities are estimated as maxima over a tensor grid in ``(theta, phi)``
and are therefore lower bounds of the true suprema.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import FrequencyPair, as_pair
from .nodes import spherical_to_cartesian
from .spectral import EXCLUDE_U
from .transform import COMPLEX, NodeData, forward, lagrange_coefficients

# sup-norm errors of the Gaussian-pair test function on a fine grid
REFERENCE_ERRORS = {
    (3, 4): 0.89150031122784,
    (7, 8): 0.17505763622726,
    (11, 12): 0.01926746577677,
    (15, 16): 0.00126029913111,
    (19, 20): 0.00005152647682,
    (23, 24): 0.00000145422054,
    (27, 28): 0.00000003014093,
    (31, 32): 0.00000000047887,
    (35, 36): 0.00000000000604,
    (39, 40): 0.00000000000006,
}
REFERENCE_SEQUENCE = tuple(FrequencyPair(*m) for m in REFERENCE_ERRORS)

_BLOCK = 1 << 22  # complex entries per evaluation block


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: ``n_theta`` rows over ``[0, pi]`` and ``n_phi`` columns over ``[0, 2 pi)``.

    With ``include_poles=False`` the theta rows are the cell midpoints instead.
    """

    n_theta: int = 1001
    n_phi: int = 2000
    include_poles: bool = True

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError("a grid needs at least 2 points per axis")

    @classmethod
    def for_degree(cls, m, factor: int = 8) -> "GridSpec":
        """Grid with ``factor * max(m)`` points per axis (at least 4 per unit frequency)."""
        m = as_pair(m)
        n = max(4, factor) * max(m.m1, m.m2)
        return cls(n + 1, 2 * n)

    @property
    def thetas(self) -> np.ndarray:
        if self.include_poles:
            return np.linspace(0.0, np.pi, self.n_theta)
        return (np.arange(self.n_theta) + 0.5) * np.pi / self.n_theta

    @property
    def phis(self) -> np.ndarray:
        return np.arange(self.n_phi) * (2 * np.pi / self.n_phi)

    def refined(self) -> "GridSpec":
        """Twice as fine, containing every point of ``self``."""
        n_theta = 2 * self.n_theta - 1 if self.include_poles else 3 * self.n_theta
        return GridSpec(n_theta, 2 * self.n_phi, self.include_poles)


@dataclass(frozen=True)
class ConvergenceRow:
    m: FrequencyPair
    node_count: int
    sup_error: float

    def as_dict(self) -> dict:
        return {"m1": self.m.m1, "m2": self.m.m2, "node_count": self.node_count, "sup_error": self.sup_error}


def cartesian_sampler(fn):
    """Turn ``fn(x)`` on Cartesian points into a sampler ``(theta, phi) -> values``."""
    def sampler(theta, phi):
        return fn(spherical_to_cartesian(theta, phi))
    return sampler


def lebesgue_estimate(m, grid: GridSpec | None = None, variant: str = EXCLUDE_U) -> float:
    """``max`` over the grid of ``sum_{i in I} |L_i(theta, phi)|``."""
    m = as_pair(m, even=True)
    grid = grid or GridSpec.for_degree(m)
    m1, m2 = m
    C = lagrange_coefficients(m, variant)  # (n_nodes, m1+1, 2m2+1)
    g1 = np.arange(m1 + 1)
    g2 = np.arange(-m2, m2 + 1)
    odd = (g2 % 2 == 1)
    # split the radial factor into even (cos) and odd (1j sin) frequency columns
    # (n_nodes, 2m2+1, m1+1) so the theta contraction is a batched matmul
    Ce = np.ascontiguousarray(np.where(odd, 0, C).transpose(0, 2, 1))
    Co = np.ascontiguousarray(np.where(odd, 1j * C, 0).transpose(0, 2, 1))
    E = np.exp(1j * np.multiply.outer(g2, grid.phis))
    n_nodes = C.shape[0]
    rows = max(1, _BLOCK // (n_nodes * grid.n_phi))
    best = 0.0
    thetas = grid.thetas
    for s in range(0, len(thetas), rows):
        t = thetas[s:s + rows]
        cosT = np.cos(np.multiply.outer(t, g1))
        sinT = np.sin(np.multiply.outer(t, g1))
        B = Ce @ cosT.T + Co @ sinT.T  # (n_nodes, 2m2+1, rows)
        vals = B.transpose(0, 2, 1) @ E  # (n_nodes, rows, n_phi)
        best = max(best, float(np.abs(vals).sum(axis=0).max()))
    return best


def sup_error(sampler, m, grid: GridSpec | None = None, flavor: str = COMPLEX) -> float:
    """``max`` over the grid of ``|P_f - f|`` for a sampler ``f(theta, phi)``."""
    m = as_pair(m, even=True)
    grid = grid or GridSpec()
    p = forward(NodeData.from_function(m, sampler), flavor)
    phis = grid.phis
    rows = max(1, _BLOCK // (4 * grid.n_phi))
    best = 0.0
    thetas = grid.thetas
    for s in range(0, len(thetas), rows):
        t = thetas[s:s + rows]
        approx = p.evaluate_grid(t, phis)
        exact = sampler(t[:, None], phis[None, :])
        best = max(best, float(np.abs(approx - exact).max()))
    return best


def convergence_table(sampler, m_list, grid: GridSpec | None = None, flavor: str = COMPLEX) -> list[ConvergenceRow]:
    """One row per frequency pair, in input order."""
    rows = []
    for m in m_list:
        m = as_pair(m, even=True)
        rows.append(ConvergenceRow(m, (m.m1 - 1) * m.m2 + 2, sup_error(sampler, m, grid, flavor)))
    return rows
