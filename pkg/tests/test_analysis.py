import math

import numpy as np
import pytest

from lissphere.analysis import (REFERENCE_ERRORS, ConvergenceRow, GridSpec, cartesian_sampler,
                                convergence_table, lebesgue_estimate, sup_error)
from lissphere.rotation import gaussian_pair
from lissphere.spectral import basis_X


def test_grid_spec():
    g = GridSpec(5, 8)
    np.testing.assert_allclose(g.thetas, np.linspace(0, np.pi, 5))
    assert g.phis[-1] < 2 * np.pi
    r = g.refined()
    assert set(np.round(g.thetas, 12)) <= set(np.round(r.thetas, 12))
    assert set(np.round(g.phis, 12)) <= set(np.round(r.phis, 12))
    with pytest.raises(ValueError):
        GridSpec(1, 8)


def test_lebesgue_small_cases():
    assert lebesgue_estimate((1, 2), GridSpec(9, 16)) >= 1 - 1e-12
    g = GridSpec.for_degree((5, 4), 4)
    assert lebesgue_estimate((5, 4), g.refined()) >= lebesgue_estimate((5, 4), g) - 1e-12


def test_lebesgue_against_pointwise_sum():
    from lissphere.nodes import build_index_set
    from lissphere.transform import lagrange

    m = (5, 4)
    g = GridSpec(7, 10)
    T, P = np.meshgrid(g.thetas, g.phis, indexing="ij")
    total = sum(np.abs(lagrange(m, i, T, P)) for i in build_index_set(m))
    assert lebesgue_estimate(m, g) == pytest.approx(total.max(), rel=1e-12)


def test_sup_error_reproduces_polynomials():
    def poly(theta, phi):
        return basis_X((3, 1), theta, phi) + 0.5 * basis_X((2, -2), theta, phi)
    assert sup_error(poly, (7, 6), GridSpec(101, 200)) < 1e-11


def test_constant_sampler():
    rows = convergence_table(lambda t, p: np.ones(np.broadcast(t, p).shape), [(3, 4), (7, 8)], GridSpec(51, 100))
    assert all(r.sup_error < 1e-12 for r in rows)
    assert [r.node_count for r in rows] == [10, 50]
    assert isinstance(rows[0], ConvergenceRow)


def test_sup_error_is_grid_monotone():
    s = cartesian_sampler(gaussian_pair)
    g = GridSpec(101, 200)
    assert sup_error(s, (7, 8), g.refined()) >= sup_error(s, (7, 8), g) - 1e-12


@pytest.mark.parametrize("m", [(3, 4), (15, 16)])
def test_reference_rows(m):
    got = sup_error(cartesian_sampler(gaussian_pair), m)
    assert abs(got / REFERENCE_ERRORS[m] - 1) < 0.01
