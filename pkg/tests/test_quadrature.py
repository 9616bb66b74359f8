import math

import numpy as np
import pytest
from scipy import integrate

from lissphere.analysis import cartesian_sampler
from lissphere.nodes import build_index_set
from lissphere.quadrature import basis_integral, extract_weights, integrate_coefficients, integrate_samples
from lissphere.rotation import gaussian_pair
from lissphere.spectral import basis_X, basis_X_real, build_spectral_set
from lissphere.transform import REAL, NodeData, forward

from conftest import random_pole_consistent


def sphere_mean(fn):
    """Normalised surface mean by adaptive 2-D quadrature."""
    re, _ = integrate.dblquad(lambda t, p: np.real(fn(t, p)) * np.sin(t), 0, 2 * np.pi, 0, np.pi,
                              epsabs=1e-13, epsrel=1e-13)
    return re / (4 * np.pi)


def gaussian_pair_mean():
    # mean of exp(-a |x - c|^2) over the sphere for |c| = 1
    return sum((1 - math.exp(-4 * a)) / (4 * a) for a in (3.0, 4.0))


@pytest.mark.parametrize("gamma", [(0, 0), (2, 0), (4, 0), (1, 0), (3, 1), (2, 2), (0, 2), (5, -1)])
def test_basis_integral_against_adaptive_quadrature(gamma):
    ref = sphere_mean(lambda t, p: basis_X(gamma, t, p))
    assert basis_integral(gamma) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("m", [(7, 6), (6, 6)])
def test_exact_for_all_basis_functions(m):
    idx = build_index_set(m)
    s = build_spectral_set(m)
    for g1, g2 in zip(*s.gamma):
        f = NodeData(m, basis_X((g1, g2), idx.theta, idx.phi))
        assert abs(integrate_samples(f) - basis_integral((g1, g2))) < 1e-12
        fr = NodeData(m, basis_X_real(m, (g1, g2), idx.theta, idx.phi))
        expected = basis_integral((g1, g2)) if g2 == 0 else 0.0
        assert abs(integrate_samples(fr, flavor=REAL) - expected) < 1e-12


@pytest.mark.parametrize("m", [(7, 6), (6, 6), (15, 16), (4, 4)])
def test_weights(m, rng):
    rule = extract_weights(m)
    assert len(rule.weights) == (m[0] - 1) * m[1] + 2
    assert abs(rule.weights.sum() - 1) < 1e-13
    f = random_pole_consistent(m, rng, complex_values=False)
    assert abs(rule.apply(f) - integrate_samples(f)) < 1e-13


def test_weight_shape_check():
    with pytest.raises(ValueError):
        extract_weights((7, 6)).apply(np.ones(3))


def test_gaussian_pair_high_degree():
    exact = gaussian_pair_mean()
    adaptive = sphere_mean(cartesian_sampler(gaussian_pair))
    assert abs(exact - adaptive) < 1e-12
    got = integrate_samples(cartesian_sampler(gaussian_pair), m=(39, 40))
    assert abs(got - exact) < 1e-10


def test_convergence_on_gaussian_pair():
    exact = gaussian_pair_mean()
    errs = [abs(integrate_samples(cartesian_sampler(gaussian_pair), m=(k, k + 1)) - exact) for k in range(3, 40, 4)]
    floor = 1e-14
    for a, b in zip(errs, errs[1:]):
        assert b < 1.1 * a or b < floor


def test_integrate_coefficients_of_constant():
    p = forward(NodeData.from_reduced((5, 4), np.full(18, 2.5)))
    assert integrate_coefficients(p) == pytest.approx(2.5)
