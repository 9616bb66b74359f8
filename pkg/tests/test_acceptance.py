"""Acceptance checks, one test per criterion, each recording a PASS/FAIL line."""
import math
import time

import numpy as np
from scipy import integrate

from lissphere.analysis import REFERENCE_ERRORS, GridSpec, cartesian_sampler, lebesgue_estimate, sup_error
from lissphere.nodes import build_index_set
from lissphere.quadrature import basis_integral, extract_weights, integrate_samples
from lissphere.rotation import RotationProblem, estimate, gaussian_pair, rotation_matrix
from lissphere.spectral import (build_spectral_set, chi_matrix, chi_norm_sq_array, chi_real,
                                chi_real_norm_sq_array)
from lissphere.transform import NodeData, forward, forward_direct, group_spectrum, inverse, lagrange, lagrange_S

from conftest import coprime_pairs, random_pole_consistent, record
from test_curve import brute_force_multiplicities


def check(criterion, condition, detail):
    record(criterion, bool(condition), detail)
    assert condition, detail


def test_criterion_1_counts():
    t0 = time.perf_counter()
    ok = True
    for m in [(7, 6), (6, 6), (4, 4), (15, 16), (39, 40)]:
        m1, m2 = m
        g = math.gcd(m1, m2)
        idx = build_index_set(m)
        s = build_spectral_set(m)
        ok &= len(idx) == m1 * m2
        ok &= int(idx.in_IS.sum()) == (m1 - 1) * m2 + 2
        ok &= len(s) == m1 * m2 + g - 1
        ok &= len(s.upper[0]) == len(s.lower[0]) == g - 1
    dt = time.perf_counter() - t0
    check(1, ok and dt < 1.0, f"index and spectral set sizes exact, {dt:.3f} s")


def test_criterion_2_intersections():
    from lissphere.curve import classify_time, intersection_summary

    t0 = time.perf_counter()
    pairs = coprime_pairs(48)
    bad = []
    for m in pairs:
        t, mult, points = brute_force_multiplicities(m)
        if any(classify_time(m, ti) != k for ti, k in zip(t, mult)):
            bad.append((m, "multiplicity"))
        s = intersection_summary(m)
        m1, m2 = m
        expected_total = m2 * (m1 - 1) + 2 if m2 % 2 == 0 else (m1 * m2 + 2 if m2 > 1 else m1)
        if len(points) != s.total or s.total != expected_total:
            bad.append((m, "total"))
    dt = time.perf_counter() - t0
    parities = {m2 % 2 for _, m2 in pairs}
    check(2, not bad and parities == {0, 1} and dt < 30, f"{len(pairs)} coprime pairs, mismatches {bad}, {dt:.2f} s")


def test_criterion_3_orthogonality():
    worst_off, worst_diag = 0.0, 0.0
    for m in [(7, 6), (6, 6), (15, 16)]:
        n = m[0] * m[1]
        g1, g2 = build_spectral_set(m).gamma
        idx = build_index_set(m)
        X = chi_matrix(m, g1, g2)
        G = X.conj().T @ X / n
        XR = chi_real(m, (g1[None, :], g2[None, :]), (idx.i1[:, None], idx.i2[:, None]))
        GR = XR.T @ XR / n
        for M, d in ((G, chi_norm_sq_array(m, g1)), (GR, chi_real_norm_sq_array(m, g1, g2))):
            worst_diag = max(worst_diag, float(np.abs(np.diag(M) - d).max()))
            worst_off = max(worst_off, float(np.abs(M - np.diag(np.diag(M))).max()))
    check(3, worst_off < 1e-12 and worst_diag < 1e-12, f"off-diagonal {worst_off:.2e}, diagonal error {worst_diag:.2e}")


def test_criterion_4_transforms():
    rng = np.random.default_rng(4)
    trip = 0.0
    for m in [(7, 6), (6, 6), (15, 16), (39, 40)]:
        f = random_pole_consistent(m, rng)
        trip = max(trip, float(np.abs(inverse(forward(f)).values - f.values).max()))
    f = random_pole_consistent((6, 6), rng)
    fft_vs_direct = float(np.abs(forward(f).coeffs - forward_direct(f).coeffs).max())
    m = (7, 6)
    idx = build_index_set(m)
    L = np.array([lagrange(m, i, idx.theta, idx.phi) for i in idx])
    card = float(np.abs(L - np.eye(len(idx))).max())
    red = idx.reduced_positions
    LS = np.array([lagrange_S(m, idx.members[k], idx.theta[red], idx.phi[red]) for k in red])
    card = max(card, float(np.abs(LS - np.eye(len(red))).max()))
    bmc = 0.0
    for m in [(7, 6), (6, 6), (15, 16)]:
        G = group_spectrum(random_pole_consistent(m, rng))
        sign = (-1.0) ** np.arange(2 * m[1])
        bmc = max(bmc, float(np.abs(G - G[(-np.arange(2 * m[0])) % (2 * m[0])] * sign).max()))
    ok = trip < 1e-11 and fft_vs_direct < 1e-12 and card < 1e-11 and bmc < 1e-12
    check(4, ok, f"round trip {trip:.1e}, fft vs direct {fft_vs_direct:.1e}, cardinal {card:.1e}, symmetry {bmc:.1e}")


def test_criterion_5_quadrature():
    from lissphere.spectral import basis_X

    m = (7, 6)
    idx = build_index_set(m)
    exact_err = 0.0
    for g1, g2 in zip(*build_spectral_set(m).gamma):
        f = NodeData(m, basis_X((g1, g2), idx.theta, idx.phi))
        exact_err = max(exact_err, abs(integrate_samples(f) - basis_integral((g1, g2))))
    wsum = abs(extract_weights(m).weights.sum() - 1)
    sampler = cartesian_sampler(gaussian_pair)
    ref, _ = integrate.dblquad(lambda t, p: sampler(t, p) * np.sin(t), 0, 2 * np.pi, 0, np.pi,
                               epsabs=1e-13, epsrel=1e-13)
    ref /= 4 * np.pi
    gauss_err = abs(integrate_samples(sampler, m=(39, 40)) - ref)
    ok = exact_err < 1e-12 and wsum < 1e-13 and gauss_err < 1e-10
    check(5, ok, f"basis exactness {exact_err:.1e}, weight sum {wsum:.1e}, Gaussian pair {gauss_err:.1e}")


def test_criterion_6_error_table():
    t0 = time.perf_counter()
    sampler = cartesian_sampler(gaussian_pair)
    grid = GridSpec(1001, 2000)
    lines, ok = [], True
    for k, (m, ref) in enumerate(REFERENCE_ERRORS.items()):
        got = sup_error(sampler, m, grid)
        if k < 6:
            rel = abs(got / ref - 1)
            ok &= rel < 0.01
            lines.append(f"{m}: {got:.6e} rel {rel:.1e}")
        else:
            mag = abs(math.log10(got / ref))
            ok &= mag < 1
            lines.append(f"{m}: {got:.2e} vs {ref:.2e}")
    dt = time.perf_counter() - t0
    check(6, ok and dt < 300, f"{'; '.join(lines)}; {dt:.1f} s")


def test_criterion_7_lebesgue():
    ratios = []
    for m in [(3, 4), (7, 8), (15, 16), (31, 32)]:
        ratios.append(lebesgue_estimate(m) / (math.log(m[0] + 1) * math.log(m[1] + 1)))
    spread = max(ratios) / min(ratios)
    check(7, spread < 1.5, f"ratios {[round(r, 4) for r in ratios]}, max/min {spread:.3f}")


def test_criterion_8_rotation():
    t0 = time.perf_counter()
    beta_true = (1.4, 0.2, 0.9)
    rep = estimate(RotationProblem.synthesize((15, 16), gaussian_pair, beta_true, beta0=(0.0, 0.0, 0.0)))
    dt = time.perf_counter() - t0
    dist = float(np.linalg.norm(rotation_matrix(rep.beta_hat) - rotation_matrix(beta_true)))
    ok = rep.converged and rep.iterations <= 100 and dist < 1e-2 and rep.residual <= 1e-2 and dt < 60
    check(8, ok, f"{rep.iterations} iterations, |R - R_true|_F {dist:.1e}, objective {rep.residual:.2e} "
                 f"(norm {math.sqrt(rep.residual):.2e}), {dt:.2f} s")


def test_criterion_9_jacobian():
    rng = np.random.default_rng(9)
    problem = RotationProblem.synthesize((15, 16), gaussian_pair, (1.4, 0.2, 0.9))
    worst, h = 0.0, 1e-6
    for _ in range(20):
        beta = rng.uniform(-np.pi, np.pi, 3)
        J = problem.jacobian(beta)
        F = np.stack([(problem.residual(beta + h * e) - problem.residual(beta - h * e)) / (2 * h) for e in np.eye(3)], 1)
        worst = max(worst, float(np.linalg.norm(J - F) / np.linalg.norm(F)))
    check(9, worst < 1e-5, f"max relative error {worst:.1e} over 20 random angle triples")
