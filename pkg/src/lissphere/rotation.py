"""Rotation estimation from samples at the Lissajous nodes.

Given reference samples ``f(i) = F(x_i)`` and rotated samples
``f_rot(i) = F(R x_i)`` on ``I_S``, the Euler angles are fitted by minimising

    sum_{i in I_S} |f_rot(i) - P_f(R_beta x_i)|^2

with a damped Gauss-Newton iteration, where ``P_f`` is the interpolant of the
reference data.  By default ``R_beta = Rz(beta1) Ry(beta2) Rx(beta3)``; any
other axis sequence (e.g. ``"zyz"``) can be chosen per problem.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .curve import FrequencyPair, as_pair
from .nodes import build_index_set, cartesian_to_spherical
from .transform import COMPLEX, Interpolant, NodeData, forward

log = logging.getLogger(__name__)

_POLE_SIN = 1e-8
# Tait-Bryan angles keep the identity away from gimbal lock, so Gauss-Newton
# started at zero sees all three angles.
DEFAULT_AXES = "zyx"


@dataclass(frozen=True)
class EulerAngles:
    beta1: float
    beta2: float
    beta3: float

    def __iter__(self):
        yield self.beta1
        yield self.beta2
        yield self.beta3

    def as_array(self) -> np.ndarray:
        return np.array([self.beta1, self.beta2, self.beta3], dtype=float)

    def wrapped(self) -> "EulerAngles":
        """Representatives in ``(-pi, pi]``."""
        return EulerAngles(*(float(_wrap(b)) for b in self))


def _wrap(a):
    w = np.mod(a + np.pi, 2 * np.pi) - np.pi
    return np.where(w == -np.pi, np.pi, w)


def _axis_matrix(axis: str, a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    if axis == "x":
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis == "y":
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _axis_derivative(axis: str, a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    if axis == "x":
        return np.array([[0.0, 0.0, 0.0], [0.0, -s, -c], [0.0, c, -s]])
    if axis == "y":
        return np.array([[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]])
    return np.array([[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]])


def _check_axes(axes: str) -> str:
    axes = axes.lower()
    if len(axes) != 3 or set(axes) - set("xyz") or axes[0] == axes[1] or axes[1] == axes[2]:
        raise ValueError(f"invalid Euler axis sequence {axes!r}")
    return axes


def rotation_matrix(beta, axes: str = DEFAULT_AXES) -> np.ndarray:
    """``R_a1(beta1) @ R_a2(beta2) @ R_a3(beta3)`` for the axis sequence ``axes``.

    The default ``"zyx"`` is the yaw-pitch-roll product ``Rz(b1) Ry(b2) Rx(b3)``.
    """
    axes = _check_axes(axes)
    b = [float(v) for v in beta]
    return _axis_matrix(axes[0], b[0]) @ _axis_matrix(axes[1], b[1]) @ _axis_matrix(axes[2], b[2])


def rotation_matrix_derivatives(beta, axes: str = DEFAULT_AXES) -> np.ndarray:
    """``dR/dbeta_k`` stacked along the first axis, shape ``(3, 3, 3)``."""
    axes = _check_axes(axes)
    b = [float(v) for v in beta]
    A = [_axis_matrix(ax, v) for ax, v in zip(axes, b)]
    D = [_axis_derivative(ax, v) for ax, v in zip(axes, b)]
    return np.stack([D[0] @ A[1] @ A[2], A[0] @ D[1] @ A[2], A[0] @ A[1] @ D[2]])


def gaussian_pair(x) -> np.ndarray:
    """Sum of two Gaussians centred at the north pole and at ``(1, -1, 0)/sqrt(2)``."""
    x = np.asarray(x, dtype=float)
    a, b, c = x[..., 0], x[..., 1], x[..., 2]
    s = 1.0 / math.sqrt(2.0)
    return (np.exp(-3.0 * (a**2 + b**2 + (c - 1.0) ** 2))
            + np.exp(-4.0 * ((a - s) ** 2 + (b + s) ** 2 + c**2)))


# ------------------------------------------------------------------ problem

@dataclass
class RotationProblem:
    m: FrequencyPair
    f: NodeData
    f_rot: NodeData
    beta0: EulerAngles = EulerAngles(0.0, 0.0, 0.0)
    flavor: str = COMPLEX
    axes: str = DEFAULT_AXES
    interpolant: Interpolant = field(default=None, repr=False)

    def __post_init__(self):
        self.m = as_pair(self.m, even=True)
        self.axes = _check_axes(self.axes)
        if not isinstance(self.beta0, EulerAngles):
            self.beta0 = EulerAngles(*self.beta0)
        for name in ("f", "f_rot"):
            data = getattr(self, name)
            if data.m != self.m:
                raise ValueError(f"{name} is given for m = {tuple(data.m)}, expected {tuple(self.m)}")
            if not data.pole_consistent:
                raise ValueError(f"{name} is not constant over the poles")
        if self.interpolant is None:
            self.interpolant = forward(self.f, self.flavor)
        idx = build_index_set(self.m)
        self._x = idx.points[idx.in_IS]
        self._target = self.f_rot.reduced()

    @classmethod
    def synthesize(cls, m, fn, beta_true, beta0=(0.0, 0.0, 0.0), flavor: str = COMPLEX,
                   axes: str = DEFAULT_AXES):
        """Build a problem from a Cartesian function ``fn`` and a known rotation."""
        m = as_pair(m, even=True)
        R = rotation_matrix(beta_true, axes)
        f = NodeData.from_cartesian(m, fn)
        f_rot = NodeData.from_cartesian(m, lambda x: fn(x @ R.T))
        return cls(m, f, f_rot, EulerAngles(*beta0), flavor, axes)

    @property
    def points(self) -> np.ndarray:
        """Cartesian points of ``I_S``."""
        return self._x

    def rotated_points(self, beta) -> np.ndarray:
        return self._x @ rotation_matrix(beta, self.axes).T

    def model(self, beta) -> np.ndarray:
        theta, phi = pole_snapped_angles(self.m, self.rotated_points(beta))
        return self.interpolant.evaluate(theta, phi)

    def residual(self, beta) -> np.ndarray:
        """Real residual vector (real parts, then imaginary parts for complex data)."""
        r = self._target - self.model(beta)
        if np.iscomplexobj(r):
            return np.concatenate([r.real, r.imag])
        return r

    def objective(self, beta) -> float:
        r = self.residual(beta)
        return float(r @ r)

    def jacobian(self, beta) -> np.ndarray:
        """Analytic Jacobian of ``residual`` with respect to the Euler angles."""
        y = self.rotated_points(beta)
        dirs = np.einsum("kab,nb->kna", rotation_matrix_derivatives(beta, self.axes), self._x)
        grad = _surface_gradient(self.interpolant, y, dirs)
        J = -grad.T  # d residual = - dP
        if np.iscomplexobj(J):
            return np.concatenate([J.real, J.imag])
        return J


def pole_snapped_angles(m, y):
    """Spherical angles of ``y`` with points on a pole moved to a pole node.

    The expansion need not be constant along ``theta = 0`` or ``theta = pi``;
    it interpolates only at the node azimuths (``phi = 0`` in the north,
    ``phi = (m1 mod 2) pi / m2`` in the south), so pole points are evaluated there.
    """
    m = as_pair(m)
    theta, phi = cartesian_to_spherical(y)
    pole = np.sin(theta) < _POLE_SIN
    north = pole & (theta < np.pi / 2)
    south = pole & ~north
    theta = np.where(north, 0.0, np.where(south, np.pi, theta))
    phi = np.where(north, 0.0, np.where(south, (m.m1 % 2) * np.pi / m.m2, phi))
    return theta, phi


def _surface_gradient(p: Interpolant, y: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Directional derivatives of ``p`` at points ``y`` along tangent vectors ``dirs[k]``.

    Returns shape ``(len(dirs), len(y))``.  Away from the poles the Cartesian
    surface gradient ``P_theta e_theta + P_phi / sin(theta) e_phi`` is used.  At
    a pole the expansion is not differentiable in general, so the one-sided
    derivative along the direction of motion is taken instead: leaving the
    north pole towards azimuth ``psi`` gives ``|d| P_theta(0, psi)``, leaving the
    south pole gives ``-|d| P_theta(pi, psi)``.
    """
    theta, phi = cartesian_to_spherical(y)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    out = np.zeros((dirs.shape[0], len(y)), dtype=complex if p.flavor != "real" else float)
    regular = st >= _POLE_SIN
    if np.any(regular):
        dth, dph = p.gradient(theta[regular], phi[regular])
        e_theta = np.stack([ct * cp, ct * sp, -st], axis=-1)[regular]
        e_phi = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)[regular]
        g = dth[:, None] * e_theta + (dph / st[regular])[:, None] * e_phi
        out[:, regular] = np.einsum("nc,knc->kn", g, dirs[:, regular])
    for n in np.flatnonzero(~regular):
        north = y[n, 2] > 0
        for k in range(dirs.shape[0]):
            dx, dy = dirs[k, n, 0], dirs[k, n, 1]
            speed = math.hypot(dx, dy)
            if speed == 0.0:
                continue
            psi = math.atan2(dy, dx) % (2 * math.pi)
            dth, _ = p.gradient(0.0 if north else math.pi, psi)
            out[k, n] = speed * (dth if north else -dth)
    return out


# ------------------------------------------------------------------- solver

@dataclass
class GaussNewtonOptions:
    max_iter: int = 100
    tol_step: float = 1e-10
    tol_res: float = 1e-24
    tol_grad: float = 1e-14
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4
    min_alpha: float = 1e-12
    levenberg_shift: float = 1e-12


@dataclass
class SolverReport:
    beta_hat: EulerAngles
    iterations: int
    residual: float
    converged: bool
    reason: str
    regularized_steps: int = 0
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "beta_hat": list(self.beta_hat),
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "reason": self.reason,
            "regularized_steps": self.regularized_steps,
            "trace": self.trace,
        }


def _solve_normal(J, r, shift):
    A = J.T @ J
    b = -J.T @ r
    scale = np.trace(A)
    # rank-deficient near gimbal lock; shift relative to the trace
    if scale == 0.0:
        return np.zeros(3), True
    if np.linalg.cond(A) > 1e12:
        return np.linalg.solve(A + shift * scale * np.eye(3), b), True
    return np.linalg.solve(A, b), False


def estimate(problem: RotationProblem, opts: GaussNewtonOptions | None = None, beta0=None) -> SolverReport:
    """Damped Gauss-Newton fit of the Euler angles.

    Each step solves the normal equations, then halves the step length until
    the objective satisfies the sufficient-decrease condition.  Iteration stops
    when the accepted step is shorter than ``tol_step``, the objective drops
    below ``tol_res``, the gradient vanishes, or after ``max_iter`` steps.
    """
    opts = opts or GaussNewtonOptions()
    beta = (EulerAngles(*beta0) if beta0 is not None else problem.beta0).as_array()
    r = problem.residual(beta)
    obj = float(r @ r)
    trace = [{"iter": 0, "beta": beta.tolist(), "objective": obj, "step": 0.0, "alpha": 0.0}]
    n_reg = 0
    reason = "max_iter"
    converged = False
    it = 0
    while True:
        if obj <= opts.tol_res:
            converged, reason = True, "tol_res"
            break
        if it >= opts.max_iter:
            break
        J = problem.jacobian(beta)
        grad = 2.0 * J.T @ r
        if np.linalg.norm(grad) <= opts.tol_grad:
            converged, reason = True, "tol_grad"
            break
        step, regularized = _solve_normal(J, r, opts.levenberg_shift)
        n_reg += regularized
        slope = float(grad @ step)
        alpha = 1.0
        while True:
            trial = beta + alpha * step
            r_trial = problem.residual(trial)
            obj_trial = float(r_trial @ r_trial)
            if obj_trial <= obj + opts.sufficient_decrease * alpha * slope:
                break
            alpha *= opts.shrink
            if alpha < opts.min_alpha:
                break
        it += 1
        if alpha < opts.min_alpha:
            # no decrease along the Gauss-Newton direction: stationary to rounding
            converged = np.linalg.norm(step) < math.sqrt(opts.tol_step)
            reason = "line_search"
            it -= 1
            break
        step_norm = alpha * float(np.linalg.norm(step))
        beta, r, obj = trial, r_trial, obj_trial
        trace.append({"iter": it, "beta": beta.tolist(), "objective": obj, "step": step_norm, "alpha": alpha})
        log.debug("iter %d objective %.3e step %.3e alpha %.3g", it, obj, step_norm, alpha)
        if step_norm < opts.tol_step:
            converged, reason = True, "tol_step"
            break
    return SolverReport(EulerAngles(*beta).wrapped(), it, obj, converged, reason, n_reg, trace)


def grid_search(problem: RotationProblem, lattice) -> EulerAngles:
    """Best starting point on a lattice of Euler angles.

    ``lattice`` is either an int ``n`` (``n`` equispaced angles per axis in
    ``[-pi, pi)`` for beta1, beta3; beta2 spans ``[0, pi]`` for proper Euler
    sequences and ``[-pi/2, pi/2]`` otherwise) or three explicit sequences.
    """
    if isinstance(lattice, int):
        n = lattice
        lo, hi = (0.0, np.pi) if problem.axes[0] == problem.axes[2] else (-np.pi / 2, np.pi / 2)
        axes = (np.linspace(-np.pi, np.pi, n, endpoint=False),
                np.linspace(lo, hi, n),
                np.linspace(-np.pi, np.pi, n, endpoint=False))
    else:
        axes = tuple(np.asarray(a, float) for a in lattice)
    best, best_val = None, np.inf
    for b in itertools.product(*axes):
        val = problem.objective(b)
        if val < best_val:
            best, best_val = b, val
    return EulerAngles(*best)
