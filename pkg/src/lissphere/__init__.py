"""Interpolation, quadrature and rotation fitting at spherical Lissajous nodes."""
from .curve import CurveParams, FrequencyPair, IntersectionSummary, classify_time, eval_curve, intersection_summary, sample_times
from .nodes import IndexSet, NodeIndex, build_index_set, class_map, curve_cover, node_point
from .spectral import EXCLUDE_D, EXCLUDE_U, SpectralSet, build_spectral_set, chi, chi_norm_sq, chi_real, chi_real_norm_sq
from .transform import AVERAGED, COMPLEX, REAL, Interpolant, NodeData, forward, inverse, lagrange, lagrange_S
from .quadrature import QuadratureRule, extract_weights, integrate_coefficients, integrate_samples
from .analysis import ConvergenceRow, GridSpec, convergence_table, lebesgue_estimate, sup_error
from .rotation import EulerAngles, GaussNewtonOptions, RotationProblem, SolverReport, estimate, gaussian_pair, rotation_matrix

__version__ = "0.1.0"
