"""Fucik spectra of one-dimensional Dirichlet Sturm-Liouville problems with indefinite weights."""

__version__ = "0.1.0"

from .analysis import (
    asymptote_consistency,
    asymptotes_first_curves,
    compact_support_gap,
    count_quadrant,
    spectrum_report,
)
from .eigen import EigenNotFound, eigenvalue, principal_pair
from .presets import preset_problem, preset_weights
from .problem import Problem, ProblemError, load_problem
from .shooting import Tolerances, compose_phi, zero_function, zero_function_inverse
from .spectrum import Quadrant, nonempty_test, quadrant_reduce, solve_b, trace_curve, trivial_lines
from .weights import Weight, evaluate, first_positive_time, sign_profile, support_edges

__all__ = [
    "EigenNotFound",
    "Problem",
    "ProblemError",
    "Quadrant",
    "Tolerances",
    "Weight",
    "asymptote_consistency",
    "asymptotes_first_curves",
    "compact_support_gap",
    "compose_phi",
    "count_quadrant",
    "eigenvalue",
    "evaluate",
    "first_positive_time",
    "load_problem",
    "nonempty_test",
    "preset_problem",
    "preset_weights",
    "principal_pair",
    "quadrant_reduce",
    "sign_profile",
    "solve_b",
    "spectrum_report",
    "support_edges",
    "trace_curve",
    "trivial_lines",
    "zero_function",
    "zero_function_inverse",
]
