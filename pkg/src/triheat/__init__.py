"""Heat content of planar triangles: corner function, forward solvers and inversion."""

from .asymptotics import (FitReport, InvariantTriple, asymptotic_curve, extract_invariants,
                          heat_content_asymptotic, heat_trace_asymptotic)
from .errors import (BadFitError, DegenerateTriangleError, DomainError, IllConditionedError,
                     InconsistentTripleError, NonMonotoneError, QuadratureError, SolverError,
                     TriheatError, TruncationError)
from .forward import (FemConfig, HeatCurve, McConfig, MomentSpectrum, exit_moments_mc,
                      heat_content_fem, heat_content_mc, layer_cake_moment,
                      rectangle_series_oracle)
from .inverse import InversionResult, invert_curve, invert_triple, phi_profile_on_level
from .kernels import BACKEND
from .lemmas import CertReport, run_suite
from .moduli import (EQUILATERAL, AnglePoint, LevelCurveSegment, Triangle, phi_sum,
                     psi_level_curve, psi_sum, triangle_from_angles)
from .quadrature import FnEval, QuadratureConfig
from .specfun import phi, psi

__version__ = "0.1.0"

__all__ = [
    "AnglePoint", "BACKEND", "BadFitError", "CertReport", "DegenerateTriangleError",
    "DomainError", "EQUILATERAL", "FemConfig", "FitReport", "FnEval", "HeatCurve",
    "IllConditionedError", "InconsistentTripleError", "InvariantTriple", "InversionResult",
    "LevelCurveSegment", "McConfig", "MomentSpectrum", "NonMonotoneError", "QuadratureConfig",
    "QuadratureError", "SolverError", "Triangle", "TriheatError", "TruncationError",
    "asymptotic_curve", "exit_moments_mc", "extract_invariants", "heat_content_asymptotic",
    "heat_content_fem", "heat_content_mc", "heat_trace_asymptotic", "invert_curve",
    "invert_triple", "layer_cake_moment", "phi", "phi_profile_on_level", "phi_sum", "psi",
    "psi_level_curve", "psi_sum", "rectangle_series_oracle", "run_suite",
    "triangle_from_angles",
]
