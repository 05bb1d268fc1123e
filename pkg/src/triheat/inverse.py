"""Reconstruct a triangle from (area, perimeter, Phi).

Area and perimeter fix the similarity invariant Psi = P^2 / (4 A) and hence one arc of
a level set of Psi in the canonical sector of angle space.  Phi is monotone along that
arc, so a bisection on the arc parameter locates the unique angle triple; scaling to the
given area then fixes the triangle up to isometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .asymptotics import FitReport, InvariantTriple, extract_invariants
from .errors import InconsistentTripleError, LevelTooLowError, NonMonotoneError
from .forward.curve import HeatCurve
from .moduli import (EQUILATERAL, PSI_MIN, AnglePoint, LevelCurveSegment, Triangle, phi_sum,
                     psi_level_curve, psi_sum, triangle_from_angles)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

DEFAULT_TOL = 1e-13
# Psi levels within this distance of 3 sqrt(3) are treated as the equilateral point.
EQUILATERAL_BAND = 1e-9
# The Phi input is only loosely constrained there: Phi varies by O(band) across the band.
EQUILATERAL_PHI_TOL = 1e-6
ITERATION_MARGIN = 8
PROFILE_PROBES = 9


@dataclass(frozen=True)
class InversionResult:
    triangle: Triangle
    angle_residual: float
    curve_parameter: float
    iterations: int
    monotonicity_direction: str
    angles: AnglePoint = EQUILATERAL
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"angles": list(self.angles.angles), "sides": list(self.triangle.sides),
                "area": self.triangle.area, "perimeter": self.triangle.perimeter,
                "residuals": {"phi": self.angle_residual,
                              "psi": self.meta.get("psi_residual", 0.0)},
                "direction": self.monotonicity_direction, "iterations": self.iterations,
                "curve_parameter": self.curve_parameter}


def max_iterations(tol: float) -> int:
    return math.ceil(math.log2(1.0 / tol)) + ITERATION_MARGIN


def _phi_at(seg: LevelCurveSegment, s: float, cfg: QuadratureConfig):
    p = seg.point(s)
    return p, phi_sum(p, cfg)


def _equilateral(target: InvariantTriple, cfg: QuadratureConfig) -> InversionResult:
    phi_eq = phi_sum(EQUILATERAL, cfg)
    resid = abs(phi_eq.value - target.phi_sum)
    if resid > EQUILATERAL_PHI_TOL + phi_eq.error_estimate:
        raise InconsistentTripleError(
            f"Psi level is equilateral but Phi = {target.phi_sum!r} differs from "
            f"3 phi(pi/3) = {phi_eq.value!r} by {resid:.3g}")
    tri = triangle_from_angles(EQUILATERAL, target.area)
    return InversionResult(tri, resid, 0.0, 0, "increasing", EQUILATERAL,
                           {"psi_residual": abs(psi_sum(EQUILATERAL) - target.psi_level),
                            "equilateral": True})


def invert_triple(target: InvariantTriple, tol: float = DEFAULT_TOL,
                  cfg: QuadratureConfig = DEFAULT_CONFIG) -> InversionResult:
    """Triangle (canonical sorted angles, scaled to ``target.area``) with the given triple.

    ``tol`` bounds |Phi(found) - Phi(target)|.  Raises :class:`InconsistentTripleError`
    if no triangle attains the triple and :class:`NonMonotoneError` if Phi is found not to
    be monotone along the level arc.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    c = target.psi_level
    if c < PSI_MIN - EQUILATERAL_BAND:
        raise InconsistentTripleError(
            f"P^2/(4A) = {c!r} is below 3 sqrt(3) = {PSI_MIN!r}; no triangle has this triple")
    if c <= PSI_MIN + EQUILATERAL_BAND:
        return _equilateral(target, cfg)
    try:
        seg = psi_level_curve(c, n_samples=PROFILE_PROBES)
    except LevelTooLowError as exc:
        raise InconsistentTripleError(str(exc)) from exc

    # Coarse profile: fixes the direction and guards monotonicity.
    probes = [phi_sum(p, cfg) for p in seg.samples]
    values = np.array([f.value for f in probes])
    errs = np.array([f.error_estimate for f in probes])
    direction = "increasing" if values[-1] > values[0] else "decreasing"
    sign = 1.0 if direction == "increasing" else -1.0
    steps = sign * np.diff(values)
    if np.any(steps < -(errs[:-1] + errs[1:])):
        k = int(np.argmin(steps))
        raise NonMonotoneError(
            f"Phi is not monotone on the level Psi = {c!r} between s = {seg.params[k]:.4g} "
            f"and s = {seg.params[k + 1]:.4g}")
    lo_val, hi_val = (float(values[0]), float(values[-1])) if sign > 0 else \
        (float(values[-1]), float(values[0]))
    slack = tol + errs.max()
    goal = target.phi_sum
    if not lo_val - slack <= goal <= hi_val + slack:
        raise InconsistentTripleError(
            f"Phi = {goal!r} outside the attainable range [{lo_val!r}, {hi_val!r}] on the "
            f"level Psi = {c!r}")

    # Bisection on the arc parameter; g(s) = sign (Phi(s) - goal) is increasing.
    idx = int(np.searchsorted(sign * values, sign * goal))
    a = seg.params[max(idx - 1, 0)]
    b = seg.params[min(idx, len(values) - 1)]
    best_s = a if abs(values[max(idx - 1, 0)] - goal) <= abs(values[min(idx, len(values) - 1)] - goal) else b
    best_p, best_f = _phi_at(seg, best_s, cfg)
    iterations = 0
    cap = max_iterations(tol)
    while abs(best_f.value - goal) > tol and iterations < cap:
        mid = 0.5 * (a + b)
        p, f = _phi_at(seg, mid, cfg)
        iterations += 1
        if abs(f.value - goal) < abs(best_f.value - goal):
            best_s, best_p, best_f = mid, p, f
        if sign * (f.value - goal) < 0:
            a = mid
        else:
            b = mid
        if b - a <= 1e-16:
            break
    resid = abs(best_f.value - goal)
    tri = triangle_from_angles(best_p, target.area)
    meta = {"psi_level": c, "psi_residual": abs(psi_sum(best_p) - c),
            "phi_found": best_f.value, "phi_error": best_f.error_estimate,
            "bracket_width": b - a, "phi_range": (float(lo_val), float(hi_val))}
    return InversionResult(tri, resid, float(best_s), iterations, direction, best_p, meta)


def invert_curve(curve: HeatCurve, t_window: Sequence[float], tol: float = DEFAULT_TOL,
                 cfg: QuadratureConfig = DEFAULT_CONFIG, cap=None) -> InversionResult:
    """Fit the three leading coefficients of ``curve`` on ``t_window`` and invert them."""
    report: FitReport = extract_invariants(curve, t_window, cap=cap)
    result = invert_triple(report.triple, tol, cfg)
    meta = dict(result.meta)
    meta["fit"] = report
    return InversionResult(result.triangle, result.angle_residual, result.curve_parameter,
                           result.iterations, result.monotonicity_direction, result.angles, meta)


def phi_profile_on_level(c: float, n: int = 64, cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                         with_error: bool = False) -> list:
    """Phi along the canonical arc of {Psi = c}: pairs (s, Phi), or triples with the error.

    s = 0 is the alpha = beta end of the arc and s = 1 the beta = gamma end.
    """
    seg = psi_level_curve(c, n_samples=n)
    out = []
    for s, p in zip(seg.params, seg.samples):
        f = phi_sum(p, cfg)
        out.append((s, f.value, f.error_estimate) if with_error else (s, f.value))
    return out
