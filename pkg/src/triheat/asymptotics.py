"""Small-time expansions for polygons and recovery of their coefficients.

For a convex polygon D with interior angles theta_i,

    H_D(t) = |D| - (2 |dD| / sqrt(pi)) sqrt(t) + 4 t sum phi(theta_i) + O(exp(-q/t))
    h_D(t) = |D| / (4 pi t) - |dD| / (8 sqrt(pi t)) + (1/24) sum (pi/theta_i - theta_i/pi) + ...

where H is the heat content and h the heat trace.  ``extract_invariants`` inverts the
first expansion on a window of a sampled curve by least squares in the basis
{1, sqrt(t), t}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadFitError, DomainError, IllConditionedError
from .forward.curve import HeatCurve
from .moduli import PSI_MIN
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .specfun import phi_sum_raw

SQRT_PI = math.sqrt(math.pi)
ANGLE_SUM_TOL = 1e-9
MIN_FIT_SAMPLES = 5
COND_THRESHOLD = 1e8
# Fit windows must satisfy t_max <= CAP_FACTOR * (area / perimeter)^2.
CAP_FACTOR = 1.0


@dataclass(frozen=True)
class InvariantTriple:
    """(area, perimeter, Phi): the three leading heat-content coefficients in geometric form.

    Any polygon yields such a triple; only those with ``psi_level >= 3 sqrt(3)`` can come
    from a triangle, which is checked by the inversion rather than here.
    """

    area: float
    perimeter: float
    phi_sum: float

    def __post_init__(self):
        for name in ("area", "perimeter", "phi_sum"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")

    @property
    def psi_level(self) -> float:
        """perimeter^2 / (4 area); equals sum cot(theta_i / 2) for a triangle."""
        return self.perimeter ** 2 / (4.0 * self.area)

    def admits_triangle(self, tol: float = 0.0) -> bool:
        return self.psi_level >= PSI_MIN - tol

    def coefficients(self) -> tuple:
        """(c0, c1, c2) with H(t) ~ c0 + c1 sqrt(t) + c2 t."""
        return (self.area, -2.0 * self.perimeter / SQRT_PI, 4.0 * self.phi_sum)


@dataclass(frozen=True)
class FitReport:
    triple: InvariantTriple
    residual_norm: float
    condition_estimate: float
    t_window: tuple
    n_samples: int = 0
    weighted: bool = False
    coefficient_errors: tuple = ()

    def to_dict(self) -> dict:
        return {"area": self.triple.area, "perimeter": self.triple.perimeter,
                "phi_sum": self.triple.phi_sum, "residual": self.residual_norm,
                "cond": self.condition_estimate, "window": list(self.t_window)}


def _check_polygon(angles: Sequence[float]) -> list:
    angles = [float(a) for a in angles]
    if len(angles) < 3:
        raise DomainError("a polygon has at least three corners")
    for a in angles:
        if not 0.0 < a < math.pi:
            raise DomainError(
                f"corner angle {a!r} outside (0, pi); reflex corners are not supported")
    expected = (len(angles) - 2) * math.pi
    if abs(math.fsum(angles) - expected) > ANGLE_SUM_TOL * len(angles):
        raise DomainError(f"angles sum to {math.fsum(angles)!r}, expected {expected!r}")
    return angles


def _check_times(t):
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("times must be positive")
    return arr


def heat_content_asymptotic(poly_angles: Sequence[float], area: float, perimeter: float, t,
                            cfg: QuadratureConfig = DEFAULT_CONFIG, *, with_error: bool = False):
    """Three-term small-time heat content of a convex polygon (remainder dropped).

    ``t`` may be a scalar or an array.  With ``with_error`` a pair (value, error) is
    returned, the error being the propagated corner-function quadrature error.
    """
    angles = _check_polygon(poly_angles)
    if not (area > 0 and perimeter > 0):
        raise DomainError("area and perimeter must be positive")
    arr = _check_times(t)
    corner = phi_sum_raw(angles, cfg)
    value = area - 2.0 * perimeter / SQRT_PI * np.sqrt(arr) + 4.0 * arr * corner.value
    err = 4.0 * arr * corner.error_estimate
    if arr.ndim == 0:
        value, err = float(value), float(err)
    return (value, err) if with_error else value


def corner_sum(poly_angles: Sequence[float]) -> float:
    """(1/24) sum (pi/theta - theta/pi), the corner contribution to the heat trace."""
    angles = _check_polygon(poly_angles)
    return math.fsum(math.pi / a - a / math.pi for a in angles) / 24.0


def heat_trace_asymptotic(poly_angles: Sequence[float], area: float, perimeter: float, t):
    """Three-term small-time heat trace sum exp(-lambda_n t) of a convex polygon."""
    corners = corner_sum(poly_angles)
    if not (area > 0 and perimeter > 0):
        raise DomainError("area and perimeter must be positive")
    arr = _check_times(t)
    value = area / (4.0 * math.pi * arr) - perimeter / (8.0 * np.sqrt(math.pi * arr)) + corners
    return float(value) if arr.ndim == 0 else value


def asymptotic_curve(poly_angles: Sequence[float], area: float, perimeter: float,
                     times: Sequence[float], cfg: QuadratureConfig = DEFAULT_CONFIG) -> HeatCurve:
    """The three-term model sampled as a :class:`HeatCurve`."""
    times = np.asarray(times, dtype=float)
    value, err = heat_content_asymptotic(poly_angles, area, perimeter, times, cfg,
                                         with_error=True)
    return HeatCurve(times, value, "asymptotic", err,
                     {"area": area, "perimeter": perimeter, "angles": list(poly_angles)})


def _fit_weights(curve: HeatCurve, mask: np.ndarray) -> Optional[np.ndarray]:
    if curve.method != "montecarlo":
        return None
    err = curve.error_estimates[mask]
    if np.any(err <= 0):
        # Zero binomial error means the estimate saturated; fall back to a floor.
        positive = err[err > 0]
        floor = positive.min() if positive.size else 1.0
        err = np.maximum(err, floor)
    return 1.0 / err


def extract_invariants(curve: HeatCurve, t_window: Sequence[float], cap: Optional[float] = None,
                       cond_threshold: float = COND_THRESHOLD) -> FitReport:
    """Least-squares fit of H(t) ~ c0 + c1 sqrt(t) + c2 t on ``t_window``.

    Returns area = c0, perimeter = -c1 sqrt(pi) / 2 and Phi = c2 / 4.  Monte Carlo curves
    are weighted by 1 / err^2; other curves are fitted unweighted.  The fit is solved by
    QR on a column-equilibrated design whose 2-norm condition number is reported.

    ``cap`` bounds the largest fitted time; by default it is (area / perimeter)^2 computed
    from the fit itself, which keeps the boundary layer thinner than the inradius.
    """
    t0, t1 = (float(v) for v in t_window)
    if not 0 < t0 < t1:
        raise DomainError("window must satisfy 0 < t0 < t1")
    mask = (curve.times >= t0) & (curve.times <= t1)
    n = int(mask.sum())
    if n < MIN_FIT_SAMPLES:
        raise DomainError(f"only {n} samples in window [{t0:g}, {t1:g}]; need {MIN_FIT_SAMPLES}")
    t = curve.times[mask]
    h = curve.values[mask]
    design = np.column_stack([np.ones_like(t), np.sqrt(t), t])
    w = _fit_weights(curve, mask)
    if w is not None:
        design = design * w[:, None]
        h = h * w
    scale = np.linalg.norm(design, axis=0)
    scaled = design / scale
    q, r = np.linalg.qr(scaled)
    sv = np.linalg.svd(r, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if not cond <= cond_threshold:
        raise IllConditionedError(
            f"design condition {cond:.3g} exceeds {cond_threshold:.3g}; widen the window")
    coef = np.linalg.solve(r, q.T @ h) / scale
    resid = h - design @ coef
    residual_norm = float(np.linalg.norm(resid))
    # Coefficient standard errors from the residual variance (zero for exact data).
    dof = max(n - 3, 1)
    rinv = np.linalg.inv(r) / scale[:, None]
    cov = (rinv @ rinv.T) * (residual_norm ** 2 / dof if w is None else 1.0)
    coef_err = tuple(float(math.sqrt(max(v, 0.0))) for v in np.diag(cov))
    area = float(coef[0])
    perimeter = float(-coef[1] * SQRT_PI / 2.0)
    phi_total = float(coef[2] / 4.0)
    if not (area > 0 and perimeter > 0):
        raise BadFitError(f"fit gives area {area:.6g} and perimeter {perimeter:.6g}")
    if not phi_total > 0:
        raise BadFitError(f"fit gives nonpositive corner sum {phi_total:.6g}")
    limit = CAP_FACTOR * (area / perimeter) ** 2 if cap is None else float(cap)
    if t[-1] > limit:
        raise DomainError(
            f"window reaches t = {t[-1]:.3g}, beyond the small-time cap {limit:.3g}")
    return FitReport(InvariantTriple(area, perimeter, phi_total), residual_norm, cond,
                     (t0, t1), n, w is not None, coef_err)
