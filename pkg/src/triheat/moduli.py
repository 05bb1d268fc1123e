"""Triangles up to isometry and the angle simplex.

A triangle up to similarity is a point of the simplex {alpha + beta + gamma = pi}
modulo permutations; the canonical representative is the sorted triple
alpha <= beta <= gamma.  On the simplex

    Psi = cot(alpha/2) + cot(beta/2) + cot(gamma/2) = perimeter^2 / (4 area)

is strictly convex with its minimum 3 sqrt(3) at the equilateral point, so each level
set Psi = c > 3 sqrt(3) meets the canonical sector in a single arc running from the
isosceles line alpha = beta to the isosceles line beta = gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateTriangleError, DomainError, LevelTooLowError
from .quadrature import DEFAULT_CONFIG, FnEval, QuadratureConfig
from .specfun import phi, psi

ANGLE_FLOOR = 1e-8
SUM_TOL = 1e-12
PSI_MIN = 3.0 * math.sqrt(3.0)


@dataclass(frozen=True)
class AnglePoint:
    """Sorted interior angles of a triangle; a point of the canonical sector."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        a, b, g = self.alpha, self.beta, self.gamma
        if not (0.0 < a and 0.0 < b and 0.0 < g and max(a, b, g) < math.pi):
            raise DomainError(f"angles must lie in (0, pi): {(a, b, g)}")
        if not (a <= b <= g):
            raise DomainError("AnglePoint angles must be sorted; use AnglePoint.from_angles")
        if abs(a + b + g - math.pi) > SUM_TOL:
            raise DomainError(f"angles sum to {a + b + g!r}, not pi")

    @classmethod
    def from_angles(cls, angles: Sequence[float], tol: float = SUM_TOL) -> "AnglePoint":
        """Canonicalise any ordering; the largest angle absorbs sum roundoff."""
        if len(angles) != 3:
            raise DomainError("a triangle has three angles")
        a, b, g = sorted(float(t) for t in angles)
        if abs(a + b + g - math.pi) > tol:
            raise DomainError(f"angles sum to {a + b + g!r}, not pi (off by {a + b + g - math.pi:.3g})")
        return cls(a, b, math.pi - a - b) if math.pi - a - b >= b else cls(a, b, g)

    @property
    def angles(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)

    def as_array(self) -> np.ndarray:
        return np.array(self.angles)


EQUILATERAL = AnglePoint(math.pi / 3, math.pi / 3, math.pi / 3)


def _heron(a: float, b: float, c: float) -> float:
    # Kahan's ordering (a >= b >= c) keeps the product accurate for needle triangles.
    a, b, c = sorted((a, b, c), reverse=True)
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(prod)


@dataclass(frozen=True)
class Triangle:
    """Planar triangle up to isometry, stored as sorted side lengths a <= b <= c."""

    sides: tuple

    def __post_init__(self):
        s = tuple(sorted(float(x) for x in self.sides))
        if len(s) != 3 or s[0] <= 0:
            raise DegenerateTriangleError(f"need three positive sides, got {self.sides}")
        if not s[0] + s[1] > s[2]:
            raise DegenerateTriangleError(f"sides {s} violate the strict triangle inequality")
        object.__setattr__(self, "sides", s)

    @property
    def area(self) -> float:
        return _heron(*self.sides)

    @property
    def perimeter(self) -> float:
        return math.fsum(self.sides)

    @property
    def angles(self) -> AnglePoint:
        # Half-angle formula tan(A/2) = r / (s - a) with inradius r = area / s.
        a, b, c = self.sides
        s = 0.5 * self.perimeter
        r = self.area / s
        t = [2.0 * math.atan2(r, s - x) for x in (a, b, c)]
        if min(t) < ANGLE_FLOOR:
            raise DegenerateTriangleError(f"smallest angle {min(t):.3g} below floor {ANGLE_FLOOR:g}")
        return AnglePoint.from_angles(t, tol=1e-10)

    def vertices(self) -> np.ndarray:
        """Counter-clockwise vertices with the longest side on the x-axis."""
        a, b, c = self.sides
        # Angle at the origin is opposite side a (the smallest).
        alpha = self.angles.alpha
        return np.array([[0.0, 0.0], [c, 0.0], [b * math.cos(alpha), b * math.sin(alpha)]])

    def scaled(self, s: float) -> "Triangle":
        return Triangle(tuple(s * x for x in self.sides))


def theta_sum(p) -> float:
    """alpha + beta + gamma for an AnglePoint or a raw triple."""
    angles = p.angles if isinstance(p, AnglePoint) else tuple(p)
    return math.fsum(angles)


def psi_sum(p) -> float:
    """Psi = sum of cot(theta_i / 2)."""
    angles = p.angles if isinstance(p, AnglePoint) else tuple(p)
    return math.fsum(psi(t) for t in angles)


def phi_sum(p, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """Phi = sum of phi(theta_i); errors add."""
    angles = p.angles if isinstance(p, AnglePoint) else tuple(p)
    total = FnEval(0.0, 0.0)
    for t in angles:
        total = total + phi(t, cfg)
    return total


def triangle_from_angles(p: AnglePoint, area: float, floor: float = ANGLE_FLOOR) -> Triangle:
    """Triangle with the given angles and area (law of sines, circumradius scaling)."""
    if not area > 0:
        raise DomainError("area must be positive")
    if p.alpha < floor:
        raise DegenerateTriangleError(f"smallest angle {p.alpha:.3g} below floor {floor:g}")
    sines = [math.sin(t) for t in p.angles]
    # area = 2 R^2 sin(alpha) sin(beta) sin(gamma), side_i = 2 R sin(theta_i)
    R = math.sqrt(area / (2.0 * sines[0] * sines[1] * sines[2]))
    return Triangle(tuple(2.0 * R * s for s in sines))


def is_isosceles(p: AnglePoint, tol: float = 1e-10) -> bool:
    return min(abs(p.alpha - p.beta), abs(p.beta - p.gamma)) <= tol


# -- level curves of Psi --------------------------------------------------------------


def _pair_gap(total: float, level: float) -> float:
    """gamma - beta for the pair with beta + gamma = total and psi(beta) + psi(gamma) = level.

    Uses psi(b) + psi(g) = 2 sin(S/2) / (cos((g-b)/2) - cos(S/2)), so
    1 - cos((g-b)/2) = 2 sin^2(S/4) - 2 sin(S/2) / level.
    """
    w = 2.0 * math.sin(0.25 * total) ** 2 - 2.0 * math.sin(0.5 * total) / level
    w = min(max(w, 0.0), 2.0)
    return 4.0 * math.asin(math.sqrt(0.5 * w))


def _edge_levels(alpha: float) -> tuple:
    """Psi on the two isosceles lines through the smallest angle ``alpha``."""
    on_beta_gamma = psi(alpha) + 2.0 * psi(0.5 * (math.pi - alpha))
    on_alpha_beta = 2.0 * psi(alpha) + psi(math.pi - 2.0 * alpha)
    return on_beta_gamma, on_alpha_beta


def level_alpha_range(c: float) -> tuple:
    """(alpha at the beta=gamma end, alpha at the alpha=beta end) of the level arc."""
    if not c > PSI_MIN:
        raise LevelTooLowError(f"Psi level {c!r} is not above the minimum 3*sqrt(3) = {PSI_MIN!r}")
    third = math.pi / 3.0
    lo = ANGLE_FLOOR

    def solve(fn):
        if fn(third) >= 0.0:
            return third
        return brentq(fn, lo, third, xtol=1e-16, rtol=1e-15, maxiter=500)

    a_bg = solve(lambda a: _edge_levels(a)[0] - c)
    a_ab = solve(lambda a: _edge_levels(a)[1] - c)
    return a_bg, a_ab


def point_on_level(c: float, alpha: float) -> AnglePoint:
    """Canonical point with smallest angle ``alpha`` on the level Psi = c."""
    alpha = float(alpha)
    total = math.pi - alpha
    rest = c - psi(alpha)
    if rest <= 0:
        raise DomainError("level too low for this alpha")
    gap = _pair_gap(total, rest)
    beta = max(0.5 * (total - gap), alpha)
    gamma = math.pi - alpha - beta
    return AnglePoint(alpha, beta, gamma)


@dataclass(frozen=True)
class LevelCurveSegment:
    """Arc of {Psi = psi_value} in the canonical sector, from alpha=beta to beta=gamma."""

    psi_value: float
    params: tuple
    samples: tuple
    endpoints: tuple = field(default=())
    alpha_range: tuple = field(default=())

    def __post_init__(self):
        if not self.endpoints and self.samples:
            object.__setattr__(self, "endpoints", (self.samples[0], self.samples[-1]))

    def point(self, s: float) -> AnglePoint:
        """Point at curve parameter s in [0, 1] (0: alpha=beta end, 1: beta=gamma end)."""
        a_bg, a_ab = self.alpha_range
        return point_on_level(self.psi_value, a_ab - s * (a_ab - a_bg))


def psi_level_curve(c: float, n_samples: int = 64) -> LevelCurveSegment:
    """Sample the canonical-sector arc of the level set Psi = c.

    The arc is parametrised by its smallest angle alpha, which is monotone along it;
    for each alpha the remaining pair is fixed in closed form by ``_pair_gap``.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    a_bg, a_ab = level_alpha_range(c)
    params = np.linspace(0.0, 1.0, n_samples)
    samples = []
    for s in params:
        alpha = a_ab - s * (a_ab - a_bg)
        samples.append(point_on_level(c, alpha))
    # Endpoints snapped exactly onto their isosceles lines.
    first = samples[0]
    samples[0] = AnglePoint(first.alpha, first.alpha, math.pi - 2.0 * first.alpha) \
        if math.pi - 2.0 * first.alpha >= first.alpha else first
    last_alpha = samples[-1].alpha
    half = 0.5 * (math.pi - last_alpha)
    samples[-1] = AnglePoint(last_alpha, half, math.pi - last_alpha - half)
    return LevelCurveSegment(c, tuple(float(s) for s in params), tuple(samples),
                             alpha_range=(a_bg, a_ab))
