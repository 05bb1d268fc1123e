import math
import warnings

import numpy as np
import pytest

from triheat import inverse
from triheat.asymptotics import InvariantTriple, asymptotic_curve
from triheat.errors import InconsistentTripleError, NonMonotoneError
from triheat.forward import FemConfig, HeatCurve, heat_content_fem, rectangle_series_oracle
from triheat.inverse import (EQUILATERAL_BAND, invert_curve, invert_triple, max_iterations,
                             phi_profile_on_level)
from triheat.moduli import (EQUILATERAL, PSI_MIN, AnglePoint, phi_sum, psi_level_curve,
                            triangle_from_angles)
from triheat.quadrature import FnEval
from triheat.specfun import phi


def triple_of(p, area=1.0):
    tri = triangle_from_angles(p, area)
    return InvariantTriple(tri.area, tri.perimeter, phi_sum(p).value)


def random_points(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        w = rng.dirichlet([2.0, 2.0, 2.0]) * math.pi
        if w.min() > 0.05:
            out.append(AnglePoint.from_angles(w, tol=1e-12))
    return out


def test_equilateral_triple():
    t = InvariantTriple(math.sqrt(3) / 4, 3.0, 3 * phi(math.pi / 3).value)
    r = invert_triple(t)
    assert np.allclose(r.triangle.sides, (1, 1, 1), atol=1e-12)
    assert r.meta["equilateral"]


def test_right_isosceles_triple():
    t = InvariantTriple(0.5, 2 + math.sqrt(2), 2 * phi(math.pi / 4).value + phi(math.pi / 2).value)
    r = invert_triple(t)
    assert np.allclose(r.angles.angles, (math.pi / 4, math.pi / 4, math.pi / 2), atol=1e-8)
    assert np.allclose(r.triangle.sides, (1, 1, math.sqrt(2)), atol=1e-7)


def test_round_trip_random_triangles():
    rng = np.random.default_rng(1)
    for p in random_points(40, seed=3):
        area = float(rng.uniform(0.2, 5.0))
        t = triple_of(p, area)
        r = invert_triple(t)
        assert max(abs(a - b) for a, b in zip(r.angles.angles, p.angles)) < 1e-6
        assert r.angle_residual <= inverse.DEFAULT_TOL
        assert abs(r.triangle.perimeter ** 2 / (4 * r.triangle.area) - t.psi_level) < 1e-9
        assert 0.0 <= r.curve_parameter <= 1.0


def test_iteration_bound():
    for tol in (1e-6, 1e-10, 1e-13):
        r = invert_triple(triple_of(AnglePoint.from_angles([0.5, 1.2, math.pi - 1.7])), tol)
        assert r.iterations <= max_iterations(tol)
        assert r.angle_residual <= tol
    assert max_iterations(1e-13) == math.ceil(math.log2(1e13)) + inverse.ITERATION_MARGIN


def test_direction_reported():
    r = invert_triple(triple_of(AnglePoint.from_angles([0.5, 1.2, math.pi - 1.7])))
    assert r.monotonicity_direction in ("increasing", "decreasing")


def test_equilateral_band():
    area = 2.0
    for bump in (0.0, 0.5 * EQUILATERAL_BAND, EQUILATERAL_BAND):
        c = PSI_MIN + bump
        per = math.sqrt(4 * area * c)
        for phi_in in (math.sqrt(3), math.sqrt(3) + 5e-7):
            r = invert_triple(InvariantTriple(area, per, phi_in))
            assert r.angles == EQUILATERAL
            assert r.triangle.area == pytest.approx(area, rel=1e-12)


def test_equilateral_band_rejects_wrong_phi():
    with pytest.raises(InconsistentTripleError):
        invert_triple(InvariantTriple(math.sqrt(3) / 4, 3.0, 1.0))


def test_square_triple_rejected():
    with pytest.raises(InconsistentTripleError):
        invert_triple(InvariantTriple(1.0, 4.0, 4 / math.pi))


def test_phi_out_of_range_rejected():
    t = triple_of(AnglePoint.from_angles([0.6, 1.0, math.pi - 1.6]))
    with pytest.raises(InconsistentTripleError):
        invert_triple(InvariantTriple(t.area, t.perimeter, t.phi_sum + 0.05))


def test_nonmonotone_profile_is_flagged(monkeypatch):
    real = inverse.phi_sum
    calls = {"n": 0}

    def bumpy(p, cfg=None):
        calls["n"] += 1
        f = real(p)
        # A large bump in the middle of the arc breaks monotonicity.
        bump = 0.1 if abs(p.beta - 1.0) < 0.15 else 0.0
        return FnEval(f.value + bump, f.error_estimate)

    monkeypatch.setattr(inverse, "phi_sum", bumpy)
    t = triple_of(AnglePoint.from_angles([0.6, 1.0, math.pi - 1.6]))
    with pytest.raises(NonMonotoneError):
        invert_triple(t)
    assert calls["n"] >= inverse.PROFILE_PROBES


def test_invalid_tol():
    with pytest.raises(ValueError):
        invert_triple(InvariantTriple(1.0, 5.0, 2.0), tol=0.0)


def test_injectivity_witness():
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 50:
        c = float(rng.uniform(5.4, 15.0))
        seg = psi_level_curve(c, n_samples=3)
        s1, s2 = rng.uniform(0, 1, 2)
        if abs(s1 - s2) < 0.05:
            continue
        p, q = seg.point(s1), seg.point(s2)
        fp, fq = phi_sum(p), phi_sum(q)
        assert abs(fp.value - fq.value) > fp.error_estimate + fq.error_estimate
        checked += 1


def test_invert_exact_model_curve():
    p = AnglePoint.from_angles([0.45, 1.3, math.pi - 1.75])
    tri = triangle_from_angles(p, 1.3)
    times = np.geomspace(1e-6, 1e-3, 30)
    curve = asymptotic_curve(p.angles, tri.area, tri.perimeter, times)
    r = invert_curve(curve, (1e-6, 1e-3))
    assert max(abs(a - b) for a, b in zip(r.angles.angles, p.angles)) < 1e-6
    assert "fit" in r.meta


def test_invert_fem_curve_scalene():
    p = AnglePoint.from_angles([0.6, 1.0, math.pi - 1.6])
    tri = triangle_from_angles(p, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        # Richardson over two refinements sharpens Phi enough to land on its narrow range.
        curve = heat_content_fem(tri, FemConfig(refinement=7, dt=1e-5, t_max=1e-2,
                                                extrapolate=True))
    r = invert_curve(curve, (1e-3, 1e-2))
    assert max(abs(a - b) for a, b in zip(r.angles.angles, p.angles)) < 5e-2


def test_rectangle_curve_rejected():
    times = np.linspace(1e-5, 1e-3, 30)
    curve = HeatCurve(times, [rectangle_series_oracle(1, 1, t) for t in times], "rectangle_series")
    with pytest.raises(InconsistentTripleError):
        invert_curve(curve, (1e-5, 1e-3))


def test_profile_on_level():
    prof = phi_profile_on_level(6.0, 64, with_error=True)
    s = np.array([r[0] for r in prof])
    v = np.array([r[1] for r in prof])
    e = np.array([r[2] for r in prof])
    assert s[0] == 0.0 and s[-1] == 1.0
    assert np.all(v > 0)
    steps = np.diff(v)
    assert np.all(np.abs(steps) > e[:-1] + e[1:])
    assert np.all(np.sign(steps) == np.sign(steps[0]))
    seg = psi_level_curve(6.0, 64)
    a, b = seg.endpoints
    assert abs(a.alpha - a.beta) < 1e-10 and abs(b.beta - b.gamma) < 1e-10


def test_result_json_shape():
    r = invert_triple(triple_of(AnglePoint.from_angles([0.6, 1.0, math.pi - 1.6])))
    d = r.to_dict()
    assert {"angles", "sides", "area", "perimeter", "residuals", "direction",
            "iterations"} <= set(d)
    assert len(d["angles"]) == 3 and len(d["sides"]) == 3
