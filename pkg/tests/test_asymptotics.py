import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triheat.asymptotics import (FitReport, InvariantTriple, asymptotic_curve, corner_sum,
                                 extract_invariants, heat_content_asymptotic,
                                 heat_trace_asymptotic)
from triheat.errors import BadFitError, DomainError, IllConditionedError
from triheat.forward import FemConfig, HeatCurve, heat_content_fem, rectangle_series_oracle
from triheat.forward.series import log_rectangle_remainder
from triheat.moduli import AnglePoint, Triangle, phi_sum, triangle_from_angles
from triheat.specfun import phi

SQ = [math.pi / 2] * 4
EQ = [math.pi / 3] * 3


def test_square_three_term_value():
    v = heat_content_asymptotic(SQ, 1.0, 4.0, 0.01)
    closed = 1 - (8 / math.sqrt(math.pi)) * 0.1 + 0.04 * 4 / math.pi
    assert v == pytest.approx(closed, abs=1e-14)
    assert abs(v - rectangle_series_oracle(1, 1, 0.01)) < 1e-10


def test_equilateral_term_by_term():
    t = 1e-4
    v, e = heat_content_asymptotic(EQ, math.sqrt(3) / 4, 3.0, t, with_error=True)
    terms = math.sqrt(3) / 4 - 6 / math.sqrt(math.pi) * 0.01 + 4e-4 * 3 * phi(math.pi / 3).value
    assert v == pytest.approx(terms, abs=1e-15)
    assert 0 <= e < 1e-15


def test_small_time_limit_is_area():
    assert heat_content_asymptotic(EQ, 2.0, 9.0, 1e-14) == pytest.approx(2.0, abs=1e-5)


def test_vectorised_times():
    t = np.array([1e-4, 1e-3, 1e-2])
    v = heat_content_asymptotic(SQ, 1.0, 4.0, t)
    assert v.shape == (3,)
    assert v[0] == heat_content_asymptotic(SQ, 1.0, 4.0, 1e-4)


def test_polygon_validation():
    with pytest.raises(DomainError):
        heat_content_asymptotic([1.0, 1.0], 1.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        heat_content_asymptotic([4.0, 1.0, math.pi - 5.0], 1.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        heat_content_asymptotic([1.0, 1.0, 1.0], 1.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        heat_content_asymptotic(EQ, 1.0, 1.0, -0.1)
    with pytest.raises(DomainError):
        heat_content_asymptotic(EQ, -1.0, 1.0, 0.1)


def test_corner_sums():
    assert corner_sum(EQ) == pytest.approx(1 / 3, abs=1e-15)
    assert corner_sum(SQ) == pytest.approx(1 / 4, abs=1e-15)


def test_heat_trace_leading_term_scaling():
    a = heat_trace_asymptotic(EQ, 1.0, 1e-9, 1e-3) - corner_sum(EQ)
    b = heat_trace_asymptotic(EQ, 1.0, 1e-9, 4e-3) - corner_sum(EQ)
    assert a / b == pytest.approx(4.0, rel=1e-6)


def test_remainder_ratio_decreases():
    logs = [log_rectangle_remainder(1.0, 1.0, t) - math.log(t) for t in (1e-2, 1e-3, 1e-4)]
    assert logs[0] > logs[1] > logs[2]
    assert logs[0] == pytest.approx(-24.72, abs=0.01)


def exact_curve(triple, times):
    c0, c1, c2 = triple.coefficients()
    return HeatCurve(times, c0 + c1 * np.sqrt(times) + c2 * times, "asymptotic")


def test_synthetic_fit_recovers_square_triple():
    times = np.geomspace(1e-5, 1e-2, 20)
    h = 1 - (8 / math.sqrt(math.pi)) * np.sqrt(times) + (16 / math.pi) * times
    rep = extract_invariants(HeatCurve(times, h, "asymptotic"), (1e-5, 1e-2), cap=1e-2)
    assert rep.triple.area == pytest.approx(1.0, abs=1e-10)
    assert rep.triple.perimeter == pytest.approx(4.0, abs=1e-10)
    assert rep.triple.phi_sum == pytest.approx(4 / math.pi, abs=1e-10)
    assert rep.residual_norm < 1e-12
    assert rep.n_samples == 20


def test_rectangle_oracle_fit():
    times = np.linspace(1e-5, 1e-3, 40)
    vals = [rectangle_series_oracle(1.0, 2.0, t) for t in times]
    rep = extract_invariants(HeatCurve(times, vals, "rectangle_series"), (1e-5, 1e-3))
    assert rep.triple.area == pytest.approx(2.0, abs=1e-6)
    assert rep.triple.perimeter == pytest.approx(6.0, abs=1e-6)
    assert rep.triple.phi_sum == pytest.approx(4 / math.pi, abs=1e-6)


def test_fem_right_isosceles_fit():
    tri = Triangle((1.0, 1.0, math.sqrt(2.0)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        # The window opens at t = 1e-4, so the first steps must resolve it: dt = 2e-5.
        curve = heat_content_fem(tri, FemConfig(refinement=8, dt=2e-5, t_max=5e-3))
    rep = extract_invariants(curve, (1e-4, 5e-3))
    truth = 2 * phi(math.pi / 4).value + phi(math.pi / 2).value
    assert abs(rep.triple.area - 0.5) < 1e-3
    assert abs(rep.triple.perimeter - (2 + math.sqrt(2))) < 5e-3
    assert abs(rep.triple.phi_sum - truth) < 2e-2


def test_fit_is_row_permutation_invariant():
    times = np.geomspace(1e-5, 1e-2, 15)
    tri = InvariantTriple(0.7, 4.2, 2.1)
    base = exact_curve(tri, times)
    rng = np.random.default_rng(0)
    noisy = HeatCurve(times, base.values + 1e-9 * rng.standard_normal(15), "fem")
    a = extract_invariants(noisy, (1e-5, 1e-2), cap=1.0)
    order = rng.permutation(15)
    # Feed the rows in a different order by fitting the permuted design directly.
    design = np.column_stack([np.ones(15), np.sqrt(times), times])[order]
    coef, *_ = np.linalg.lstsq(design, noisy.values[order], rcond=None)
    assert coef[0] == pytest.approx(a.triple.area, rel=1e-9)
    assert -coef[1] * math.sqrt(math.pi) / 2 == pytest.approx(a.triple.perimeter, rel=1e-9)


def test_fit_guards():
    times = np.geomspace(1e-5, 1e-2, 20)
    curve = exact_curve(InvariantTriple(1.0, 4.0, 4 / math.pi), times)
    with pytest.raises(DomainError):
        extract_invariants(curve, (1e-3, 1.1e-3))
    with pytest.raises(DomainError):
        extract_invariants(curve, (1e-5, 1e-2), cap=1e-3)
    with pytest.raises(DomainError):
        extract_invariants(curve, (1e-2, 1e-5))
    with pytest.raises(IllConditionedError):
        extract_invariants(curve, (1e-5, 1e-2), cap=1.0, cond_threshold=2.0)


def test_fit_bad_data():
    times = np.geomspace(1e-5, 1e-2, 20)
    curve = HeatCurve(times, -1.0 + np.sqrt(times), "fem")
    with pytest.raises(BadFitError):
        extract_invariants(curve, (1e-5, 1e-2), cap=1.0)


def test_monte_carlo_curves_are_weighted():
    times = np.geomspace(1e-4, 1e-2, 10)
    tri = InvariantTriple(1.0, 4.0, 4 / math.pi)
    base = exact_curve(tri, times)
    mc = HeatCurve(times, base.values, "montecarlo", np.full(10, 1e-3))
    rep = extract_invariants(mc, (1e-4, 1e-2), cap=1.0)
    assert rep.weighted
    assert rep.triple.area == pytest.approx(1.0, abs=1e-9)


def test_fit_report_dict_fields():
    times = np.geomspace(1e-5, 1e-2, 20)
    rep = extract_invariants(exact_curve(InvariantTriple(1, 4, 1.2), times), (1e-5, 1e-2), cap=1)
    d = rep.to_dict()
    assert set(d) == {"area", "perimeter", "phi_sum", "residual", "cond", "window"}
    assert isinstance(rep, FitReport)


def test_invariant_triple():
    t = InvariantTriple(math.sqrt(3) / 4, 3.0, 1.7)
    assert t.psi_level == pytest.approx(3 * math.sqrt(3), rel=1e-15)
    assert t.admits_triangle(1e-12)
    assert not InvariantTriple(1.0, 4.0, 1.27).admits_triangle()
    with pytest.raises(DomainError):
        InvariantTriple(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        InvariantTriple(1.0, 1.0, math.nan)


def test_asymptotic_curve_method_label():
    c = asymptotic_curve(EQ, math.sqrt(3) / 4, 3.0, [1e-4, 1e-3])
    assert c.method == "asymptotic"
    assert c.meta["area"] == pytest.approx(math.sqrt(3) / 4)


angle_pairs = st.tuples(st.floats(0.1, 1.0), st.floats(0.1, 0.9))


@settings(max_examples=25, deadline=None)
@given(angle_pairs, st.floats(0.1, 10.0))
def test_fit_inverts_exact_model(uv, area):
    a = uv[0]
    b = uv[1] * (math.pi - a)
    if min(b, math.pi - a - b) < 0.05:
        return
    p = AnglePoint.from_angles([a, b, math.pi - a - b])
    tri = triangle_from_angles(p, area)
    times = np.geomspace(1e-6, 1e-3, 25) * area
    curve = asymptotic_curve(p.angles, tri.area, tri.perimeter, times)
    rep = extract_invariants(curve, (times[0], times[-1]))
    assert rep.triple.area == pytest.approx(tri.area, rel=1e-10)
    assert rep.triple.perimeter == pytest.approx(tri.perimeter, rel=1e-10)
    assert rep.triple.phi_sum == pytest.approx(phi_sum(p).value, rel=1e-8)
