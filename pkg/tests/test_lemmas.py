import json
import math
import warnings

import numpy as np
import pytest

from triheat.lemmas import (CLAIMS, HALF_LOG2, TANGENT_SLOPE, CertReport, certify_constants,
                            certify_I3_bound, certify_lin_ind, certify_monotone_convex,
                            certify_proof_chain_log2, certify_proof_chain_xon6, claim_group,
                            list_claims, run_suite, suite_json)
from triheat.specfun import I_deriv, phi

X0 = 0.5 * math.log(2 + math.sqrt(3))

# The displayed inequalities and identities of the two lemma proofs, the independence
# mechanism and the convexity statements.  The registry must match this list exactly.
EXPECTED_IDS = {
    "phi.decreasing_convex", "psi.decreasing_convex", "phi_minus_psi.increasing_convex",
    "psi_tilde_deriv.decreasing_concave",
    "log2_chain.tilde_identity", "log2_chain.coth_form", "log2_chain.boundary_term",
    "log2_chain.phi_tilde_integral", "log2_chain.psi_tilde_series",
    "log2_chain.I2_equivalence", "log2_chain.step1", "log2_chain.step2", "log2_chain.step3",
    "log2_chain.step4", "log2_chain.final", "log2_chain.tanh_increasing",
    "xon6",
    "xon6_chain.target", "xon6_chain.derivative_identity", "xon6_chain.reduced",
    "xon6_chain.case_small", "xon6_chain.x0", "xon6_chain.case_large_bound",
    "xon6_chain.case_large_identity", "xon6_chain.quadratic_discriminant",
    "xon6_chain.case_mid", "xon6_chain.mid_roots", "xon6_chain.rhs_increasing",
    "xon6_chain.rhs_lower_bound", "xon6_chain.cosh_squared_monotone",
    "xon6_chain.cosh_squared_at_four_fifths", "xon6_chain.root_bound",
    "constants.integral_log_cosh", "constants.integral_y5", "constants.integral_bound",
    "constants.zeta5_le_zeta4", "constants.zeta4_value", "constants.pi4_le_three_halves",
    "constants.tangency", "constants.tangent_chain", "constants.six_log2",
    "constants.series_dominates", "constants.convexity_target",
    "lin_ind",
}


@pytest.fixture(scope="module")
def suite():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return run_suite()


def test_claim_registry_coverage(suite):
    assert set(CLAIMS) == EXPECTED_IDS
    assert {r.claim_id for r in suite} == EXPECTED_IDS
    assert len(list_claims()) == len(EXPECTED_IDS)
    assert all(CLAIMS[c] for c in CLAIMS)


def test_full_suite_passes(suite):
    failed = [r.claim_id for r in suite if not r.passed]
    assert failed == []
    assert all(r.min_margin > 0 for r in suite)


def test_saturation_points_vanish(suite):
    sat = [r for r in suite if "saturation_margin" in r.details]
    assert len(sat) >= 3
    for r in sat:
        assert abs(r.details["saturation_margin"]) <= 1e-12


def test_grid_refinement_stability():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        coarse = {r.claim_id: r for r in run_suite(grid_n=256)}
        fine = {r.claim_id: r for r in run_suite(grid_n=512)}
    for cid, r in coarse.items():
        if r.passed:
            assert fine[cid].passed, cid


def test_monotone_convex_examples():
    assert phi(0.5).value > phi(1.0).value > phi(2.0).value > phi(3.0).value
    for fn_id in ("phi", "psi", "phi_minus_halflog2_psi_deriv", "psi_tilde_deriv"):
        r = certify_monotone_convex(fn_id, grid_n=64)
        assert r.passed, fn_id
    with pytest.raises(ValueError):
        certify_monotone_convex("phi", grid_n=8)
    with pytest.raises(ValueError):
        certify_monotone_convex("zeta")


def test_psi_convex_divided_differences():
    from triheat.specfun import psi
    h = 1e-3
    for x in (0.5, 1.0, 2.0, 3.0):
        assert psi(x + h) - 2 * psi(x) + psi(x - h) > 0


def test_I3_bound_default_grid():
    r = certify_I3_bound()
    assert r.passed
    pts = r.grid_spec["mandatory"]
    assert any(abs(p - 0.4) < 1e-15 for p in pts)
    assert any(abs(p - X0) < 1e-15 for p in pts)
    assert X0 == pytest.approx(0.658479, abs=1e-6)


def test_I3_margin_examples():
    assert 0 - I_deriv(1e-8, 3) == pytest.approx(0.5, abs=1e-9)
    assert 10 / 6 - I_deriv(10.0, 3) > 0
    r = certify_I3_bound(grid=[1e-3, 0.4, X0, 10.0])
    assert r.passed and r.min_margin > 0


def test_xon6_chain_values():
    reports = {r.claim_id: r for r in certify_proof_chain_xon6(grid_n=128)}
    assert all(r.passed for r in reports.values())
    assert math.cosh(0.8) ** 2 == pytest.approx(1.788732, abs=1e-6)
    assert (12 - 6 * math.sqrt(1.5)) / 2.5 == pytest.approx(1.860612, abs=1e-6)
    assert 16 - 4 * (5 / 6) * 6 == pytest.approx(-4.0)
    assert reports["xon6_chain.quadratic_discriminant"].min_margin == pytest.approx(4.0)


def test_log2_chain_examples():
    final_at_1 = math.tanh(2) - math.tanh(1) + 2 / math.cosh(2) ** 2
    assert final_at_1 == pytest.approx(0.34374, abs=1e-5)
    reports = {r.claim_id: r for r in certify_proof_chain_log2(grid_n=128)}
    assert all(r.passed for r in reports.values())
    for x in (0.3, 1.0, 3.0):
        lhs = x * x / 2
        rhs = x * math.sinh(x) * math.cosh(x) - math.log(math.cosh(x)) * math.cosh(x) ** 2
        assert (I_deriv(x, 2) < 0) == (lhs <= rhs)


def test_constants():
    reports = {r.claim_id: r for r in certify_constants()}
    assert all(r.passed for r in reports.values())
    assert 4 / (0.4 - 2) ** 4 == pytest.approx(0.6103515625, abs=1e-15)
    assert 0.6103515625 / 0.4 == pytest.approx(TANGENT_SLOPE, abs=1e-15)
    assert 6 * math.log(2) == pytest.approx(4.1589, abs=1e-4)
    from triheat.specfun import zeta_direct
    assert 15 * zeta_direct(5) / 12 == pytest.approx(1.2961597, abs=1e-7)
    assert math.pi ** 4 / 72 == pytest.approx(1.3529040, abs=1e-7)


def test_lin_ind_branches():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = certify_lin_ind(grid_n=256, a_values=(-5.0, -1.0, 0.0, 0.5, 2.0))
    assert r.passed
    counts = r.details["root_counts"]
    assert counts["0.0"]["max_roots"] <= 1
    assert counts["2.0"]["branch"] == "increasing" and counts["2.0"]["max_roots"] <= 1
    assert counts["-5.0"]["branch"] == "convex" and counts["-5.0"]["max_roots"] <= 2
    assert counts["-1.0"]["branch"] == "convex"
    assert r.details["c"] == HALF_LOG2


def test_lin_ind_rejects_bad_c():
    with pytest.raises(ValueError):
        certify_lin_ind(c=0.0)


def test_run_suite_filters():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        one = run_suite(["xon6"], grid_n=4096)
        group = run_suite(["constants"])
    assert [r.claim_id for r in one] == ["xon6"]
    assert {claim_group(r.claim_id) for r in group} == {"constants"}
    with pytest.raises(KeyError):
        run_suite(["no_such_claim"])


def test_json_round_trip(suite):
    data = json.loads(suite_json(suite))
    assert isinstance(data, list) and len(data) == len(suite)
    for item in data:
        assert {"claim_id", "grid_spec", "min_margin", "worst_point", "passed"} <= set(item)
    assert isinstance(suite[0], CertReport)
    assert np.isfinite(data[0]["min_margin"])
