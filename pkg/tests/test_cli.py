import csv
import io
import json
import math

import numpy as np
import pytest

from triheat.cli import (EXIT_CERT_FAILED, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_NONMONOTONE,
                         EXIT_OK, EXIT_SOLVER, build_parser, main)
from triheat.forward import HeatCurve
from triheat.specfun import phi


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_phi_right_angle(capsys):
    rc, out, _ = run(capsys, "phi", "--theta", "1.5707963268")
    assert rc == EXIT_OK
    assert out.strip() == "0.3183098862"


def test_phi_psi_flag(capsys):
    rc, out, _ = run(capsys, "phi", "--psi", "--theta", "1.5707963268")
    assert rc == EXIT_OK and float(out) == pytest.approx(1.0, abs=1e-10)


def test_phi_sum(capsys):
    rc, out, _ = run(capsys, "phi", "--sum", "0.7853981634,0.7853981634,1.5707963268",
                     "--format", "json")
    want = 2 * phi(math.pi / 4).value + phi(math.pi / 2).value
    data = json.loads(out)
    assert rc == EXIT_OK and data["value"] == pytest.approx(want, abs=1e-9)


def test_phi_table(capsys):
    rc, out, _ = run(capsys, "phi", "--table", "0.5:2.5:5")
    r = rows(out)
    assert rc == EXIT_OK and len(r) == 5
    vals = [float(x["phi"]) for x in r]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("theta", ["90", "30deg", "3.2"])
def test_degrees_rejected(capsys, theta):
    rc, _, err = run(capsys, "phi", "--theta", theta)
    assert rc == EXIT_INPUT
    assert "radians" in err


def test_heat_asym_equilateral(capsys):
    rc, out, _ = run(capsys, "heat", "--sides", "1,1,1", "--method", "asym", "--t", "1e-4")
    r = rows(out)
    want = math.sqrt(3) / 4 - 6 / math.sqrt(math.pi) * 1e-2 + 4e-4 * 3 * phi(math.pi / 3).value
    assert rc == EXIT_OK and r[0]["method"] == "asymptotic"
    assert float(r[0]["H"]) == pytest.approx(want, abs=1e-12)


def test_heat_rectangle(capsys):
    rc, out, _ = run(capsys, "heat", "--rect", "1,1", "--t", "0.01")
    assert rc == EXIT_OK
    assert float(rows(out)[0]["H"]) == pytest.approx(0.599578, abs=1e-6)


def test_heat_fem_monotone(capsys):
    rc, out, _ = run(capsys, "heat", "--sides", "1,1,1.4142135624", "--method", "fem",
                     "--tmax", "0.1", "--dt", "1e-4")
    r = rows(out)
    h = np.array([float(x["H"]) for x in r])
    assert rc == EXIT_OK and list(r[0]) == ["t", "H", "err", "method"]
    assert np.all(np.diff(h) < 0)
    assert 0.4 < h[0] < 0.5


def test_heat_compare_columns(capsys):
    rc, out, _ = run(capsys, "heat", "--sides", "1,1,1", "--method", "asym", "--t",
                     "1e-3,2e-3", "--compare", "fem", "--dt", "1e-3", "--tmax", "2e-3",
                     "--refinement", "4")
    r = rows(out)
    assert rc == EXIT_OK and {"H_fem", "err_fem"} <= set(r[0])


def test_heat_invalid_triangle(capsys):
    rc, _, err = run(capsys, "heat", "--sides", "1,1,3", "--method", "asym", "--t", "1e-3")
    assert rc == EXIT_INPUT and err


def test_invert_equilateral(capsys):
    triple = f"0.4330127019,3,{3 * phi(math.pi / 3).value!r}"
    rc, out, _ = run(capsys, "invert", "--triple", triple)
    data = json.loads(out)
    assert rc == EXIT_OK
    assert np.allclose(data["sides"], (1, 1, 1), atol=1e-8)
    assert {"angles", "sides", "area", "perimeter", "residuals", "direction",
            "iterations"} <= set(data)


def test_invert_square_triple(capsys):
    rc, _, err = run(capsys, "invert", "--triple", "1,4,1.2732395447")
    assert rc == EXIT_INCONSISTENT and "inconsistent" in err


def test_invert_nonmonotone_exit(capsys, monkeypatch):
    from triheat import cli
    from triheat.errors import NonMonotoneError

    def boom(*a, **k):
        raise NonMonotoneError("profile changes direction")

    monkeypatch.setattr(cli, "invert_triple", boom)
    rc, _, _ = run(capsys, "invert", "--triple", "1,5,2")
    assert rc == EXIT_NONMONOTONE


def test_heat_csv_feeds_invert(capsys, tmp_path):
    path = tmp_path / "curve.csv"
    times = ",".join(repr(float(t)) for t in np.geomspace(1e-5, 1e-3, 25))
    rc, _, _ = run(capsys, "heat", "--angles", "0.5,1.2,1.4415926536", "--area", "1.0",
                   "--method", "asym", "--t", times, "-o", str(path))
    assert rc == EXIT_OK
    assert HeatCurve.from_csv(path.read_text()).method == "asymptotic"
    rc, out, _ = run(capsys, "invert", "--curve", str(path), "--window", "1e-5,1e-3")
    data = json.loads(out)
    assert rc == EXIT_OK and "fit" in data
    assert np.allclose(data["angles"], sorted([0.5, 1.2, math.pi - 1.7]), atol=1e-6)


def test_invert_curve_needs_window(capsys, tmp_path):
    rc, _, _ = run(capsys, "invert", "--curve", str(tmp_path / "x.csv"))
    assert rc == EXIT_INPUT


def test_moments_seed_determinism(capsys, monkeypatch):
    argv = ["moments", "--sides", "1,1,1", "--orders", "1,2", "--paths", "20000", "--dt",
            "1e-4"]
    _, a, _ = run(capsys, *argv, "--seed", "7")
    _, b, _ = run(capsys, *argv, "--seed", "7")
    _, c, _ = run(capsys, *argv, "--seed", "8")
    monkeypatch.setenv("TRIHEAT_SEED", "7")
    _, d, _ = run(capsys, *argv)
    assert a == b == d and a != c
    assert [int(r["k"]) for r in rows(a)] == [1, 2]


def test_moments_disk_selftest(capsys):
    rc, out, _ = run(capsys, "moments", "--selftest-disk", "--paths", "20000", "--dt", "1e-3",
                     "--seed", "3")
    r = rows(out)[0]
    assert rc == EXIT_OK
    assert float(r["exact"]) == pytest.approx(math.pi / 8)
    assert abs(float(r["moment"]) - math.pi / 8) <= 3 * float(r["stderr"])


def test_moments_layer_cake_column(capsys, tmp_path):
    path = tmp_path / "fem.csv"
    run(capsys, "heat", "--sides", "1,1,1", "--method", "fem", "--tmax", "0.3", "--dt", "1e-3",
        "--refinement", "5", "-o", str(path))
    rc, out, _ = run(capsys, "moments", "--sides", "1,1,1", "--paths", "20000", "--dt", "1e-4",
                     "--from-curve", str(path))
    r = rows(out)[0]
    assert rc == EXIT_OK
    diff = abs(float(r["moment"]) - float(r["layer_cake"]))
    assert diff <= 3 * float(r["stderr"]) + float(r["layer_cake_err"])


def test_moments_cap_breach(capsys):
    rc, _, err = run(capsys, "moments", "--sides", "1,1,1", "--paths", "200", "--dt", "1e-3",
                     "--t-cap", "0.002")
    assert rc == EXIT_SOLVER and "cap" in err


def test_certify_list(capsys):
    rc, out, _ = run(capsys, "certify", "--list")
    lines = out.strip().splitlines()
    assert rc == EXIT_OK and len(lines) == 44
    assert any(line.startswith("xon6 ") for line in lines)


def test_certify_single_claim(capsys, tmp_path):
    path = tmp_path / "report.json"
    rc, out, _ = run(capsys, "certify", "--claim", "xon6", "--grid", "4096", "-o", str(path))
    assert rc == EXIT_OK
    assert out.strip().endswith("1/1 claims passed")
    data = json.loads(path.read_text())
    assert len(data) == 1 and data[0]["claim_id"] == "xon6" and data[0]["passed"]


def test_certify_failure_exit(capsys, monkeypatch):
    from triheat import cli
    from triheat.lemmas import CertReport

    bad = CertReport("xon6", {"n": 1}, -1.0, 0.5, False)
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [bad])
    rc, out, _ = run(capsys, "certify")
    assert rc == EXIT_CERT_FAILED and "FAIL" in out


def test_certify_unknown_claim(capsys):
    rc, _, _ = run(capsys, "certify", "--claim", "nope")
    assert rc == EXIT_INPUT


@pytest.mark.parametrize("cmd,needle", [("phi", "sinh"), ("heat", "sqrt(t/pi)"),
                                        ("invert", "P^2/(4A)"), ("moments", "layer-cake"),
                                        ("certify", "x/6")])
def test_help_names_formula(cmd, needle):
    sub = build_parser()._subparsers._group_actions[0].choices[cmd]
    assert needle in sub.format_help()
