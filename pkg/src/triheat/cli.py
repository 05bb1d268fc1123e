"""Command-line interface: ``triheat {phi,heat,invert,moments,certify}``.

Exit codes: 0 success, 2 invalid input, 3 solver or simulation failure, 4 inconsistent
triple, 5 non-monotone profile (numerical red flag), 6 failed certification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from typing import Optional, Sequence

import numpy as np

from .asymptotics import InvariantTriple, asymptotic_curve, heat_content_asymptotic
from .errors import (BadFitError, DomainError, IllConditionedError, InconsistentTripleError,
                     NonMonotoneError, QuadratureError, SolverError, TruncationError)
from .forward import (FemConfig, HeatCurve, McConfig, disk_domain, exit_moments_domain_mc,
                      exit_moments_mc, heat_content_fem, heat_content_mc, layer_cake_moment,
                      rectangle_series_oracle)
from .inverse import invert_curve, invert_triple
from .lemmas import CLAIMS, run_suite, suite_json
from .moduli import AnglePoint, Triangle, phi_sum, psi_sum, triangle_from_angles
from .specfun import phi, psi

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_INCONSISTENT = 4
EXIT_NONMONOTONE = 5
EXIT_CERT_FAILED = 6

DEGREE_HINT = "angles are taken in radians; convert degrees with d * pi / 180"


class UsageError(DomainError):
    pass


# -- parsing helpers ------------------------------------------------------------------


def _floats(text: str, n: Optional[int] = None, what: str = "value") -> list:
    raw = [s.strip() for s in text.split(",") if s.strip()]
    try:
        vals = [float(s) for s in raw]
    except ValueError:
        if any(s.endswith(("deg", "°")) for s in raw):
            raise UsageError(DEGREE_HINT) from None
        raise UsageError(f"could not parse {what} list {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated {what}s, got {len(vals)}")
    return vals


def _angles(text: str, n: Optional[int] = None) -> list:
    vals = _floats(text, n, "angle")
    if any(v >= math.pi for v in vals):
        raise UsageError(f"angle {max(vals):g} is not below pi; {DEGREE_HINT}")
    return vals


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TRIHEAT_SEED")
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"TRIHEAT_SEED={env!r} is not an integer") from None


def _triangle(args) -> Triangle:
    if args.sides:
        return Triangle(tuple(_floats(args.sides, 3, "side")))
    if args.angles:
        if args.area is None:
            raise UsageError("--angles needs --area")
        return triangle_from_angles(AnglePoint.from_angles(_angles(args.angles, 3), tol=1e-8),
                                    args.area)
    raise UsageError("specify the triangle with --sides a,b,c or --angles A,B,C --area S")


def _emit(text: str, args) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v: float) -> str:
    return repr(round(float(v), 10))


# -- commands -------------------------------------------------------------------------


def cmd_phi(args) -> int:
    fn_name = "psi" if args.psi else "phi"

    def value(theta):
        if args.psi:
            return float(psi(theta)), 0.0
        r = phi(theta)
        return r.value, r.error_estimate

    if args.table:
        parts = args.table.split(":")
        if len(parts) != 3:
            raise UsageError("--table expects a:b:n")
        a, b = _angles(",".join(parts[:2]), 2)
        n = int(parts[2])
        if n < 2:
            raise UsageError("--table needs n >= 2")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", fn_name, "err"])
        for t in np.linspace(a, b, n):
            v, e = value(float(t))
            w.writerow([repr(float(t)), repr(v), repr(e)])
        _emit(buf.getvalue(), args)
        return EXIT_OK
    if args.sum:
        angles = _angles(args.sum, 3)
        p = AnglePoint.from_angles(angles, tol=1e-8)
        if args.psi:
            v, e = psi_sum(p), 0.0
        else:
            r = phi_sum(p)
            v, e = r.value, r.error_estimate
    elif args.theta is not None:
        v, e = value(_angles(args.theta, 1)[0])
    else:
        raise UsageError("give --theta, --sum or --table")
    if args.format == "json":
        _emit(json.dumps({"function": fn_name, "value": v, "error": e}) + "\n", args)
    else:
        _emit(f"{_fmt(v)}\n" if not args.verbose else f"{_fmt(v)} +- {e:.2g}\n", args)
    return EXIT_OK


def _rect_curve(args) -> HeatCurve:
    a, b = _floats(args.rect, 2, "side")
    times = _floats(args.t, what="time") if args.t else list(np.linspace(args.tmax / 100,
                                                                          args.tmax, 100))
    rows = [rectangle_series_oracle(a, b, t, with_bound=True) for t in times]
    return HeatCurve(times, [r[0] for r in rows], "rectangle_series", [r[1] for r in rows],
                     {"area": a * b})


def _heat_curve(method: str, tri: Triangle, args) -> HeatCurve:
    if method == "asym":
        if not args.t:
            raise UsageError("--method asym needs --t")
        return asymptotic_curve(tri.angles.angles, tri.area, tri.perimeter,
                                _floats(args.t, what="time"))
    if method == "fem":
        cfg = FemConfig(refinement=args.refinement, dt=args.dt, t_max=args.tmax,
                        extrapolate=args.extrapolate)
        with warnings.catch_warnings():
            if not args.verbose:
                warnings.simplefilter("ignore")
            curve = heat_content_fem(tri, cfg)
        if args.t:
            want = np.array(_floats(args.t, what="time"))
            idx = np.rint(want / cfg.dt).astype(int) - 1
            if np.any(idx < 0) or np.any(idx >= len(curve)) or \
                    np.any(np.abs(curve.times[idx] - want) > 1e-9 * want):
                raise UsageError("--t values must be multiples of --dt up to --tmax")
            curve = HeatCurve(curve.times[idx], curve.values[idx], "fem",
                              curve.error_estimates[idx], curve.meta)
        return curve
    if method == "mc":
        times = _floats(args.t, what="time") if args.t else \
            list(np.linspace(args.tmax / 20, args.tmax, 20))
        cfg = McConfig(n_paths=args.paths, dt=args.mc_dt, seed=_seed(args))
        return heat_content_mc(tri, times, cfg)
    raise UsageError(f"unknown method {method!r}")


def cmd_heat(args) -> int:
    if args.rect:
        _emit(_rect_curve(args).to_csv(), args)
        return EXIT_OK
    tri = _triangle(args)
    curve = _heat_curve(args.method, tri, args)
    if not args.compare:
        _emit(curve.to_csv(), args)
        return EXIT_OK
    # Extra columns: other methods evaluated at the primary curve's times.
    extra = {}
    for m in _floats_or_names(args.compare):
        if m == args.method:
            continue
        if m == "asym":
            v, e = heat_content_asymptotic(tri.angles.angles, tri.area, tri.perimeter,
                                           curve.times, with_error=True)
        elif m == "mc":
            cfg = McConfig(n_paths=args.paths, dt=args.mc_dt, seed=_seed(args))
            other = heat_content_mc(tri, curve.times, cfg)
            v, e = other.values, other.error_estimates
        elif m == "fem":
            sub = argparse.Namespace(**{**vars(args), "t": None})
            other = _heat_curve("fem", tri, sub)
            v = np.interp(curve.times, other.times, other.values)
            e = np.interp(curve.times, other.times, other.error_estimates)
        else:
            raise UsageError(f"unknown method {m!r} in --compare")
        extra[m] = (np.atleast_1d(v), np.atleast_1d(e))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "H", "err", "method"] + [f"{c}_{m}" for m in extra for c in ("H", "err")])
    for i, t in enumerate(curve.times):
        row = [repr(float(t)), repr(float(curve.values[i])),
               repr(float(curve.error_estimates[i])), curve.method]
        for v, e in extra.values():
            row += [repr(float(v[i])), repr(float(e[i]))]
        w.writerow(row)
    _emit(buf.getvalue(), args)
    return EXIT_OK


def _floats_or_names(text: str) -> list:
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_invert(args) -> int:
    if args.triple:
        area, perimeter, phi_total = _floats(args.triple, 3, "triple entry")
        result = invert_triple(InvariantTriple(area, perimeter, phi_total), args.tol)
        fit = None
    elif args.curve:
        if not args.window:
            raise UsageError("--curve needs --window t0,t1")
        with open(args.curve, encoding="utf-8") as fh:
            curve = HeatCurve.from_csv(fh.read())
        result = invert_curve(curve, _floats(args.window, 2, "window bound"), args.tol,
                              cap=args.cap)
        fit = result.meta["fit"].to_dict()
    else:
        raise UsageError("give --triple A,P,PHI or --curve FILE --window t0,t1")
    out = result.to_dict()
    if fit is not None:
        out["fit"] = fit
    _emit(json.dumps(out, indent=2) + "\n", args)
    return EXIT_OK


def cmd_moments(args) -> int:
    orders = [int(k) for k in _floats(args.orders, what="order")]
    cfg = McConfig(n_paths=args.paths, dt=args.dt, seed=_seed(args), t_cap=args.t_cap)
    if args.selftest_disk:
        spectrum = exit_moments_domain_mc(disk_domain(1.0), orders, cfg)
        exact = {1: math.pi / 8.0}
    else:
        spectrum = exit_moments_mc(_triangle(args), orders, cfg)
        exact = {}
    layer = {}
    if args.from_curve:
        with open(args.from_curve, encoding="utf-8") as fh:
            curve = HeatCurve.from_csv(fh.read())
        area = spectrum.meta["area"]
        for k in orders:
            layer[k] = layer_cake_moment(curve, k, area=area)
    if args.format == "json":
        rows = []
        for k, v, e in zip(spectrum.orders, spectrum.values, spectrum.std_errors):
            row = {"k": int(k), "moment": float(v), "stderr": float(e)}
            if k in layer:
                row["layer_cake"], row["layer_cake_err"] = map(float, layer[k])
            if k in exact:
                row["exact"] = exact[k]
            rows.append(row)
        _emit(json.dumps(rows, indent=2) + "\n", args)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["k", "moment", "stderr"]
    if layer:
        header += ["layer_cake", "layer_cake_err"]
    if exact:
        header += ["exact"]
    w.writerow(header)
    for k, v, e in zip(spectrum.orders, spectrum.values, spectrum.std_errors):
        row = [k, repr(float(v)), repr(float(e))]
        if layer:
            row += [repr(float(layer[k][0])), repr(float(layer[k][1]))]
        if exact:
            row += [repr(float(exact[k])) if k in exact else ""]
        w.writerow(row)
    _emit(buf.getvalue(), args)
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.list:
        width = max(len(c) for c in CLAIMS)
        for cid, anchor in CLAIMS.items():
            sys.stdout.write(f"{cid:<{width}}  {anchor}\n")
        return EXIT_OK
    with warnings.catch_warnings():
        if not args.verbose:
            warnings.simplefilter("ignore")
        try:
            reports = run_suite(args.claim or None, args.grid)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    text = suite_json(reports) + "\n"
    if args.format == "json":
        _emit(text, args)
    else:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        width = max(len(r.claim_id) for r in reports)
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            sys.stdout.write(f"{status}  {r.claim_id:<{width}}  min margin {r.min_margin:.3e}"
                             f"  at x = {r.worst_point:.6g}\n")
        n_pass = sum(r.passed for r in reports)
        sys.stdout.write(f"{n_pass}/{len(reports)} claims passed\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CERT_FAILED


# -- parser ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default csv; tables for certify)")
    p.add_argument("--output", "-o", help="write the result to this file instead of stdout")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                   help="random seed (default: $TRIHEAT_SEED, else 0)")
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def _triangle_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sides", help="side lengths a,b,c")
    p.add_argument("--angles", help="interior angles in radians (with --area)")
    p.add_argument("--area", type=float, help="area for --angles")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triheat",
        description="Heat content of triangles: corner function, forward solvers, "
                    "inversion from heat invariants and certification of the supporting "
                    "inequalities.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser(
        "phi", parents=[common], help="corner function phi and psi = cot(theta/2)",
        description="Corner function phi(theta) = int_0^inf sinh((pi - theta) xi) / "
                    "(sinh(pi xi) cosh(theta xi)) dxi, the coefficient of 4t in the "
                    "heat content of a polygon; with --psi the function cot(theta/2), "
                    "whose sum over the angles of a triangle is P^2/(4A).")
    p.add_argument("--theta", help="angle in radians")
    p.add_argument("--psi", action="store_true", help="evaluate cot(theta/2) instead")
    p.add_argument("--sum", help="three angles; print Phi = sum phi (or Psi with --psi)")
    p.add_argument("--table", help="a:b:n sweep written as CSV theta,value,err")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser(
        "heat", parents=[common], help="heat content curve H(t) as CSV t,H,err,method",
        description="Heat content H(t) = int_D u(x, t) dx for u_t = Laplace(u), u = 0 on "
                    "the boundary, u = 1 at t = 0.  Methods: fem (P1 elements, "
                    "Crank-Nicolson), mc (Brownian survival, H = int P(tau > t) dx), asym "
                    "(|D| - 2|dD| sqrt(t/pi) + 4t sum phi(theta_i)); --rect gives the "
                    "separable series on a rectangle.")
    _triangle_args(p)
    p.add_argument("--rect", help="rectangle sides a,b (series oracle)")
    p.add_argument("--method", choices=("fem", "mc", "asym"), default="fem")
    p.add_argument("--compare", help="comma list of further methods to append as columns")
    p.add_argument("--t", help="comma list of output times")
    p.add_argument("--tmax", type=float, default=0.1)
    p.add_argument("--dt", type=float, default=1e-4, help="FEM time step")
    p.add_argument("--refinement", type=int, default=6, help="FEM edge subdivision 2^r")
    p.add_argument("--extrapolate", action="store_true",
                   help="Richardson-extrapolate the FEM curve over refinements")
    p.add_argument("--paths", type=int, default=100_000, help="Monte Carlo paths")
    p.add_argument("--mc-dt", type=float, default=1e-5, help="Monte Carlo time step")
    p.set_defaults(func=cmd_heat)

    p = sub.add_parser(
        "invert", parents=[common], help="recover a triangle from (A, P, Phi) or a curve",
        description="Invert (area, perimeter, Phi): Psi = P^2/(4A) fixes a level arc in angle "
                    "space, Phi is monotone along it and is bisected, and the area fixes the "
                    "scale.  With --curve the triple is first fitted from H(t) ~ A - "
                    "2P sqrt(t/pi) + 4 Phi t on --window.  Prints JSON.")
    p.add_argument("--triple", help="area,perimeter,Phi")
    p.add_argument("--curve", help="CSV file with columns t,H,err,method")
    p.add_argument("--window", help="fit window t0,t1")
    p.add_argument("--cap", type=float, default=None, help="largest admissible fit time")
    p.add_argument("--tol", type=float, default=1e-13, help="tolerance on Phi")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser(
        "moments", parents=[common], help="exit-time moments ||E[tau^k]||_1 by simulation",
        description="L1 norms of Brownian exit-time moments, int_D E^x[tau^k] dx, for "
                    "generator Laplace; --from-curve adds the layer-cake value "
                    "k int_0^inf t^(k-1) H(t) dt.  CSV columns k,moment,stderr.")
    _triangle_args(p)
    p.add_argument("--orders", default="1", help="comma list of k >= 1")
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--t-cap", type=float, default=None,
                   help="simulation time cap; paths alive at the cap are an error (exit 3)")
    p.add_argument("--from-curve", help="HeatCurve CSV for the layer-cake column")
    p.add_argument("--selftest-disk", action="store_true",
                   help="unit disk instead of a triangle; exact first moment pi/8")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser(
        "certify", parents=[common], help="certify the analytic inequalities on grids",
        description="Grid certification of the inequalities behind uniqueness: convexity of "
                    "phi and psi, I''(x) < 0 via its reduction chain, I'''(x) <= x/6, the "
                    "zeta and tangent-line constants, and root counts of f' + A g' = B.")
    p.add_argument("--claim", action="append", help="claim id or group (repeatable)")
    p.add_argument("--grid", type=int, default=None, help="grid points per claim")
    p.add_argument("--list", action="store_true", help="list claim ids and their statements")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InconsistentTripleError as exc:
        print(f"triheat: inconsistent triple: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except NonMonotoneError as exc:
        print(f"triheat: non-monotone profile: {exc}", file=sys.stderr)
        return EXIT_NONMONOTONE
    except (BadFitError, IllConditionedError) as exc:
        print(f"triheat: fit rejected: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (SolverError, QuadratureError, TruncationError) as exc:
        print(f"triheat: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, ValueError, OSError) as exc:
        print(f"triheat: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
