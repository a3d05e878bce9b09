"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 structural failure, 4 certificate failure.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import fields

import numpy as np

from . import errors
from ._accel import parallel_map
from .config import DEFAULT, Tolerances
from .dense import matrix_from_json, matrix_to_json, norm2
from .hamiltonian import (
    assemble,
    basis_probes,
    check_gap_strip,
    check_imaginary_kernels,
    check_j1_skew,
    check_j2_accretive,
    check_r0_dominance,
    check_spectral_symmetry,
    subordination_estimate,
    subordination_profile,
)
from .models import build_model, dichotomy_witness, modal_solution
from .riccati import (
    accepted,
    canonical_pair,
    certify_order,
    closed_loop_spectrum,
    complete_solution,
    projection_representation,
    RiccatiSolution,
    solution_for,
    split_bound,
)
from .spectral import analyze_spectrum, counting_function
from .subspaces import enumerate_scsets

EXIT_OK, EXIT_PARSE, EXIT_STRUCTURE, EXIT_CERT = 0, 2, 3, 4

STRUCTURAL = (
    errors.NonSquareError,
    errors.SizeMismatchError,
    errors.DimensionMismatchError,
    errors.DimensionCapError,
    errors.NotHermitianError,
    errors.NotRealError,
    errors.NotPositiveError,
)

ENUM_COLUMNS = ["scset_id", "residual", "min_eig", "max_eig", "order_ok", "proj_ok", "cl_match"]


class ParseError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _matrix(obj):
    if isinstance(obj, dict):
        return matrix_from_json(obj)
    try:
        a = np.asarray(obj, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix: {exc}") from exc
    if a.ndim == 0:
        a = a.reshape(1, 1)
    return a


def parse_tolerances(items):
    names = {f.name for f in fields(Tolerances)}
    changes = {}
    for item in items or []:
        if "=" not in item:
            raise ParseError(f"--tol expects KEY=VAL, got {item!r}")
        key, val = item.split("=", 1)
        key = key.strip()
        if key not in names:
            raise ParseError(f"unknown tolerance key {key!r}")
        try:
            changes[key] = int(val) if key == "max_dim" else float(val)
        except ValueError as exc:
            raise ParseError(f"bad value for {key}: {val!r}") from exc
    return DEFAULT.override(**changes), changes


def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def load_problem(args, tols):
    """``(kind, obj, spec)`` where ``kind`` is ``"modal"`` or ``"hamiltonian"``."""
    if args.model:
        try:
            spec = json.loads(args.model)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--model: invalid JSON ({exc})") from exc
    elif args.input:
        spec = _read_json(args.input)
    else:
        raise ParseError("one of --input or --model is required")
    if not isinstance(spec, dict):
        raise ParseError("problem JSON must be an object")
    if "model" not in spec:
        if not all(k in spec for k in "ABC"):
            raise ParseError("problem JSON needs keys A, B, C or a 'model' entry")
        try:
            a, b, c = (_matrix(spec[k]) for k in "ABC")
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return "hamiltonian", assemble(a, b, c, tols), spec
    try:
        kind, obj = build_model(spec, tols)
    except errors.KreinRiccatiError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(str(exc)) from exc
    return kind, obj, spec


def _hamiltonian(kind, obj, tols):
    return obj.to_hamiltonian(tols) if kind == "modal" else obj


def _is_skew(a, tols):
    return norm2(a + a.conj().T) <= tols.struct_tol * max(1.0, norm2(a))


# -- commands -----------------------------------------------------------------

def cmd_analyze(args, tols):
    kind, obj, _ = load_problem(args, tols)
    h = _hamiltonian(kind, obj, tols)
    s = analyze_spectrum(h.T, tols)
    j1res = check_j1_skew(h)
    _, j2min, j2block = check_j2_accretive(h, tols)
    sym = check_spectral_symmetry(h, s, tols)
    gap_ok = strip_ok = None
    if h.gamma is not None:
        gap_ok, strip_ok = check_gap_strip(h, s, tols)
    imag = check_imaginary_kernels(h, s, tols)
    try:
        r0 = check_r0_dominance(obj if kind == "modal" else h, tols=tols)
    except errors.RaySpectrumCollision as exc:
        r0 = {"table": None, "passed": False, "error": str(exc)}
    probes = basis_probes(h.G, h.S)
    subord = {}
    for p in (0.5, 2.0 / 3.0, 1.0):
        try:
            subord[f"{p:.4f}"] = subordination_estimate(probes, p)
        except errors.ZeroDenominatorError:
            subord[f"{p:.4f}"] = None
    strip_applies = _is_skew(h.A, tols)
    checks = {
        "j1_skew": j1res <= tols.struct_tol,
        "j2_block": j2block <= tols.struct_tol * max(1.0, norm2(h.T)),
        "symmetry": sym["passed"],
        "gap": gap_ok is not False,
        "strip": strip_ok is not False or not strip_applies,
        "imaginary_kernels": not imag,
    }
    report = {
        "j1_skew_residual": j1res,
        "j2_min_eig": j2min,
        "j2_block_residual": j2block,
        "symmetry_violations": sym["violations"],
        "gap_ok": gap_ok,
        "strip_ok": strip_ok,
        "strip_applies": strip_applies,
        "imaginary_kernel_violations": imag,
        "r0_table": r0["table"],
        "r0_passed": r0["passed"],
        "subordination": subord,
        "gamma": h.gamma,
        "spectrum": s.to_json(),
        "checks": checks,
    }
    return report, EXIT_OK if all(checks.values()) else EXIT_STRUCTURE


def _solution_report(h, sol, tols):
    out = sol.to_json()
    out["accepted"] = accepted(h, sol, tols)
    out["min_eig"] = sol.extra.get("min_eig")
    out["max_eig"] = sol.extra.get("max_eig")
    return out


def cmd_solve(args, tols):
    kind, obj, _ = load_problem(args, tols)
    h = _hamiltonian(kind, obj, tols)
    s = analyze_spectrum(h.T, tols)
    xp, xm = canonical_pair(h, s, tols)
    report = {"X_plus": _solution_report(h, xp, tols), "X_minus": _solution_report(h, xm, tols)}
    report["X_plus"]["inverse_norm"] = xp.extra.get("inverse_norm")
    report["X_minus"]["inverse_norm"] = xm.extra.get("inverse_norm")
    ok = report["X_plus"]["accepted"] and report["X_minus"]["accepted"]
    ok = ok and xp.extra["min_eig"] >= -tols.order_tol and xm.extra["max_eig"] <= tols.order_tol
    return report, EXIT_OK if ok else EXIT_CERT


def _enumerate_rows(h, s, sigmas, pair, tols):
    xp, xm = pair if pair else (None, None)
    bound = None
    if pair:
        try:
            bound = split_bound(xp, xm)
        except errors.NotUniformError:
            bound = None

    def one(sigma):
        row = {"scset_id": sigma.key, "scset": sigma.to_json(s)}
        if not sigma.usable:
            row.update(status="UNUSABLE", residual=None, min_eig=None, max_eig=None,
                       order_ok=None, proj_ok=None, cl_match=None)
            return row
        try:
            sol = solution_for(h, s, sigma, tols)
        except errors.NotAGraphError as exc:
            row.update(status="NOT_A_GRAPH", residual=None, min_eig=None, max_eig=None,
                       order_ok=None, proj_ok=None, cl_match=None,
                       smallest_singular_value=exc.smallest_singular_value)
            return row
        row.update(_solution_report(h, sol, tols))
        row["status"] = "OK" if row["accepted"] else "REJECTED"
        cl = closed_loop_spectrum(h, sol, sigma, s, tols)
        row["cl_match"] = cl["passed"]
        row["cl_max_distance"] = cl["max_distance"]
        if pair:
            order = certify_order(xm, sol, xp, tols)
            row["order_check"] = order
            row["order_ok"] = order["passed"]
            try:
                _, proj = projection_representation(sol, xp, xm, tols)
                row["projection_check"] = proj
                row["proj_ok"] = proj["passed"]
            except errors.SingularGapError:
                row["proj_ok"] = None
            if bound is not None:
                row["split_bound_ok"] = norm2(sol.X) <= bound * (1 + 1e-12)
        else:
            row["order_ok"] = row["proj_ok"] = None
        return row

    return parallel_map(one, sigmas), bound


def cmd_enumerate(args, tols):
    kind, obj, _ = load_problem(args, tols)
    h = _hamiltonian(kind, obj, tols)
    s = analyze_spectrum(h.T, tols)
    sigmas = enumerate_scsets(s, args.scset_limit, tols, args.seed)
    pair = None
    if not s.pairing.imaginary:
        try:
            pair = canonical_pair(h, s, tols)
        except errors.NotAGraphError:
            pair = None
    rows, bound = _enumerate_rows(h, s, sigmas, pair, tols)
    failed = [
        r["scset_id"] for r in rows
        if r.get("accepted") and not all(
            r.get(k) is not False for k in ("order_ok", "proj_ok", "cl_match", "split_bound_ok")
        )
    ]
    report = {
        "rows": rows,
        "count": len(rows),
        "split_bound": bound,
        "canonical_pair": pair is not None,
        "certificate_failures": failed,
    }
    return report, EXIT_CERT if failed else EXIT_OK


def cmd_modal(args, tols):
    kind, obj, spec = load_problem(args, tols)
    if kind != "modal":
        raise ParseError("modal command needs a modal model (diag8_1 or cubic8_2)")
    sols, growth = modal_solution(obj, args.signs, tols)
    report = {
        "growth": growth,
        "residuals": [[k, sol.residual] for k, sol in zip(obj.labels, sols)],
        "r0_table": check_r0_dominance(obj, tols=tols)["table"],
    }
    profile = subordination_profile(obj, args.p)
    report["subordination"] = {"p": args.p, "series": [[k, v] for k, v in sorted(profile.items())]}
    w = [m.T for m in obj.modes]
    eigs = np.concatenate([np.linalg.eigvals(t) for t in w])
    radii = [float(r) for r in np.geomspace(1.0, max(2.0, float(np.max(np.abs(eigs)))), 12)]
    report["counting"] = [[r, counting_function(eigs, r)] for r in radii]
    if spec.get("model") == "diag8_1":
        report["dichotomy"] = [
            {"k": k, **dict(zip(("x", "x_plus", "x_minus", "cos_theta", "riesz_lower"),
                                dichotomy_witness(obj, k, tols)))}
            for k in obj.labels
        ]
    ok = all(sol.residual <= tols.ricc_tol * max(1.0, norm2(sol.X) ** 2) for sol in sols)
    return report, EXIT_OK if ok else EXIT_CERT


def _load_x(path):
    data = _read_json(path)
    if isinstance(data, dict) and "X" in data:
        data = data["X"]
    try:
        return _matrix(data)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def cmd_verify(args, tols):
    if not args.x:
        raise ParseError("verify needs --x")
    kind, obj, _ = load_problem(args, tols)
    h = _hamiltonian(kind, obj, tols)
    x = _load_x(args.x)
    if x.shape != (h.n, h.n):
        raise errors.SizeMismatchError(f"X has shape {x.shape}, expected {(h.n, h.n)}")
    asym = norm2(x - x.conj().T)
    if asym > tols.sym_tol * max(1.0, norm2(x)):
        raise errors.NotHermitianError("X is not Hermitian", "X", asym)
    sol = complete_solution(h, RiccatiSolution(0.5 * (x + x.conj().T), asymmetry=asym), tols)
    report = _solution_report(h, sol, tols)
    checks = {"residual": report["accepted"]}
    s = analyze_spectrum(h.T, tols)
    if not s.pairing.imaginary:
        xp, xm = canonical_pair(h, s, tols)
        order = certify_order(xm, sol, xp, tols)
        report["order_check"] = order
        checks["order"] = order["passed"]
        try:
            p, proj = projection_representation(sol, xp, xm, tols)
            report["projection_check"] = proj
            report["P"] = matrix_to_json(p)
            checks["projection"] = proj["passed"]
        except errors.SingularGapError:
            checks["projection"] = False
        try:
            bound = split_bound(xp, xm)
            report["split_bound"] = bound
            checks["split_bound"] = norm2(sol.X) <= bound * (1 + 1e-12)
        except errors.NotUniformError:
            report["split_bound"] = None
    report["checks"] = checks
    return report, EXIT_OK if all(checks.values()) else EXIT_CERT


def cmd_examples(args, tols):
    from .models import gen_cubic_modal, gen_example_diag, gen_fourier_transport

    kmax = 50
    diag = gen_example_diag(kmax, tols)
    sols, growth = modal_solution(diag, "+", tols)
    wit = [dichotomy_witness(diag, k, tols) for k in diag.labels]
    cubic = gen_cubic_modal(16, 1.0, tols)
    prof = subordination_profile(cubic, 2.0 / 3.0)
    fourier = {}
    for beta in (0.5, 1.0, 1.4):
        h, info = gen_fourier_transport(8, beta, beta, tols)
        xp, xm = canonical_pair(h, analyze_spectrum(h.T, tols), tols)
        eye = np.eye(h.n)
        fourier[f"{beta}"] = {
            "X_plus_error": norm2(xp.X - eye),
            "X_minus_error": norm2(xm.X + eye),
            "riesz_hypotheses": info["riesz_hypotheses"],
        }
    report = {
        "diag8_1": {
            "growth": growth,
            "riesz_lower": [[k, w[4]] for k, w in zip(diag.labels, wit)],
            "x_norm": [[k, w[0]] for k, w in zip(diag.labels, wit)],
            "x_plus_norm": [[k, w[1]] for k, w in zip(diag.labels, wit)],
        },
        "cubic8_2": {"b_2/3": [[k, v] for k, v in sorted(prof.items())]},
        "fourier8_3": fourier,
    }
    ok = growth["verdict"] == "UNBOUNDED" and all(
        v["X_plus_error"] <= 1e-9 and v["X_minus_error"] <= 1e-9 for v in fourier.values()
    )
    return report, EXIT_OK if ok else EXIT_CERT


COMMANDS = {
    "analyze": cmd_analyze,
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "modal": cmd_modal,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="krein-riccati",
        description="Hermitian Riccati solutions via invariant subspaces of Hamiltonian matrices.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file with A, B, C or a model description")
    common.add_argument("--model", help='inline model description, e.g. \'{"model": "diag8_1", "kmax": 3}\'')
    common.add_argument("--scset-limit", type=int, default=64)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", action="append", default=[], metavar="KEY=VAL")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "verify":
            p.add_argument("--x", help="JSON file holding the candidate X")
        if name == "modal":
            p.add_argument("--signs", default="+", help="'+', '-', 'alt' or one sign per mode")
            p.add_argument("--p", type=float, default=0.5, help="subordination exponent")
    return parser


def _csv(command, report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "enumerate":
        w.writerow(ENUM_COLUMNS)
        for row in report["rows"]:
            w.writerow(["" if row.get(c) is None else row[c] for c in ENUM_COLUMNS])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        w.writerow([key, val])
    return buf.getvalue()


def render(report, fmt, command):
    if fmt == "csv":
        return _csv(command, report)
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    base = {"command": args.command, "seed": args.seed}
    try:
        tols, overrides = parse_tolerances(args.tol)
        base["tolerance_overrides"] = overrides
        report, code = COMMANDS[args.command](args, tols)
        report = {**report, **base, "exit_code": code}
    except ParseError as exc:
        report, code = {**base, "error": "ParseError", "message": str(exc)}, EXIT_PARSE
    except STRUCTURAL as exc:
        report, code = {**base, "error": type(exc).__name__, "message": str(exc)}, EXIT_STRUCTURE
    except errors.KreinRiccatiError as exc:
        report, code = {**base, "error": type(exc).__name__, "message": str(exc)}, EXIT_CERT
    report["exit_code"] = code
    report = _jsonable(report)
    fmt = args.format if "error" not in report else "json"
    text = render(report, fmt, args.command)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        print(f"{report['error']}: {report['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
