"""Command-line interface: ``nc-orlicz <subcommand> [options]``.

Exit codes: 0 when every assertion passes, 2 on an assertion failure (the
report then carries a ``failures`` record), 1 on malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import hardy as hd
from .config import DEFAULT, Settings
from .duality import weak_dual_bracket
from .errors import ContractViolation, DivergenceError, DomainError, ShapeError, UnboundedError, UnsupportedFamilyError
from .io import InputError, dumps_csv, dumps_report, load_matrix, load_nfunction, load_rearrangement, to_jsonable
from .nfunction import (
    NFunction,
    Power,
    PowerLog,
    delta2_constant,
    dilation_indices,
    fundamental_function,
    index_inclusion_check,
    indices,
    nabla2_check,
)
from .norms import (
    equivalent_banach_norm,
    lorentz_norm,
    luxemburg_norm,
    marcinkiewicz_norm,
    seminorm_N0,
    seminorm_Ninf,
    weak_lp_norm,
    weak_orlicz_quasinorm,
)
from .spectra import singular_value_function
from .suites import SUITES, TOLERANCES, run_suites, select_suites
from .weighted import Density, weighted_luxemburg_norm, weighted_weak_norm

__all__ = ["main", "build_parser"]


class _Failure(Exception):
    """An assertion failed; ``report`` is still emitted."""

    def __init__(self, report: dict, failures: list):
        super().__init__("assertion failure")
        self.report = report
        self.failures = failures


# ---------------------------------------------------------------------------
# config


def _parse_tols(items: list[str]) -> tuple[dict[str, float], Settings]:
    fields = {f.name for f in dataclasses.fields(Settings)}
    suite_tols, overrides = {}, {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--tol expects name=value, got {item!r}", "--tol")
        try:
            num = float(val)
        except ValueError:
            raise InputError(f"--tol value for {name!r} is not a number", "--tol") from None
        if name in TOLERANCES:
            suite_tols[name] = num
        elif name in fields:
            ftype = type(getattr(DEFAULT, name))
            overrides[name] = ftype(num) if ftype is not str else val
        else:
            raise InputError(f"unknown tolerance {name!r}", "--tol")
    return suite_tols, DEFAULT.with_overrides(overrides)


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def _safe(fn, *args, **kw) -> dict:
    """Run a norm and return its JSON, or an error record for inapplicable input."""
    try:
        return fn(*args, **kw).to_json()
    except (DomainError, UnboundedError, DivergenceError, UnsupportedFamilyError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}


def _default_nfunction(args) -> NFunction:
    return load_nfunction(args.nfunction) if args.nfunction else Power(2.0)


def cmd_nfunc(args, tols, settings) -> dict:
    fams = {str(p): load_nfunction(p) for p in args.nfunction} if args.nfunction else {
        "power-2": Power(2.0),
        "power-3": Power(3.0),
        "power-log-2": PowerLog(2.0),
    }
    grid = np.geomspace(1e-2, 1e2, 9)
    out = {}
    for name, f in fams.items():
        psi = f.conjugate
        a, b = indices(f, settings)
        nb = nabla2_check(f, settings)
        di = dilation_indices(f, settings)
        inc = index_inclusion_check(f, settings)
        out[name] = {
            "nfunction": f.to_json(),
            "indices": {"a_Phi": a, "b_Phi": b, "exact": f.exact_indices() is not None},
            "delta2_constant": delta2_constant(f, settings),
            "nabla2": {"holds": nb.holds, "c": nb.c},
            "complement": psi.to_json(),
            "conjugate_table": {
                "t": grid,
                "Phi": f.Phi(grid),
                "Psi": psi.Phi(grid),
                "Phi_inv": f.Phi_inv(grid),
                "Psi_inv": psi.Phi_inv(grid),
                "fundamental": fundamental_function(f, grid),
            },
            "dilation_indices": {
                "p_phi": di.p_phi,
                "q_phi": di.q_phi,
                "residual_low": di.residual_low,
                "residual_high": di.residual_high,
                "flagged": di.flagged,
            },
            "index_inclusion": {
                "psi_interval": inc.psi_interval,
                "holds_psi": inc.holds_psi,
                "phi_interval": inc.phi_interval,
                "holds_phi": inc.holds_phi,
                "warnings": list(inc.warnings),
            },
        }
    return {"command": "nfunc", "nfunctions": out}


def cmd_norms(args, tols, settings) -> dict:
    if not args.input:
        raise InputError("norms needs at least one --input", "--input")
    f = _default_nfunction(args)
    out = {}
    failures = []
    for path in args.input:
        m = load_rearrangement(path)
        m = singular_value_function(m, settings=settings) if hasattr(m, "entries") else m
        rep = {
            "luxemburg": _safe(luxemburg_norm, m, f, settings),
            "weak_orlicz": _safe(weak_orlicz_quasinorm, m, f, settings),
            "equivalent_banach": _safe(equivalent_banach_norm, m, f, settings),
            "lorentz": _safe(lorentz_norm, m, f, settings),
        }
        try:
            rep["marcinkiewicz"] = _safe(marcinkiewicz_norm, m, f, settings)
        except ContractViolation as exc:
            failures.append({"input": str(path), "check": "marcinkiewicz", "message": str(exc)})
        if isinstance(f, Power):
            try:
                rep["weak_lp"] = _safe(weak_lp_norm, m, f.p, settings, tol=tols.get("weak_lp", 1e-9))
            except ContractViolation as exc:
                failures.append({"input": str(path), "check": "weak_lp", "message": str(exc)})
        try:
            rep["N0"] = {"value": seminorm_N0(m, f)}
            rep["Ninf"] = {"value": seminorm_Ninf(m, f)}
        except DivergenceError as exc:
            rep["N0"] = rep["Ninf"] = {"error": f"DivergenceError: {exc}"}
        out[str(path)] = rep
    report = {"command": "norms", "nfunction": f.to_json(), "inputs": out}
    if failures:
        raise _Failure(report, failures)
    return report


def cmd_weighted(args, tols, settings) -> dict:
    if not (args.density and args.input):
        raise InputError("weighted needs --density and --input", "--density/--input")
    f = _default_nfunction(args)
    try:
        d = Density(load_matrix(args.density))
    except DomainError as exc:
        raise InputError(str(exc), str(args.density)) from None
    x = load_matrix(args.input)
    if x.n != d.n or x.trace_scale != d.matrix.trace_scale:
        raise InputError("density and input must have the same size and trace scale", str(args.input))
    weak = weighted_weak_norm(x, d, f, args.alpha, settings)
    lux = weighted_luxemburg_norm(x, d, f, args.alpha, settings)
    report = {
        "command": "weighted",
        "alpha": args.alpha,
        "nfunction": f.to_json(),
        "weighted_weak_norm": weak.to_json() | {"factorization": weak.details.get("factorization")},
        "weighted_luxemburg_norm": lux.to_json(),
    }
    if weak.value > lux.value * (1 + tols.get("quasi_norm", 1e-9)):
        raise _Failure(report, [{"check": "weak_le_strong", "weak": weak.value, "luxemburg": lux.value}])
    return report


def cmd_hardy(args, tols, settings) -> dict:
    if not args.input:
        raise InputError("hardy needs --input", "--input")
    b = hd.BlockStructure.parse(args.blocks)
    x = load_matrix(args.input)
    if x.n != b.n:
        raise InputError(f"blocks describe n={b.n} but the matrix has n={x.n}", str(args.input))
    f = _default_nfunction(args)
    tol = tols.get("membership", 1e-10)
    h, z = hd.riesz_decomposition(b, x)
    failures = []
    try:
        membership = {name: hd.hardy_membership(b, f, m, tol) for name, m in (("x", x), ("h", h), ("z", z))}
    except AssertionError as exc:
        raise _Failure({"command": "hardy"}, [{"check": "membership_agreement", "message": str(exc)}]) from None
    rec = float(np.max(np.abs((h + z.adjoint()).entries - x.entries)))
    if rec > tols.get("reconstruction", 1e-12) * max(1.0, float(np.abs(x.entries).max())):
        failures.append({"check": "reconstruction", "error": rec})
    if not (membership["h"] and membership["z"]):
        failures.append({"check": "components", "membership": membership})
    norms = {}
    for name, m in (("x", x), ("h", h), ("z", z)):
        mu = singular_value_function(m, settings=settings)
        norms[name] = {"weak_orlicz": _safe(weak_orlicz_quasinorm, mu, f, settings), "lorentz": _safe(lorentz_norm, mu, f, settings)}
    report = {
        "command": "hardy",
        "blocks": list(b.sizes),
        "nfunction": f.to_json(),
        "h": h.to_json(),
        "z": z.to_json(),
        "membership": membership,
        "reconstruction_error": rec,
        "norms": norms,
    }
    if failures:
        raise _Failure(report, failures)
    return report


def cmd_duality(args, tols, settings) -> dict:
    fams = {str(p): load_nfunction(p) for p in args.nfunction} if args.nfunction else {
        "power-1.5": Power(1.5),
        "power-2": Power(2.0),
        "power-3": Power(3.0),
    }
    rows = []
    failures = []
    root = np.random.SeedSequence(args.seed)
    children = root.spawn(len(fams) * len(args.sizes))
    i = 0
    for name, f in fams.items():
        for n in args.sizes:
            rep = weak_dual_bracket(f, args.trials, n, np.random.default_rng(children[i]), family=name)
            i += 1
            rows.append(rep.csv_row())
            if not math.isfinite(rep.C_emp) or rep.attained_ratio < tols.get("attained_ratio", 0.5):
                failures.append({"family": name, "n": n, "C_emp": rep.C_emp, "attained_ratio": rep.attained_ratio})
    report = {"command": "duality", "rows": rows}
    if failures:
        raise _Failure(report, failures)
    return report


def cmd_verify(args, tols, settings) -> dict:
    try:
        names = select_suites(args.suite)
    except KeyError as exc:
        raise InputError(str(exc.args[0]), "--suite") from None
    results = run_suites(names, args.seed, args.trials, tols, settings)
    report = {
        "command": "verify",
        "seed": args.seed,
        "trials": args.trials,
        "passed": all(r.passed for r in results),
        "suites": {r.name: r.to_json() for r in results},
    }
    failed = [{"suite": r.name, "checks": sorted(k for k, v in r.checks.items() if not v.get("passed")), "error": r.error} for r in results if not r.passed]
    if failed:
        raise _Failure(report, failed)
    return report


COMMANDS = {
    "nfunc": cmd_nfunc,
    "norms": cmd_norms,
    "weighted": cmd_weighted,
    "hardy": cmd_hardy,
    "duality": cmd_duality,
    "verify": cmd_verify,
}

CSV_COLUMNS = {
    "duality": ["family", "n", "trials", "C_emp", "attained_ratio"],
    "verify": ["suite", "check", "passed"],
}


# ---------------------------------------------------------------------------
# output


def _csv_rows(report: dict) -> tuple[list[dict], list[str]]:
    cmd = report.get("command")
    if cmd == "duality":
        return report["rows"], CSV_COLUMNS["duality"]
    if cmd == "verify":
        rows = [
            {"suite": s, "check": c, "passed": v.get("passed")}
            for s, res in report["suites"].items()
            for c, v in (res["checks"].items() or [("<error>", {"passed": False})])
        ]
        return rows, CSV_COLUMNS["verify"]
    # generic flattening: dotted key paths with scalar values
    rows = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        else:
            rows.append({"key": prefix, "value": obj if not isinstance(obj, list) else str(obj)})

    walk("", to_jsonable(report))
    return rows, ["key", "value"]


def _render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        rows, cols = _csv_rows(report)
        return dumps_csv(rows, cols)
    return dumps_report(report)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit unsigned seed (default 0)")
    common.add_argument("--trials", type=_positive_int, default=10000, help="randomized trials per suite (default 10000)")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VAL", help="tolerance or setting override")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    common.add_argument("--out", default=None, help="write the report to this path")

    p = argparse.ArgumentParser(prog="nc-orlicz", description="Weak Orlicz and Orlicz-Hardy spaces on matrix models.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nfunc", parents=[common], help="indices, growth conditions and conjugate table")
    s.add_argument("--nfunction", action="append", help="N-function JSON file (repeatable)")

    s = sub.add_parser("norms", parents=[common], help="all norms of a matrix, step function or decay")
    s.add_argument("--input", action="append", help="matrix / steps / decay JSON file (repeatable)")
    s.add_argument("--nfunction", help="N-function JSON file (default power p=2)")

    s = sub.add_parser("weighted", parents=[common], help="weighted weak Orlicz quasi-norm")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--density", help="density matrix JSON file")
    s.add_argument("--nfunction", help="N-function JSON file (default power p=2)")
    s.add_argument("--input", help="matrix JSON file")

    s = sub.add_parser("hardy", parents=[common], help="Hardy membership and Riesz splitting")
    s.add_argument("--blocks", default=None, help="block sizes, e.g. 1,1,2 (default: fully triangular)")
    s.add_argument("--input", help="matrix JSON file")
    s.add_argument("--nfunction", help="N-function JSON file (default power p=2)")

    s = sub.add_parser("duality", parents=[common], help="empirical Hoelder bracket table")
    s.add_argument("--nfunction", action="append", help="N-function JSON file (repeatable)")
    s.add_argument("--sizes", type=_int_list, default=[4, 16, 64], help="matrix sizes (default 4,16,64)")

    s = sub.add_parser("verify", parents=[common], help="run invariant suites")
    s.add_argument("--suite", action="append", help=f"suite name or module prefix (repeatable); {len(SUITES)} suites")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors (argparse would exit 2)
        return 1 if exc.code else 0
    fmt = args.format or ("csv" if args.command == "duality" else "json")
    try:
        tols, settings = _parse_tols(args.tol)
        if args.command == "hardy" and args.blocks is None:
            if not args.input:
                raise InputError("hardy needs --input", "--input")
            args.blocks = ",".join(["1"] * load_matrix(args.input).n)
        report = COMMANDS[args.command](args, tols, settings)
    except _Failure as fail:
        body = dict(fail.report)
        body["failures"] = fail.failures
        _emit(_render(body, fmt), args.out)
        sys.stderr.write(dumps_report({"error": "assertion", "failures": fail.failures}))
        return 2
    except (InputError, ShapeError, DomainError, UnsupportedFamilyError) as exc:
        rec = exc.to_json() if isinstance(exc, InputError) else {"error": "input", "message": str(exc)}
        sys.stderr.write(dumps_report(rec))
        return 1
    _emit(_render(report, fmt), args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
