"""Command-line driver: batch experiments with JSON/CSV reports.

Configuration comes from defaults, then an optional JSON config file
(``--config``), then explicit flags — later sources override earlier ones.
Every report embeds the fully resolved config and the package version, and
serialization is canonical, so identical configs produce byte-identical
reports.  Exit codes: 0 completed/PASS, 2 verdict FAIL, 3 low confidence or
skipped, 1 error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .approx import DEFAULT_GRID_SIZE, compute_E
from .corpus import get_function, list_functions, CORPUS_VERSION
from .experiments import (
    coincidence_report,
    discover_diagonalizing_basis,
    estimate_decay,
    run_jobs,
    verify_direct_embedding,
    verify_inverse_embedding,
    verify_jackson,
)
from .jacobi import JacobiParams
from .moduli import modulus_curve
from .reporting import report_envelope, write_csv, write_json, canonical_json
from .shift import ShiftKernelConfig, shift_values, validate_kernel
from .spaces import SiKind, SpaceParams, WeightSpec

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_FAIL = 2
_EXIT_LOW_CONFIDENCE = 3

_DEFAULTS = {
    "p": "inf",
    "alpha": 1.0,
    "r": "1",
    "lam": 1.0,
    "n": "4..64",
    "deltas": "0.05,0.1,0.2,0.4",
    "quad": 256,
    "interpretation": "one_minus_u_squared",
    "enforce_normalization": False,
    "tolerance": 1e-6,
    "grid": DEFAULT_GRID_SIZE,
    "f": "absshift:0.25",
    "y": 0.5,
    "x": "-0.75,-0.5,-0.25,0.0,0.25,0.5,0.75",
    "nmax": 6,
    "ys": "0.25,0.5,0.75",
    "candidates": "",
    "basis": "",
    "seed": 0,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems with exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _parse_p(text) -> float:
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        lowered = str(text).strip().lower()
        value = math.inf if lowered in ("inf", "infinity") else float(lowered)
    if not value >= 1.0:
        raise _UsageError(f"p must satisfy p >= 1, got {text!r}")
    return value


def _parse_int_list(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None


def _parse_float_list(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_n_values(text) -> list[int]:
    """Either an explicit comma list or a doubling range ``start..stop``."""
    raw = str(text).strip()
    if ".." in raw:
        start_text, _, stop_text = raw.partition("..")
        try:
            start, stop = int(start_text), int(stop_text)
        except ValueError:
            raise _UsageError(f"bad n range {text!r}") from None
        if start < 1 or stop < start:
            raise _UsageError(f"bad n range {text!r}")
        values = []
        n = start
        while n <= stop:
            values.append(n)
            n *= 2
        return values
    values = _parse_int_list(raw)
    if not values:
        raise _UsageError("n values must be nonempty")
    return values


def _parse_candidates(text) -> list[JacobiParams]:
    raw = str(text).strip()
    if not raw:
        grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        return [JacobiParams(a, b) for a in grid for b in grid]
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise _UsageError(f"candidate must be 'a,b', got {chunk!r}")
        out.append(JacobiParams(float(parts[0]), float(parts[1])))
    if not out:
        raise _UsageError("candidate list must be nonempty")
    return out


def _resolve_config(args: argparse.Namespace, keys: Sequence[str]) -> dict:
    """defaults <- config file <- explicit flags, restricted to ``keys``."""
    resolved = {key: _DEFAULTS[key] for key in keys if key in _DEFAULTS}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as handle:
                file_cfg = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise _UsageError(f"cannot read config file {config_path!r}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise _UsageError("config file must hold a JSON object")
        for key, value in file_cfg.items():
            norm = str(key).replace("-", "_")
            if norm == "lambda":
                norm = "lam"
            if norm not in resolved and norm not in ("jobs",):
                raise _UsageError(f"unknown config key {key!r} for this command")
            if norm != "jobs":
                resolved[norm] = value
            else:
                resolved["jobs"] = value
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return resolved


def _resolve_jobs(args: argparse.Namespace, config: dict) -> int:
    if getattr(args, "jobs", None) is not None:
        jobs = args.jobs
    elif "jobs" in config:
        jobs = config["jobs"]
    elif os.environ.get("GSHIFT_JOBS"):
        try:
            jobs = int(os.environ["GSHIFT_JOBS"])
        except ValueError:
            raise _UsageError(
                f"GSHIFT_JOBS must be an integer, got {os.environ['GSHIFT_JOBS']!r}"
            ) from None
    else:
        jobs = os.cpu_count() or 1
    jobs = int(jobs)
    if jobs < 1:
        raise _UsageError(f"jobs must be >= 1, got {jobs}")
    return jobs


def _kernel_pieces(config: dict) -> tuple[WeightSpec, ShiftKernelConfig]:
    try:
        kind = SiKind(config["interpretation"])
    except ValueError:
        raise _UsageError(
            f"unknown interpretation {config['interpretation']!r}; "
            f"choose from {[k.value for k in SiKind]}"
        ) from None
    spec = WeightSpec(si=kind, alpha=float(config["alpha"]))
    cfg = ShiftKernelConfig(
        weight=spec,
        quadrature_size=int(config["quad"]),
        enforce_normalization=bool(config["enforce_normalization"]),
    )
    return spec, cfg


def _space_params(config: dict) -> SpaceParams:
    return SpaceParams(p=_parse_p(config["p"]), alpha=float(config["alpha"]))


def _emit(args, command: str, config: dict, result, csv_header=None, csv_rows=None) -> None:
    config = dict(config)
    config["corpus_version"] = CORPUS_VERSION
    envelope = report_envelope(command, __version__, config, result)
    out_path = getattr(args, "out", None)
    if out_path:
        write_json(out_path, envelope)
    else:
        sys.stdout.write(canonical_json(envelope) + "\n")
    csv_path = getattr(args, "csv", None)
    if csv_path:
        if csv_header is None:
            raise _UsageError(f"command {command!r} does not produce CSV output")
        write_csv(csv_path, csv_header, csv_rows or [])


def _verdict_exit(verdict: str | None, low_confidence: bool = False) -> int:
    if verdict == "FAIL":
        return _EXIT_FAIL
    if verdict == "PASS" and not low_confidence:
        return _EXIT_OK
    return _EXIT_LOW_CONFIDENCE


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_kernel_validate(args) -> int:
    keys = ("quad", "alpha", "interpretation", "enforce_normalization", "tolerance", "basis", "seed")
    config = _resolve_config(args, keys)
    _, cfg = _kernel_pieces({**config, "p": "inf"})
    basis = None
    if str(config.get("basis", "")).strip():
        parts = str(config["basis"]).split(",")
        if len(parts) != 2:
            raise _UsageError(f"basis must be 'a,b', got {config['basis']!r}")
        basis = JacobiParams(float(parts[0]), float(parts[1]))
    x_grid = np.linspace(-0.99, 0.99, 21)
    y_grid = np.linspace(-0.9, 0.99, 21)
    report = validate_kernel(cfg, x_grid, y_grid, basis=basis, tolerance=float(config["tolerance"]))
    _emit(args, "kernel-validate", config, report.to_dict())
    return _EXIT_OK if report.accepted is not None else _EXIT_FAIL


def _cmd_shift_eval(args) -> int:
    keys = ("f", "y", "x", "quad", "alpha", "interpretation", "enforce_normalization", "seed")
    config = _resolve_config(args, keys)
    _, cfg = _kernel_pieces(config)
    fn = get_function(str(config["f"]))
    xs = np.asarray(_parse_float_list(config["x"]), dtype=float)
    y = float(config["y"])
    values = shift_values(cfg, fn, y, xs)
    rows = [(float(x), float(v)) for x, v in zip(xs, values)]
    result = {"function": fn.id, "y": y, "values": [{"x": a, "shifted": b} for a, b in rows]}
    _emit(args, "shift-eval", config, result, csv_header=("x", "shifted"), csv_rows=rows)
    return _EXIT_OK


def _cmd_modulus(args) -> int:
    keys = (
        "f", "r", "deltas", "p", "alpha", "quad",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    _, cfg = _kernel_pieces(config)
    params = _space_params(config)
    fn = get_function(str(config["f"]))
    rs = _parse_int_list(config["r"])
    if len(rs) != 1:
        raise _UsageError("the modulus command takes a single difference order r")
    deltas = _parse_float_list(config["deltas"])
    results = modulus_curve(cfg, fn, rs[0], deltas, params)
    rows = [(res.delta, res.value) for res in results]
    result = {"function": fn.id, "r": rs[0], "curve": [res.to_dict() for res in results]}
    _emit(args, "modulus", config, result, csv_header=("delta", "value"), csv_rows=rows)
    return _EXIT_OK


def _cmd_bestapprox(args) -> int:
    keys = ("f", "p", "alpha", "n", "grid", "seed")
    config = _resolve_config(args, keys)
    params = _space_params(config)
    spec = WeightSpec(si=SiKind.ONE_MINUS_U_SQUARED, alpha=float(config["alpha"]))
    fn = get_function(str(config["f"]))
    ns = _parse_n_values(config["n"])
    jobs = _resolve_jobs(args, config)

    def worker(n: int) -> float:
        return compute_E(fn, n, params, spec, grid_size=int(config["grid"])).error

    errors = run_jobs(jobs, ns, worker)
    rows = list(zip(ns, errors))
    fit = None
    if len(ns) >= 3 and all(e > 0.0 for e in errors):
        fit = estimate_decay(ns, errors).to_dict()
    result = {
        "function": fn.id,
        "errors": [{"n": n, "E": e} for n, e in rows],
        "decay_fit": fit,
    }
    _emit(args, "bestapprox", config, result, csv_header=("n", "E"), csv_rows=rows)
    return _EXIT_OK


def _cmd_verify_jackson(args) -> int:
    keys = (
        "f", "r", "n", "p", "alpha", "quad", "grid",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    spec, cfg = _kernel_pieces(config)
    params = _space_params(config)
    fn = get_function(str(config["f"]))
    rs = _parse_int_list(config["r"])
    if len(rs) != 1:
        raise _UsageError("verify-jackson takes a single difference order r")
    ns = _parse_n_values(config["n"])
    jobs = _resolve_jobs(args, config)
    report = verify_jackson(
        cfg, fn, ns, params, rs[0], spec, grid_size=int(config["grid"]), jobs=jobs
    )
    rows = [(c["n"], c["E"], c["omega"], c["ratio"], c["status"]) for c in report.cells]
    _emit(
        args, "verify-jackson", config, report.to_dict(),
        csv_header=("n", "E", "omega", "ratio", "status"), csv_rows=rows,
    )
    return _verdict_exit(report.verdict)


def _embedding_rows(report) -> list[tuple]:
    rows = []
    omegas = report.omega_values or [None] * len(report.ns)
    for n, e, delta, w in zip(report.ns, report.e_values, report.deltas, omegas):
        rows.append((n, e, delta, w))
    return rows


def _cmd_verify_direct(args) -> int:
    keys = (
        "f", "r", "lam", "p", "alpha", "quad", "grid",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    spec, cfg = _kernel_pieces(config)
    params = _space_params(config)
    fn = get_function(str(config["f"]))
    rs = _parse_int_list(config["r"])
    if len(rs) != 1:
        raise _UsageError("verify-direct takes a single difference order r")
    jobs = _resolve_jobs(args, config)
    report = verify_direct_embedding(
        cfg, fn, rs[0], float(config["lam"]), params, spec,
        grid_size=int(config["grid"]), jobs=jobs,
    )
    _emit(
        args, "verify-direct", config, report.to_dict(),
        csv_header=("n", "E", "delta", "omega"), csv_rows=_embedding_rows(report),
    )
    return _verdict_exit(report.verdict, report.low_confidence)


def _cmd_verify_inverse(args) -> int:
    keys = (
        "f", "r", "p", "alpha", "quad", "grid",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    spec, cfg = _kernel_pieces(config)
    params = _space_params(config)
    fn = get_function(str(config["f"]))
    rs = _parse_int_list(config["r"])
    if len(rs) != 1:
        raise _UsageError("verify-inverse takes a single difference order r")
    jobs = _resolve_jobs(args, config)
    report = verify_inverse_embedding(
        cfg, fn, rs[0], params, spec, grid_size=int(config["grid"]), jobs=jobs
    )
    _emit(
        args, "verify-inverse", config, report.to_dict(),
        csv_header=("n", "E", "delta", "omega"), csv_rows=_embedding_rows(report),
    )
    return _verdict_exit(report.verdict, report.low_confidence)


def _cmd_coincidence(args) -> int:
    keys = (
        "f", "r", "p", "alpha", "quad", "grid",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    spec, cfg = _kernel_pieces(config)
    params = _space_params(config)
    fn = get_function(str(config["f"]))
    rs = _parse_int_list(config["r"])
    jobs = _resolve_jobs(args, config)
    report = coincidence_report(
        cfg, fn, rs, params, spec, grid_size=int(config["grid"]), jobs=jobs
    )
    rows = [(key, value) for key, value in sorted(report.exponents.items()) if value is not None]
    _emit(
        args, "coincidence", config, report.to_dict(),
        csv_header=("exponent", "value"), csv_rows=rows,
    )
    return _verdict_exit(report.verdict, report.low_confidence)


def _cmd_discover_basis(args) -> int:
    keys = (
        "candidates", "nmax", "ys", "quad", "alpha",
        "interpretation", "enforce_normalization", "seed",
    )
    config = _resolve_config(args, keys)
    _, cfg = _kernel_pieces({**config, "p": "inf"})
    candidates = _parse_candidates(config["candidates"])
    ys = _parse_float_list(config["ys"])
    report = discover_diagonalizing_basis(cfg, candidates, int(config["nmax"]), ys)
    rows = [(entry["a"], entry["b"], entry["score"]) for entry in report.scores]
    _emit(
        args, "discover-basis", config, report.to_dict(),
        csv_header=("a", "b", "score"), csv_rows=rows,
    )
    return _EXIT_OK


def _cmd_corpus_list(args) -> int:
    config = _resolve_config(args, ("seed",))
    entries = list_functions()
    rows = [(e["id"], e["kind"], e["description"]) for e in entries]
    _emit(
        args, "corpus-list", config, {"functions": entries},
        csv_header=("id", "kind", "description"), csv_rows=rows,
    )
    return _EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override its keys")
    sub.add_argument("--out", help="path of the JSON report (default: stdout)")
    sub.add_argument("--csv", help="optional CSV output path")
    sub.add_argument("--jobs", type=int, help="parallel jobs (default: GSHIFT_JOBS or cores)")
    sub.add_argument("--seed", type=int, help="seed recorded in the report")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gshift", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gshift {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="command")

    def new_sub(name: str, help_text: str, handler) -> argparse.ArgumentParser:
        sub = subs.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        _add_common(sub)
        return sub

    sub = new_sub("kernel-validate", "probe kernel normalization/identity residuals", _cmd_kernel_validate)
    sub.add_argument("--quad", type=int, help="kernel quadrature size")
    sub.add_argument("--alpha", type=float, help="weight exponent")
    sub.add_argument("--interpretation", help="base factor: one_minus_u_squared or one_minus_u")
    sub.add_argument("--enforce-normalization", dest="enforce_normalization", action="store_const", const=True)
    sub.add_argument("--tolerance", type=float, help="acceptance tolerance for residuals")
    sub.add_argument("--basis", help="optional 'a,b' pair for multiplier-consistency checks")

    sub = new_sub("shift-eval", "evaluate the generalized shift at given points", _cmd_shift_eval)
    sub.add_argument("--f", help="corpus function id")
    sub.add_argument("--y", type=float, help="shift parameter in (-1, 1]")
    sub.add_argument("--x", help="comma-separated evaluation points")
    sub.add_argument("--quad", type=int)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--interpretation")
    sub.add_argument("--enforce-normalization", dest="enforce_normalization", action="store_const", const=True)

    sub = new_sub("modulus", "modulus-of-smoothness curve over deltas", _cmd_modulus)
    sub.add_argument("--f", help="corpus function id")
    sub.add_argument("--r", help="difference order")
    sub.add_argument("--deltas", help="comma-separated increasing deltas")
    sub.add_argument("--p", help="norm exponent or 'inf'")
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--quad", type=int)
    sub.add_argument("--interpretation")
    sub.add_argument("--enforce-normalization", dest="enforce_normalization", action="store_const", const=True)

    sub = new_sub("bestapprox", "best-approximation errors over a range of n", _cmd_bestapprox)
    sub.add_argument("--f", help="corpus function id")
    sub.add_argument("--p", help="norm exponent or 'inf'")
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--n", help="comma list or doubling range start..stop")
    sub.add_argument("--grid", type=int, help="solver grid size")

    for name, handler, with_lambda in (
        ("verify-jackson", _cmd_verify_jackson, False),
        ("verify-direct", _cmd_verify_direct, True),
        ("verify-inverse", _cmd_verify_inverse, False),
        ("coincidence", _cmd_coincidence, False),
    ):
        sub = new_sub(name, f"run the {name.replace('-', ' ')} experiment", handler)
        sub.add_argument("--f", help="corpus function id")
        sub.add_argument("--r", help="difference order(s), comma-separated")
        sub.add_argument("--p", help="norm exponent or 'inf'")
        sub.add_argument("--alpha", type=float)
        sub.add_argument("--quad", type=int)
        sub.add_argument("--grid", type=int)
        sub.add_argument("--interpretation")
        sub.add_argument("--enforce-normalization", dest="enforce_normalization", action="store_const", const=True)
        if name == "verify-jackson":
            sub.add_argument("--n", help="comma list or doubling range start..stop")
        if with_lambda:
            sub.add_argument("--lambda", dest="lam", type=float, help="declared class exponent")

    sub = new_sub("discover-basis", "score candidate diagonalizing bases", _cmd_discover_basis)
    sub.add_argument("--candidates", help="semicolon-separated 'a,b' pairs (default: a 7x7 grid)")
    sub.add_argument("--nmax", type=int, help="largest basis degree expanded")
    sub.add_argument("--ys", help="comma-separated shift parameters")
    sub.add_argument("--quad", type=int)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--interpretation")
    sub.add_argument("--enforce-normalization", dest="enforce_normalization", action="store_const", const=True)

    new_sub("corpus-list", "list the fixed corpus of test functions", _cmd_corpus_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            sys.stderr.write("gshift: error: a subcommand is required\n")
            return _EXIT_ERROR
        return args.handler(args)
    except _UsageError as exc:
        sys.stderr.write(f"gshift: error: {exc}\n")
        return _EXIT_ERROR
    except (ValueError, OSError, RuntimeError) as exc:
        sys.stderr.write(f"gshift: error: {exc}\n")
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
