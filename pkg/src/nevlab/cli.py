"""Command-line front end: ``nevlab moments | verify | density | case-study``.

Exit codes: 0 when every check passes, 1 on a numerical verdict failure
(including unmet quadrature tolerances), 2 on usage or configuration errors.
Reports are a JSON envelope (default) or CSV for table-shaped output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .entire import EntireM, entire_from_config
from .errors import (
    CertificateError,
    ContourError,
    ConvergenceError,
    DomainError,
    EvaluationRangeError,
    NevlabError,
    ToleranceError,
    UnsupportedError,
)
from .ismail_valent import case_study
from .measures import MAX_MOMENT, MeasureSpec, density_phi_form, density_w_form, moments
from .pick import PickFn, parse_pick
from .quadrature import QuadConfig
from .special import elliptic_pair
from . import suites

DEFAULT_K = 0.7071067811865476
DEFAULT_SEED = 20240229
DENSITY_GAP_TOL = 1e-12
_SCENARIO_KEYS = {"model", "k", "pick", "quad", "outputs", "C", "zeros", "seed", "n", "grid", "range", "points"}
_QUAD_KEYS = {"rel_tol", "abs_tol", "max_subdivisions", "truncation_T"}
# Options whose values may start with '-' (argparse would read them as flags).
_SIGNED_VALUE_OPTS = ("--grid", "--range")


class UsageError(NevlabError):
    """Bad command line or configuration file (exit code 2)."""


@dataclass
class Scenario:
    model: str = "iv"
    k: float = DEFAULT_K
    pick: str = "const:0,1"
    quad: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    C: list | None = None
    zeros: list | None = None
    seed: int = DEFAULT_SEED
    n: str | None = None
    grid: str | None = None
    range: str | None = None
    points: int | None = None

    def to_dict(self) -> dict:
        out = {"model": self.model, "k": self.k, "pick": self.pick, "quad": dict(self.quad),
               "outputs": list(self.outputs), "seed": self.seed}
        if self.model == "zero-product":
            out["C"] = self.C
            out["zeros"] = self.zeros
        for key in ("n", "grid", "range", "points"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out

    def quad_config(self) -> QuadConfig:
        try:
            return QuadConfig(**self.quad)
        except TypeError as exc:
            raise UsageError(f"quad: {exc}") from None

    def entire(self) -> EntireM:
        cfg = {"model": self.model, "k": self.k}
        if self.C is not None:
            cfg["C"] = self.C
        if self.zeros is not None:
            cfg["zeros"] = self.zeros
        return entire_from_config(cfg)

    def phi(self) -> PickFn:
        return parse_pick(self.pick)


def load_config(path: str) -> dict:
    """Read a scenario JSON file; unknown keys are rejected with their location."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: top level must be an object")
    for key in doc:
        if key not in _SCENARIO_KEYS:
            raise UsageError(f"{path}: unknown key $.{key}")
    quad = doc.get("quad", {})
    if not isinstance(quad, dict):
        raise UsageError(f"{path}: $.quad must be an object")
    for key in quad:
        if key not in _QUAD_KEYS:
            raise UsageError(f"{path}: unknown key $.quad.{key}")
    return doc


def build_scenario(args) -> Scenario:
    doc = load_config(args.config) if getattr(args, "config", None) else {}
    sc = Scenario(**{k: v for k, v in doc.items()})
    for key in ("model", "k", "pick", "seed", "n", "grid", "range", "points"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(sc, key, val)
    tol = getattr(args, "tol", None)
    if tol is not None:
        sc.quad = dict(sc.quad, rel_tol=tol)
    if isinstance(sc.k, bool) or not isinstance(sc.k, (int, float)):
        raise UsageError(f"k must be a number, got {sc.k!r}")
    return sc


def parse_n(text: str | int | None, default: tuple[int, int]) -> tuple[int, int]:
    """'6' -> (0, 6); '2..6' -> (2, 6)."""
    if text is None:
        return default
    s = str(text)
    try:
        if ".." in s:
            a, b = s.split("..")
            lo, hi = int(a), int(b)
        else:
            lo, hi = 0, int(s)
    except ValueError:
        raise UsageError(f"--n expects N or A..B, got {s!r}") from None
    if not 0 <= lo <= hi <= MAX_MOMENT:
        raise UsageError(f"--n range must satisfy 0 <= A <= B <= {MAX_MOMENT}")
    return lo, hi


def parse_range(text: str | None) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in (text or "-20:20").split(":"))
    except ValueError:
        raise UsageError(f"--range expects LO:HI, got {text!r}") from None
    if not a < b:
        raise UsageError("--range needs LO < HI")
    return a, b


def _check_grid(text: str | None):
    if text is None:
        return
    try:
        pts = suites._grid(text)
    except ValueError:
        raise UsageError(f"--grid expects RE_LO:RE_HI:N x IM_LO:IM_HI:M, got {text!r}") from None
    if not pts:
        raise UsageError("--grid is empty")


# ---------------------------------------------------------------- output

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and insertion-ordered keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return to_json([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{to_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def envelope(sc: Scenario, command: str, results: dict, residuals: list[float], passed: bool,
             started: float) -> dict:
    res = [r for r in residuals if not math.isnan(r)]
    return {
        "tool_version": __version__,
        "scenario": sc.to_dict(),
        "results": {"command": command, **results},
        "residual_summary": {
            "max": max(res) if res else 0.0,
            "mean": float(np.mean(res)) if res else 0.0,
            "count": len(res),
        },
        "verdict": "pass" if passed else "fail",
        "wall_time_ms": int(round((time.perf_counter() - started) * 1000)),
    }


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_moments(args) -> int:
    started = time.perf_counter()
    sc = build_scenario(args)
    f, phi, cfg = sc.entire(), sc.phi(), sc.quad_config()
    _, n_max = parse_n(sc.n, (0, 10))
    if args.compare:
        suite = suites.compare_moments(f, phi, n_max, cfg)
        mv = suite.extra["moments"]
        results = {"pick": phi.spec, **suite.to_dict()}
        passed, residuals = suite.passed, [c.residual for c in suite.checks]
    else:
        mv = moments(MeasureSpec.build(f, phi), n_max, cfg).to_dict()
        results = {"pick": phi.spec, "moments": mv}
        passed, residuals = True, list(mv["error_estimates"])
    if args.format == "csv":
        rows = [[n, mv["values"][n], mv["error_estimates"][n]] for n in range(n_max + 1)]
        header = ["n", "moment", "error_estimate"]
        if args.compare:
            header += ["gap", "pass"]
            for row, c in zip(rows, suite.checks):
                row += [c.residual, "true" if c.passed else "false"]
        _emit(args, to_csv(header, rows))
    else:
        _emit(args, to_json(envelope(sc, "moments", results, residuals, passed, started)) + "\n")
    return 0 if passed else 1


def cmd_verify(args) -> int:
    started = time.perf_counter()
    sc = build_scenario(args)
    _check_grid(sc.grid)
    f = sc.entire()
    name = args.suite
    picks = [sc.phi()] if getattr(args, "pick", None) or "pick" in _config_keys(args) else None
    if name == "identity":
        suite = suites.suite_identity(f, seed=sc.seed)
    elif name == "adbc":
        suite = suites.suite_adbc(f, sc.grid)
    elif name == "fg":
        suite = suites.suite_fg(f, sc.grid)
    elif name == "parametrization":
        suite = suites.suite_parametrization(f, picks)
    elif name == "in-zero":
        suite = suites.suite_in_zero(f, picks, parse_n(sc.n, (0, 8)))
    elif name == "stieltjes":
        suite = suites.suite_stieltjes(f, picks[0] if picks else None)
    else:
        suite = suites.suite_membership(f)
    if args.format == "csv":
        rows = [[c.label, c.residual, c.tol, "true" if c.passed else "false"] for c in suite.checks]
        _emit(args, to_csv(["check", "residual", "tol", "pass"], rows))
    else:
        residuals = [c.residual for c in suite.checks]
        _emit(args, to_json(envelope(sc, f"verify {name}", suite.to_dict(), residuals, suite.passed,
                                     started)) + "\n")
    return 0 if suite.passed else 1


def _config_keys(args) -> set:
    return set(load_config(args.config)) if getattr(args, "config", None) else set()


def cmd_density(args) -> int:
    started = time.perf_counter()
    sc = build_scenario(args)
    lo, hi = parse_range(sc.range)
    npts = 801 if sc.points is None else int(sc.points)
    if npts < 1:
        raise UsageError("--points must be at least 1")
    f, phi = sc.entire(), sc.phi()
    spec = MeasureSpec(f, phi)
    x = np.linspace(lo, hi, npts)
    a = np.atleast_1d(density_phi_form(spec, x))
    w = np.atleast_1d(density_w_form(spec, x))
    gap = np.abs(a - w)
    passed = bool(np.all(gap < DENSITY_GAP_TOL))
    if args.format == "csv":
        rows = [[float(xi), float(ai), float(wi), float(gi)] for xi, ai, wi, gi in zip(x, a, w, gap)]
        _emit(args, to_csv(["x", "density_phi_form", "density_w_form", "abs_gap"], rows))
    else:
        results = {
            "pick": phi.spec,
            "gap_tol": DENSITY_GAP_TOL,
            "x": x.tolist(),
            "density_phi_form": a.tolist(),
            "density_w_form": w.tolist(),
            "abs_gap": gap.tolist(),
        }
        _emit(args, to_json(envelope(sc, "density", results, gap.tolist(), passed, started)) + "\n")
    return 0 if passed else 1


def cmd_case_study(args) -> int:
    started = time.perf_counter()
    sc = build_scenario(args)
    rep = case_study(elliptic_pair(sc.k), sc.quad_config())
    passed = rep.verdict == "pass"
    if args.format == "csv":
        rows = [[x, r] for x, r in rep.pointwise_residuals]
        _emit(args, to_csv(["x", "pointwise_residual"], rows))
    else:
        residuals = [r for _, r in rep.pointwise_residuals] + [row[3] for row in rep.moment_match]
        _emit(args, to_json(envelope(sc, "case-study", rep.to_dict(), residuals, passed, started)) + "\n")
    return 0 if passed else 1


# ---------------------------------------------------------------- parser

def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=d, help="scenario JSON file")
    p.add_argument("--format", choices=("json", "csv"), default=d)
    p.add_argument("--tol", type=float, default=d, help="relative quadrature tolerance")
    p.add_argument("--seed", type=int, default=d, help="seed for sampled invariants")
    p.add_argument("--out", default=d, help="write the report here instead of stdout")


def _scenario_flags(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=("iv", "iv-tilde", "zero-product"))
    p.add_argument("--k", type=float, help=f"elliptic modulus in (0, 1); default {DEFAULT_K!r}")
    p.add_argument("--pick", help="const:t,gamma | gdelta:delta | shift:delta:<pick> | tilde:slope")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nevlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nevlab {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="moment table of mu(x; phi)")
    _global_flags(p, suppress=True)
    _scenario_flags(p)
    p.add_argument("--n", help="highest moment N (or 0..N)")
    p.add_argument("--compare", action="store_true", help="compare with phi = i")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", help="run an invariant suite")
    _global_flags(p, suppress=True)
    p.add_argument("suite", choices=tuple(suites.SUITES))
    _scenario_flags(p)
    p.add_argument("--n", help="moment range A..B for in-zero")
    p.add_argument("--grid", help="RE_LO:RE_HI:N x IM_LO:IM_HI:M, e.g. -5:5:11x-2:2:5")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="sample both density forms")
    _global_flags(p, suppress=True)
    _scenario_flags(p)
    p.add_argument("--range", help="LO:HI (default -20:20)")
    p.add_argument("--points", type=int, help="number of abscissae (default 801)")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("case-study", help="Case I / Case II example")
    _global_flags(p, suppress=True)
    p.add_argument("--k", type=float, help=f"elliptic modulus; default {DEFAULT_K!r}")
    p.set_defaults(func=cmd_case_study)
    return parser


def _join_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_signed(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "json"
    try:
        return args.func(args)
    except (ToleranceError, ConvergenceError, ContourError, EvaluationRangeError) as exc:
        print(f"nevlab: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (UsageError, DomainError, CertificateError, UnsupportedError) as exc:
        print(f"nevlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
