"""Command-line interface.

Exit codes: 0 on success, 1 on invalid input or usage, 2 when a property
suite or the demo disagrees with its expected outcome.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import proplab
from .exceptions import BudgetExceeded, ValidationError
from .formats import (
    DENDROGRAM_FORMATS,
    FORMATS,
    dump_edges,
    dump_matrix,
    emit_dendrogram,
    encode_number,
    parse_number,
    read_input,
)
from .generators import barbell_k4, bridged_k4, generate
from .gromov_hausdorff import gh_exact
from .methods import AL, CL, SL, MethodId, SLalpha, SLstar, parse_method
from .metric import validate_metric

__all__ = ["RunConfig", "main", "build_parser", "run_demo"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2

METHOD_NAMES = ("sl", "cl", "al", "sl-alpha", "sl-star")
SUITES = ("table", "refine", "collapse", "a1-exhaustive", "oracle", "all")
INSTANCES = ("barbell_k4", "bridged_k4", "random_metric", "random_ultrametric")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for mismatches.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _number(text: str, exact: bool):
    try:
        return parse_number(text, exact)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one ``cluster`` run."""

    method: MethodId
    input: Path
    format: str = "matrix-csv"
    out: Path | None = None
    out_format: str = "json"
    snap: int | None = None
    seed: int | None = None
    exact: bool = False

    @property
    def alpha(self):
        return self.method.alpha

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        needs_alpha = args.method in ("sl-alpha", "sl-star")
        if needs_alpha and args.alpha is None:
            raise UsageError(f"--alpha is required for --method {args.method}")
        if not needs_alpha and args.alpha is not None:
            raise UsageError(f"--alpha does not apply to --method {args.method}")
        if args.format not in FORMATS:
            raise UsageError(f"unknown input format {args.format!r}")
        if args.out_format not in DENDROGRAM_FORMATS:
            raise UsageError(f"unknown output format {args.out_format!r}")
        if args.snap is not None and args.snap < 0:
            raise UsageError("--snap must be nonnegative")
        alpha = _number(args.alpha, True) if needs_alpha else None
        try:
            method = parse_method(args.method, alpha)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return cls(
            method=method,
            input=Path(args.input),
            format=args.format,
            out=Path(args.out) if args.out else None,
            out_format=args.out_format,
            snap=args.snap,
            seed=args.seed,
            exact=args.exact,
        )


def _json_default(obj):
    if isinstance(obj, Fraction):
        return encode_number(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) + "\n"


def _write(out, payload: bytes | str):
    if isinstance(payload, str):
        payload = payload.encode()
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(payload)


def _show(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(value)


# -- subcommands ---------------------------------------------------------------

def cmd_cluster(args) -> int:
    cfg = RunConfig.from_args(args)
    space = read_input(cfg.input, cfg.format, cfg.exact, cfg.snap)
    dend = cfg.method.run(space)
    _write(cfg.out, emit_dendrogram(dend, cfg.out_format))
    return EXIT_OK


def cmd_gh(args) -> int:
    X = read_input(args.a, args.format, args.exact, args.snap)
    Y = read_input(args.b, args.format, args.exact, args.snap)
    if args.method:
        alpha = _number(args.alpha, True) if args.alpha is not None else None
        try:
            method = parse_method(args.method, alpha)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        X, Y = method.ultrametric(X), method.ultrametric(Y)
    try:
        value = gh_exact(X, Y, args.budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {_show(exc.lower)} <= d_GH <= {_show(exc.upper)}", file=sys.stderr)
        return EXIT_INVALID
    print(_show(value))
    return EXIT_OK


def _suite_reports(suite, args):
    """Run one suite; return ``(payload, ok)``."""
    if suite == "table":
        result = proplab.property_table(args.trials, args.max_n, args.seed, alpha=_number(args.alpha or "2", True),
                                a2_trials=args.a2_trials)
        return result, result["ok"]
    if suite == "refine":
        reports = [proplab.find_refinement_violation(v, args.budget, args.seed) for v in ("plain", "star")]
        ok = all(r.verdict == proplab.VIOLATED and proplab.replay_report(r) for r in reports)
        return {"reports": [r.to_dict() for r in reports], "ok": ok}, ok
    if suite == "collapse":
        r = proplab.check_threshold_collapse(args.trials, args.max_n, args.seed)
        return {"reports": [r.to_dict()], "ok": r.holds}, r.holds
    if suite == "a1-exhaustive":
        reports = [proplab.check_A1_exhaustive(m) for m in proplab.table_methods(_number(args.alpha or "2", True))]
        ok = all(r.holds for r in reports)
        return {"reports": [r.to_dict() for r in reports], "ok": ok}, ok
    if suite == "oracle":
        r = proplab.check_sl_oracle(args.trials, args.max_n, args.seed)
        return {"reports": [r.to_dict()], "ok": r.holds}, r.holds
    raise UsageError(f"unknown suite {suite!r}")


def cmd_proplab(args) -> int:
    suites = [s for s in SUITES if s != "all"] if args.suite == "all" else [args.suite]
    out = {"config": {"trials": args.trials, "max_n": args.max_n, "seed": args.seed}, "suites": {}}
    ok = True
    for suite in suites:
        start = time.perf_counter()
        payload, suite_ok = _suite_reports(suite, args)
        out["suites"][suite] = payload
        ok = ok and suite_ok
        # Timings go to stderr only so the JSON stays byte-exact.
        print(f"{'PASS' if suite_ok else 'FAIL'} {suite} ({time.perf_counter() - start:.1f}s)", file=sys.stderr)
    out["ok"] = ok
    _write(args.out, _dumps(out))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_generate(args) -> int:
    eps = _number(args.eps, True)
    try:
        space = generate(args.name, eps=eps, n=args.n, seed=args.seed, variant=args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out_format == "edges-csv":
        _write(args.out, dump_edges(space))
    else:
        _write(args.out, dump_matrix(space, args.out_format))
    return EXIT_OK


# -- demo ----------------------------------------------------------------------

def _check(lines, name, got, expected, tol=0):
    if tol:
        ok = abs(got - expected) <= tol
    else:
        ok = got == expected
    lines.append((ok, f"{'ok  ' if ok else 'FAIL'} {name}: got {_fmt(got)} expected {_fmt(expected)}"))
    return ok


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return _show(v)


def _cross(u, space):
    xs = [i for i, lab in enumerate(space.labels) if lab.startswith("x")]
    ys = [i for i, lab in enumerate(space.labels) if lab.startswith("y")]
    return sorted({u.dist[i][j] for i in xs for j in ys})


def _within(u, space):
    vals = set()
    for prefix in ("x", "y"):
        idx = [i for i, lab in enumerate(space.labels) if lab.startswith(prefix)]
        vals |= {u.dist[i][j] for i in idx for j in idx if i != j}
    return sorted(vals)


def run_demo(eps=Fraction(1, 10)) -> list:
    """Recompute the barbell, bridge and three-point examples; returns ``[(ok, line), ...]``."""
    lines = []
    base, pert = barbell_k4(eps)
    _check(lines, "barbell distinct distances", pert.distance_values(), [1, 1 + eps, 2 + eps, 3 + eps])
    u_base = SLalpha(1).ultrametric(base)
    _check(lines, "SL(1) on unperturbed barbell, all entries", u_base.distance_values(), [1])
    u1 = SLalpha(1).ultrametric(pert)
    _check(lines, "SL(1) on perturbed barbell, within cliques", _within(u1, pert), [1])
    _check(lines, "SL(1) on perturbed barbell, across", _cross(u1, pert), [2 + eps])
    u3 = SLalpha(3).ultrametric(pert)
    _check(lines, "SL(3) on perturbed barbell, across", _cross(u3, pert), [1 + eps])
    _check(lines, "SL(1) merge heights", list(SLalpha(1).run(pert).heights), [0, 1, 2 + eps])

    demo = proplab.instability_demo(eps)
    _check(lines, "d_GH(inputs)", demo["values"]["inputs"], eps / 2)
    _check(lines, "d_GH(SL(1) outputs)", demo["values"]["sl1_outputs"], (1 + eps) / 2)
    _check(lines, "d_GH(SL(1), SL(3)) on perturbed input", demo["values"]["sl1_vs_sl3"], Fraction(1, 2))
    fbase, fpert = barbell_k4(float(eps))
    _check(lines, "d_GH(inputs), double precision", gh_exact(fbase, fpert), float(eps) / 2, tol=1e-12)

    z = [pert.labels.index("x0"), pert.labels.index("y0")]
    for m in (SLalpha(1), SLstar(1)):
        u_sub = m.ultrametric(pert.subspace(z)).dist[0][1]
        u_full = m.ultrametric(pert).dist[z[0]][z[1]]
        _check(lines, f"{m} on {{x0, y0}}", u_sub, 1 + eps)
        _check(lines, f"{m} on the full barbell, x0-y0", u_full, 2 + eps)

    bridge = bridged_k4()
    m_idx = bridge.labels.index("m")
    for m in (SL, SLalpha(1)):
        _check(lines, f"{m} heights on bridged_k4", list(m.run(bridge).heights), [0, 1, 2])
    star = SLstar(1).run(bridge)
    _check(lines, "SL*(1) heights on bridged_k4", list(star.heights), [0, 1, 5])
    _check(lines, "SL*(1) classes on [2, 5)", [len(b) for b in star.at(2).blocks if m_idx not in b] + [len(b) for b in star.at(2).blocks if m_idx in b], [4, 4, 1])

    tri = validate_metric(["a", "b", "c"], [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    _check(lines, "SL heights on a-b-c", list(SL.run(tri).heights), [0, 1, 2])
    _check(lines, "CL heights on a-b-c", list(CL.run(tri).heights), [0, 1, 3])
    _check(lines, "AL heights on a-b-c", list(AL.run(tri).heights), [0, 1, Fraction(5, 2)])
    return lines


def cmd_demo(args) -> int:
    eps = _number(args.eps, True)
    lines = run_demo(eps)
    for _, text in lines:
        print(text)
    failed = sum(1 for ok, _ in lines if not ok)
    print(f"{len(lines) - failed}/{len(lines)} checks passed")
    return EXIT_OK if not failed else EXIT_MISMATCH


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unchain", description="Hierarchical clustering with exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def input_opts(sp):
        sp.add_argument("--format", default="matrix-csv", choices=FORMATS)
        sp.add_argument("--exact", action="store_true", help="read numbers as exact rationals")
        sp.add_argument("--snap", type=int, default=None, metavar="N", help="round inputs to N decimals")

    c = sub.add_parser("cluster", help="build a dendrogram")
    c.add_argument("--method", required=True, choices=METHOD_NAMES)
    c.add_argument("--alpha", default=None)
    c.add_argument("--input", required=True)
    input_opts(c)
    c.add_argument("--out", default=None)
    c.add_argument("--out-format", default="json", choices=DENDROGRAM_FORMATS)
    c.add_argument("--seed", type=int, default=None)
    c.set_defaults(func=cmd_cluster)

    g = sub.add_parser("gh", help="exact Gromov-Hausdorff distance of two inputs")
    g.add_argument("a")
    g.add_argument("b")
    input_opts(g)
    g.add_argument("--method", default=None, choices=METHOD_NAMES,
                   help="compare the method's output ultrametrics instead of the inputs")
    g.add_argument("--alpha", default=None)
    g.add_argument("--budget", type=int, default=2_000_000, help="search node budget")
    g.set_defaults(func=cmd_gh)

    pl = sub.add_parser("proplab", help="run a property suite and emit JSON reports")
    pl.add_argument("suite", nargs="?", default="table", choices=SUITES)
    pl.add_argument("--trials", type=int, default=200)
    pl.add_argument("--a2-trials", type=int, default=500)
    pl.add_argument("--max-n", type=int, default=10)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--alpha", default=None, help="alpha for the unchaining columns (default 2)")
    pl.add_argument("--budget", type=int, default=10_000, help="instances for the refinement search")
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_proplab)

    d = sub.add_parser("demo", help="recompute the reference examples against their expected values")
    d.add_argument("--eps", default="0.1")
    d.set_defaults(func=cmd_demo)

    gen = sub.add_parser("generate", help="write a named instance")
    gen.add_argument("name", choices=INSTANCES)
    gen.add_argument("--eps", default="0.1")
    gen.add_argument("--variant", default="perturbed", choices=("perturbed", "base"))
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.add_argument("--out-format", default="matrix-csv", choices=("matrix-csv", "matrix-json", "edges-csv"))
    gen.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"unchain: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"unchain: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"unchain: {exc}", file=sys.stderr)
        return EXIT_INVALID
