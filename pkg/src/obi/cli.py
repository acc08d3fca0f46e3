"""Command-line entry point: ``obi <subcommand> ...``.

Exit codes: 0 success (solve: optimal), 1 invalid input or failed checks,
2 search budget exhausted, 3 a rewrite hit a collision, gap or uncovered case.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .bounds import bound_report
from .broadcast import Broadcast, RegionVariant, check_independent
from .circulant import (
    CirculantSpec,
    RegimeError,
    build_graph,
    check_two_step,
    classify_regime,
    closed_form_distance,
    in_distance_regime,
    validate_spec,
)
from .constructions import FAMILIES, construct
from .solver import DEFAULT_NODE_LIMIT, DEFAULT_TIME_LIMIT, beta_b, default_workers
from .transforms import (
    LemmaGapError,
    RewriteCollision,
    TransformError,
    UncoveredCaseError,
    bound_to_a_minus_1,
    bound_to_q,
    equalize_pair,
)
from .verify import verify

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_GAP = 0, 1, 2, 3

CSV_FIELDS = ["n", "a", "regime", "beta", "optimal", "predicted", "lower", "upper", "nodes", "ms"]


class UsageError(ValueError):
    pass


def _spec(args) -> CirculantSpec:
    steps = tuple(args.steps) if getattr(args, "steps", None) else (1, args.a)
    if args.a is None and not getattr(args, "steps", None):
        raise UsageError("give --a or --steps")
    spec = CirculantSpec(args.n, steps)
    validate_spec(spec)
    if not getattr(args, "steps", None):
        check_two_step(args.n, args.a)
    return spec


def _emit(obj):
    print(json.dumps(obj))


# ---- solve ---------------------------------------------------------------

def cmd_solve(args) -> int:
    spec = _spec(args)
    result, report = beta_b(
        spec,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        workers=args.workers,
        cap=args.cap,
    )
    out = {"spec": str(spec), **result.to_dict()}
    if report is not None:
        out["regime"] = report.regime
        out["predicted"] = report.exact.to_dict() if report.exact else None
        out["bounds"] = report.to_dict()
    _emit(out)
    return EXIT_OK if result.optimal else EXIT_BUDGET


# ---- sweep ---------------------------------------------------------------

@dataclass
class SweepConfig:
    pairs: list[tuple[int, int]]
    node_limit: int = DEFAULT_NODE_LIMIT
    time_limit: float = DEFAULT_TIME_LIMIT
    output: str | None = None
    fmt: str = "json"
    workers: int = 1

    def __post_init__(self):
        if not self.pairs:
            raise UsageError("sweep range is empty")
        if self.node_limit <= 0 or self.time_limit < 0:
            raise UsageError("budgets must be positive")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _range(text: str) -> list[int]:
    """'8..20', '4,5,9' or '7'."""
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    return out


def _family_pairs(args) -> list[tuple[int, int]]:
    qs, ks = _range(args.q or "3"), _range(args.k or "1")
    pairs = []
    for q in qs:
        for k in ks:
            if args.family in ("qa", "qa+a-1"):
                # a = kq + 1 (the a(q-1) branch)
                a = k * q + 1
                n = q * a if args.family == "qa" else q * a + a - 1
            elif args.family == "k(a-1)":
                a = q
                n = k * (a - 1)
            else:
                raise UsageError(f"sweep --family supports qa, qa+a-1, k(a-1); got {args.family!r}")
            pairs.append((n, a))
    return pairs


def sweep_row(n: int, a: int, node_limit: int, time_limit: float) -> dict:
    start = time.perf_counter()
    result, report = beta_b(CirculantSpec(n, (1, a)), node_limit=node_limit, time_limit=time_limit, workers=1)
    return {
        "n": n,
        "a": a,
        "regime": report.regime,
        "beta": result.beta,
        "optimal": result.optimal,
        "predicted": report.exact.value if report.exact else None,
        "lower": report.best_lower,
        "upper": report.best_upper,
        "nodes": result.nodes_explored,
        "ms": round((time.perf_counter() - start) * 1000, 3),
    }


def _row_job(job):
    return sweep_row(*job)


def run_sweep(cfg: SweepConfig) -> list[dict]:
    jobs = [(n, a, cfg.node_limit, cfg.time_limit) for n, a in cfg.pairs]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_row_job, jobs))
    return [_row_job(j) for j in jobs]


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in rows)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({**r, "predicted": "" if r["predicted"] is None else r["predicted"]})
    return buf.getvalue()


def parse_csv_rows(text: str) -> list[dict]:
    """Inverse of ``format_rows(rows, "csv")``."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append({
            "n": int(rec["n"]),
            "a": int(rec["a"]),
            "regime": rec["regime"],
            "beta": int(rec["beta"]),
            "optimal": rec["optimal"] == "True",
            "predicted": int(rec["predicted"]) if rec["predicted"] else None,
            "lower": int(rec["lower"]),
            "upper": int(rec["upper"]),
            "nodes": int(rec["nodes"]),
            "ms": float(rec["ms"]),
        })
    return rows


def cmd_sweep(args) -> int:
    if args.family:
        pairs = _family_pairs(args)
    else:
        if not args.n_range:
            raise UsageError("give --n (range) or --family")
        a_values = _range(args.a) if args.a else None
        pairs = []
        for n in _range(args.n_range):
            for a in a_values or range(2, n - 1):
                if 2 <= a <= n - 2:
                    pairs.append((n, a))
    for n, a in pairs:
        check_two_step(n, a)
    cfg = SweepConfig(pairs, args.node_limit, args.time_limit, args.output, args.format, args.workers or 1)
    text = format_rows(run_sweep(cfg), cfg.fmt)
    if cfg.output:
        try:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {cfg.output}: {exc}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---- verify --------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.max_n < 8 or args.max_n < args.min_n:
        print(json.dumps({"error": "nothing to verify", "min_n": args.min_n, "max_n": args.max_n}))
        return EXIT_INVALID
    rep = verify(
        args.max_n,
        min_n=args.min_n,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        transform_samples=args.samples,
        seed=args.seed,
    )
    _emit(rep.to_dict())
    return EXIT_OK if rep.ok() else EXIT_INVALID


# ---- construct -----------------------------------------------------------

def cmd_construct(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("a", args.a), ("k", args.k), ("s", args.s), ("q", args.q)) if v is not None}
    try:
        rec = construct(args.family, **params)
    except RegimeError as exc:
        raise UsageError(str(exc)) from None
    out = rec.to_dict()
    bad = rec.violations()
    out["valid"] = not bad
    out["violations"] = [str(v) for v in bad]
    _emit(out)
    return EXIT_OK if not bad and rec.cost == rec.predicted_cost else EXIT_INVALID


# ---- transform -----------------------------------------------------------

def cmd_transform(args) -> int:
    spec = _spec(args)
    graph = build_graph(spec)
    try:
        f = Broadcast.from_compact(args.broadcast, spec.n)
    except ValueError as exc:
        raise UsageError(f"bad --broadcast: {exc}") from None
    try:
        if args.equalize is not None:
            if args.ell is None:
                raise UsageError("--equalize needs --ell")
            g, trace = equalize_pair(graph, None, f, args.equalize, args.ell)
        elif args.variant == "A_MINUS_1":
            g, trace = bound_to_a_minus_1(graph, None, f)
        else:
            g, trace = bound_to_q(graph, None, f, RegionVariant(args.variant))
    except (RewriteCollision, LemmaGapError, UncoveredCaseError) as exc:
        out = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "trace", None) is not None:
            out["trace"] = exc.trace.to_dict()
        if isinstance(exc, LemmaGapError):
            out["output"] = exc.output.to_compact()
        _emit(out)
        return EXIT_GAP
    except TransformError as exc:
        raise UsageError(str(exc)) from None
    out = {"input": f.to_compact(), "output": g.to_compact(), "cost": g.cost}
    if args.explain:
        out["trace"] = trace.to_dict()
    _emit(out)
    return EXIT_OK


# ---- distance-check ------------------------------------------------------

def cmd_distance_check(args) -> int:
    if args.max_n is not None:
        pairs = [(n, a) for n in range(5, args.max_n + 1) for a in range(4, n) if in_distance_regime(n, a)]
    else:
        if args.n is None or args.a is None:
            raise UsageError("give --n and --a, or --max-n")
        check_two_step(args.n, args.a)
        if not in_distance_regime(args.n, args.a):
            raise UsageError(f"(n, a) = ({args.n}, {args.a}) is outside the closed-form distance range")
        pairs = [(args.n, args.a)]
    mismatches = []
    for n, a in pairs:
        table = build_graph(CirculantSpec(n, (1, a))).table
        for i in range(n):
            for j in range(n):
                if closed_form_distance(n, a, i, j) != table(i, j):
                    mismatches.append([n, a, i, j])
    _emit({"instances": len(pairs), "pairs_checked": sum(n * n for n, _ in pairs), "mismatches": mismatches[:50],
           "mismatch_count": len(mismatches)})
    return EXIT_OK if not mismatches else EXIT_INVALID


# ---- export-dot ----------------------------------------------------------

def to_dot(spec: CirculantSpec, f: Broadcast | None = None) -> str:
    graph = build_graph(spec)
    lines = [f'digraph "{spec}" {{']
    for v in range(spec.n):
        label = f"v{v}" if f is None or f[v] == 0 else f"v{v}\\n{f[v]}"
        style = ", style=filled, fillcolor=gray80" if f is not None and f[v] > 0 else ""
        lines.append(f'  {v} [label="{label}"{style}];')
    for u, v in graph.arcs():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    spec = _spec(args)
    f = None
    if args.broadcast is not None:
        try:
            f = Broadcast.from_compact(args.broadcast, spec.n)
        except ValueError as exc:
            raise UsageError(f"bad --broadcast: {exc}") from None
        bad = check_independent(build_graph(spec).table, f)
        if bad:
            print(f"warning: broadcast is not independent ({bad[0]})", file=sys.stderr)
    sys.stdout.write(to_dot(spec, f))
    return EXIT_OK


# ---- parser --------------------------------------------------------------

def _budget_flags(p):
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    p.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT, help="seconds per instance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="obi", description="Broadcast independence of oriented circulants C(n; 1, a).")
    parser.add_argument("--seed", type=int, default=0, help="seed for any sampling")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact beta_b of one instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--steps", type=int, nargs="+", help="arbitrary step set instead of (1, a)")
    p.add_argument("--cap", type=int, help="override the value cap")
    p.add_argument("--workers", type=int, default=None, help="default: OBI_THREADS or 1")
    _budget_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check every closed form up to --max-n")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--min-n", type=int, default=4)
    p.add_argument("--samples", type=int, default=5, help="random broadcasts per instance for the rewrites")
    _budget_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="table of beta_b over a parameter range")
    p.add_argument("--n", dest="n_range", help="range like 8..20")
    p.add_argument("--a", help="range like 4 or 4..6 (default: all legal a)")
    p.add_argument("--family", choices=["qa", "qa+a-1", "k(a-1)"])
    p.add_argument("--q", help="family parameter range (for k(a-1): the value of a)")
    p.add_argument("--k", help="family parameter range")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output")
    p.add_argument("--workers", type=int, default=None)
    _budget_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("construct", help="build and check a lower-bound broadcast")
    p.add_argument("family", choices=list(FAMILIES))
    for name in ("n", "a", "k", "s", "q"):
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("transform", help="rewrite a broadcast to a bounded one")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--broadcast", required=True, help="compact form, e.g. 0:7")
    p.add_argument("--variant", choices=[v.value for v in RegionVariant], default="A_MINUS_1")
    p.add_argument("--equalize", type=int, metavar="I", help="run the pair rewrite at v_I instead")
    p.add_argument("--ell", type=int)
    p.add_argument("--explain", action="store_true", help="include the rewrite trace")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("distance-check", help="closed-form distance vs BFS")
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--max-n", type=int)
    p.set_defaults(func=cmd_distance_check)

    p = sub.add_parser("export-dot", help="Graphviz DOT of C(n; 1, a)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--steps", type=int, nargs="+")
    p.add_argument("--broadcast", help="compact form; values become vertex labels")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 0) is None:
        args.workers = default_workers()
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"obi: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
