"""Command-line surface: sampling, stats, bound checks, sweeps, regime
classification and set-family checks.

Exit codes: 0 success, 1 I/O or input-format failure, 2 usage, 3 refusal
(hypothesis violation or enumeration cap).  Machine outputs start with a
config echo carrying the resolved seed, so every run is reproducible from
its own output.  The worker count is an execution detail and deliberately
not part of the echo: equal configs must produce byte-identical tables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds, mss, setfamily, verify
from .bounds import HypothesisViolation, RegimeParams
from .graphs import (GraphParseError, Seed, ZeroSideError, as_prob, parse_graph,
                     sample_bipartite, serialize_graph)
from .mss import CapExceeded
from .setfamily import FamilyParseError

SEED_ENV = "FRANKLBIP_SEED"


def _resolve_seed(args) -> Seed:
    if args.seed is not None:
        return Seed(args.seed)
    env = os.environ.get(SEED_ENV)
    return Seed(int(env)) if env else Seed(0)


def _echo(subcommand: str, seed: Seed = None, **fields) -> dict:
    cfg = {"subcommand": subcommand}
    if seed is not None:
        cfg["seed"] = seed.root
    for key in sorted(fields):
        if fields[key] is not None:
            cfg[key] = fields[key]
    return cfg


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    g = sample_bipartite(args.m, args.n, args.p, seed)
    cfg = _echo("sample", seed, m=args.m, n=args.n, p=args.p, output=args.output)
    text = serialize_graph(g)
    if args.output:
        _emit(text, args.output)
        print("config: " + json.dumps(cfg, sort_keys=True))
        print(f"wrote {args.output}")
    else:
        # keep stdout parseable as a graph; the echo goes to stderr
        print("config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    with open(args.graph) as fh:
        g = parse_graph(fh.read())
    stats = mss.mss_stats(g, cap=1 << args.cap)
    verdict = mss.conjecture_check(g, args.delta, cap=1 << args.cap)
    avg = stats.left_average()
    cfg = _echo("stats", _resolve_seed(args), graph=args.graph, delta=args.delta,
                cap=args.cap, format=args.format)
    if args.format == "json":
        payload = {
            "config": cfg,
            "graph": g.to_json_dict(),
            "edges": g.edge_count(),
            "stats": stats.to_json_dict(),
            "left_avg": f"{avg.numerator}/{avg.denominator}",
            "verdict": verdict.to_json_dict(),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    lines = ["config: " + json.dumps(cfg, sort_keys=True)]
    lines.append(f"m: {g.m}  n: {g.n}  edges: {g.edge_count()}")
    lines.append(f"total: {stats.total}")
    lines.append("left_hist: " + ",".join(str(c) for c in stats.left_hist))
    lines.append(f"left_avg: {avg}")
    state = "vacuous" if verdict.vacuous else (
        "satisfied" if verdict.satisfied else "VIOLATED")
    lines.append(f"conjecture(delta={args.delta}): {state}")
    for side, wit in (("left", verdict.left_witness), ("right", verdict.right_witness)):
        if wit is not None:
            lines.append(f"  {side} witness: vertex {wit[0]}, fraction {wit[1]}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    params = {
        "m": args.m, "n": args.n, "p": args.p, "delta": args.delta,
        "alpha": args.alpha, "ell": args.ell, "r": args.r,
        "ell_star": args.ell_star, "r_star": args.r_star,
        "k": args.k, "phi": args.phi,
    }
    report = verify.verify_lemma(args.lemma, params, args.trials, seed,
                                 strict=not args.informational)
    cfg = _echo("verify", seed, lemma=args.lemma, trials=args.trials,
                format=args.format,
                **{k: v for k, v in params.items() if v is not None})
    if args.format == "json":
        _emit(verify.reports_to_json([report], cfg), args.output)
    else:
        _emit(verify.reports_to_csv([report], cfg), args.output)
    return 0


def _read_grid(path):
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    if not lines:
        raise GraphParseError(f"grid file {path} is empty")
    header = [cell.strip().lower() for cell in lines[0].split(",")]
    if header != ["m", "n", "p", "delta"]:
        raise GraphParseError(
            f"grid header must be 'm,n,p,delta', got {lines[0]!r}")
    grid = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [cell.strip() for cell in line.split(",")]
        if len(cells) != 4:
            raise GraphParseError(f"grid line {lineno}: expected 4 cells, got {len(cells)}")
        try:
            grid.append((int(cells[0]), int(cells[1]), float(cells[2]), float(cells[3])))
        except ValueError:
            raise GraphParseError(f"grid line {lineno}: malformed numbers in {line!r}") from None
    return grid


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    grid = _read_grid(args.grid)
    reports = verify.sweep(grid, args.trials, seed, workers=args.workers,
                           alpha=args.alpha, cap=args.cap)
    cfg = _echo("sweep", seed, grid=args.grid, trials=args.trials,
                alpha=args.alpha, cap=args.cap, format=args.format)
    if args.format == "json":
        _emit(verify.reports_to_json(reports, cfg), args.output)
    else:
        _emit(verify.reports_to_csv(reports, cfg, with_regime=True), args.output)
    return 0


def cmd_regime(args) -> int:
    tag = verify.classify_regime(args.m, args.n, args.p, alpha=args.alpha,
                                 delta=args.delta)
    prob = as_prob(args.p)
    rp = RegimeParams.from_mnp(args.m, args.n, prob)
    consts = bounds.regime_constants(prob)
    cfg = _echo("regime", _resolve_seed(args), m=args.m, n=args.n, p=args.p,
                alpha=args.alpha, delta=args.delta)
    if args.format == "json":
        payload = {
            "config": cfg,
            "regime": tag.value,
            "log_n": rp.log_n,
            "log_m": rp.log_m,
            "a": rp.a,
            "b": rp.b,
            "a_prime": rp.a_prime,
            "lambda": rp.lam,
            "thresholds": {
                "m^(1/5)": float(args.m) ** 0.2,
                "m/16": args.m / 16.0,
                "alpha*m": (args.alpha if args.alpha is not None else verify.DEFAULT_ALPHA) * args.m,
                "m/2": args.m / 2.0,
                "m^3": float(args.m) ** 3,
            },
            "c_right": consts.c_right,
            "r_star": consts.r_star,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    alpha = args.alpha if args.alpha is not None else verify.DEFAULT_ALPHA
    lines = ["config: " + json.dumps(cfg, sort_keys=True)]
    lines.append(f"regime: {tag.value}")
    lines.append(f"log_1/q(n): {rp.log_n!r}  log_1/q(m): {rp.log_m!r}")
    aprime = rp.a_prime if rp.a_prime is not None else "-"
    lines.append(f"a: {rp.a}  b: {rp.b}  a_prime: {aprime}  lambda: {rp.lam!r}")
    lines.append(
        "thresholds vs log_1/q(n): "
        f"m^(1/5)={float(args.m) ** 0.2!r}  m/16={args.m / 16.0!r}  "
        f"alpha*m={alpha * args.m!r}  m/2={args.m / 2.0!r}  m^3={float(args.m) ** 3!r}"
    )
    lines.append(f"c_right: {consts.c_right}  r_star: {consts.r_star}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_frankl(args) -> int:
    with open(args.family) as fh:
        family = setfamily.parse_family(fh.read())
    closed = setfamily.union_closure(family) if args.closure else family
    best, freq, satisfied = setfamily.frankl_check(closed)
    cfg = _echo("frankl", _resolve_seed(args), family=args.family,
                closure=args.closure, format=args.format)
    if args.format == "json":
        payload = {
            "config": cfg,
            "members": len(closed),
            "ground_size": closed.ground_size,
            "best_element": best,
            "frequency": f"{freq.numerator}/{freq.denominator}",
            "satisfied": satisfied,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    lines = ["config: " + json.dumps(cfg, sort_keys=True)]
    lines.append(f"members: {len(closed)}  ground: {closed.ground_size}")
    lines.append(f"best element: {best}")
    lines.append(f"frequency: {freq}")
    lines.append(f"satisfied: {str(satisfied).lower()}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="franklbip",
        description="Maximal-stable-set statistics and bound checks on random bipartite graphs",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ps = sub.add_parser("sample", help="write one sampled graph in text form")
    ps.add_argument("-m", type=int, required=True)
    ps.add_argument("-n", type=int, required=True)
    ps.add_argument("-p", type=float, required=True)
    ps.add_argument("--seed", type=int)
    ps.add_argument("-o", "--output")
    ps.set_defaults(func=cmd_sample)

    pt = sub.add_parser("stats", help="exact stats and conjecture verdict for a graph file")
    pt.add_argument("graph")
    pt.add_argument("--delta", type=float, default=0.0)
    pt.add_argument("--cap", type=int, default=30, help="candidate cap as a power of two")
    pt.add_argument("--seed", type=int, help="echoed for reproducibility; stats are deterministic")
    pt.add_argument("--format", choices=("table", "json"), default="table")
    pt.add_argument("-o", "--output")
    pt.set_defaults(func=cmd_stats)

    pv = sub.add_parser("verify", help="Monte Carlo check of one named bound")
    pv.add_argument("lemma")
    pv.add_argument("-m", type=int)
    pv.add_argument("-n", type=int)
    pv.add_argument("-p", type=float)
    pv.add_argument("--delta", type=float, default=0.0)
    pv.add_argument("--alpha", type=float, default=verify.DEFAULT_ALPHA)
    pv.add_argument("--l", dest="ell", type=int)
    pv.add_argument("--r", dest="r", type=int)
    pv.add_argument("--l-star", dest="ell_star", type=int)
    pv.add_argument("--r-star", dest="r_star", type=int)
    pv.add_argument("--k", type=int)
    pv.add_argument("--phi", type=float)
    pv.add_argument("--trials", type=int, required=True)
    pv.add_argument("--seed", type=int)
    pv.add_argument("--informational", action="store_true",
                    help="run outside the hypothesis and flag the report")
    pv.add_argument("--format", choices=("csv", "json"), default="csv")
    pv.add_argument("-o", "--output")
    pv.set_defaults(func=cmd_verify)

    pw = sub.add_parser("sweep", help="averaging campaign over a CSV grid of m,n,p,delta")
    pw.add_argument("grid")
    pw.add_argument("--trials", type=int, required=True)
    pw.add_argument("--seed", type=int)
    pw.add_argument("--workers", type=int, default=1)
    pw.add_argument("--alpha", type=float, default=verify.DEFAULT_ALPHA)
    pw.add_argument("--cap", type=int, default=verify.CAMPAIGN_SIDE_CAP)
    pw.add_argument("--format", choices=("csv", "json"), default="csv")
    pw.add_argument("-o", "--output")
    pw.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("regime", help="classify (m, n, p) and print derived quantities")
    pr.add_argument("-m", type=int, required=True)
    pr.add_argument("-n", type=int, required=True)
    pr.add_argument("-p", type=float, required=True)
    pr.add_argument("--alpha", type=float, default=verify.DEFAULT_ALPHA)
    pr.add_argument("--delta", type=float)
    pr.add_argument("--seed", type=int, help="echoed only; classification is deterministic")
    pr.add_argument("--format", choices=("table", "json"), default="table")
    pr.add_argument("-o", "--output")
    pr.set_defaults(func=cmd_regime)

    pf = sub.add_parser("frankl", help="frequency check on a union-closed family file")
    pf.add_argument("family")
    pf.add_argument("--closure", action="store_true",
                    help="close the family under unions first")
    pf.add_argument("--seed", type=int, help="echoed only; the check is deterministic")
    pf.add_argument("--format", choices=("table", "json"), default="table")
    pf.add_argument("-o", "--output")
    pf.set_defaults(func=cmd_frankl)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (HypothesisViolation, CapExceeded) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except (GraphParseError, FamilyParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ZeroSideError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
