"""Command-line entry point: ``gclab <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 resource budget (node budget or
explicit-size capacity), 3 internal assertion.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import counting, random_graphs
from .formats import read_graph
from .graph import (
    DEFAULT_NODE_BUDGET,
    BudgetExhausted,
    GraphCollisionInstance,
    GraphError,
    alpha_star,
    alpha_star_witness,
    has_collision,
)
from .rng import derive_seed
from .pipeline import PipelineConfig, correctness_case, error_budget_trial, run_pipeline
from .span_program import (
    MEMBERSHIP_TOL,
    CapacityError,
    PreconditionError,
    build_gc_span_program,
    evaluate,
    min_negative_witness,
    min_positive_witness,
    proof_negative_witness,
    proof_positive_witness,
)

EXHAUSTIVE_MAX_N = 12
EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _bits(text: str, n: int) -> tuple[int, ...]:
    text = text.replace(",", "").strip()
    if len(text) != n or set(text) - {"0", "1"}:
        raise GraphError(f"x must be {n} characters of 0/1, got {text!r}")
    return tuple(int(c) for c in text)


def cmd_alpha_star(args) -> int:
    g = read_graph(args.graph)
    if args.witness:
        value, wit = alpha_star_witness(g, method=args.method, budget=args.budget)
        _emit(f"{value}\n{' '.join(map(str, wit))}\n", args.out)
    else:
        _emit(f"{alpha_star(g, method=args.method, budget=args.budget)}\n", args.out)
    return 0


def _span_report(p, x, which: str, tol: float) -> dict:
    feasible = evaluate(p, x, tol)
    if which == "proof":
        rep = proof_positive_witness(p, x) if feasible else proof_negative_witness(p, x)
    else:
        rep = min_positive_witness(p, x) if feasible else min_negative_witness(p, x)
    return {"x": "".join(map(str, x)), **rep.to_json_dict()}


def cmd_spanprog(args) -> int:
    g = read_graph(args.graph)
    p = build_gc_span_program(g, args.k)
    if args.exhaustive:
        if g.n > EXHAUSTIVE_MAX_N:
            raise CapacityError(f"--exhaustive sweeps 2^n inputs; limit is n <= {EXHAUSTIVE_MAX_N}")
        reports = [_span_report(p, x, args.witness, args.tol) for x in itertools.product((0, 1), repeat=g.n)]
        _emit(_json(reports), args.out)
    else:
        if args.x is None:
            raise GraphError("give --x or --exhaustive")
        _emit(_json(_span_report(p, _bits(args.x, g.n), args.witness, args.tol)), args.out)
    return 0


def cmd_count(args) -> int:
    if args.grid:
        Ps = [int(v) for v in args.P_list.split(",")]
        rows = counting.mass_grid(range(args.N_min, args.N_max + 1), Ps)
        _emit(_csv(rows), args.out)
        return 0
    if args.N is None or args.P is None or args.t is None:
        raise GraphError("count needs --N, --P and --t (or --grid)")
    if args.boosted is not None:
        tr = counting.count_boosted(args.N, args.P, args.t, args.boosted, args.seed, vote=args.vote)
    else:
        tr = counting.count_once(counting.CountingSpec(args.N, args.P, args.t), args.seed)
    _emit(_json(tr.to_json_dict()), args.out)
    return 0


def _config(args) -> PipelineConfig:
    return PipelineConfig(mode=args.mode, alpha_budget=args.budget, vote=args.vote)


def cmd_pipeline(args) -> int:
    g = read_graph(args.graph)
    inst = GraphCollisionInstance(g, _bits(args.x, g.n))
    cfg = _config(args)
    if args.trials == 1 and args.format == "json":
        _emit(_json(run_pipeline(inst, cfg, args.seed).to_json_dict()), args.out)
        return 0
    truth = has_collision(inst)
    rows = []
    for i in range(args.trials):
        seed = derive_seed(args.seed, i)
        rep = run_pipeline(inst, cfg, seed)
        rows.append(
            {
                "case": correctness_case(inst, rep.s),
                "n": g.n,
                "p": "",
                "seed": seed,
                "answer": rep.answer,
                "correct": rep.answer == truth,
                "decided_at": rep.decided_at,
                "charged_queries_counting": rep.charged_queries_counting,
                "charged_main_units": rep.charged_main_units,
                "total_charge": rep.total_charge,
            }
        )
    if args.format == "json":
        _emit(_json(rows), args.out)
    else:
        _emit(_csv(rows), args.out)
    return 0


def cmd_budget(args) -> int:
    res = error_budget_trial(args.case, args.n, args.p, args.trials, args.seed, _config(args), keep_records=True)
    if args.format == "csv":
        rows = [
            {k: v for k, v in asdict(r).items() if k not in ("alpha_star", "rejected")}
            for r in res.records
        ]
        _emit(_csv(rows), args.out)
    else:
        _emit(_json(res.summary()), args.out)
    return 0


def cmd_study(args) -> int:
    t = args.t if args.t is not None else random_graphs.tail_threshold(args.n)
    # range check before any sampling
    random_graphs.alpha_star_tail_bound(args.n, args.p, t, force=args.force)
    res = random_graphs.alpha_star_tail_study(args.n, args.p, t, args.samples, args.seed, args.budget)
    summary = random_graphs.study_summary(args.n, args.p, t, res, force=args.force)
    rows = random_graphs.record_dicts(res.records)
    if args.csv:
        Path(args.csv).write_text(_csv(rows))
    _emit(_json(summary), args.out)
    if not res.complete:
        return EXIT_BUDGET
    return 0


def cmd_scaling(args) -> int:
    ns = [int(v) for v in args.ns.split(",")]
    rows = random_graphs.scaling_report(ns, args.p, args.samples, args.seed, args.budget)
    _emit(_csv(rows), args.out)
    return 0


def cmd_chernoff(args) -> int:
    par = random_graphs.ChernoffParams(args.n, args.mu, args.lam)
    tight, weak = random_graphs.chernoff_bound(par)
    out = {"n": par.n, "mu": par.mu, "lambda": par.lam, "tight": tight, "weak": weak}
    if args.trials:
        freq, _, sigma = random_graphs.chernoff_empirical(par, args.trials, args.seed)
        out.update(empirical=freq, sigma=sigma, within_5sigma=freq <= tight + 5 * sigma)
    _emit(_json(out), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gclab", description="Graph collision span-program toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("alpha-star", cmd_alpha_star, "maximum degree sum of an independent set")
    sp.add_argument("graph")
    sp.add_argument("--witness", action="store_true", help="also print the lexicographically least maximizer")
    sp.add_argument("--method", default="auto", choices=["auto", "exhaustive", "clique", "degree"])
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)

    sp = add("spanprog", cmd_spanprog, "evaluate the span program and report witness sizes")
    sp.add_argument("graph")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--x", help="input bits, e.g. 0110")
    sp.add_argument("--exhaustive", action="store_true", help=f"sweep all inputs (n <= {EXHAUSTIVE_MAX_N})")
    sp.add_argument("--witness", choices=["min", "proof"], default="min")
    sp.add_argument("--tol", type=float, default=MEMBERSHIP_TOL)

    sp = add("count", cmd_count, "simulate approximate counting or emit the within-bound mass grid")
    sp.add_argument("--N", type=int)
    sp.add_argument("--P", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--boosted", type=float, metavar="EPS", help="boosted counting with failure probability EPS")
    sp.add_argument("--vote", choices=["median", "plurality"], default="median")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid", action="store_true")
    sp.add_argument("--N-min", type=int, default=4)
    sp.add_argument("--N-max", type=int, default=256)
    sp.add_argument("--P-list", default="4,8,16,64")

    def pipeline_flags(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=1)
        sp.add_argument("--mode", choices=["exact", "noisy"], default="noisy")
        sp.add_argument("--vote", choices=["median", "plurality"], default="median")
        sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = add("pipeline", cmd_pipeline, "run the three-step decision procedure on one instance")
    sp.add_argument("graph")
    sp.add_argument("--x", required=True)
    pipeline_flags(sp)

    sp = add("budget", cmd_budget, "Monte Carlo error rate for one correctness case")
    sp.add_argument("--case", choices=["a", "b", "c"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.5)
    pipeline_flags(sp)

    sp = add("study", cmd_study, "alpha* tail study on G(n, p)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--t", type=float, help="threshold (default 40 n ln n)")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.add_argument("--force", action="store_true", help="evaluate the bound outside its stated range")
    sp.add_argument("--csv", help="write per-sample records here")

    sp = add("scaling", cmd_scaling, "alpha*/(n ln n) and charge-proxy quantiles per n")
    sp.add_argument("--ns", required=True, help="comma-separated vertex counts")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)

    sp = add("chernoff", cmd_chernoff, "evaluate both Chernoff bounds, optionally against sampling")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--lam", type=float, required=True)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (BudgetExhausted, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GraphError, PreconditionError, counting.CountingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
