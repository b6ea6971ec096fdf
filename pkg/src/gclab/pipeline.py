"""Three-step graph collision decision procedure with query accounting.

1. Compute α*(G) classically and set ``s = max(α*, n)`` (no queries).
2. Estimate ``t = deg(S)``, the number of ordered pairs ``(i, j)`` with ``ij``
   an edge and ``x_i = 1``, by boosted counting over the ``n^2`` pairs with
   precision ``P = max(4, ceil(7 pi sqrt n))``. Answer yes if the estimate
   exceeds ``3s/2``.
3. Otherwise evaluate the span program with ``k = 2s``.

Step 3 is not compiled to a circuit. Its answer is the exact span-program
verdict, optionally flipped with probability ``epsilon_main`` to stand in for
the bounded-error quantum run, and its cost is reported in witness-size units
``sqrt(2(n + k))``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from .counting import count_boosted, repetitions
from .graph import (
    Graph,
    GraphCollisionInstance,
    alpha_star,
    has_collision,
    sample_gnp,
)
from .parallel import map_trials
from .rng import derive_seed, make_rng
from .span_program import build_gc_span_program, evaluate


@dataclass(frozen=True)
class PipelineConfig:
    epsilon_count: float = 1 / 6
    epsilon_main: float = 1 / 6
    # P = max(4, ceil(precision_factor * pi * sqrt(n)))
    precision_factor: float = 7.0
    k_factor: int = 2
    threshold_factor: float = 1.5
    mode: str = "exact"  # "exact" or "noisy"
    vote: str = "median"
    alpha_budget: int | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "noisy"):
            raise ValueError(f"mode must be 'exact' or 'noisy', got {self.mode!r}")

    def precision(self, n: int) -> int:
        return max(4, math.ceil(self.precision_factor * math.pi * math.sqrt(n)))


@dataclass(frozen=True)
class PipelineReport:
    n: int
    s: int
    alpha_star: int
    t_true: int
    t_estimate: float
    P: int
    k: int
    decided_at: str  # "preprocessing" or "main"
    answer: bool
    charged_queries_counting: int
    charged_main_units: float
    total_charge: float
    span_answer: bool | None = None
    flipped: bool = False

    def to_json_dict(self) -> dict:
        return asdict(self)


def true_pair_count(inst: GraphCollisionInstance) -> int:
    return inst.deg_marked


def correctness_case(inst: GraphCollisionInstance, s: int) -> str:
    if not has_collision(inst):
        return "c"
    return "a" if inst.deg_marked <= 2 * s else "b"


@lru_cache(maxsize=256)
def _span_program(g: Graph, k: int):
    return build_gc_span_program(g, k)


@lru_cache(maxsize=256)
def _alpha(g: Graph, budget: int | None) -> int:
    return alpha_star(g) if budget is None else alpha_star(g, budget=budget)


def run_pipeline(inst: GraphCollisionInstance, cfg: PipelineConfig = PipelineConfig(), seed: int = 0) -> PipelineReport:
    g = inst.graph
    n = g.n
    a = _alpha(g, cfg.alpha_budget)
    s = max(a, n)
    P = cfg.precision(n)
    k = cfg.k_factor * s
    t = true_pair_count(inst)
    tr = count_boosted(n * n, P, t, cfg.epsilon_count, derive_seed(seed, 0), vote=cfg.vote)
    common = dict(n=n, s=s, alpha_star=a, t_true=t, t_estimate=tr.estimate, P=P, k=k)
    if tr.estimate > cfg.threshold_factor * s:
        return PipelineReport(
            **common,
            decided_at="preprocessing",
            answer=True,
            charged_queries_counting=tr.charged_queries,
            charged_main_units=0.0,
            total_charge=float(tr.charged_queries),
        )
    verdict = evaluate(_span_program(g, k), inst.x)
    flipped = cfg.mode == "noisy" and bool(make_rng(seed, 1).random() < cfg.epsilon_main)
    units = math.sqrt(2 * (n + k))
    return PipelineReport(
        **common,
        decided_at="main",
        answer=verdict != flipped,
        charged_queries_counting=tr.charged_queries,
        charged_main_units=units,
        total_charge=tr.charged_queries + units,
        span_answer=verdict,
        flipped=flipped,
    )


def main_case_charge(n: int, alpha: int, cfg: PipelineConfig = PipelineConfig(), main_ran: bool = True) -> float:
    """Total charge of a run on any graph with these ``n`` and ``α*``."""
    s = max(alpha, n)
    total = repetitions(cfg.epsilon_count) * cfg.precision(n)
    if main_ran:
        total += math.sqrt(2 * (n + cfg.k_factor * s))
    return float(total)


# ---------------------------------------------------------------------------
# Threshold soundness / completeness
# ---------------------------------------------------------------------------


def threshold_margin(n: int, s: int, t: int, case: str, cfg: PipelineConfig = PipelineConfig()):
    """Worst estimate allowed by the boosted bound, measured against ``3s/2``.

    Case ``"c"`` returns ``3s/2 - (t + bound)`` and case ``"b"`` returns
    ``(t - bound) - 3s/2``; a positive value proves the threshold decides
    correctly whenever the estimate is within the bound. Evaluated in
    ``mpmath`` interval arithmetic, so the sign of the lower end is rigorous.
    """
    from mpmath import iv

    iv.dps = 40
    P = cfg.precision(n)
    N = n * n
    pi = iv.pi
    bound = 2 * iv.sqrt(2) * pi / P * iv.sqrt(iv.mpf(t) * N) + 2 * pi**2 / P**2 * N
    limit = iv.mpf(cfg.threshold_factor) * s
    if case == "c":
        return limit - (t + bound)
    if case == "b":
        return (t - bound) - limit
    raise ValueError(f"case must be 'b' or 'c', got {case!r}")


# ---------------------------------------------------------------------------
# Monte Carlo error budget
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    case: str
    n: int
    p: float
    seed: int
    answer: bool
    correct: bool
    decided_at: str
    charged_queries_counting: int
    charged_main_units: float
    total_charge: float
    alpha_star: int
    rejected: int


@dataclass(frozen=True)
class ErrorBudget:
    case: str
    trials: int
    errors: int
    rate: float
    ci_low: float
    ci_high: float
    preprocessing_yes: int
    rejected: int
    records: tuple[TrialRecord, ...] = ()

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("records")
        return d


MAX_REJECTIONS = 10_000


def _planted(n: int, p: float, rng: np.random.Generator) -> GraphCollisionInstance:
    """Random graph with a random marked set containing at least one edge."""
    g = sample_gnp(n, p, int(rng.integers(1 << 63)))
    if not g.edges:
        return GraphCollisionInstance(g, (0,) * n)
    u, v = g.sorted_edges()[int(rng.integers(g.m))]
    x = (rng.random(n) < 0.25).astype(int)
    x[u - 1] = x[v - 1] = 1
    return GraphCollisionInstance(g, tuple(int(b) for b in x))


def _independent(n: int, p: float, rng: np.random.Generator) -> GraphCollisionInstance:
    """Random graph with the marked set grown greedily in a random order."""
    g = sample_gnp(n, p, int(rng.integers(1 << 63)))
    chosen: list[int] = []
    for v in rng.permutation(n) + 1:
        if rng.random() < 0.7 and all(not g.has_edge(int(v), c) for c in chosen):
            chosen.append(int(v))
    return GraphCollisionInstance.from_marked(g, chosen)


def _all_marked_complete(n: int, p: float, rng: np.random.Generator) -> GraphCollisionInstance:
    return GraphCollisionInstance(Graph.complete(n), (1,) * n)


GENERATORS: dict[str, Callable] = {"a": _planted, "b": _all_marked_complete, "c": _independent}


def _trial(args) -> TrialRecord:
    case, n, p, seed, index, cfg = args
    rng = make_rng(seed, index, 0)
    gen = GENERATORS[case]
    for rejected in range(MAX_REJECTIONS):
        inst = gen(n, p, rng)
        s = max(_alpha(inst.graph, cfg.alpha_budget), n)
        if correctness_case(inst, s) == case:
            break
    else:
        raise RuntimeError(f"generator for case {case} produced no valid instance in {MAX_REJECTIONS} tries")
    trial_seed = derive_seed(seed, index, 1)
    rep = run_pipeline(inst, cfg, trial_seed)
    if case == "b":
        # step 3 is not scored when the promise is violated
        correct = rep.decided_at == "preprocessing"
    else:
        correct = rep.answer == has_collision(inst)
    return TrialRecord(
        case,
        n,
        p,
        trial_seed,
        rep.answer,
        correct,
        rep.decided_at,
        rep.charged_queries_counting,
        rep.charged_main_units,
        rep.total_charge,
        rep.alpha_star,
        rejected,
    )


def error_budget_trial(
    case: str,
    n: int,
    p: float,
    trials: int,
    seed: int,
    cfg: PipelineConfig = PipelineConfig(mode="noisy"),
    workers: int | None = None,
    keep_records: bool = False,
) -> ErrorBudget:
    """Empirical error rate of the pipeline on instances from one correctness case.

    Case ``a``: random ``G(n, p)`` with a planted marked edge and ``deg(S) <= 2s``.
    Case ``b``: ``K_n`` with every vertex marked; an error is a run that is
    not settled by preprocessing. Case ``c``: random ``G(n, p)`` with an
    independent marked set. Off-case draws are redrawn and counted.
    """
    if case not in GENERATORS:
        raise ValueError(f"case must be one of a, b, c; got {case!r}")
    recs = map_trials(_trial, [(case, n, p, seed, i, cfg) for i in range(trials)], workers)
    errors = sum(not r.correct for r in recs)
    ci = binomtest(errors, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return ErrorBudget(
        case,
        trials,
        errors,
        errors / trials,
        float(ci.low),
        float(ci.high),
        sum(r.decided_at == "preprocessing" for r in recs),
        sum(r.rejected for r in recs),
        tuple(recs) if keep_records else (),
    )

