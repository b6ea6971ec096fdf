"""Tail bounds for binomial sums and for α*(G) on G(n, p), with Monte Carlo checks.

Logarithms are natural. The constants 40, 14 and 200 in the tail bound are
not claimed tight.

Regime note: the α* tail bound only applies for ``t >= 40 n ln n``, which
exceeds the largest possible degree sum ``n(n-1)`` unless ``n >= 240`` or
so. Desk-scale studies therefore use ``n`` in the low hundreds with dense
``p``, where independent sets are small and exact α* is cheap.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .graph import BudgetExhausted, DEFAULT_NODE_BUDGET, alpha_star, sample_gnp
from .parallel import map_trials
from .rng import derive_seed, make_rng

REGIME_NOTE = (
    "alpha* tail bound applies only for t >= 40 n ln n; below n ~ 240 this exceeds n(n-1), "
    "so desk-scale studies use n in [256, 512] with dense p"
)
LOG10_E = math.log10(math.e)


class BoundRangeError(ValueError):
    """Parameters lie outside the range where the bound is stated."""


@dataclass(frozen=True)
class ChernoffParams:
    n: int
    mu: float
    lam: float

    def __post_init__(self):
        if not self.lam > 1:
            raise ValueError(f"lambda must exceed 1, got {self.lam}")
        if not 0 <= self.mu <= 1:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if self.n < 1:
            raise ValueError(f"need at least one variable, got n={self.n}")


def chernoff_bound(par: ChernoffParams) -> tuple[float, float]:
    """``(exp(-n(λ-1)²μ/(λ+1)), exp((3-λ)nμ))`` bounding ``Pr[ΣX_i >= λnμ]``."""
    n, mu, lam = par.n, par.mu, par.lam
    tight = math.exp(-n * (lam - 1) ** 2 * mu / (lam + 1))
    try:
        weak = math.exp((3 - lam) * n * mu)
    except OverflowError:
        weak = math.inf
    return tight, weak


def chernoff_empirical(par: ChernoffParams, trials: int, seed: int) -> tuple[float, float, float]:
    """Empirical ``Pr[Bin(n, μ) >= λnμ]`` with the tight bound and its 1σ.

    ``σ`` is the binomial standard error at probability equal to the bound.
    """
    if par.mu == 0:
        raise ValueError("mu = 0 makes the threshold 0 and the event certain; degenerate input")
    sums = make_rng(seed).binomial(par.n, par.mu, size=trials)
    # small slack so that an exactly representable threshold is not lost to rounding
    freq = float(np.mean(sums >= par.lam * par.n * par.mu - 1e-9))
    tight, _ = chernoff_bound(par)
    q = min(tight, 1.0)
    return freq, tight, math.sqrt(q * (1 - q) / trials)


def chernoff_empirical_check(par: ChernoffParams, trials: int, seed: int, sigmas: float = 5.0) -> bool:
    freq, tight, sigma = chernoff_empirical(par, trials, seed)
    return freq <= tight + sigmas * sigma


def tail_threshold(n: int) -> float:
    return 40 * n * math.log(n)


@dataclass(frozen=True)
class TailBound:
    log10: float
    value: float  # 0.0 when it underflows
    in_range: bool


def alpha_star_tail_bound(n: int, p: float, t: float, force: bool = False) -> TailBound:
    """``n^{-14n} + 2 exp(-t²/(200 n² p))`` evaluated in log space."""
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    in_range = t >= tail_threshold(n)
    if not in_range and not force:
        raise BoundRangeError(f"t = {t} below 40 n ln n = {tail_threshold(n):.6g}; lemma inapplicable")
    ln_a = -14 * n * math.log(n)
    ln_b = math.log(2) - t * t / (200 * n * n * p)
    hi, lo = max(ln_a, ln_b), min(ln_a, ln_b)
    ln_total = hi + math.log1p(math.exp(lo - hi))
    return TailBound(ln_total * LOG10_E, math.exp(ln_total) if ln_total > -745 else 0.0, in_range)


@dataclass(frozen=True)
class StudyRecord:
    n: int
    p: float
    seed: int
    alpha_star: int
    t: float
    exceeded: bool


@dataclass
class StudyResult:
    fraction: float
    records: list[StudyRecord]
    complete: bool = True
    error: str | None = None


def _sample_alpha(args):
    n, p, seed, budget = args
    return alpha_star(sample_gnp(n, p, seed), budget=budget)


def alpha_star_tail_study(
    n: int, p: float, t: float, samples: int, seed: int, budget: int = DEFAULT_NODE_BUDGET, workers: int | None = None
) -> StudyResult:
    """Fraction of ``G(n, p)`` samples with ``α* >= t``.

    Sample ``i`` uses graph seed ``derive_seed(seed, i)``. A sample that
    exhausts the node budget stops the study; the records gathered so far
    are returned with ``complete=False``.
    """
    seeds = [derive_seed(seed, i) for i in range(samples)]
    records: list[StudyRecord] = []
    try:
        values = map_trials(_sample_alpha, [(n, p, s, budget) for s in seeds], workers)
    except BudgetExhausted as exc:
        # rerun serially to keep the samples that did finish
        for s in seeds:
            try:
                a = _sample_alpha((n, p, s, budget))
            except BudgetExhausted:
                break
            records.append(StudyRecord(n, p, s, a, t, a >= t))
        frac = sum(r.exceeded for r in records) / max(len(records), 1)
        return StudyResult(frac, records, complete=False, error=str(exc))
    records = [StudyRecord(n, p, s, a, t, a >= t) for s, a in zip(seeds, values)]
    return StudyResult(sum(r.exceeded for r in records) / samples, records)


def scaling_report(ns, p: float, samples: int, seed: int, budget: int = DEFAULT_NODE_BUDGET, workers: int | None = None) -> list[dict]:
    """Quantiles of ``α*/(n ln n)`` and of ``(√n + √α*)/√(n ln n)`` per ``n``."""
    qs = (0.0, 0.25, 0.5, 0.75, 1.0)
    rows = []
    for n in ns:
        res = alpha_star_tail_study(n, p, math.inf, samples, derive_seed(seed, n), budget, workers)
        a = np.array([r.alpha_star for r in res.records], dtype=float)
        nl = n * math.log(n)
        ratio = a / nl
        charge = (math.sqrt(n) + np.sqrt(a)) / math.sqrt(nl)
        row = {"n": n, "p": p, "samples": len(a)}
        for q in qs:
            row[f"ratio_q{int(q * 100)}"] = float(np.quantile(ratio, q))
        for q in qs:
            row[f"charge_q{int(q * 100)}"] = float(np.quantile(charge, q))
        rows.append(row)
    return rows


def study_summary(n: int, p: float, t: float, result: StudyResult, force: bool = False) -> dict:
    bound = alpha_star_tail_bound(n, p, t, force=force)
    a = np.array([r.alpha_star for r in result.records], dtype=float)
    nl = n * math.log(n)
    return {
        "n": n,
        "p": p,
        "t": t,
        "samples": len(result.records),
        "complete": result.complete,
        "fraction": result.fraction,
        "bound_log10": bound.log10,
        "bound_in_range": bound.in_range,
        "ratio_quantiles": {str(q): float(np.quantile(a / nl, q)) for q in (0.0, 0.5, 1.0)} if len(a) else {},
        "max_alpha_star": int(a.max()) if len(a) else None,
        "regime": REGIME_NOTE,
        **({"error": result.error} if result.error else {}),
    }


def record_dicts(records) -> list[dict]:
    return [asdict(r) for r in records]
