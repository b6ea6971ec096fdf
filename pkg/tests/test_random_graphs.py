import math

import numpy as np
import pytest
from scipy.stats import binom

from gclab.graph import Graph
from gclab.random_graphs import (
    ChernoffParams,
    BoundRangeError,
    alpha_star_tail_bound,
    alpha_star_tail_study,
    chernoff_bound,
    chernoff_empirical,
    chernoff_empirical_check,
    tail_threshold,
    record_dicts,
    scaling_report,
    study_summary,
)


def test_chernoff_examples():
    tight, weak = chernoff_bound(ChernoffParams(40, 0.2, 3))
    assert weak == 1.0 and tight == pytest.approx(math.exp(-8))
    assert chernoff_bound(ChernoffParams(10, 0.1, 5))[0] == pytest.approx(math.exp(-16 / 6))
    assert chernoff_bound(ChernoffParams(10, 0.1, 5))[0] == pytest.approx(0.0695, abs=1e-4)
    for lam in (1.01, 1.1, 2, 3, 10, 100):
        t, w = chernoff_bound(ChernoffParams(50, 0.3, lam))
        assert t <= w


def test_chernoff_rejects_bad_params():
    for args in [(10, 0.5, 1.0), (10, 1.5, 2), (0, 0.5, 2)]:
        with pytest.raises(ValueError):
            ChernoffParams(*args)
    with pytest.raises(ValueError):
        chernoff_empirical(ChernoffParams(10, 0.0, 2), 100, 0)


def test_exponent_inequality_log_grid():
    lam = np.logspace(np.log10(1 + 1e-9), 4, 2000)
    assert np.all((lam - 1) ** 2 / (lam + 1) >= lam - 3 - 1e-12)


@pytest.mark.parametrize("n, mu, lam", [(100, 0.5, 1.5), (30, 0.1, 2.0), (200, 0.05, 3.0), (20, 0.3, 1.2)])
def test_tight_bound_dominates_exact_tail(n, mu, lam):
    exact = binom.sf(math.ceil(lam * n * mu - 1e-9) - 1, n, mu)
    assert exact <= chernoff_bound(ChernoffParams(n, mu, lam))[0]


def test_empirical_examples():
    freq, tight, _ = chernoff_empirical(ChernoffParams(100, 0.5, 1.5), 20000, 1)
    assert tight == pytest.approx(math.exp(-5))
    assert freq <= tight
    assert chernoff_empirical(ChernoffParams(10, 0.5, 50), 1000, 1)[0] == 0
    assert chernoff_empirical_check(ChernoffParams(50, 0.2, 2), 20000, 3)


def test_tail_bound_examples():
    t = tail_threshold(10)
    assert t == pytest.approx(921.03, abs=0.01)
    b = alpha_star_tail_bound(10, 1.0, t)
    assert b.value == pytest.approx(2 * math.exp(-(t**2) / 20000), rel=1e-12)
    assert b.value == pytest.approx(7.6e-19, rel=0.01)
    big = alpha_star_tail_bound(256, 0.5, tail_threshold(256))
    closed = -16 * math.log(256) ** 2 / math.log(10) + math.log10(2)
    assert big.log10 == pytest.approx(closed, abs=1e-9)
    assert big.value == pytest.approx(10**closed, rel=1e-9) and big.in_range
    assert alpha_star_tail_bound(512, 0.05, tail_threshold(512)).value == 0.0


def test_tail_bound_range_and_force():
    with pytest.raises(BoundRangeError):
        alpha_star_tail_bound(10, 0.5, 100)
    b = alpha_star_tail_bound(10, 0.5, 100, force=True)
    assert not b.in_range
    with pytest.raises(ValueError):
        alpha_star_tail_bound(10, 0.0, 1000)


def test_tail_bound_monotone():
    n = 50
    ts = tail_threshold(n) * np.array([1, 1.1, 1.5, 2, 4])
    ps = [0.05, 0.1, 0.3, 0.6, 1.0]
    for p in ps:
        vals = [alpha_star_tail_bound(n, p, t).log10 for t in ts]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    for t in ts:
        vals = [alpha_star_tail_bound(n, p, t).log10 for p in ps]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_study_complete_graph():
    res = alpha_star_tail_study(12, 1.0, 12, 5, seed=0, workers=1)
    assert res.fraction == 0 and res.complete
    assert all(r.alpha_star == 11 and not r.exceeded for r in res.records)


def test_study_impossible_threshold():
    n = 40
    res = alpha_star_tail_study(n, 0.9, n * (n - 1) + 1, 4, seed=2, workers=1)
    assert res.fraction == 0
    assert all(r.exceeded == (r.alpha_star >= r.t) for r in res.records)


def test_study_budget_gives_partial_result():
    res = alpha_star_tail_study(120, 0.1, 10, 3, seed=1, budget=10, workers=1)
    assert not res.complete and res.error
    assert len(res.records) < 3


def test_study_csv_schema_and_summary():
    res = alpha_star_tail_study(20, 0.5, 5, 3, seed=4, workers=1)
    assert list(record_dicts(res.records)[0]) == ["n", "p", "seed", "alpha_star", "t", "exceeded"]
    s = study_summary(20, 0.5, 5, res, force=True)
    assert s["bound_in_range"] is False
    assert "regime" in s


def test_scaling_report():
    rows = scaling_report([20, 30], 0.7, 4, seed=5, workers=1)
    assert [r["n"] for r in rows] == [20, 30]
    for r in rows:
        assert r["ratio_q0"] <= r["ratio_q50"] <= r["ratio_q100"] < 40
    ratio = scaling_report([25], 1.0, 2, seed=0, workers=1)[0]["ratio_q50"]
    assert ratio == pytest.approx(24 / (25 * math.log(25)))
