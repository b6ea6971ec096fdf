import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gclab.graph import Graph, GraphCollisionInstance, deg_sum, has_collision, sample_gnp
from gclab.span_program import (
    CapacityError,
    PreconditionError,
    build_gc_span_program,
    evaluate,
    explicit_s_gram,
    min_negative_witness,
    min_positive_witness,
    proof_negative_witness,
    proof_positive_witness,
    to_explicit,
    witness_report,
)

from conftest import all_graphs

K2, K3, P3 = Graph.complete(2), Graph.complete(3), Graph.path(3)


def test_gamma():
    p = build_gc_span_program(Graph.empty(4), 12)
    assert p.gamma == pytest.approx(8**0.25, rel=1e-12)
    assert p.gamma == pytest.approx(1.68179, abs=1e-5)


def test_normalized_gram_n2():
    g = build_gc_span_program(K2, 2).gram[:4, :4]
    expected = np.array([[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 2, 0], [1, 1, 0, 2]], dtype=float)
    assert np.array_equal(g, expected)


@pytest.mark.parametrize("n", range(2, 8))
def test_explicit_gram_matches_closed_form(n):
    raw = explicit_s_gram(n)
    norm = build_gc_span_program(Graph.empty(n), 0).gram[: 2 * n, : 2 * n]
    assert np.array_equal(raw, (norm * 2 ** (n - 2)).astype(np.int64))


def test_explicit_examples():
    e2 = to_explicit(build_gc_span_program(K2, 2))
    s10 = e2.families[(1, 1)][0]
    assert s10.sum() == 2
    assert float(e2.target @ s10) == pytest.approx(2 * build_gc_span_program(K2, 2).gamma)
    assert explicit_s_gram(3)[0, 3] == 2  # <s_10|s_21>
    with pytest.raises(CapacityError):
        to_explicit(build_gc_span_program(Graph.empty(15), 0))


def test_bound_at_k0():
    assert build_gc_span_program(P3, 0).bound == pytest.approx(math.sqrt(6))


def test_families():
    p = build_gc_span_program(P3, 2)
    assert p.family(2) == [(2, 0), (1, 1), (3, 1)]
    assert p.family(1) == [(1, 0), (2, 1)]


def test_evaluate_examples():
    assert evaluate(build_gc_span_program(K2, 2), (1, 1))
    for k in (0, 3, 10):
        assert not evaluate(build_gc_span_program(P3, k), (1, 0, 1))
        assert not evaluate(build_gc_span_program(K3, k), (0, 0, 0))


def test_computes_graph_collision_exhaustively():
    for n in range(1, 6):
        for g in all_graphs(n):
            progs = [build_gc_span_program(g, k) for k in (0, n, 2 * n)]
            for x in itertools.product((0, 1), repeat=n):
                want = has_collision(GraphCollisionInstance(g, x))
                assert all(evaluate(p, x) == want for p in progs)


def test_gram_and_explicit_evaluation_agree():
    for n in range(1, 6):
        for g in all_graphs(n):
            p = build_gc_span_program(g, n)
            e = to_explicit(p)
            for x in itertools.product((0, 1), repeat=n):
                assert evaluate(p, x) == e.evaluate(x)


def test_k2_positive_witness_sizes():
    p = build_gc_span_program(K2, 2)
    rep = min_positive_witness(p, (1, 1))
    assert rep.min_wsize == pytest.approx(math.sqrt(2), rel=1e-9)
    proof = proof_positive_witness(p, (1, 1))
    assert proof.proof_wsize == pytest.approx(2 * math.sqrt(2), rel=1e-12)
    assert proof.residual <= 1e-9


def test_proof_positive_n4_k12():
    g = Graph.from_edges(4, [(1, 2), (3, 4)])
    rep = proof_positive_witness(build_gc_span_program(g, 12), (0, 0, 1, 1))
    assert rep.proof_wsize == pytest.approx(math.sqrt(32), rel=1e-12)


def test_proof_positive_k3_reconstructs_explicitly():
    p = build_gc_span_program(K3, 6)
    rep = proof_positive_witness(p, (1, 1, 1))
    # lexicographically first marked edge is {1,2}: V[2] gets s[2,0], V[1] gets s[2,1]
    assert [tag for tag, _ in rep.entries] == ["V[2]:s[2,0]", "V[1]:s[2,1]"]
    e = to_explicit(p)
    s20, s21 = e.families[(2, 1)][0], e.families[(1, 1)][1]
    assert np.allclose(p.gamma * (s20 + s21), e.target, rtol=0, atol=1e-12)


def test_positive_witness_preconditions():
    with pytest.raises(PreconditionError):
        min_positive_witness(build_gc_span_program(P3, 2), (1, 0, 1))
    with pytest.raises(PreconditionError):
        proof_positive_witness(build_gc_span_program(P3, 2), (1, 0, 1))


def test_k2_negative_witness():
    p = build_gc_span_program(K2, 2)
    proof = proof_negative_witness(p, (0, 0))
    assert proof.proof_wsize == pytest.approx(math.sqrt(2), rel=1e-12)
    rep = min_negative_witness(p, (0, 0))
    assert rep.min_wsize <= proof.proof_wsize + 1e-12
    with pytest.raises(PreconditionError):
        min_negative_witness(p, (1, 1))
    with pytest.raises(PreconditionError):
        proof_negative_witness(p, (1, 1))


def test_path_negative_proof_witness():
    rep = proof_negative_witness(build_gc_span_program(P3, 4), (1, 0, 1))
    assert rep.proof_wsize == pytest.approx(3 / math.sqrt(3.5), rel=1e-12)


@pytest.mark.parametrize("g", [K3, P3, Graph.star(3), Graph.empty(4)], ids=["K3", "P3", "star3", "empty4"])
def test_all_zero_negative_witness(g):
    k = 2 * g.n
    p = build_gc_span_program(g, k)
    rep = proof_negative_witness(p, (0,) * g.n)
    assert rep.proof_wsize == pytest.approx(g.n / p.gamma**2, rel=1e-12)
    assert rep.proof_wsize <= p.bound


def _random_instances(count, max_n, positive, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_n)
        g = sample_gnp(n, rng.uniform(0.2, 0.8), rng.randrange(1 << 30))
        x = tuple(rng.randint(0, 1) for _ in range(n))
        if has_collision(GraphCollisionInstance(g, x)) == positive:
            out.append((g, x))
    return out


def test_min_positive_at_most_proof_random():
    for g, x in _random_instances(200, 10, True, 1):
        p = build_gc_span_program(g, random.Random(len(x)).randint(0, 2 * g.n))
        rep = min_positive_witness(p, x)
        assert rep.min_wsize <= rep.proof_wsize + 1e-9
        assert rep.proof_wsize == pytest.approx(p.bound, rel=1e-12)
        assert proof_positive_witness(p, x).residual <= 1e-9


def test_negative_witnesses_random():
    for g, x in _random_instances(200, 10, False, 2):
        d = deg_sum(g, {i + 1 for i, b in enumerate(x) if b})
        k = d + random.Random(g.m).randint(0, 3)
        p = build_gc_span_program(g, k)
        proof = proof_negative_witness(p, x)
        assert proof.proof_wsize == pytest.approx((g.n - sum(x) + d) / p.gamma**2, rel=1e-12)
        assert proof.residual <= 1e-12
        rep = min_negative_witness(p, x)
        assert rep.min_wsize <= proof.proof_wsize + 1e-9
        assert rep.min_wsize <= p.bound + 1e-6
        assert rep.residual <= 1e-9


def test_witness_sizes_match_explicit_coordinates():
    for n in range(1, 6):
        for g in all_graphs(n):
            p = build_gc_span_program(g, n)
            e = to_explicit(p)
            for x in itertools.product((0, 1), repeat=n):
                rep = witness_report(p, x)
                ref = e.min_positive_witness(x) if rep.feasible else e.min_negative_witness(x)
                assert rep.min_wsize == pytest.approx(ref, rel=1e-9)


def test_report_json_uses_12_significant_digits():
    d = min_positive_witness(build_gc_span_program(K2, 2), (1, 1)).to_json_dict()
    assert d["min_wsize"] == "1.41421356237"
    assert d["feasible"] is True


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.floats(0.1, 0.9), st.integers(0, 2**31), st.data())
def test_witness_bounds_property(n, prob, seed, data):
    g = sample_gnp(n, prob, seed)
    x = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    inst = GraphCollisionInstance(g, x)
    k = data.draw(st.integers(0, 3 * n))
    p = build_gc_span_program(g, k)
    assert evaluate(p, x) == has_collision(inst)
    if has_collision(inst):
        assert min_positive_witness(p, x).min_wsize <= p.bound + 1e-6
    elif inst.deg_marked <= k:
        assert min_negative_witness(p, x).min_wsize <= p.bound + 1e-6
