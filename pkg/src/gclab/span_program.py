"""Span programs and the graph-collision span program.

The graph-collision program lives in ``C^{2^n}`` but every vector it uses is
one of the ``2n`` half-cube indicators ``s_{jb}`` (``s_{jb}[z] = 1`` iff bit
``j`` of ``z`` equals ``b``), and the target is ``gamma * (s_{j0} + s_{j1})``
for any ``j``. All membership tests and witness optimizations therefore run
on the ``2n x 2n`` Gram matrix of the ``s_{jb}``. The explicit ``2^n``
coordinate form is kept for small ``n`` as an independent cross-check.

Gram entries are stored normalized: every vector, target included, is
divided by ``2^{(n-2)/2}``. Positive witness coefficients solve
``sum w_v v = t`` and negative witness overlaps satisfy ``<t|w'> = 1``; both
are unchanged when target and vectors share one scale factor, so witness
sizes computed in normalized units are already in unnormalized units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import null_space, pinv

from .graph import Graph, GraphCollisionInstance, GraphError, has_collision

EXPLICIT_MAX_N = 14
MEMBERSHIP_TOL = 1e-8
PINV_RTOL = 1e-10


class CapacityError(ValueError):
    """Requested explicit representation is too large."""


class PreconditionError(ValueError):
    """A witness was requested for an input of the wrong kind."""


Tag = tuple[int, int]  # (vertex j, bit b) naming the vector s_{jb}


def _pinv(a: np.ndarray, ref: float | None = None) -> np.ndarray:
    """Pseudoinverse dropping singular values below ``PINV_RTOL * ref``.

    ``ref`` defaults to the largest singular value of ``a``; pass the scale of
    the unprojected problem when ``a`` may be numerically zero.
    """
    if a.size == 0:
        return a.T.copy()
    if ref is None:
        ref = float(np.linalg.norm(a, 2))
    return pinv(a, atol=PINV_RTOL * ref, rtol=0.0)


# ---------------------------------------------------------------------------
# Explicit coordinates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitSpanProgram:
    """Span program given by coordinate vectors.

    ``families[(j, b)]`` is a ``(count, dim)`` array of the vectors in
    ``V_{jb}``; an empty family has ``count == 0``.
    """

    n: int
    dim: int
    target: np.ndarray
    families: dict[Tag, np.ndarray] = field(repr=False)

    def active(self, x: Sequence[int]) -> np.ndarray:
        blocks = [self.families[(j, int(x[j - 1]))] for j in range(1, self.n + 1)]
        return np.concatenate(blocks, axis=0) if blocks else np.zeros((0, self.dim))

    def all_vectors(self) -> np.ndarray:
        return np.concatenate([self.families[(j, b)] for j in range(1, self.n + 1) for b in (0, 1)], axis=0)

    def _fit(self, x: Sequence[int]) -> tuple[np.ndarray, float]:
        a = self.active(x)
        t = self.target
        if a.shape[0] == 0:
            return np.zeros(0), 1.0
        coef, *_ = np.linalg.lstsq(a.T, t, rcond=PINV_RTOL)
        r = t - a.T @ coef
        return coef, float(r @ r) / float(t @ t)

    def evaluate(self, x: Sequence[int], tol: float = MEMBERSHIP_TOL) -> bool:
        return self._fit(x)[1] <= tol

    def min_positive_witness(self, x: Sequence[int]) -> float:
        coef, res = self._fit(x)
        if res > MEMBERSHIP_TOL:
            raise PreconditionError("target is not in the span of the active vectors")
        return float(coef @ coef)

    def min_negative_witness(self, x: Sequence[int]) -> float:
        """Smallest total squared overlap of a vector ``w`` with ``<t|w> = 1``
        orthogonal to every active vector (coordinate null-space solve)."""
        cons = np.vstack([self.target[None, :], self.active(x)])
        rhs = np.zeros(cons.shape[0])
        rhs[0] = 1.0
        w0 = _pinv(cons) @ rhs
        if np.max(np.abs(cons @ w0 - rhs)) > 1e-8:
            raise PreconditionError("no negative witness: target is in the active span")
        vecs = self.all_vectors().astype(float)
        basis = null_space(cons, rcond=PINV_RTOL)
        if basis.shape[1]:
            w0 = w0 - basis @ (_pinv(vecs @ basis, float(np.linalg.norm(vecs, 2))) @ (vecs @ w0))
        o = vecs @ w0
        return float(o @ o)


# ---------------------------------------------------------------------------
# Gram-implicit graph-collision program
# ---------------------------------------------------------------------------


def _idx(tag: Tag) -> int:
    return 2 * (tag[0] - 1) + tag[1]


@dataclass(frozen=True)
class GCSpanProgram:
    """Graph-collision span program for promise parameter ``k``.

    ``V_{j0}`` is empty and ``V_{j1} = {s_{j0}} ∪ {s_{i1} : i ∈ Nei(j)}``.
    ``gram`` has rows ``s_{10}, s_{11}, ..., s_{n0}, s_{n1}, t`` in
    normalized units; ``log2_scale`` is the base-2 log of the divisor.
    """

    graph: Graph
    k: int
    gamma: float
    gram: np.ndarray = field(repr=False)
    log2_scale: float

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def bound(self) -> float:
        return math.sqrt(2 * (self.n + self.k))

    @property
    def target_norm2(self) -> float:
        return float(self.gram[-1, -1])

    def family(self, j: int) -> list[Tag]:
        """Members of ``V_{j1}`` as tags, in a fixed order."""
        return [(j, 0)] + [(i, 1) for i in self.graph.neighbors(j)]

    def active_slots(self, x: Sequence[int]) -> list[tuple[int, Tag]]:
        return [(j, tag) for j in range(1, self.n + 1) if x[j - 1] for tag in self.family(j)]

    def multiplicities(self) -> np.ndarray:
        """How many families contain each ``s_{jb}``, across both input bits."""
        m = np.zeros(2 * self.n)
        for j in range(1, self.n + 1):
            m[_idx((j, 0))] += 1
            m[_idx((j, 1))] += len(self.graph.adjacency[j - 1])
        return m


def build_gc_span_program(g: Graph, k: int) -> GCSpanProgram:
    if k < 0:
        raise GraphError(f"promise parameter k must be nonnegative, got {k}")
    n = g.n
    gamma = ((n + k) / 2) ** 0.25
    size = 2 * n
    gram = np.empty((size + 1, size + 1))
    # <s_jb|s_ic>: 2^{n-2} across vertices, 2^{n-1} or 0 on the same vertex
    gram[:size, :size] = 1.0
    for j in range(n):
        gram[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = [[2.0, 0.0], [0.0, 2.0]]
    # <t|s_jb> = gamma 2^{n-1}, <t|t> = gamma^2 2^n
    gram[size, :size] = gram[:size, size] = 2.0 * gamma
    gram[size, size] = 4.0 * gamma**2
    gram.setflags(write=False)
    return GCSpanProgram(g, k, gamma, gram, (n - 2) / 2)


def to_explicit(p: GCSpanProgram, max_n: int = EXPLICIT_MAX_N) -> ExplicitSpanProgram:
    """Unnormalized coordinates over the ``2^n`` basis states.

    Bit ``j`` of basis state ``z`` is the ``j``-th most significant of ``n``
    bits, so for ``n = 2`` ``s_{10} = |00> + |01>``.
    """
    n = p.n
    if n > max_n:
        raise CapacityError(f"explicit form needs 2^{n} coordinates; limit is n <= {max_n}")
    dim = 1 << n
    z = np.arange(dim)
    s = {}
    for j in range(1, n + 1):
        bit = (z >> (n - j)) & 1
        s[(j, 1)] = bit.astype(np.int64)
        s[(j, 0)] = (1 - bit).astype(np.int64)
    families: dict[Tag, np.ndarray] = {}
    for j in range(1, n + 1):
        families[(j, 0)] = np.zeros((0, dim), dtype=np.int64)
        families[(j, 1)] = np.stack([s[tag] for tag in p.family(j)])
    return ExplicitSpanProgram(n, dim, p.gamma * np.ones(dim), families)


def explicit_s_gram(n: int) -> np.ndarray:
    """Integer Gram of the explicit ``s_{jb}`` in tag order (cross-check helper)."""
    dim = 1 << n
    z = np.arange(dim)
    rows = []
    for j in range(1, n + 1):
        bit = (z >> (n - j)) & 1
        rows += [1 - bit, bit]
    a = np.stack(rows).astype(np.int64)
    return a @ a.T


def _active_multiplicity(p: GCSpanProgram, x: Sequence[int]) -> dict[int, int]:
    mult: dict[int, int] = {}
    for _, tag in p.active_slots(x):
        i = _idx(tag)
        mult[i] = mult.get(i, 0) + 1
    return mult


def _residual(p: GCSpanProgram, x: Sequence[int]) -> float:
    idx = sorted(_active_multiplicity(p, x))
    if not idx:
        return 1.0
    g = p.gram[np.ix_(idx, idx)]
    c = p.gram[-1, idx]
    return (p.target_norm2 - float(c @ _pinv(g) @ c)) / p.target_norm2


def evaluate(p: GCSpanProgram, x: Sequence[int], tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether the target lies in the span of ``∪_j V_{j x_j}``."""
    if len(x) != p.n:
        raise GraphError(f"assignment has length {len(x)}, program has {p.n} inputs")
    return _residual(p, x) <= tol


def _fmt(v: float) -> str:
    return f"{v:.12g}"


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of a witness computation.

    ``residual`` is the relative squared reconstruction error for positive
    witnesses and the largest constraint violation for negative ones.
    ``entries`` lists ``(tag, value)``: per-slot coefficients (tag
    ``"V[j]:s[i,b]"``) or per-vector overlaps (tag ``"s[i,b]"``).
    """

    kind: str
    feasible: bool
    min_wsize: float
    proof_wsize: float
    bound: float
    residual: float
    entries: tuple[tuple[str, float], ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "feasible": self.feasible,
            "min_wsize": _fmt(self.min_wsize),
            "proof_wsize": _fmt(self.proof_wsize),
            "bound": _fmt(self.bound),
            "residual": _fmt(self.residual),
            "entries": [[tag, _fmt(v)] for tag, v in self.entries],
        }


def _slot_tag(j: int, tag: Tag) -> str:
    return f"V[{j}]:s[{tag[0]},{tag[1]}]"


def _vec_tag(i: int) -> str:
    return f"s[{i // 2 + 1},{i % 2}]"


def _positive_recon_residual(p: GCSpanProgram, combined: dict[int, float]) -> float:
    idx = sorted(combined)
    w = np.array([combined[i] for i in idx])
    g = p.gram[np.ix_(idx, idx)]
    c = p.gram[-1, idx]
    r = p.target_norm2 - 2.0 * float(w @ c) + float(w @ g @ w)
    return max(r, 0.0) / p.target_norm2


def _solve_min_positive(p: GCSpanProgram, x: Sequence[int]) -> tuple[float, dict[int, float], dict[int, int]]:
    mult = _active_multiplicity(p, x)
    idx = sorted(mult)
    m = np.array([mult[i] for i in idx], dtype=float)
    d = np.sqrt(m)
    g = p.gram[np.ix_(idx, idx)] * np.outer(d, d)
    c = p.gram[-1, idx] * d
    # identical slots share a combined coefficient W; cost W^2/m is minimized by even splitting
    u = _pinv(g) @ c
    combined = dict(zip(idx, (d * u).tolist()))
    return float(u @ u), combined, mult


def _check_vector(p: GCSpanProgram, x: Sequence[int]) -> tuple[int, ...]:
    return GraphCollisionInstance(p.graph, tuple(x)).x


def min_positive_witness(p: GCSpanProgram, x: Sequence[int]) -> WitnessReport:
    x = _check_vector(p, x)
    if not evaluate(p, x):
        raise PreconditionError("input is not accepted; no positive witness exists")
    size, combined, mult = _solve_min_positive(p, x)
    entries = tuple(
        (_slot_tag(j, tag), combined[_idx(tag)] / mult[_idx(tag)]) for j, tag in p.active_slots(x)
    )
    return WitnessReport(
        "min-positive", True, size, 2.0 * p.gamma**2, p.bound, _positive_recon_residual(p, combined), entries
    )


def proof_positive_witness(p: GCSpanProgram, x: Sequence[int]) -> WitnessReport:
    """Coefficient ``gamma`` on ``s_{j0}`` in ``V_{j1}`` and on ``s_{j1}`` in ``V_{i1}``
    for the lexicographically first marked edge ``(i, j)``, ``i < j``."""
    x = _check_vector(p, x)
    edges = GraphCollisionInstance(p.graph, x).collision_edges()
    if not edges:
        raise PreconditionError("no edge has both endpoints marked")
    i, j = edges[0]
    g = p.gamma
    combined = {_idx((j, 0)): g, _idx((j, 1)): g}
    entries = ((_slot_tag(j, (j, 0)), g), (_slot_tag(i, (j, 1)), g))
    size = sum(v * v for _, v in entries)
    return WitnessReport(
        "proof-positive",
        True,
        _solve_min_positive(p, x)[0],
        size,
        p.bound,
        _positive_recon_residual(p, combined),
        entries,
    )


def _negative_constraints(p: GCSpanProgram, x: Sequence[int], overlaps: np.ndarray) -> float:
    active = sorted(_active_multiplicity(p, x))
    tw = p.gamma * (overlaps[0] + overlaps[1])  # t = gamma (s_10 + s_11)
    worst = abs(tw - 1.0)
    if active:
        worst = max(worst, float(np.max(np.abs(overlaps[active]))))
    return worst


def _solve_min_negative(p: GCSpanProgram, x: Sequence[int]) -> np.ndarray:
    """Overlap vector ``o_v = <s_v|w'>`` of an optimal negative witness.

    Achievable overlap vectors are exactly the range of the ``s`` Gram block.
    """
    size = 2 * p.n
    gs = p.gram[:size, :size]
    evals, evecs = np.linalg.eigh(gs)
    basis = evecs[:, evals > PINV_RTOL * evals.max()]
    active = sorted(_active_multiplicity(p, x))
    a = np.zeros(size)
    a[0] = a[1] = p.gamma
    cons = np.vstack([a @ basis] + ([basis[active]] if active else []))
    rhs = np.zeros(cons.shape[0])
    rhs[0] = 1.0
    z0 = _pinv(cons) @ rhs
    if np.max(np.abs(cons @ z0 - rhs)) > 1e-8:
        raise PreconditionError("input is accepted; no negative witness exists")
    weights = p.multiplicities()
    q = basis.T @ (weights[:, None] * basis)
    free = null_space(cons, rcond=PINV_RTOL)
    if free.shape[1]:
        u = -_pinv(free.T @ q @ free, float(np.linalg.norm(q, 2))) @ (free.T @ q @ z0)
        z0 = z0 + free @ u
    return basis @ z0


def min_negative_witness(p: GCSpanProgram, x: Sequence[int]) -> WitnessReport:
    x = _check_vector(p, x)
    if evaluate(p, x):
        raise PreconditionError("input is accepted; no negative witness exists")
    o = _solve_min_negative(p, x)
    size = float(p.multiplicities() @ (o * o))
    entries = tuple((_vec_tag(i), float(v)) for i, v in enumerate(o))
    proof = _proof_negative_overlaps(p, x)
    proof_size = float(p.multiplicities() @ (proof * proof))
    return WitnessReport("min-negative", False, size, proof_size, p.bound, _negative_constraints(p, x, o), entries)


def _proof_negative_overlaps(p: GCSpanProgram, x: Sequence[int]) -> np.ndarray:
    # <s_{ib}|x> = 1 iff x_i = b; the witness is |x>/gamma
    o = np.zeros(2 * p.n)
    for i in range(1, p.n + 1):
        o[_idx((i, x[i - 1]))] = 1.0 / p.gamma
    return o


def proof_negative_witness(p: GCSpanProgram, x: Sequence[int]) -> WitnessReport:
    x = _check_vector(p, x)
    if has_collision(GraphCollisionInstance(p.graph, x)):
        raise PreconditionError("marked set is not independent")
    o = _proof_negative_overlaps(p, x)
    size = float(p.multiplicities() @ (o * o))
    min_size = float(p.multiplicities() @ (_solve_min_negative(p, x) ** 2))
    entries = tuple((_vec_tag(i), float(v)) for i, v in enumerate(o))
    return WitnessReport("proof-negative", False, min_size, size, p.bound, _negative_constraints(p, x, o), entries)


def witness_report(p: GCSpanProgram, x: Sequence[int]) -> WitnessReport:
    """Minimal witness of whichever kind the input admits."""
    return min_positive_witness(p, x) if evaluate(p, x) else min_negative_witness(p, x)
