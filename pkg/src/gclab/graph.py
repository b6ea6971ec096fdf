"""Graphs, marked sets, degree sums and the exact maximum-degree independent set."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .rng import make_rng

EXHAUSTIVE_MAX_N = 20
DEFAULT_NODE_BUDGET = 20_000_000


class GraphError(ValueError):
    """Malformed graph or vertex outside ``1..n``."""


class BudgetExhausted(RuntimeError):
    """The α* search visited more nodes than allowed.

    ``best`` is the largest degree sum of an independent set found so far, a
    valid lower bound on α*.
    """

    def __init__(self, best: int, nodes: int):
        super().__init__(f"node budget exhausted after {nodes} nodes (best lower bound {best})")
        self.best = best
        self.nodes = nodes


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``.

    Build with :meth:`from_edges`; ``edges`` holds pairs ``(u, v)`` with
    ``u < v`` and ``adjacency[j - 1]`` is the sorted neighbour tuple of ``j``.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    # bit (i - 1) set in masks[j - 1] iff i is a neighbour of j
    masks: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = ()) -> "Graph":
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {n}")
        canon: set[tuple[int, int]] = set()
        for e in edges:
            if len(e) != 2:
                raise GraphError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside 1..{n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            pair = (u, v) if u < v else (v, u)
            if pair in canon:
                raise GraphError(f"duplicate edge {pair}")
            canon.add(pair)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            nbrs[u - 1].append(v)
            nbrs[v - 1].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        masks = tuple(sum(1 << (i - 1) for i in a) for a in adjacency)
        return cls(n, frozenset(canon), adjacency, masks)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n)

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((j, j + 1) for j in range(1, n)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls.from_edges(leaves + 1, ((1, j) for j in range(2, leaves + 2)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, j: int) -> tuple[int, ...]:
        self.check_vertex(j)
        return self.adjacency[j - 1]

    def degree(self, j: int) -> int:
        return len(self.neighbors(j))

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def check_vertex(self, j: int) -> None:
        if not 1 <= j <= self.n:
            raise GraphError(f"vertex {j} outside 1..{self.n}")


def _as_vertex_set(g: Graph, s: Iterable[int]) -> frozenset[int]:
    out = frozenset(int(v) for v in s)
    for v in out:
        g.check_vertex(v)
    return out


def _check_bits(g: Graph, x: Sequence[int]) -> tuple[int, ...]:
    bits = tuple(int(b) for b in x)
    if len(bits) != g.n:
        raise GraphError(f"assignment has length {len(bits)}, graph has {g.n} vertices")
    if any(b not in (0, 1) for b in bits):
        raise GraphError("assignment entries must be 0 or 1")
    return bits


@dataclass(frozen=True)
class GraphCollisionInstance:
    """A known graph together with the queried bit string ``x``."""

    graph: Graph
    x: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", _check_bits(self.graph, self.x))

    @classmethod
    def from_marked(cls, g: Graph, marked: Iterable[int]) -> "GraphCollisionInstance":
        s = _as_vertex_set(g, marked)
        return cls(g, tuple(1 if j in s else 0 for j in range(1, g.n + 1)))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def marked(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.x, start=1) if b)

    @property
    def deg_marked(self) -> int:
        return deg_sum(self.graph, self.marked)

    def collision_edges(self) -> list[tuple[int, int]]:
        """Edges with both endpoints marked, in lexicographic order."""
        return sorted((u, v) for u, v in self.graph.edges if self.x[u - 1] and self.x[v - 1])


@dataclass(frozen=True)
class GraphCollisionPromise:
    """Graph collision restricted to inputs with ``deg(S) <= k``."""

    graph: Graph
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise GraphError(f"promise parameter k must be nonnegative, got {self.k}")

    def in_domain(self, x: Sequence[int]) -> bool:
        return GraphCollisionInstance(self.graph, tuple(x)).deg_marked <= self.k

    def value(self, x: Sequence[int]) -> bool:
        return has_collision(GraphCollisionInstance(self.graph, tuple(x)))


def deg_sum(g: Graph, s: Iterable[int]) -> int:
    return sum(len(g.adjacency[v - 1]) for v in _as_vertex_set(g, s))


def has_collision(inst: GraphCollisionInstance) -> bool:
    x = inst.x
    return any(x[u - 1] and x[v - 1] for u, v in inst.graph.edges)


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    vs = _as_vertex_set(g, s)
    mask = sum(1 << (v - 1) for v in vs)
    return all(not (g.masks[v - 1] & mask) for v in vs)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Draw from G(n, p).

    Pairs are visited in lexicographic order ``(1,2), (1,3), ..., (n-1,n)``
    and pair number ``q`` is kept iff the ``q``-th uniform draw is below ``p``.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    u = rng.random(n * (n - 1) // 2)
    edges = []
    q = 0
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if u[q] < p:
                edges.append((a, b))
            q += 1
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Maximum degree-weighted independent set
# ---------------------------------------------------------------------------


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Search:
    """Shared node accounting for the α* solvers (0-based bit positions)."""

    def __init__(self, nbr: Sequence[int], weight: Sequence[int], budget: int):
        self.nbr = nbr
        self.w = weight
        self.budget = budget
        self.nodes = 0
        self.best = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(self.best, self.nodes)

    def greedy(self, cand: int) -> int:
        total = 0
        for v in sorted(_bits(cand), key=lambda i: -self.w[i]):
            if cand >> v & 1:
                total += self.w[v]
                cand &= ~self.nbr[v] & ~(1 << v)
        return total

    def exhaustive(self, cand: int) -> int:
        # every independent set inside cand is a leaf of this recursion
        def visit(c: int, cur: int) -> None:
            self.tick()
            if not c:
                if cur > self.best:
                    self.best = cur
                return
            low = c & -c
            v = low.bit_length() - 1
            visit(c & ~self.nbr[v] & ~low, cur + self.w[v])
            visit(c & ~low, cur)

        visit(cand, 0)
        return self.best

    def degree_branch(self, cand: int) -> int:
        """Branch on the heaviest candidate; bound is current + all remaining weight."""
        w, nbr = self.w, self.nbr
        self.best = max(self.best, self.greedy(cand))

        def visit(c: int, cur: int, rest: int) -> None:
            while True:
                self.tick()
                if cur + rest <= self.best:
                    return
                if not c:
                    self.best = cur
                    return
                v = max(_bits(c), key=lambda i: (w[i], -i))
                keep = c & ~nbr[v] & ~(1 << v)
                visit(keep, cur + w[v], sum(w[i] for i in _bits(keep)))
                c &= ~(1 << v)
                rest -= w[v]

        visit(cand, 0, sum(w[i] for i in _bits(cand)))
        return self.best

    def clique_cover(self, cand: int) -> int:
        """Branch and bound with a weighted clique-cover bound.

        An independent set meets each clique at most once, so a greedy
        partition of the candidates into cliques bounds the attainable weight
        by the sum of the per-clique maxima. Vertices are expanded from the
        end of the cover order so every prefix carries its own bound.
        """
        w, nbr = self.w, self.nbr
        self.best = max(self.best, self.greedy(cand))

        def visit(c: int, cur: int) -> None:
            self.tick()
            if not c:
                if cur > self.best:
                    self.best = cur
                return
            order: list[int] = []
            bounds: list[int] = []
            left = c
            acc = 0
            while left:
                q = left
                top = 0
                start = len(order)
                while q:
                    low = q & -q
                    v = low.bit_length() - 1
                    order.append(v)
                    if w[v] > top:
                        top = w[v]
                    left ^= low
                    q &= nbr[v]
                acc += top
                bounds.extend([acc] * (len(order) - start))
            for idx in range(len(order) - 1, -1, -1):
                if cur + bounds[idx] <= self.best:
                    return
                v = order[idx]
                bit = 1 << v
                visit(c & ~nbr[v] & ~bit, cur + w[v])
                c &= ~bit

        visit(cand, 0)
        return self.best


METHODS = ("auto", "exhaustive", "clique", "degree")


def _solve(g: Graph, cand: int, method: str, budget: int, relabel) -> int:
    w = g.degrees()
    if method == "auto":
        method = "exhaustive" if bin(cand).count("1") <= EXHAUSTIVE_MAX_N else "clique"
    if method not in METHODS:
        raise ValueError(f"unknown alpha_star method {method!r}")
    if method == "clique":
        # heavy vertices first so greedy cliques open on them
        perm, nbr, wt, cand = relabel(cand)
        search = _Search(nbr, wt, budget)
        return search.clique_cover(cand)
    search = _Search(g.masks, w, budget)
    if method == "exhaustive":
        return search.exhaustive(cand)
    return search.degree_branch(cand)


def _relabeler(g: Graph):
    w = g.degrees()
    perm = sorted(range(g.n), key=lambda i: (-w[i], i))  # new position -> old vertex
    pos = {old: new for new, old in enumerate(perm)}

    def remap(mask: int) -> int:
        return sum(1 << pos[i] for i in _bits(mask))

    nbr = [remap(g.masks[old]) for old in perm]
    wt = [w[old] for old in perm]

    def relabel(cand: int):
        return perm, nbr, wt, remap(cand)

    return relabel


def alpha_star(g: Graph, *, method: str = "auto", budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Maximum of ``deg(S)`` over independent sets ``S`` of ``g``.

    ``auto`` enumerates every independent set for ``n <= 20`` and otherwise
    runs the clique-cover branch and bound. ``degree`` is the plain
    heaviest-vertex branching with the total-remaining-degree bound.
    Raises :class:`BudgetExhausted` once ``budget`` search nodes are used.
    """
    if g.m == 0:
        return 0
    return _solve(g, (1 << g.n) - 1, method, budget, _relabeler(g))


def alpha_star_witness(
    g: Graph, *, method: str = "auto", budget: int = DEFAULT_NODE_BUDGET
) -> tuple[int, tuple[int, ...]]:
    """α* together with the lexicographically least maximizing set.

    Isolated vertices are left out of the witness since they add nothing to
    the degree sum. Without them no maximizer contains another, so deciding
    vertices in increasing order and keeping each one whenever the optimum is
    still reachable yields the least sorted tuple.
    """
    best = alpha_star(g, method=method, budget=budget)
    if best == 0:
        return 0, ()
    relabel = _relabeler(g)
    w = g.degrees()
    chosen: list[int] = []
    weight = 0
    blocked = 0
    for v in range(g.n):
        if w[v] == 0 or blocked >> v & 1:
            continue
        later = ((1 << g.n) - 1) & ~((1 << (v + 1)) - 1)
        active = [i for i in range(g.n) if w[i] > 0]
        rest = later & ~blocked & ~g.masks[v] & sum(1 << i for i in active)
        reach = weight + w[v] + (_solve(g, rest, method, budget, relabel) if rest else 0)
        if reach == best:
            chosen.append(v + 1)
            weight += w[v]
            blocked |= g.masks[v]
            if weight == best:
                break
    return best, tuple(chosen)
