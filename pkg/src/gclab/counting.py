"""Approximate quantum counting, simulated from its exact outcome distribution.

For a function with ``t`` marked points out of ``N`` the Grover iterate has
eigenphases ``±omega`` with ``omega = arcsin(sqrt(t/N)) / pi`` and the initial
state is an equal mixture of the two eigenvectors. A ``P``-point phase
estimation therefore reports ``m`` with probability

    Pr[m] = D(omega - m/P) / 2 + D(-omega - m/P) / 2,
    D(d)  = sin^2(P pi d) / (P^2 sin^2(pi d)),   D(integer) = 1,

and the count estimate is ``N sin^2(pi m / P)``. The oracle is represented
only by ``t``; a run is charged ``P`` queries.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .rng import make_rng

SUCCESS_PROB = 8 / math.pi**2


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class CountingSpec:
    N: int
    P: int
    t: int

    def __post_init__(self):
        if self.N < 1:
            raise CountingError(f"domain size must be >= 1, got {self.N}")
        if self.P < 4:
            raise CountingError(f"precision must be >= 4, got {self.P}")
        if not 0 <= self.t <= self.N:
            raise CountingError(f"count {self.t} outside [0, {self.N}]")

    @property
    def amplitude(self) -> float:
        return self.t / self.N

    @property
    def phase(self) -> float:
        return math.asin(math.sqrt(self.amplitude)) / math.pi


@dataclass(frozen=True)
class CountingTranscript:
    """One counting call.

    ``estimate`` is the real-valued count estimate; ``estimate_int`` is that
    value rounded half up. ``outcomes`` holds the sampled ``m`` of each
    elementary run and ``runs`` their number.
    """

    spec: CountingSpec
    distribution: tuple[float, ...]
    outcomes: tuple[int, ...]
    estimate: float
    estimate_int: int
    charged_queries: int
    within_bound: bool
    runs: int = 1
    doubled: bool = False

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["spec"] = asdict(self.spec)
        d["distribution"] = list(self.distribution)
        d["outcomes"] = list(self.outcomes)
        return d


def fejer(delta: np.ndarray, P: int) -> np.ndarray:
    """``D(delta)``: probability that a ``P``-point estimate of a phase lands
    ``delta`` (mod 1) away from the grid point."""
    d = np.asarray(delta, dtype=float)
    d = d - np.round(d)
    out = np.ones_like(d)
    nz = np.abs(d) > 1e-15
    out[nz] = np.sin(P * np.pi * d[nz]) ** 2 / (P**2 * np.sin(np.pi * d[nz]) ** 2)
    return out


def phase_distribution(omega: float, P: int) -> np.ndarray:
    m = np.arange(P) / P
    return 0.5 * fejer(omega - m, P) + 0.5 * fejer(-omega - m, P)


def outcome_distribution(spec: CountingSpec) -> np.ndarray:
    return phase_distribution(spec.phase, spec.P)


def estimates(N: int, P: int) -> np.ndarray:
    """Count estimate attached to each outcome ``m = 0..P-1``."""
    return N * np.sin(np.pi * np.arange(P) / P) ** 2


def round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def bound_value(N: int, P: int, t: int, doubled: bool = False) -> float:
    """Additive error bound ``(2 pi / P) sqrt(tN) + (pi^2 / P^2) N``.

    ``doubled`` evaluates it on the domain ``2N``, which is the boosted-counting
    bound ``(2 sqrt2 pi / P) sqrt(tN) + (2 pi^2 / P^2) N``.
    """
    if doubled:
        N = 2 * N
    return 2 * math.pi / P * math.sqrt(t * N) + math.pi**2 / P**2 * N


def within_bound_mass(spec: CountingSpec) -> float:
    """Exact probability that a single run lands within :func:`bound_value`."""
    est = estimates(spec.N, spec.P)
    hit = np.abs(spec.t - est) < bound_value(spec.N, spec.P, spec.t)
    return float(outcome_distribution(spec)[hit].sum())


def _sample(spec: CountingSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    dist = outcome_distribution(spec)
    return rng.choice(spec.P, size=size, p=dist / dist.sum())


def count_once(spec: CountingSpec, seed: int) -> CountingTranscript:
    if spec.t > spec.N / 2:
        raise CountingError("single-run counting needs t <= N/2; use count_boosted")
    m = int(_sample(spec, make_rng(seed), 1)[0])
    est = float(estimates(spec.N, spec.P)[m])
    return CountingTranscript(
        spec=spec,
        distribution=tuple(outcome_distribution(spec).tolist()),
        outcomes=(m,),
        estimate=est,
        estimate_int=round_half_up(est),
        charged_queries=spec.P,
        within_bound=abs(spec.t - est) < bound_value(spec.N, spec.P, spec.t),
    )


def repetitions(epsilon: float, fail: float = 1 - SUCCESS_PROB) -> int:
    """Smallest odd ``r`` with ``Pr[Bin(r, fail) >= (r+1)/2] <= epsilon``."""
    if not 0 < epsilon < 0.5:
        raise CountingError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    r = 1
    while True:
        tail = sum(math.comb(r, i) * fail**i * (1 - fail) ** (r - i) for i in range((r + 1) // 2, r + 1))
        if tail <= epsilon:
            return r
        r += 2


def _plurality(values: np.ndarray) -> float:
    # ties go to the smallest of the most frequent values
    vals, counts = np.unique(values, return_counts=True)
    return float(vals[np.argmax(counts)])


def count_boosted(
    N: int, P: int, t: int, epsilon: float, seed: int, vote: str = "median"
) -> CountingTranscript:
    """Counting without the ``t <= N/2`` restriction and with failure ``<= epsilon``.

    The domain is doubled (``N' = 2N``, still ``t`` marked) and
    :func:`repetitions` independent runs are combined by their median, or by
    plurality vote over the integer estimates when ``vote="plurality"``.
    """
    if vote not in ("median", "plurality"):
        raise CountingError(f"unknown vote rule {vote!r}")
    spec = CountingSpec(N, P, t)
    inner = CountingSpec(2 * N, P, t)
    r = repetitions(epsilon)
    ms = _sample(inner, make_rng(seed), r)
    ests = estimates(inner.N, P)[ms]
    if vote == "median":
        est = float(np.median(ests))
    else:
        est = _plurality(np.floor(ests + 0.5))
    return CountingTranscript(
        spec=spec,
        distribution=tuple(outcome_distribution(inner).tolist()),
        outcomes=tuple(int(m) for m in ms),
        estimate=est,
        estimate_int=round_half_up(est),
        charged_queries=r * P,
        within_bound=abs(t - est) < bound_value(N, P, t, doubled=True),
        runs=r,
        doubled=True,
    )


def mass_grid(Ns, Ps) -> list[dict]:
    """Rows ``N, P, t, bound, mass_within_bound`` for every ``t <= N/2``."""
    rows = []
    for N in Ns:
        for P in Ps:
            for t in range(N // 2 + 1):
                spec = CountingSpec(N, P, t)
                rows.append(
                    {"N": N, "P": P, "t": t, "bound": bound_value(N, P, t), "mass_within_bound": within_bound_mass(spec)}
                )
    return rows
