"""Structure learners over undirected edge sets.

``gs_mple`` greedily optimizes a pseudolikelihood-style objective directly
in edge space: grow adds the edge whose two-sided conditional-MI score is
largest until none exceeds the threshold, then shrink removes the edge with
the smallest leave-one-out score until all survivors clear it. The same
threshold ``lam`` plays the role of an L0 penalty weight on edges.

Baselines:

* ``iamb`` - per-node blanket grow/shrink, symmetrized with the OR rule;
* ``gsmn`` - per-node grow, then edgewise shrink that deletes an edge when
  the smaller of its two one-sided scores drops below threshold;
* ``chow_liu`` - maximum-weight spanning tree on pairwise MI.

All learners are deterministic: candidate loops run in ascending index
order and ties resolve to the lexicographically smallest pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import Dataset, EdgeSet
from .estimators import CachedEstimator, EstimatorConfig

GS_MPLE = "gs-mple"
IAMB = "iamb"
GSMN = "gsmn"
CHOW_LIU = "chow-liu"


class NumericError(RuntimeError):
    """A score came out non-finite; carries the phase and pair involved."""

    def __init__(self, phase: str, i: int, j: int, value: float) -> None:
        super().__init__(
            f"non-finite score {value!r} in {phase} phase for pair ({i}, {j})"
        )
        self.phase = phase
        self.i = i
        self.j = j
        self.value = value


@dataclass(frozen=True)
class LearnerConfig:
    """Threshold, estimator choice, and an optional cap on edge count."""

    lam: float = 0.0
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    max_edges: Optional[int] = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam) or self.lam < 0.0:
            raise ValueError(f"lam must be finite and >= 0, got {self.lam!r}")
        if self.max_edges is not None and self.max_edges < 0:
            raise ValueError(f"max_edges must be >= 0, got {self.max_edges!r}")


@dataclass(frozen=True)
class TraceStep:
    """One considered move: the winning candidate of a grow or shrink round.

    ``accepted`` is False only for the final candidate that failed the
    threshold and stopped the phase.
    """

    phase: str
    i: int
    j: int
    score: float
    accepted: bool


def _ensure_finite(value: float, phase: str, i: int, j: int) -> float:
    if not math.isfinite(value):
        raise NumericError(phase, i, j, value)
    return value


def _pair_grow_score(est: CachedEstimator, es: EdgeSet, i: int, j: int) -> float:
    a, b = (i, j) if i < j else (j, i)
    return est.cmi(a, b, es.neighbors(i)) + est.cmi(a, b, es.neighbors(j))


def _pair_shrink_score(est: CachedEstimator, es: EdgeSet, i: int, j: int) -> float:
    a, b = (i, j) if i < j else (j, i)
    return est.cmi(a, b, es.neighbors(i) - {j}) + est.cmi(a, b, es.neighbors(j) - {i})


def grow_score(
    data: Dataset,
    es: EdgeSet,
    i: int,
    j: int,
    cfg: EstimatorConfig,
    est: Optional[CachedEstimator] = None,
) -> float:
    """Two-sided gain score for adding edge (i, j): the conditional MI of the
    pair given each endpoint's current neighborhood, summed. Symmetric in
    (i, j) exactly."""
    if i == j or es.has_edge(i, j):
        raise ValueError(f"grow_score needs a non-adjacent pair, got ({i}, {j})")
    est = est if est is not None else CachedEstimator(data, cfg)
    return _pair_grow_score(est, es, i, j)


def shrink_score(
    data: Dataset,
    es: EdgeSet,
    i: int,
    j: int,
    cfg: EstimatorConfig,
    est: Optional[CachedEstimator] = None,
) -> float:
    """Two-sided retention score for edge (i, j): the conditional MI of the
    pair given each endpoint's other neighbors, summed. Symmetric in (i, j)
    exactly."""
    if not es.has_edge(i, j):
        raise ValueError(f"shrink_score needs an existing edge, got ({i}, {j})")
    est = est if est is not None else CachedEstimator(data, cfg)
    return _pair_shrink_score(est, es, i, j)


def objective_j(
    data: Dataset,
    es: EdgeSet,
    cfg: EstimatorConfig,
    est: Optional[CachedEstimator] = None,
) -> float:
    """Sum over nodes of the conditional MI between the node and everything
    outside its closed neighborhood, given its neighbors. Zero on the
    complete graph; greedy moves change it by exactly the pair scores when
    the plug-in estimator is used."""
    est = est if est is not None else CachedEstimator(data, cfg)
    total = 0.0
    for i in range(data.n_vars):
        rest = es.non_neighbors(i)
        if not rest:
            continue
        total += est.cmi_sets((i,), rest, es.neighbors(i))
    return total


def _mple_grow(
    est: CachedEstimator, es: EdgeSet, cfg: LearnerConfig, trace: list[TraceStep]
) -> EdgeSet:
    d = es.d
    cap = cfg.max_edges if cfg.max_edges is not None else d * (d - 1) // 2
    while es.n_edges < cap:
        best: Optional[tuple[int, int]] = None
        best_score = -math.inf
        for i in range(d):
            for j in range(i + 1, d):
                if es.has_edge(i, j):
                    continue
                s = _ensure_finite(_pair_grow_score(est, es, i, j), "grow", i, j)
                if s > best_score:
                    best, best_score = (i, j), s
        if best is None:
            break
        if best_score <= cfg.lam:
            trace.append(TraceStep("grow", best[0], best[1], best_score, False))
            break
        es = es.add_edge(*best)
        trace.append(TraceStep("grow", best[0], best[1], best_score, True))
    return es


def _mple_shrink(
    est: CachedEstimator, es: EdgeSet, lam: float, trace: list[TraceStep]
) -> EdgeSet:
    while es.n_edges > 0:
        best: Optional[tuple[int, int]] = None
        best_score = math.inf
        for i, j in es.sorted_edges():
            s = _ensure_finite(_pair_shrink_score(est, es, i, j), "shrink", i, j)
            if s < best_score:
                best, best_score = (i, j), s
        assert best is not None
        if best_score > lam:
            trace.append(TraceStep("shrink", best[0], best[1], best_score, False))
            break
        es = es.remove_edge(*best)
        trace.append(TraceStep("shrink", best[0], best[1], best_score, True))
    return es


def gs_mple(
    data: Dataset,
    cfg: LearnerConfig,
    est: Optional[CachedEstimator] = None,
) -> tuple[EdgeSet, list[TraceStep]]:
    """Greedy grow-then-shrink search over edge sets.

    Grow repeatedly adds the highest-scoring absent edge while the best
    score exceeds ``cfg.lam`` (and the edge cap, if any, is not hit);
    shrink then repeatedly deletes the lowest-scoring present edge while
    that score is at most ``cfg.lam``. Returns the final edge set and the
    move trace, whose last entry per phase is the rejected stopper when one
    was evaluated.
    """
    est = est if est is not None else CachedEstimator(data, cfg.estimator)
    trace: list[TraceStep] = []
    es = EdgeSet.empty(data.n_vars)
    es = _mple_grow(est, es, cfg, trace)
    es = _mple_shrink(est, es, cfg.lam, trace)
    return es, trace


def _grow_blanket(est: CachedEstimator, i: int, d: int, lam: float) -> set[int]:
    nb: set[int] = set()
    while len(nb) < d - 1:
        best_j = -1
        best = -math.inf
        for j in range(d):
            if j == i or j in nb:
                continue
            s = _ensure_finite(est.cmi(i, j, nb), "grow", i, j)
            if s > best:
                best, best_j = s, j
        if best <= lam:
            break
        nb.add(best_j)
    return nb


def _iamb_shrink_blanket(
    est: CachedEstimator, i: int, nb: set[int], lam: float
) -> set[int]:
    nb = set(nb)
    while nb:
        worst_j = -1
        worst = math.inf
        for j in sorted(nb):
            s = _ensure_finite(est.cmi(i, j, nb - {j}), "shrink", i, j)
            if s < worst:
                worst, worst_j = s, j
        if worst > lam:
            break
        nb.remove(worst_j)
    return nb


def iamb(
    data: Dataset,
    cfg: LearnerConfig,
    est: Optional[CachedEstimator] = None,
) -> EdgeSet:
    """Per-node blanket learner: grow by highest conditional MI, shrink by
    removing the weakest member while it is at or below threshold, then put
    an edge wherever either endpoint kept the other (OR rule)."""
    est = est if est is not None else CachedEstimator(data, cfg.estimator)
    d = data.n_vars
    pairs: set[tuple[int, int]] = set()
    for i in range(d):
        nb = _grow_blanket(est, i, d, cfg.lam)
        nb = _iamb_shrink_blanket(est, i, nb, cfg.lam)
        for j in nb:
            pairs.add((i, j) if i < j else (j, i))
    return EdgeSet.from_pairs(d, pairs)


def _gsmn_shrink(est: CachedEstimator, es: EdgeSet, lam: float) -> EdgeSet:
    changed = True
    while changed:
        changed = False
        for i, j in es.sorted_edges():
            side_i = _ensure_finite(
                est.cmi(i, j, es.neighbors(i) - {j}), "shrink", i, j
            )
            side_j = _ensure_finite(
                est.cmi(j, i, es.neighbors(j) - {i}), "shrink", i, j
            )
            if min(side_i, side_j) <= lam:
                es = es.remove_edge(i, j)
                changed = True
    return es


def gsmn(
    data: Dataset,
    cfg: LearnerConfig,
    est: Optional[CachedEstimator] = None,
) -> EdgeSet:
    """Grow-shrink baseline: IAMB-style per-node grow, then an edgewise
    shrink that deletes an edge whenever the smaller of its two one-sided
    conditional-MI scores is at or below threshold. Shrink passes run in
    canonical edge order against live neighborhoods until no edge moves."""
    est = est if est is not None else CachedEstimator(data, cfg.estimator)
    d = data.n_vars
    pairs: set[tuple[int, int]] = set()
    for i in range(d):
        for j in _grow_blanket(est, i, d, cfg.lam):
            pairs.add((i, j) if i < j else (j, i))
    es = EdgeSet.from_pairs(d, pairs)
    return _gsmn_shrink(est, es, cfg.lam)


def chow_liu(
    data: Dataset,
    cfg: EstimatorConfig,
    est: Optional[CachedEstimator] = None,
) -> EdgeSet:
    """Maximum-weight spanning tree on pairwise MI.

    Kruskal over all pairs sorted by (-weight, i, j); always returns exactly
    D - 1 edges and takes no threshold.
    """
    d = data.n_vars
    if d < 2:
        raise ValueError("chow_liu needs at least two variables")
    est = est if est is not None else CachedEstimator(data, cfg)
    weighted: list[tuple[float, int, int]] = []
    for i in range(d):
        for j in range(i + 1, d):
            w = _ensure_finite(est.mi((i,), (j,)), "weight", i, j)
            weighted.append((w, i, j))
    weighted.sort(key=lambda t: (-t[0], t[1], t[2]))

    parent = list(range(d))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen: list[tuple[int, int]] = []
    for _, i, j in weighted:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
            if len(chosen) == d - 1:
                break
    return EdgeSet.from_pairs(d, chosen)


def _learn_gs_mple(data, cfg, est=None) -> EdgeSet:
    return gs_mple(data, cfg, est)[0]


def _learn_chow_liu(data, cfg, est=None) -> EdgeSet:
    return chow_liu(data, cfg.estimator, est)


LEARNERS: dict[str, Callable[..., EdgeSet]] = {
    GS_MPLE: _learn_gs_mple,
    IAMB: iamb,
    GSMN: gsmn,
    CHOW_LIU: _learn_chow_liu,
}


def learn(
    algo: str,
    data: Dataset,
    cfg: LearnerConfig,
    est: Optional[CachedEstimator] = None,
) -> EdgeSet:
    """Run one of the registered learners by name."""
    try:
        fn = LEARNERS[algo]
    except KeyError:
        raise ValueError(
            f"unknown learner {algo!r}; expected one of {sorted(LEARNERS)}"
        ) from None
    return fn(data, cfg, est)


__all__ = [
    "LearnerConfig",
    "TraceStep",
    "NumericError",
    "grow_score",
    "shrink_score",
    "objective_j",
    "gs_mple",
    "iamb",
    "gsmn",
    "chow_liu",
    "learn",
    "LEARNERS",
    "GS_MPLE",
    "IAMB",
    "GSMN",
    "CHOW_LIU",
]
