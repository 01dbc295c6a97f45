"""Seeded synthetic-data generators with known ground-truth edge sets.

Every generator is a pure function of its arguments: a fixed draw order
against ``numpy.random.default_rng(seed)`` makes repeated calls
byte-identical. Each returns ``(Dataset, GroundTruth)`` where the truth is
the conditional-independence graph of the sampled joint distribution,
including any couplings induced by conditioning on common children.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np
from scipy.linalg import solve_triangular

from .core import Column, ColumnKind, Dataset, EdgeSet, GroundTruth
from .kernels import ising_gibbs

ISING = "ising"
HMM_DISCRETE = "hmm-discrete"
GAUSSIAN = "gaussian"
HMM_CONTINUOUS = "hmm-continuous"

_GRID = 3  # Ising lattice side


def _ising_neighbors() -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]]]:
    """Padded neighbor table and edge list of the 3x3 lattice."""
    n_sites = _GRID * _GRID
    nbrs: list[list[int]] = [[] for _ in range(n_sites)]
    edges: list[tuple[int, int]] = []
    for r in range(_GRID):
        for c in range(_GRID):
            s = r * _GRID + c
            if c + 1 < _GRID:
                t = s + 1
                nbrs[s].append(t)
                nbrs[t].append(s)
                edges.append((s, t))
            if r + 1 < _GRID:
                t = s + _GRID
                nbrs[s].append(t)
                nbrs[t].append(s)
                edges.append((s, t))
    max_deg = max(len(x) for x in nbrs)
    idx = np.zeros((n_sites, max_deg), dtype=np.int64)
    cnt = np.zeros(n_sites, dtype=np.int64)
    for s, lst in enumerate(nbrs):
        cnt[s] = len(lst)
        idx[s, : len(lst)] = sorted(lst)
    return idx, cnt, edges


def gen_ising(
    n_samples: int,
    seed: int,
    beta: float = 0.5,
    burnin: int = 1000,
    thin: int = 10,
) -> tuple[Dataset, GroundTruth]:
    """Single-site Gibbs samples from a ferromagnetic Ising model on the
    3x3 lattice, recorded every ``thin`` sweeps after ``burnin`` sweeps.

    Spins are stored as codes {0, 1}; the truth is the 12 lattice edges.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if burnin < 0 or thin < 1:
        raise ValueError("burnin must be >= 0 and thin >= 1")
    if not math.isfinite(beta):
        raise ValueError("beta must be finite")
    nbr_idx, nbr_cnt, edges = _ising_neighbors()
    n_sites = nbr_cnt.shape[0]
    max_deg = nbr_idx.shape[1]
    # spin-up probability by neighbor field h in [-max_deg, max_deg];
    # shared table keeps both kernel backends on identical values
    h = np.arange(-max_deg, max_deg + 1, dtype=np.float64)
    prob_up = 1.0 / (1.0 + np.exp(-2.0 * beta * h))
    rng = np.random.default_rng(seed)
    state0 = (rng.integers(0, 2, size=n_sites) * 2 - 1).astype(np.int64)
    uniforms = rng.random((burnin + n_samples * thin, n_sites))
    spins = ising_gibbs(
        nbr_idx, nbr_cnt, prob_up, state0, uniforms, burnin, thin, n_samples
    )
    codes = (spins + 1) // 2
    names = tuple(f"s{r}{c}" for r in range(_GRID) for c in range(_GRID))
    cols = tuple(
        Column(ColumnKind.DISCRETE, codes[:, s], cardinality=2)
        for s in range(n_sites)
    )
    data = Dataset(cols, names=names)
    truth = GroundTruth(EdgeSet.from_pairs(n_sites, edges), label=ISING)
    return data, truth


def _hmm_truth(t_steps: int, variance_link: bool, label: str) -> GroundTruth:
    """Edges of the observed-joint graph shared by both HMM generators.

    Per step: state chains, state-to-observation edges, and the coupling
    between the two states induced by their common observed child. When the
    observation ignores the second state (``variance_link=False``) that
    state contributes only its own chain.
    """
    pairs: list[tuple[int, int]] = []
    for t in range(t_steps):
        s1, s2, o = 3 * t, 3 * t + 1, 3 * t + 2
        pairs.append((s1, o))
        if variance_link:
            pairs.append((s2, o))
            pairs.append((s1, s2))
        if t + 1 < t_steps:
            pairs.append((s1, s1 + 3))
            pairs.append((s2, s2 + 3))
    return GroundTruth(EdgeSet.from_pairs(3 * t_steps, pairs), label=label)


def _hmm_names(t_steps: int) -> tuple[str, ...]:
    names: list[str] = []
    for t in range(t_steps):
        names.extend((f"s1_t{t}", f"s2_t{t}", f"o_t{t}"))
    return tuple(names)


def gen_hmm_discrete(
    n_samples: int,
    seed: int,
    t_steps: int = 3,
    stay1: float = 0.8,
    stay2: float = 0.8,
    p_obs_00: float = 0.1,
    p_obs_mixed: float = 0.5,
    p_obs_11: float = 0.9,
    init1: float = 0.5,
    init2: float = 0.5,
) -> tuple[Dataset, GroundTruth]:
    """Two independent binary chains observed through a shared noisy output.

    Columns per step are (S1_t, S2_t, O_t). Each chain keeps its state with
    its stay probability; P(O_t = 1) is ``p_obs_11`` when both states are 1,
    ``p_obs_00`` when both are 0, and ``p_obs_mixed`` otherwise. The truth
    has the two chains, the six state-observation edges, and a same-step
    S1-S2 edge from the shared child.
    """
    if n_samples < 1 or t_steps < 1:
        raise ValueError("n_samples and t_steps must be >= 1")
    probs = (stay1, stay2, p_obs_00, p_obs_mixed, p_obs_11, init1, init2)
    if any(not 0.0 <= p <= 1.0 for p in probs):
        raise ValueError(f"probabilities must lie in [0, 1], got {probs}")
    obs_p = np.array([[p_obs_00, p_obs_mixed], [p_obs_mixed, p_obs_11]])
    rng = np.random.default_rng(seed)
    cols: list[Column] = []
    s1 = s2 = None
    for t in range(t_steps):
        if t == 0:
            s1 = (rng.random(n_samples) < init1).astype(np.int64)
            s2 = (rng.random(n_samples) < init2).astype(np.int64)
        else:
            s1 = np.where(rng.random(n_samples) < stay1, s1, 1 - s1)
            s2 = np.where(rng.random(n_samples) < stay2, s2, 1 - s2)
        o = (rng.random(n_samples) < obs_p[s1, s2]).astype(np.int64)
        cols.append(Column(ColumnKind.DISCRETE, s1, cardinality=2))
        cols.append(Column(ColumnKind.DISCRETE, s2, cardinality=2))
        cols.append(Column(ColumnKind.DISCRETE, o, cardinality=2))
    data = Dataset(tuple(cols), names=_hmm_names(t_steps))
    return data, _hmm_truth(t_steps, variance_link=True, label=HMM_DISCRETE)


def _precision_matrix(
    rng: np.random.Generator,
    d: int,
    edge_prob: float,
    w_lo: float,
    w_hi: float,
    min_eig: float,
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Sparse random precision matrix and its off-diagonal support.

    Consumes exactly three vector draws from ``rng`` (presence, magnitude,
    sign per pair slot) regardless of which edges come up, so the stream
    stays aligned for whatever is drawn next.
    """
    m = d * (d - 1) // 2
    present = rng.random(m) < edge_prob
    mags = rng.uniform(w_lo, w_hi, size=m)
    signs = rng.integers(0, 2, size=m) * 2 - 1
    theta = np.eye(d)
    pairs: list[tuple[int, int]] = []
    slot = 0
    for i in range(d):
        for j in range(i + 1, d):
            if present[slot]:
                theta[i, j] = theta[j, i] = signs[slot] * mags[slot]
                pairs.append((i, j))
            slot += 1
    lo = float(np.linalg.eigvalsh(theta)[0])
    if lo < min_eig:
        theta += (min_eig - lo) * np.eye(d)
    return theta, pairs


def gen_gaussian(
    n_samples: int,
    seed: int,
    d: int = 9,
    edge_prob: float = 0.25,
    min_eig: float = 0.3,
    w_lo: float = 0.2,
    w_hi: float = 0.6,
) -> tuple[Dataset, GroundTruth]:
    """Zero-mean Gaussian with a sparse random precision matrix.

    Off-diagonal precision entries are drawn per pair: present with
    ``edge_prob``, magnitude uniform in [w_lo, w_hi], random sign. The
    diagonal starts at 1 and is loaded up if needed so the smallest
    eigenvalue reaches ``min_eig``. The truth is the nonzero off-diagonal
    pattern.
    """
    if n_samples < 1 or d < 2:
        raise ValueError("n_samples must be >= 1 and d >= 2")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    if not 0.0 < w_lo <= w_hi:
        raise ValueError("need 0 < w_lo <= w_hi")
    if min_eig <= 0.0:
        raise ValueError("min_eig must be > 0")
    rng = np.random.default_rng(seed)
    theta, pairs = _precision_matrix(rng, d, edge_prob, w_lo, w_hi, min_eig)
    chol = np.linalg.cholesky(theta)
    z = rng.standard_normal((n_samples, d))
    x = solve_triangular(chol.T, z.T, lower=False).T
    names = tuple(f"x{i}" for i in range(d))
    cols = tuple(
        Column(ColumnKind.CONTINUOUS, np.ascontiguousarray(x[:, i]))
        for i in range(d)
    )
    data = Dataset(cols, names=names)
    return data, GroundTruth(EdgeSet.from_pairs(d, pairs), label=GAUSSIAN)


def gen_hmm_continuous(
    n_samples: int,
    seed: int,
    t_steps: int = 3,
    a1: float = 0.8,
    a2: float = 0.8,
    q1: float = 0.6,
    q2: float = 0.6,
    init_sd1: float = 1.0,
    init_sd2: float = 1.0,
    variance_link: bool = True,
    obs_sigma: float = 1.0,
) -> tuple[Dataset, GroundTruth]:
    """Two AR(1) chains observed through one output per step.

    The observation is O_t ~ Normal(S1_t, sigma_t^2) with sigma_t equal to
    exp(S2_t / 2) by default, so the first chain sets the level and the
    second the noise scale. With ``variance_link=False`` the scale is the
    constant ``obs_sigma`` and the second chain has no path to O_t, which
    drops its observation and same-step coupling edges from the truth.
    Defaults give both chains unit stationary variance.
    """
    if n_samples < 1 or t_steps < 1:
        raise ValueError("n_samples and t_steps must be >= 1")
    if q1 <= 0 or q2 <= 0 or init_sd1 <= 0 or init_sd2 <= 0 or obs_sigma <= 0:
        raise ValueError("scale parameters must be > 0")
    rng = np.random.default_rng(seed)
    values: list[np.ndarray] = []
    s1 = s2 = None
    for t in range(t_steps):
        if t == 0:
            s1 = init_sd1 * rng.standard_normal(n_samples)
            s2 = init_sd2 * rng.standard_normal(n_samples)
        else:
            s1 = a1 * s1 + q1 * rng.standard_normal(n_samples)
            s2 = a2 * s2 + q2 * rng.standard_normal(n_samples)
        sigma = np.exp(s2 / 2.0) if variance_link else obs_sigma
        o = s1 + sigma * rng.standard_normal(n_samples)
        values.extend((s1, s2, o))
    cols = tuple(Column(ColumnKind.CONTINUOUS, v) for v in values)
    data = Dataset(cols, names=_hmm_names(t_steps))
    return data, _hmm_truth(t_steps, variance_link, label=HMM_CONTINUOUS)


GENERATORS: dict[str, Callable[..., tuple[Dataset, GroundTruth]]] = {
    ISING: gen_ising,
    HMM_DISCRETE: gen_hmm_discrete,
    GAUSSIAN: gen_gaussian,
    HMM_CONTINUOUS: gen_hmm_continuous,
}


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator call by name: kind, sample count, seed, extra kwargs."""

    kind: str
    n_samples: int
    seed: int
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in GENERATORS:
            raise ValueError(
                f"unknown generator kind {self.kind!r}; expected one of "
                f"{sorted(GENERATORS)}"
            )
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        allowed = inspect.signature(GENERATORS[self.kind]).parameters
        for key in self.params:
            if key in ("n_samples", "seed") or key not in allowed:
                raise ValueError(
                    f"unknown parameter {key!r} for generator {self.kind!r}"
                )

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return GeneratorSpec(self.kind, self.n_samples, seed, dict(self.params))


def generate(spec: GeneratorSpec) -> tuple[Dataset, GroundTruth]:
    """Run the generator the spec names."""
    return GENERATORS[spec.kind](spec.n_samples, spec.seed, **dict(spec.params))


__all__ = [
    "GeneratorSpec",
    "generate",
    "GENERATORS",
    "gen_ising",
    "gen_hmm_discrete",
    "gen_gaussian",
    "gen_hmm_continuous",
    "ISING",
    "HMM_DISCRETE",
    "GAUSSIAN",
    "HMM_CONTINUOUS",
]
