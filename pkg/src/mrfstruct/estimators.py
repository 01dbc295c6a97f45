"""Mutual-information estimators over groups of dataset columns.

Two methods are provided:

* ``plugin`` - the empirical-count estimator for discrete columns. Cell
  probabilities come straight from the contingency table, and the log
  ratio is computed from exact integer products so that an empirically
  factorizing table yields exactly 0.0.
* ``knn`` - a k-nearest-neighbor estimator over the joint metric space
  where continuous coordinates use |a - b| and discrete coordinates use
  the 0/1 mismatch metric, combined under the max norm. Ties at zero
  distance fall back to counting coincident points, which keeps the
  estimator finite on purely discrete data.

Conditional MI is always computed by the two-term decomposition
``I(X;Y|Z) = I(X u Z; Y) - I(Y; Z)``, so every query bottoms out in plain
MI calls that a ``CachedEstimator`` can memoize.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import digamma
from scipy.stats import rankdata

from .core import ColumnKind, Dataset
from .kernels import mixed_knn_stats

PLUGIN = "plugin"
KNN = "knn"
METHODS = (PLUGIN, KNN)

# Refuse contingency tables beyond this many cells; the plug-in estimator
# is meant for small discrete groups, not arbitrary joint spaces.
_MAX_PLUGIN_STATES = 1 << 26


class EstimatorMismatchError(TypeError):
    """A column kind the chosen estimator cannot handle."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Estimator choice plus its tuning knobs.

    ``k`` and ``rank_transform`` only apply to the k-NN method; they are
    validated regardless so a config is well-formed independent of method.
    """

    method: str = KNN
    k: int = 3
    rank_transform: bool = False

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown estimator method {self.method!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"k must be a positive int, got {self.k!r}")


def _as_ids(ids: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in ids)))
    return out


def _check_groups(data: Dataset, xs: Sequence[int], ys: Sequence[int]) -> None:
    if not xs or not ys:
        raise ValueError("variable groups must be non-empty")
    if set(xs) & set(ys):
        raise ValueError(f"variable groups overlap: {sorted(set(xs) & set(ys))}")
    for i in (*xs, *ys):
        if not 0 <= i < data.n_vars:
            raise IndexError(f"variable id {i} out of range for D={data.n_vars}")


def _joint_codes(data: Dataset, ids: Sequence[int]) -> tuple[np.ndarray, int]:
    """Mixed-radix encode the given discrete columns into one code per row."""
    code = np.zeros(data.n_samples, dtype=np.int64)
    n_states = 1
    for i in ids:
        col = data.column(i)
        if col.kind is not ColumnKind.DISCRETE:
            raise EstimatorMismatchError(
                f"plug-in estimator requires discrete columns; column {i} is continuous"
            )
        n_states *= col.cardinality
        if n_states > _MAX_PLUGIN_STATES:
            raise ValueError(
                f"joint state space of columns {tuple(ids)} exceeds "
                f"{_MAX_PLUGIN_STATES} cells"
            )
        code = code * col.cardinality + col.values
    return code, n_states


def mi_plugin(data: Dataset, xs: Iterable[int], ys: Iterable[int]) -> float:
    """Empirical mutual information between two groups of discrete columns.

    Uses the count form sum (c_xy / N) * ln(c_xy * N / (c_x * c_y)); the
    ratio is formed from int64 products, so any table whose counts factorize
    exactly gives exactly 0.0. The result is clamped to be non-negative.
    """
    xs = _as_ids(xs)
    ys = _as_ids(ys)
    _check_groups(data, xs, ys)
    if ys < xs:
        # evaluate in a canonical orientation so symmetry holds bitwise
        xs, ys = ys, xs
    cx, kx = _joint_codes(data, xs)
    cy, ky = _joint_codes(data, ys)
    if kx * ky > _MAX_PLUGIN_STATES:
        raise ValueError("joint state space of both groups is too large")
    n = data.n_samples
    joint = np.bincount(cx * ky + cy, minlength=kx * ky).reshape(kx, ky)
    row = joint.sum(axis=1)
    col = joint.sum(axis=0)
    mask = joint > 0
    c_xy = joint[mask]
    prod = np.outer(row, col)[mask]
    ratio = (c_xy * np.int64(n)).astype(np.float64) / prod.astype(np.float64)
    val = float(np.sum((c_xy / n) * np.log(ratio)))
    return max(0.0, val)


def _psi_table(n: int) -> np.ndarray:
    """digamma at integers 0..n; index 0 is never valid and holds NaN."""
    t = np.empty(n + 1, dtype=np.float64)
    t[0] = np.nan
    t[1:] = digamma(np.arange(1, n + 1, dtype=np.float64))
    return t


def _group_matrix(
    data: Dataset, ids: Sequence[int], rank_transform: bool
) -> tuple[np.ndarray, np.ndarray]:
    mat, disc = data.group(ids)
    if rank_transform:
        for c, i in enumerate(ids):
            if not disc[c]:
                # average ranks scaled to (0, 1]; ties get equal positions
                mat[:, c] = rankdata(mat[:, c], method="average") / data.n_samples
    return mat, disc


def mi_knn_mixed(
    data: Dataset,
    xs: Iterable[int],
    ys: Iterable[int],
    k: int = 3,
    rank_transform: bool = False,
) -> float:
    """Mixture k-NN mutual information between two groups of columns.

    Handles any mix of discrete and continuous columns. Per sample the
    estimate is psi(ktil) + ln N - ln(n_x + 1) - ln(n_y + 1), averaged over
    samples; ktil and the marginal counts come from the active kernel
    backend. The value is not clamped and may be negative.
    """
    xs = _as_ids(xs)
    ys = _as_ids(ys)
    _check_groups(data, xs, ys)
    if ys < xs:
        # evaluate in a canonical orientation so symmetry holds bitwise
        xs, ys = ys, xs
    n = data.n_samples
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n_samples, got k={k}, n={n}")
    x_mat, x_disc = _group_matrix(data, xs, rank_transform)
    y_mat, y_disc = _group_matrix(data, ys, rank_transform)
    xy = np.ascontiguousarray(np.hstack([x_mat, y_mat]))
    disc = np.concatenate([x_disc, y_disc])
    ktil, n_x, n_y = mixed_knn_stats(xy, disc, len(xs), k)
    psi = _psi_table(n)
    terms = psi[ktil] + np.log(float(n)) - np.log(n_x + 1.0) - np.log(n_y + 1.0)
    return float(np.mean(terms))


def mi(data: Dataset, xs: Iterable[int], ys: Iterable[int], cfg: EstimatorConfig) -> float:
    """Mutual information between column groups under the configured method."""
    if cfg.method == PLUGIN:
        return mi_plugin(data, xs, ys)
    return mi_knn_mixed(data, xs, ys, k=cfg.k, rank_transform=cfg.rank_transform)


def cmi_sets(
    data: Dataset,
    xs: Iterable[int],
    ys: Iterable[int],
    zs: Iterable[int],
    cfg: EstimatorConfig,
) -> float:
    """Conditional MI between groups given a (possibly empty) third group.

    Computed as mi(xs u zs, ys) - mi(ys, zs); with empty zs this is plain
    MI. The two terms share whatever estimator the config selects.
    """
    xs = _as_ids(xs)
    ys = _as_ids(ys)
    zs = _as_ids(zs)
    if set(zs) & (set(xs) | set(ys)):
        raise ValueError("conditioning set overlaps the variable groups")
    if not zs:
        return mi(data, xs, ys, cfg)
    return mi(data, tuple(sorted({*xs, *zs})), ys, cfg) - mi(data, ys, zs, cfg)


def cmi(data: Dataset, x: int, y: int, zs: Iterable[int], cfg: EstimatorConfig) -> float:
    """Conditional MI between two single variables given a set."""
    return cmi_sets(data, (x,), (y,), zs, cfg)


class CachedEstimator:
    """Memoizing front end for MI queries against one dataset and config.

    Both estimators are deterministic functions of (dataset, groups), so the
    cache is exact. Keys are unordered pairs of sorted id tuples, matching
    the canonical orientation the estimators themselves evaluate in, which
    lets grow and shrink queries that differ only in orientation share work.
    """

    def __init__(self, data: Dataset, cfg: EstimatorConfig) -> None:
        self.data = data
        self.cfg = cfg
        self._cache: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}
        self.n_evals = 0

    def mi(self, xs: Iterable[int], ys: Iterable[int]) -> float:
        a = _as_ids(xs)
        b = _as_ids(ys)
        key = (a, b) if a <= b else (b, a)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = mi(self.data, key[0], key[1], self.cfg)
        self._cache[key] = val
        self.n_evals += 1
        return val

    def cmi_sets(self, xs: Iterable[int], ys: Iterable[int], zs: Iterable[int]) -> float:
        xs = _as_ids(xs)
        ys = _as_ids(ys)
        zs = _as_ids(zs)
        if set(zs) & (set(xs) | set(ys)):
            raise ValueError("conditioning set overlaps the variable groups")
        if not zs:
            return self.mi(xs, ys)
        return self.mi(tuple(sorted({*xs, *zs})), ys) - self.mi(ys, zs)

    def cmi(self, x: int, y: int, zs: Iterable[int]) -> float:
        return self.cmi_sets((x,), (y,), zs)

    def __len__(self) -> int:
        return len(self._cache)


__all__ = [
    "EstimatorConfig",
    "EstimatorMismatchError",
    "CachedEstimator",
    "mi",
    "mi_plugin",
    "mi_knn_mixed",
    "cmi",
    "cmi_sets",
    "PLUGIN",
    "KNN",
    "METHODS",
]
