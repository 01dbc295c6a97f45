"""Shared builders and independent oracles for the test suite.

The oracles here deliberately use different code paths from the package:
entropies from raw contingency counts, brute-force Python neighbor loops,
and direct enumeration. Tests compare package output against these.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from mrfstruct import Column, ColumnKind, Dataset, discrete_dataset


def balanced_coins(n: int, n_copies: int = 2) -> Dataset:
    """One exactly balanced binary column duplicated ``n_copies`` times."""
    assert n % 2 == 0
    base = np.array([0, 1] * (n // 2), dtype=np.int64)
    return discrete_dataset(np.column_stack([base] * n_copies), [2] * n_copies)


def chain_dataset(n: int, seed: int, d: int = 4, stay: float = 0.8) -> Dataset:
    """Binary Markov chain X0 - X1 - ... - X_{d-1} with stay probability."""
    rng = np.random.default_rng(seed)
    x = np.empty((n, d), dtype=np.int64)
    x[:, 0] = rng.integers(0, 2, n)
    for i in range(1, d):
        flip = rng.random(n) >= stay
        x[:, i] = np.where(flip, 1 - x[:, i - 1], x[:, i - 1])
    return discrete_dataset(x, [2] * d)


def random_cpt_dataset(seed: int, d: int, n: int, max_card: int = 3) -> Dataset:
    """Random directed factorization: each variable draws from a Dirichlet
    table conditioned on up to two earlier variables."""
    rng = np.random.default_rng(seed)
    cards = rng.integers(2, max_card + 1, size=d)
    cols = np.empty((n, d), dtype=np.int64)
    for i in range(d):
        n_parents = int(rng.integers(0, min(i, 2) + 1))
        parents = sorted(rng.choice(i, size=n_parents, replace=False)) if n_parents else []
        pcard = int(np.prod([cards[p] for p in parents])) if parents else 1
        table = rng.dirichlet(np.ones(cards[i]) * 0.7, size=pcard)
        if parents:
            idx = np.zeros(n, dtype=np.int64)
            for p in parents:
                idx = idx * cards[p] + cols[:, p]
        else:
            idx = np.zeros(n, dtype=np.int64)
        u = rng.random(n)
        cum = np.cumsum(table, axis=1)
        cols[:, i] = (u[:, None] > cum[idx]).sum(axis=1)
    return discrete_dataset(cols, [int(c) for c in cards])


def entropy_of(rows) -> float:
    """Plug-in entropy in nats from an iterable of hashable outcomes."""
    counts = Counter(rows)
    n = sum(counts.values())
    return -sum((c / n) * math.log(c / n) for c in counts.values())


def mi_entropy_oracle(data: Dataset, xs, ys) -> float:
    """H(X) + H(Y) - H(X,Y) straight from tuples; independent of mi_plugin."""
    tup = lambda ids: list(zip(*(data.column(i).values.tolist() for i in ids)))
    return (
        entropy_of(tup(xs)) + entropy_of(tup(ys)) - entropy_of(tup(list(xs) + list(ys)))
    )


def cmi_entropy_oracle(data: Dataset, xs, ys, zs) -> float:
    """H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z) from tuples."""
    tup = lambda ids: list(zip(*(data.column(i).values.tolist() for i in ids)))
    xs, ys, zs = list(xs), list(ys), list(zs)
    if not zs:
        return mi_entropy_oracle(data, xs, ys)
    return (
        entropy_of(tup(xs + zs))
        + entropy_of(tup(ys + zs))
        - entropy_of(tup(xs + ys + zs))
        - entropy_of(tup(zs))
    )


def knn_stats_reference(xy: np.ndarray, disc: np.ndarray, dx: int, k: int):
    """Brute-force Python twin of mixed_knn_stats for small N."""
    n, d_tot = xy.shape

    def dist(i, j, lo, hi):
        out = 0.0
        for c in range(lo, hi):
            dc = abs(xy[i, c] - xy[j, c])
            if disc[c] and dc != 0.0:
                dc = 1.0
            out = max(out, dc)
        return out

    ktil = np.empty(n, dtype=np.int64)
    nx = np.empty(n, dtype=np.int64)
    ny = np.empty(n, dtype=np.int64)
    for i in range(n):
        dxs = [dist(i, j, 0, dx) if j != i else math.inf for j in range(n)]
        dys = [dist(i, j, dx, d_tot) if j != i else math.inf for j in range(n)]
        djs = [max(a, b) for a, b in zip(dxs, dys)]
        rho = sorted(djs)[k - 1]
        if rho > 0.0:
            ktil[i] = k
        else:
            ktil[i] = sum(1 for v in djs if v == 0.0)
        nx[i] = sum(1 for v in dxs if v <= rho)
        ny[i] = sum(1 for v in dys if v <= rho)
    return ktil, nx, ny


def continuous_cols(arr: np.ndarray) -> Dataset:
    return Dataset(
        tuple(Column(ColumnKind.CONTINUOUS, arr[:, i]) for i in range(arr.shape[1]))
    )
