"""Timing comparison of the numba kernels against the pure-numpy fallback.

Both implementations must produce identical arrays; this script checks that
first and then reports best-of-5 wall times per workload.

Run:  python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from mrfstruct import _kernels_numpy as knp

try:
    from mrfstruct import _kernels_numba as knb
except ImportError:
    knb = None


@dataclass
class Row:
    kernel: str
    size: str
    numpy_ms: float
    numba_ms: float

    @property
    def speedup(self) -> float:
        return self.numpy_ms / self.numba_ms if self.numba_ms > 0 else float("inf")


def _best_ms(fn, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, (time.perf_counter() - t0) * 1e3)
    return best


def _knn_workload(n: int, dx: int, dy: int, seed: int):
    rng = np.random.default_rng(seed)
    cont = rng.standard_normal((n, dx + dy - 1))
    disc_col = rng.integers(0, 3, (n, 1)).astype(np.float64)
    xy = np.ascontiguousarray(np.hstack([disc_col, cont]))
    disc = np.zeros(dx + dy, dtype=bool)
    disc[0] = True
    return xy, disc, dx


def _gibbs_workload(n_keep: int, seed: int):
    grid = 3
    n_sites = grid * grid
    nbrs = [[] for _ in range(n_sites)]
    for r in range(grid):
        for c in range(grid):
            s = r * grid + c
            if c + 1 < grid:
                nbrs[s].append(s + 1)
                nbrs[s + 1].append(s)
            if r + 1 < grid:
                nbrs[s].append(s + grid)
                nbrs[s + grid].append(s)
    max_deg = max(len(x) for x in nbrs)
    idx = np.zeros((n_sites, max_deg), dtype=np.int64)
    cnt = np.zeros(n_sites, dtype=np.int64)
    for s, lst in enumerate(nbrs):
        cnt[s] = len(lst)
        idx[s, : len(lst)] = sorted(lst)
    h = np.arange(-max_deg, max_deg + 1, dtype=np.float64)
    prob_up = 1.0 / (1.0 + np.exp(-h))
    rng = np.random.default_rng(seed)
    state0 = (rng.integers(0, 2, n_sites) * 2 - 1).astype(np.int64)
    burnin, thin = 1000, 10
    uniforms = rng.random((burnin + n_keep * thin, n_sites))
    return idx, cnt, prob_up, state0, uniforms, burnin, thin, n_keep


def main() -> int:
    if knb is None:
        print("numba unavailable; nothing to compare")
        return 1

    rows: list[Row] = []

    for n in (500, 2000):
        xy, disc, dx = _knn_workload(n, 2, 1, seed=n)
        ref = knp.mixed_knn_stats(xy, disc, dx, 3)
        got = knb.mixed_knn_stats(xy, disc, dx, 3)  # also triggers compilation
        assert all(np.array_equal(a, b) for a, b in zip(ref, got)), "backend mismatch"
        rows.append(
            Row(
                "mixed_knn_stats",
                f"n={n}",
                _best_ms(lambda: knp.mixed_knn_stats(xy, disc, dx, 3)),
                _best_ms(lambda: knb.mixed_knn_stats(xy, disc, dx, 3)),
            )
        )

    for n_keep in (200, 2000):
        args = _gibbs_workload(n_keep, seed=n_keep)
        ref = knp.ising_gibbs(*args)
        got = knb.ising_gibbs(*args)
        assert np.array_equal(ref, got), "backend mismatch"
        rows.append(
            Row(
                "ising_gibbs",
                f"n_keep={n_keep}",
                _best_ms(lambda: knp.ising_gibbs(*args)),
                _best_ms(lambda: knb.ising_gibbs(*args)),
            )
        )

    print(f"{'kernel':<18} {'size':<12} {'numpy ms':>10} {'numba ms':>10} {'speedup':>9}")
    for r in rows:
        print(
            f"{r.kernel:<18} {r.size:<12} {r.numpy_ms:>10.2f} "
            f"{r.numba_ms:>10.2f} {r.speedup:>8.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
