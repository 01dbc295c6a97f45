"""Pure-numpy reference implementations of the hot numeric kernels.

These are the fallback path used when numba is unavailable or disabled via
``MRFSTRUCT_NO_NUMBA=1``. They must produce bit-identical outputs to the
compiled versions in ``_kernels_numba``: distance values are built from
exact elementwise operations, counts are integers, and any reduction whose
order could matter is left to the shared caller.
"""

from __future__ import annotations

import numpy as np

# Row-block size for pairwise distance work; bounds temp memory at
# roughly block * n floats per matrix.
_BLOCK = 256


def _block_distances(xb: np.ndarray, x: np.ndarray, disc: np.ndarray) -> np.ndarray:
    """Max-norm distances between a row block and all samples.

    Continuous coordinates contribute |a - b|; discrete coordinates use the
    0/1 mismatch metric.
    """
    out = np.zeros((xb.shape[0], x.shape[0]), dtype=np.float64)
    for c in range(x.shape[1]):
        dc = np.abs(xb[:, c, None] - x[None, :, c])
        if disc[c]:
            dc = (dc != 0.0).astype(np.float64)
        np.maximum(out, dc, out=out)
    return out


def mixed_knn_stats(
    xy: np.ndarray, disc: np.ndarray, dx: int, k: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Neighbor statistics for the mixture k-NN mutual-information estimate.

    For each sample i, over the joint space of the first ``dx`` coordinates
    (the X group) and the rest (the Y group):

    * ``ktil[i]`` - k if the k-th nearest joint neighbor is at positive
      distance, else the number of samples at joint distance exactly 0
      (the tie branch that makes repeated discrete points work);
    * ``nx[i]``/``ny[i]`` - how many other samples fall within the closed
      ball of that k-th neighbor distance in the X / Y marginal.
    """
    n = xy.shape[0]
    ktil = np.empty(n, dtype=np.int64)
    nx = np.empty(n, dtype=np.int64)
    ny = np.empty(n, dtype=np.int64)
    xs = xy[:, :dx]
    ys = xy[:, dx:]
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        dxm = _block_distances(xs[start:stop], xs, disc[:dx])
        dym = _block_distances(ys[start:stop], ys, disc[dx:])
        dj = np.maximum(dxm, dym)
        rows = np.arange(stop - start)
        dj[rows, start + rows] = np.inf
        dxm[rows, start + rows] = np.inf
        dym[rows, start + rows] = np.inf
        rho = np.partition(dj, k - 1, axis=1)[:, k - 1]
        ktil[start:stop] = np.where(rho > 0.0, k, np.count_nonzero(dj == 0.0, axis=1))
        nx[start:stop] = np.count_nonzero(dxm <= rho[:, None], axis=1)
        ny[start:stop] = np.count_nonzero(dym <= rho[:, None], axis=1)
    return ktil, nx, ny


def ising_gibbs(
    nbr_idx: np.ndarray,
    nbr_cnt: np.ndarray,
    prob_up: np.ndarray,
    state0: np.ndarray,
    uniforms: np.ndarray,
    burnin: int,
    thin: int,
    n_keep: int,
) -> np.ndarray:
    """Single-site Gibbs chain over +-1 spins.

    ``prob_up[h + max_degree]`` is the precomputed probability of spin +1
    given neighbor field h, so both backends consume identical table values.
    One row of ``uniforms`` drives one full sweep; after ``burnin`` sweeps
    the state is recorded every ``thin`` sweeps.
    """
    n_sites = state0.shape[0]
    max_deg = nbr_idx.shape[1]
    state = state0.copy()
    out = np.empty((n_keep, n_sites), dtype=np.int64)
    sweep = 0
    for _ in range(burnin):
        _sweep(state, nbr_idx, nbr_cnt, prob_up, uniforms[sweep], max_deg)
        sweep += 1
    for r in range(n_keep):
        for _ in range(thin):
            _sweep(state, nbr_idx, nbr_cnt, prob_up, uniforms[sweep], max_deg)
            sweep += 1
        out[r] = state
    return out


def _sweep(state, nbr_idx, nbr_cnt, prob_up, u_row, max_deg):
    for s in range(state.shape[0]):
        h = 0
        for q in range(nbr_cnt[s]):
            h += state[nbr_idx[s, q]]
        state[s] = 1 if u_row[s] < prob_up[h + max_deg] else -1


__all__ = ["mixed_knn_stats", "ising_gibbs"]
