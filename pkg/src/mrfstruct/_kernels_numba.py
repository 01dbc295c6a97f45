"""Numba-compiled twins of the kernels in ``_kernels_numpy``.

Each function must return bit-identical arrays to its numpy counterpart:
same distances (built from the same elementwise float ops), same integer
counts, same spin updates driven by the same uniform stream. Anything
sensitive to summation order lives in the shared callers, not here.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def mixed_knn_stats(xy, disc, dx, k):
    n, d_tot = xy.shape
    ktil = np.empty(n, dtype=np.int64)
    nx = np.empty(n, dtype=np.int64)
    ny = np.empty(n, dtype=np.int64)
    d_x = np.empty(n, dtype=np.float64)
    d_y = np.empty(n, dtype=np.float64)
    d_j = np.empty(n, dtype=np.float64)
    for i in range(n):
        for j in range(n):
            mx = 0.0
            for c in range(dx):
                dc = abs(xy[i, c] - xy[j, c])
                if disc[c] and dc != 0.0:
                    dc = 1.0
                if dc > mx:
                    mx = dc
            my = 0.0
            for c in range(dx, d_tot):
                dc = abs(xy[i, c] - xy[j, c])
                if disc[c] and dc != 0.0:
                    dc = 1.0
                if dc > my:
                    my = dc
            d_x[j] = mx
            d_y[j] = my
            d_j[j] = mx if mx > my else my
        d_x[i] = np.inf
        d_y[i] = np.inf
        d_j[i] = np.inf
        rho = np.partition(d_j, k - 1)[k - 1]
        if rho > 0.0:
            kt = k
        else:
            kt = 0
            for j in range(n):
                if d_j[j] == 0.0:
                    kt += 1
        cx = 0
        cy = 0
        for j in range(n):
            if d_x[j] <= rho:
                cx += 1
            if d_y[j] <= rho:
                cy += 1
        ktil[i] = kt
        nx[i] = cx
        ny[i] = cy
    return ktil, nx, ny


@njit(cache=True)
def ising_gibbs(nbr_idx, nbr_cnt, prob_up, state0, uniforms, burnin, thin, n_keep):
    n_sites = state0.shape[0]
    max_deg = nbr_idx.shape[1]
    state = state0.copy()
    out = np.empty((n_keep, n_sites), dtype=np.int64)
    sweep = 0
    for _ in range(burnin):
        for s in range(n_sites):
            h = 0
            for q in range(nbr_cnt[s]):
                h += state[nbr_idx[s, q]]
            state[s] = 1 if uniforms[sweep, s] < prob_up[h + max_deg] else -1
        sweep += 1
    for r in range(n_keep):
        for _ in range(thin):
            for s in range(n_sites):
                h = 0
                for q in range(nbr_cnt[s]):
                    h += state[nbr_idx[s, q]]
                state[s] = 1 if uniforms[sweep, s] < prob_up[h + max_deg] else -1
            sweep += 1
        for s in range(n_sites):
            out[r, s] = state[s]
    return out


__all__ = ["mixed_knn_stats", "ising_gibbs"]
