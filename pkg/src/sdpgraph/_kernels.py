"""Compiled coordinate-ascent sweeps.

Each sweep visits rows in ``order`` and replaces sigma[i] by the normalized
local field sum_{j != i} M_ij sigma_j.  Both kernels return the total
objective gain of the sweep and the smallest single-update gain.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def sweep_sparse(indptr, indices, data, c, sigma, total, order):
    # M = sparse(data) + c * 1 1^T, diagonal ignored; total = sum_j sigma_j.
    k = sigma.shape[1]
    field = np.empty(k)
    gain = 0.0
    min_step = np.inf
    for i in order:
        for t in range(k):
            field[t] = c * (total[t] - sigma[i, t])
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j == i:
                continue
            w = data[p]
            for t in range(k):
                field[t] += w * sigma[j, t]
        norm = 0.0
        old = 0.0
        for t in range(k):
            norm += field[t] * field[t]
            old += field[t] * sigma[i, t]
        norm = math.sqrt(norm)
        if norm == 0.0:
            step = 0.0
        else:
            for t in range(k):
                new = field[t] / norm
                total[t] += new - sigma[i, t]
                sigma[i, t] = new
            step = 2.0 * (norm - old)
        gain += step
        if step < min_step:
            min_step = step
    return gain, min_step


@njit(cache=True, nogil=True)
def sweep_dense(m, sigma, order):
    k = sigma.shape[1]
    gain = 0.0
    min_step = np.inf
    for i in order:
        field = np.dot(m[i], sigma)
        mii = m[i, i]
        norm = 0.0
        old = 0.0
        for t in range(k):
            field[t] -= mii * sigma[i, t]
            norm += field[t] * field[t]
            old += field[t] * sigma[i, t]
        norm = math.sqrt(norm)
        if norm == 0.0:
            step = 0.0
        else:
            for t in range(k):
                sigma[i, t] = field[t] / norm
            step = 2.0 * (norm - old)
        gain += step
        if step < min_step:
            min_step = step
    return gain, min_step
