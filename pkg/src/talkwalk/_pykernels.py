"""Pure-Python walk kernels, used when the compiled extension is unavailable."""

from bisect import bisect_right

import numpy as np
from scipy.sparse import csr_matrix


def rooted_power_iteration(indptr, indices, data, dangling, alpha, root, tol, max_iter):
    n = len(dangling)
    mt = csr_matrix((data, indices, indptr), shape=(n, n)).T.tocsr()
    restart = alpha + (1.0 - alpha) * np.asarray(dangling)
    pi = np.full(n, 1.0 / n)
    res = 0.0
    for it in range(1, max_iter + 1):
        new = (1.0 - alpha) * (mt @ pi)
        new[root] += restart @ pi
        res = float(np.abs(new - pi).sum())
        pi = new
        if res < tol:
            return pi / pi.sum(), it, res, True
    return pi, max_iter, res, False


def simulate(indptr, indices, cumw, n, layer_cum, alpha, root, current, uniforms, skip, counts):
    indptr = indptr.tolist()
    indices = indices.tolist()
    cumw = cumw.tolist()
    layer_cum = layer_cum.tolist()
    u = uniforms.tolist()
    n_layers = len(layer_cum)
    for t in range(len(u) // 3):
        if u[3 * t] < alpha:
            current = root
        else:
            layer = min(bisect_right(layer_cum, u[3 * t + 1]), n_layers - 1)
            r = layer * n + current
            lo, hi = indptr[r], indptr[r + 1]
            if lo == hi:
                current = root
            else:
                k = min(bisect_right(cumw, u[3 * t + 2], lo, hi), hi - 1)
                current = indices[k]
        if t >= skip:
            counts[current] += 1
    return current
