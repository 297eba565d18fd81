# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk kernels.  Must stay behaviourally identical to _pykernels."""

import numpy as np

from libc.math cimport fabs


def rooted_power_iteration(const long long[:] indptr, const long long[:] indices, const double[:] data,
                           const double[:] dangling, double alpha, long long root, double tol,
                           long long max_iter):
    """Power iteration for pi <- (1-alpha) pi M + (alpha + (1-alpha) pi.d) e_root from a uniform start.

    Returns ``(pi, iterations, residual, converged)``.
    """
    cdef Py_ssize_t n = dangling.shape[0]
    cdef Py_ssize_t i, e
    cdef long long it = 0
    cdef double restart, mass, res = 0.0, total
    cdef bint converged = False
    pi_arr = np.full(n, 1.0 / n)
    new_arr = np.empty(n)
    cdef double[:] pi = pi_arr
    cdef double[:] new = new_arr
    cdef double[:] tmp
    with nogil:
        while it < max_iter:
            it += 1
            restart = 0.0
            for i in range(n):
                new[i] = 0.0
            for i in range(n):
                mass = pi[i]
                restart += mass * (alpha + (1.0 - alpha) * dangling[i])
                mass = mass * (1.0 - alpha)
                for e in range(indptr[i], indptr[i + 1]):
                    new[indices[e]] += mass * data[e]
            new[root] += restart
            res = 0.0
            for i in range(n):
                res += fabs(new[i] - pi[i])
            tmp = pi
            pi = new
            new = tmp
            if res < tol:
                converged = True
                break
        if converged:
            total = 0.0
            for i in range(n):
                total += pi[i]
            for i in range(n):
                pi[i] /= total
    return np.asarray(pi).copy(), it, res, converged


cdef inline Py_ssize_t _first_above(const double[:] a, Py_ssize_t lo, Py_ssize_t hi, double x) nogil:
    # first index in [lo, hi) with a[idx] > x, as bisect.bisect_right
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def simulate(const long long[:] indptr, const long long[:] indices, const double[:] cumw, long long n,
             const double[:] layer_cum, double alpha, long long root, long long current,
             const double[:] uniforms, long long skip, long long[:] counts):
    """Advance the hybrid walk one step per uniform triple; count visits after ``skip`` steps."""
    cdef Py_ssize_t steps = uniforms.shape[0] // 3
    cdef Py_ssize_t L = layer_cum.shape[0]
    cdef Py_ssize_t t, layer, r, lo, hi, k
    with nogil:
        for t in range(steps):
            if uniforms[3 * t] < alpha:
                current = root
            else:
                layer = _first_above(layer_cum, 0, L, uniforms[3 * t + 1])
                if layer >= L:
                    layer = L - 1
                r = layer * n + current
                lo = indptr[r]
                hi = indptr[r + 1]
                if lo == hi:
                    current = root
                else:
                    k = _first_above(cumw, lo, hi, uniforms[3 * t + 2])
                    if k >= hi:
                        k = hi - 1
                    current = indices[k]
            if t >= skip:
                counts[current] += 1
    return current
