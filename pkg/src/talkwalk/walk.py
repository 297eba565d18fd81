"""Stationary distributions of rooted, weighted rooted and hybrid rooted random walks.

The hybrid walk restarts at the root with probability ``alpha``; otherwise it
picks a layer according to the mixture and moves to a neighbour chosen
proportionally to edge weight, jumping to the root when the current node has
no out-edges in the chosen layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend

DEFAULT_ALPHA = 0.15
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
MC_CHUNK = 1 << 16


class ConvergenceError(RuntimeError):
    """Power iteration hit ``max_iter`` before the L1 change fell below ``tol``."""

    def __init__(self, last, residual, iterations):
        super().__init__(f"no convergence after {iterations} iterations (L1 change {residual:.3g})")
        self.last = last
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class WalkConfig:
    alpha: float = DEFAULT_ALPHA
    mixture: tuple[float, ...] = (1.0,)
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        mix = tuple(float(p) for p in self.mixture)
        object.__setattr__(self, "mixture", mix)
        if any(p < 0 for p in mix):
            raise ValueError("mixture probabilities must be non-negative")
        if abs(math.fsum(mix) - 1.0) > 1e-12:
            raise ValueError(f"mixture must sum to 1, got {math.fsum(mix)!r}")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter at least 1")


@dataclass
class StationaryDistribution:
    nodes: tuple[str, ...]
    probs: np.ndarray
    iterations: int = 0
    residual: float = 0.0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {n: i for i, n in enumerate(self.nodes)}

    def __getitem__(self, node: str) -> float:
        return float(self.probs[self._index[node]])

    def as_dict(self) -> dict[str, float]:
        return {n: float(p) for n, p in zip(self.nodes, self.probs)}


class MixtureOperator:
    """Root-independent part of the hybrid transition.

    ``M[c, n] = sum_i p_i w_i(c, n) / sum_d w_i(c, d)`` over layers where ``c``
    has out-edges, and ``dangling[c] = sum_i p_i`` over layers where it has none.
    """

    def __init__(self, graph, mixture):
        mixture = tuple(float(p) for p in mixture)
        if len(mixture) != len(graph.layers):
            raise ValueError(f"mixture has {len(mixture)} entries for {len(graph.layers)} layers")
        self.graph = graph
        self.mixture = mixture
        self.nodes = graph.nodes
        self.index = {v: i for i, v in enumerate(self.nodes)}
        n = len(self.nodes)
        rows: list[dict[int, float]] = [dict() for _ in range(n)]
        dangling = np.zeros(n)
        for p, layer in zip(mixture, graph.layers):
            if p == 0:
                continue
            for c in range(n):
                nbrs = layer.adj.get(self.nodes[c])
                if not nbrs:
                    dangling[c] += p
                    continue
                total = math.fsum(nbrs.values())
                row = rows[c]
                for v, w in nbrs.items():
                    j = self.index[v]
                    row[j] = row.get(j, 0.0) + p * (w / total)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices, data = [], []
        for c, row in enumerate(rows):
            for j in sorted(row):
                indices.append(j)
                data.append(row[j])
            indptr[c + 1] = len(indices)
        self.indptr = indptr
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = np.asarray(data, dtype=np.float64)
        self.dangling = dangling

    def rooted(self, root: str, alpha: float) -> Transition:
        if root not in self.index:
            raise KeyError(f"root {root!r} is not a node of the graph")
        return Transition(self, self.index[root], alpha)


@dataclass(frozen=True)
class Transition:
    """Row-stochastic hybrid transition ``T = (1-alpha) M + (alpha + (1-alpha) d) e_root``."""

    operator: MixtureOperator
    root: int
    alpha: float

    @property
    def nodes(self):
        return self.operator.nodes

    def matrix(self) -> np.ndarray:
        op = self.operator
        n = len(op.nodes)
        t = np.zeros((n, n))
        for c in range(n):
            lo, hi = op.indptr[c], op.indptr[c + 1]
            t[c, op.indices[lo:hi]] = (1 - self.alpha) * op.data[lo:hi]
        t[:, self.root] += self.alpha + (1 - self.alpha) * op.dangling
        return t

    def row(self, node: str) -> dict[str, float]:
        m = self.matrix()[self.operator.index[node]]
        return {self.nodes[j]: float(m[j]) for j in np.flatnonzero(m)}


def hybrid_transition(graph, root: str, config: WalkConfig) -> Transition:
    return MixtureOperator(graph, config.mixture).rooted(root, config.alpha)


def stationary(transition: Transition, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               kernels=None) -> StationaryDistribution:
    """Power iteration from the uniform distribution until the L1 change drops below ``tol``."""
    k = _backend.kernels if kernels is None else kernels
    op = transition.operator
    pi, iters, res, ok = k.rooted_power_iteration(
        op.indptr, op.indices, op.data, op.dangling, float(transition.alpha),
        int(transition.root), float(tol), int(max_iter))
    if not ok:
        raise ConvergenceError(pi, res, iters)
    return StationaryDistribution(op.nodes, pi, iters, res)


def hrpr_score(graph, root: str, targets, config: WalkConfig, operator: MixtureOperator | None = None,
               kernels=None) -> dict[str, float]:
    """Stationary probability of each target under the hybrid walk rooted at ``root``."""
    op = MixtureOperator(graph, config.mixture) if operator is None else operator
    dist = stationary(op.rooted(root, config.alpha), config.tol, config.max_iter, kernels)
    return {t: dist[t] for t in targets}


def monte_carlo_stationary(graph, root: str, config: WalkConfig, steps: int, seed: int,
                           kernels=None) -> StationaryDistribution:
    """Visit frequencies of one simulated hybrid walk started at the root, after a 1% burn-in."""
    if steps < 1:
        raise ValueError("steps must be positive")
    k = _backend.kernels if kernels is None else kernels
    nodes = graph.nodes
    index = {v: i for i, v in enumerate(nodes)}
    if root not in index:
        raise KeyError(f"root {root!r} is not a node of the graph")
    n = len(nodes)
    if len(config.mixture) != len(graph.layers):
        raise ValueError("mixture length must equal the number of layers")
    indptr = [0]
    indices, cumw = [], []
    for layer in graph.layers:
        for v in nodes:
            nbrs = layer.adj.get(v, {})
            total = math.fsum(nbrs.values())
            acc = 0.0
            for u, w in nbrs.items():
                acc += w
                indices.append(index[u])
                cumw.append(acc / total)
            if nbrs:
                cumw[-1] = 1.0
            indptr.append(len(indices))
    layer_cum = np.cumsum(config.mixture)
    last = max(i for i, p in enumerate(config.mixture) if p > 0)
    layer_cum[last:] = 1.0
    arrays = (np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64),
              np.asarray(cumw, dtype=np.float64))
    rng = np.random.default_rng(seed)
    counts = np.zeros(n, dtype=np.int64)
    burn = steps // 100
    current = index[root]
    done = 0
    while done < steps:
        chunk = min(MC_CHUNK, steps - done)
        uniforms = rng.random(3 * chunk)
        skip = max(0, burn - done)
        current = k.simulate(*arrays, n, layer_cum, float(config.alpha), index[root], current,
                             uniforms, skip, counts)
        done += chunk
    freq = counts / counts.sum()
    return StationaryDistribution(nodes, freq, steps, 0.0)


def weighted_rooted_pagerank(nodes, edges, root: str, alpha: float = DEFAULT_ALPHA,
                             tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> dict[str, float]:
    """Single-network rooted PageRank with weight-proportional neighbour choice.

    Dense power iteration, independent of the hybrid kernels.  Nodes without
    out-edges send all their mass to the root.
    """
    nodes = list(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    w = np.zeros((n, n))
    for u, v, wt in edges:
        w[idx[u], idx[v]] += wt
    out = w.sum(axis=1)
    t = np.zeros((n, n))
    has = out > 0
    t[has] = (1 - alpha) * w[has] / out[has, None]
    t[:, idx[root]] += alpha
    t[~has, idx[root]] += 1 - alpha
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        new = pi @ t
        if np.abs(new - pi).sum() < tol:
            pi = new
            break
        pi = new
    else:
        raise ConvergenceError(pi, float(np.abs(pi @ t - pi).sum()), max_iter)
    pi = pi / pi.sum()
    return {v: float(pi[i]) for i, v in enumerate(nodes)}


def rooted_pagerank(nodes, neighbours: dict, root: str, alpha: float = DEFAULT_ALPHA, **kw) -> dict[str, float]:
    """Unweighted rooted PageRank: uniform choice among the current node's neighbours."""
    edges = [(u, v, 1.0) for u, vs in neighbours.items() for v in vs]
    return weighted_rooted_pagerank(nodes, edges, root, alpha, **kw)
