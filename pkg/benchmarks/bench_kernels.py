"""Time the compiled and pure-Python walk kernels on the same inputs.

    python benchmarks/bench_kernels.py [--nodes 120] [--steps 1000000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from talkwalk import _backend
from talkwalk.graphs import Layer, LayeredGraph
from talkwalk.walk import MixtureOperator, WalkConfig, monte_carlo_stationary, stationary


def conference_like_graph(n, seed=0):
    rng = np.random.default_rng(seed)
    nodes = tuple(f"v{i}" for i in range(n))
    layers = []
    for k, density in enumerate((0.15, 0.05, 0.03)):
        edges = [(nodes[i], nodes[j], float(rng.uniform(20, 600)))
                 for i in range(n) for j in range(n) if i != j and rng.random() < density]
        layers.append(Layer.from_edges(f"L{k}", edges))
    return LayeredGraph("S", nodes, tuple(layers))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=120)
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    g = conference_like_graph(args.nodes)
    cfg = WalkConfig(0.15, (0.4, 0.3, 0.3))
    op = MixtureOperator(g, cfg.mixture)
    roots = g.nodes[:20]
    backends = _backend.available()
    print(f"graph: {len(g.nodes)} nodes, {sum(l.edge_count for l in g.layers)} edges in 3 layers")
    print(f"backends available: {', '.join(backends)}")
    results = {}
    for name in backends:
        k = _backend.load(name)
        solve = min(timeit.repeat(lambda: [stationary(op.rooted(r, cfg.alpha), kernels=k) for r in roots],
                                  number=1, repeat=args.repeat)) / len(roots)
        walk = min(timeit.repeat(lambda: monte_carlo_stationary(g, g.nodes[0], cfg, args.steps, seed=1, kernels=k),
                                 number=1, repeat=max(1, args.repeat // 2)))
        results[name] = (solve, walk)
        print(f"{name:>7}: power iteration {solve * 1e3:8.3f} ms/root   "
              f"Monte Carlo {args.steps:,} steps {walk:7.3f} s")
    if len(results) == 2:
        (cs, cw), (ps, pw) = results["cython"], results["python"]
        print(f"speed-up: power iteration x{ps / cs:.1f}, Monte Carlo x{pw / cw:.1f}")
        a = [stationary(op.rooted(r, cfg.alpha), kernels=_backend.load(n)).probs for n in ("cython", "python")
             for r in roots[:1]]
        print(f"max |difference| of stationary vectors: {np.max(np.abs(a[0] - a[1])):.2e}")


if __name__ == "__main__":
    main()
