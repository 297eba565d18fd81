import math
from types import SimpleNamespace

import numpy as np
import pytest

from talkwalk import graphs as G
from talkwalk.graphs import Layer, LayeredGraph, build_slot_graph, edge_rows, merge_sessions
from talkwalk.text import build_vectors
from talkwalk.walk import MixtureOperator

from conftest import random_mixture


def slot_graph(ds, slot, weight_mode="duration"):
    profiles, talks = build_vectors(ds.corpus, ds.schedule)
    return build_slot_graph(ds, slot, profiles, talks, weight_mode)


class TestLayers:
    def test_parallel_edges_accumulate(self):
        layer = Layer.from_edges("x", [("a", "b", 1.0), ("a", "b", 2.5), ("b", "a", 1.0)])
        assert layer.adj == {"a": {"b": 3.5}, "b": {"a": 1.0}}
        assert layer.edge_count == 2
        assert layer.out_weight("a") == 3.5
        assert layer.out_weight("zz") == 0

    def test_non_positive_weight_rejected(self):
        with pytest.raises(ValueError):
            Layer.from_edges("x", [("a", "b", 0.0)])

    def test_edge_outside_node_set(self):
        with pytest.raises(ValueError, match="leaves the node set"):
            LayeredGraph("S", ("a",), (Layer.from_edges("x", [("a", "b", 1.0)]),))


class TestSlotGraph:
    def test_layer_order_and_nodes(self, dataset):
        g = slot_graph(dataset, "S1")
        assert g.layer_names == G.LAYER_NAMES
        assert "t:a1" in g.nodes and "t:c1" not in g.nodes
        assert "p:u1" in g.nodes and "p:p6" in g.nodes

    def test_break_layer_maps_presenters_to_talks(self, dataset):
        assert slot_graph(dataset, "S1").layer("break").adj == {
            "p:u1": {"t:a1": 80.0}, "p:u2": {"t:b1": 60.0}, "t:a1": {"p:u1": 80.0}, "t:b1": {"p:u2": 60.0}}
        assert slot_graph(dataset, "S2").layer("break").adj == {
            "p:u1": {"p:u3": 80.0}, "p:u3": {"p:u1": 80.0}, "p:u2": {"t:d2": 60.0}, "t:d2": {"p:u2": 60.0}}

    def test_presenter_layer_uses_prior_contacts(self, dataset):
        adj = slot_graph(dataset, "S2").layer("presenter").adj
        assert adj["p:u1"] == {"t:c1": 80.0}
        assert adj["p:u2"] == {"t:d1": 60.0, "t:d2": 60.0}
        assert "p:u3" not in adj

    def test_binary_weights(self, dataset):
        adj = slot_graph(dataset, "S2", "binary").layer("presenter").adj
        assert adj["p:u2"] == {"t:d1": 1.0, "t:d2": 1.0}

    def test_unknown_weight_mode(self, dataset):
        with pytest.raises(ValueError):
            slot_graph(dataset, "S1", "log")

    def test_cosine_layer_is_person_to_talk(self, dataset):
        layer = slot_graph(dataset, "S1").layer("cosine")
        for u, v, w in layer.edges():
            assert G.node_kind(u) == "p" and G.node_kind(v) == "t"
            assert 0 < w <= 1
        assert layer.adj["p:u1"]["t:a1"] > layer.adj["p:u1"].get("t:b1", 0)

    def test_contact_layers_symmetric(self, dataset):
        for slot in ("S1", "S2"):
            g = slot_graph(dataset, slot)
            for name in ("break", "presenter"):
                adj = g.layer(name).adj
                for u, v, w in g.layer(name).edges():
                    assert adj[v][u] == w

    def test_edge_rows(self, dataset):
        rows = list(edge_rows(slot_graph(dataset, "S1")))
        assert ("S1", "break", "p:u1", "t:a1", 80.0) in rows


class TestMerge:
    def test_fixture_merge(self, dataset):
        m = merge_sessions(slot_graph(dataset, "S2"), dataset.schedule)
        assert m.mapping == {"t:c1": "s:C", "t:c2": "s:C", "t:d1": "s:D", "t:d2": "s:D"}
        assert m.graph.layer("presenter").adj["p:u2"] == {"s:D": 120.0}
        assert not any(G.node_kind(n) == "t" for n in m.graph.nodes)

    def test_conservation_random(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            n_talks, n_people = int(rng.integers(2, 7)), int(rng.integers(1, 6))
            talks = [f"t:x{i}" for i in range(n_talks)]
            sess = {f"x{i}": SimpleNamespace(session=f"S{int(rng.integers(0, 3))}") for i in range(n_talks)}
            nodes = tuple(sorted(talks + [f"p:q{i}" for i in range(n_people)]))
            layers = []
            for li in range(int(rng.integers(1, 4))):
                # dyadic weights keep every partial sum exact
                edges = [(u, v, int(rng.integers(1, 64)) / 4) for u in nodes for v in nodes
                         if u != v and rng.random() < 0.4]
                layers.append(Layer.from_edges(f"L{li}", edges))
            g = LayeredGraph("S", nodes, tuple(layers))
            merged = merge_sessions(g, SimpleNamespace(talks=sess))
            m = lambda x: merged.mapping.get(x, x)
            for before, after in zip(g.layers, merged.graph.layers):
                cross = sum(w for u, v, w in before.edges() if m(u) != m(v))
                assert sum(w for _, _, w in after.edges()) == cross
                for u, v, w in after.edges():
                    assert w == sum(x for a, b, x in before.edges() if m(a) == u and m(b) == v)
            mix = random_mixture(rng, len(layers))
            op = MixtureOperator(merged.graph, mix)
            root = merged.graph.nodes[0]
            t = op.rooted(root, 0.15).matrix()
            assert np.all(np.abs(t.sum(axis=1) - 1) < 1e-12)
            assert np.all(t >= 0)

    def test_unknown_talk(self):
        g = LayeredGraph("S", ("t:zz",), (Layer("x", {}),))
        with pytest.raises(KeyError):
            merge_sessions(g, SimpleNamespace(talks={}))
