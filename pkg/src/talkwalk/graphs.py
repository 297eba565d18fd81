"""Per-slot layered graphs over participant and talk nodes.

Node ids carry their kind as a prefix: ``p:<participant>``, ``t:<talk>`` and,
after merging, ``s:<session>``.  A talk node stands for the talk's presenter,
so contacts with a presenter of the slot attach to that presenter's talk nodes.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .text import cosine

LAYER_NAMES = ("cosine", "break", "presenter")
WEIGHT_MODES = ("duration", "binary")


def person(pid: str) -> str:
    return f"p:{pid}"


def talk(tid: str) -> str:
    return f"t:{tid}"


def session(sid: str) -> str:
    return f"s:{sid}"


def node_kind(node: str) -> str:
    return node[0]


def node_id(node: str) -> str:
    return node[2:]


@dataclass(frozen=True)
class Layer:
    name: str
    adj: dict[str, dict[str, float]]

    @classmethod
    def from_edges(cls, name, edges) -> Layer:
        """Build from ``(src, dst, weight)`` triples; parallel edges accumulate."""
        acc: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
        for u, v, w in edges:
            if w <= 0:
                raise ValueError(f"layer {name!r}: non-positive weight on {u}->{v}")
            acc[u][v] += w
        adj = {u: {v: acc[u][v] for v in sorted(acc[u])} for u in sorted(acc)}
        return cls(name, adj)

    def edges(self):
        for u, nbrs in self.adj.items():
            for v, w in nbrs.items():
                yield u, v, w

    def out_weight(self, node: str) -> float:
        return sum(self.adj.get(node, {}).values())

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.adj.values())


def _undirected(edges):
    for u, v, w in edges:
        yield u, v, w
        yield v, u, w


@dataclass(frozen=True)
class LayeredGraph:
    slot: str
    nodes: tuple[str, ...]
    layers: tuple[Layer, ...]

    def __post_init__(self):
        known = set(self.nodes)
        for layer in self.layers:
            for u, v, _ in layer.edges():
                if u not in known or v not in known:
                    raise ValueError(f"layer {layer.name!r}: edge {u}->{v} leaves the node set")

    def layer(self, name: str) -> Layer:
        for layer in self.layers:
            if layer.name == name:
                return layer
        raise KeyError(name)

    @property
    def layer_names(self) -> tuple[str, ...]:
        return tuple(layer.name for layer in self.layers)


def _presenter_nodes(schedule, slot_id):
    """Map a participant to the node(s) standing for them in this slot."""
    presenters = schedule.presenters(slot_id)

    def nodes_for(pid):
        if pid in presenters:
            return [talk(t) for t in presenters[pid]]
        return [person(pid)]

    return presenters, nodes_for


def _contact_edges(pairs, nodes_for, weight_mode):
    for (u, v), sec in sorted(pairs.items()):
        w = 1.0 if weight_mode == "binary" else float(sec)
        for a in nodes_for(u):
            for b in nodes_for(v):
                if a != b:
                    yield a, b, w


def build_cosine_layer(profiles, talk_vectors, schedule, slot_id) -> Layer:
    """Directed person -> talk edges weighted by interest/talk cosine similarity."""
    edges = []
    tids = schedule.slot_talks(slot_id)
    for pid in sorted(profiles):
        for tid in tids:
            sim = cosine(profiles[pid], talk_vectors[tid])
            if sim > 0:
                edges.append((person(pid), talk(tid), sim))
    return Layer.from_edges("cosine", edges)


def build_break_layer(contacts, schedule, slot_id, weight_mode="duration") -> Layer:
    """Undirected contacts during the break right before the slot."""
    if slot_id not in schedule.breaks:
        return Layer("break", {})
    b0, b1 = schedule.breaks[slot_id]
    _, nodes_for = _presenter_nodes(schedule, slot_id)
    pairs = contacts.overlap(b0, b1)
    return Layer.from_edges("break", _undirected(_contact_edges(pairs, nodes_for, weight_mode)))


def build_presenter_layer(contacts, schedule, slot_id, weight_mode="duration") -> Layer:
    """Undirected contacts with the slot's presenters that ended before the slot started."""
    presenters, nodes_for = _presenter_nodes(schedule, slot_id)
    start = schedule.slot(slot_id).start
    pairs = {k: s for k, s in contacts.aggregated(before=start).items()
             if k[0] in presenters or k[1] in presenters}
    return Layer.from_edges("presenter", _undirected(_contact_edges(pairs, nodes_for, weight_mode)))


def build_slot_graph(dataset, slot_id, profiles, talk_vectors, weight_mode="duration") -> LayeredGraph:
    if weight_mode not in WEIGHT_MODES:
        raise ValueError(f"weight mode must be one of {WEIGHT_MODES}")
    sched = dataset.schedule
    nodes = [person(p) for p in dataset.participants] + [talk(t) for t in sched.slot_talks(slot_id)]
    layers = (
        build_cosine_layer(profiles, talk_vectors, sched, slot_id),
        build_break_layer(dataset.contacts, sched, slot_id, weight_mode),
        build_presenter_layer(dataset.contacts, sched, slot_id, weight_mode),
    )
    return LayeredGraph(slot_id, tuple(sorted(nodes)), layers)


@dataclass(frozen=True)
class SessionMerge:
    mapping: dict[str, str]
    graph: LayeredGraph


def merge_sessions(graph: LayeredGraph, schedule) -> SessionMerge:
    """Collapse each session's talk nodes into one node with summed edge weights."""
    mapping = {}
    for n in graph.nodes:
        if node_kind(n) == "t":
            tid = node_id(n)
            if tid not in schedule.talks:
                raise KeyError(f"talk {tid!r} is not in any session")
            mapping[n] = session(schedule.talks[tid].session)

    def m(n):
        return mapping.get(n, n)

    layers = []
    for layer in graph.layers:
        edges = [(m(u), m(v), w) for u, v, w in layer.edges() if m(u) != m(v)]
        layers.append(Layer.from_edges(layer.name, edges))
    nodes = tuple(sorted({m(n) for n in graph.nodes}))
    return SessionMerge(mapping, LayeredGraph(graph.slot, nodes, tuple(layers)))


def edge_rows(graph: LayeredGraph):
    """Rows ``(slot, layer, src, dst, weight)`` for an edges.csv dump."""
    for layer in graph.layers:
        for u, v, w in layer.edges():
            yield graph.slot, layer.name, u, v, w
