import json
import os

import numpy as np
import pytest

from talkwalk import _backend
from talkwalk.dataset import (AttendanceTable, ContactLog, Corpus, Dataset, Schedule, Session, Talk,
                              TimeSlot)
from talkwalk.graphs import Layer, LayeredGraph


def small_schedule():
    """Two slots of two parallel two-talk sessions; a break before each slot."""
    slots = (TimeSlot("S1", 1000, 1600, ("A", "B")), TimeSlot("S2", 2000, 2600, ("C", "D")))
    sessions = {
        "A": Session("A", "R1", "S1", ("a1", "a2")),
        "B": Session("B", "R2", "S1", ("b1", "b2")),
        "C": Session("C", "R1", "S2", ("c1", "c2")),
        "D": Session("D", "R2", "S2", ("d1", "d2")),
    }
    topics = {"A": "graph walk rank", "B": "protein folding cell", "C": "graph network rank",
              "D": "cell biology enzyme"}
    presenters = {"a1": "p1", "a2": "p2", "b1": "p3", "b2": "p4",
                  "c1": "p1", "c2": "p5", "d1": "p3", "d2": "p6"}
    talks = {}
    for sid, sess in sessions.items():
        for tid in sess.talk_ids:
            talks[tid] = Talk(tid, f"{topics[sid]} title", f"{topics[sid]} abstract {tid}",
                              f"{topics[sid]} full text", presenters[tid], "web" if sid in "AC" else "bio", sid)
    breaks = {"S1": (800, 1000), "S2": (1600, 2000)}
    return Schedule(slots, sessions, talks, {"web": 20, "bio": 12}, breaks)


def small_dataset():
    sched = small_schedule()
    records = [
        ("u1", "a1"), ("u1", "a2"), ("u1", "c1"), ("u1", "c2"),
        ("u2", "b1"), ("u2", "b2"), ("u2", "d1"), ("u2", "d2"),
        ("u3", "a1"), ("u3", "b2"), ("u3", "c1"),
        ("p1", "a1"), ("p1", "a2"), ("p3", "b1"), ("p3", "b2"),
    ]
    contacts = ContactLog.from_rows([
        ("u1", "p1", 820, 900),
        ("u2", "p3", 850, 910),
        ("u1", "u3", 1620, 1700),
        ("u2", "u3", 300, 400),
        ("u2", "p6", 1700, 1760),
    ])
    corpus = Corpus({
        "u1": (("d1", "random walk rank graph network"),),
        "u2": (("d1", "protein cell enzyme folding"), ("d2", "cell biology")),
        "u3": (("d1", "graph cell"),),
    }, cutoff=sched.start)
    attendance = AttendanceTable.from_records(records, sched)
    return Dataset(sched, attendance, contacts, corpus)


@pytest.fixture
def dataset():
    return small_dataset()


@pytest.fixture(params=_backend.available())
def kernels(request):
    return _backend.load(request.param)


def random_layered_graph(rng, n_nodes=None, n_layers=None, density=0.35):
    n = int(rng.integers(2, 11)) if n_nodes is None else n_nodes
    k = int(rng.integers(1, 4)) if n_layers is None else n_layers
    nodes = tuple(f"v{i}" for i in range(n))
    layers = []
    for li in range(k):
        edges = [(nodes[i], nodes[j], float(rng.uniform(0.1, 5.0)))
                 for i in range(n) for j in range(n) if i != j and rng.random() < density]
        layers.append(Layer.from_edges(f"L{li}", edges))
    return LayeredGraph("S", nodes, tuple(layers))


def random_mixture(rng, k):
    p = rng.dirichlet(np.ones(k))
    p[-1] = 1.0 - p[:-1].sum()
    return tuple(float(x) for x in p)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
