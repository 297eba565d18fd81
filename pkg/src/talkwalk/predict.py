"""Attendance decisions from baselines, cosine interest models and hybrid rooted PageRank.

One decision is made for every (participant, slot, position) at which the
participant attended one of the parallel talks.  Every candidate talk gets a
raw score; the highest wins, ties going to the lexicographically smallest id.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import graphs as G
from .text import cosine
from .walk import MixtureOperator, WalkConfig, stationary

log = logging.getLogger(__name__)

COSINE_MODES = ("talk-wise", "session-max", "session-avg")


@dataclass(frozen=True)
class Decision:
    participant: str
    slot: str
    position: int
    scores: dict[str, float]
    predicted: str
    tie: bool
    attended: str

    @property
    def normalized(self) -> dict[str, float]:
        total = math.fsum(self.scores.values())
        if total <= 0:
            return {t: 0.0 for t in self.scores}
        return {t: s / total for t, s in self.scores.items()}

    @property
    def correct(self) -> bool:
        return self.predicted == self.attended


def decide(participant, slot, position, scores: dict[str, float], attended: str) -> Decision:
    best = max(scores.values())
    top = sorted(t for t, s in scores.items() if s == best)
    return Decision(participant, slot, position, dict(scores), top[0], len(top) > 1, attended)


@dataclass(frozen=True)
class Case:
    participant: str
    slot: str
    position: int
    candidates: tuple[str, ...]
    attended: str


def decision_cases(dataset, participants=None, slots=None) -> list[Case]:
    """Every attended (participant, slot, position) that has at least two parallel talks."""
    sched = dataset.schedule
    keep = None if participants is None else set(participants)
    wanted = None if slots is None else set(slots)
    out = []
    for (p, slot, pos), attended in sorted(dataset.attendance.index.items()):
        if keep is not None and p not in keep:
            continue
        if wanted is not None and slot not in wanted:
            continue
        cands = sched.talks_at(slot, pos)
        if len(cands) < 2:
            continue
        out.append(Case(p, slot, pos, tuple(cands), attended))
    return out


# -- baselines ---------------------------------------------------------------

def baseline_majority(dataset) -> list[Decision]:
    """Pick the talk whose track had more accepted papers; the same for everyone."""
    sched = dataset.schedule
    out = []
    for c in decision_cases(dataset):
        scores = {}
        for t in c.candidates:
            track = sched.talks[t].track
            if track not in sched.tracks:
                raise KeyError(f"no accepted-paper count for track {track!r}")
            scores[t] = float(sched.tracks[track])
        out.append(decide(c.participant, c.slot, c.position, scores, c.attended))
    return out


def baseline_room(dataset) -> list[Decision]:
    """Predict the room of each participant's first attended talk.

    The slot holding that first talk is not scored: later talks of the same
    session would be correct by construction.
    """
    sched = dataset.schedule
    order = {s.id: (s.start, i) for i, s in enumerate(sched.slots)}
    first: dict[str, tuple] = {}
    for (p, slot, pos), talk in dataset.attendance.index.items():
        key = (order[slot], pos)
        if p not in first or key < first[p][0]:
            first[p] = (key, slot, pos, sched.sessions[sched.talks[talk].session].room)
    out = []
    for c in decision_cases(dataset):
        _, slot0, pos0, room = first[c.participant]
        if c.slot == slot0:
            continue
        rooms = {t: sched.sessions[sched.talks[t].session].room for t in c.candidates}
        if room not in rooms.values():
            raise ValueError(f"slot {c.slot!r} position {c.position} has no talk in room {room!r}")
        scores = {t: 1.0 if r == room else 0.0 for t, r in rooms.items()}
        out.append(decide(c.participant, c.slot, c.position, scores, c.attended))
    return out


# -- cosine ------------------------------------------------------------------

def cosine_predict(dataset, profiles, talk_vectors, slot_id, mode="talk-wise") -> list[Decision]:
    """Cosine interest predictor for one slot, restricted to participants with a profile.

    ``talk-wise`` scores each talk by its own similarity; the session modes give
    every talk the maximum or mean similarity over its whole session.
    """
    if mode not in COSINE_MODES:
        raise ValueError(f"mode must be one of {COSINE_MODES}")
    sched = dataset.schedule
    out = []
    for c in decision_cases(dataset, participants=profiles, slots=[slot_id]):
        prof = profiles[c.participant]
        sims = {t: cosine(prof, talk_vectors[t]) for t in sched.slot_talks(slot_id)}
        if mode == "talk-wise":
            scores = {t: sims[t] for t in c.candidates}
        else:
            agg = max if mode == "session-max" else (lambda xs: math.fsum(xs) / len(xs))
            scores = {}
            for t in c.candidates:
                members = sched.sessions[sched.talks[t].session].talk_ids
                scores[t] = agg([sims[m] for m in members])
        out.append(decide(c.participant, c.slot, c.position, scores, c.attended))
    return out


def cosine_predict_all(dataset, profiles, talk_vectors, mode="talk-wise") -> list[Decision]:
    return [d for s in dataset.schedule.slots
            for d in cosine_predict(dataset, profiles, talk_vectors, s.id, mode)]


# -- hybrid rooted PageRank --------------------------------------------------

class SlotGraphs:
    """Lazily built per-slot layered graphs, plain and session-merged."""

    def __init__(self, dataset, profiles, talk_vectors, weight_mode="duration"):
        self.dataset = dataset
        self.profiles = profiles
        self.talk_vectors = talk_vectors
        self.weight_mode = weight_mode
        self._cache = {}

    def get(self, slot_id, merged=False):
        key = (slot_id, merged)
        if key not in self._cache:
            if merged:
                self._cache[key] = G.merge_sessions(self.get(slot_id), self.dataset.schedule).graph
            else:
                self._cache[key] = G.build_slot_graph(self.dataset, slot_id, self.profiles,
                                                      self.talk_vectors, self.weight_mode)
        return self._cache[key]

    def build_all(self, merged=False):
        for s in self.dataset.schedule.slots:
            self.get(s.id, merged)
        return self


def default_population(dataset, profiles, config: WalkConfig):
    """Participants with a profile when the cosine layer is used, everyone otherwise."""
    if config.mixture[G.LAYER_NAMES.index("cosine")] > 0:
        return sorted(profiles)
    return None


def hrpr_predict(dataset, slot_id, config: WalkConfig, merged=False, *, graphs: SlotGraphs | None = None,
                 profiles=None, talk_vectors=None, weight_mode="duration", participants=None,
                 kernels=None) -> list[Decision]:
    """Score each parallel talk by the hybrid walk rooted at the participant.

    With ``merged`` the talks of a session share their session node's score.
    ``config.mixture`` follows the layer order (cosine, break, presenter).
    """
    if graphs is None:
        graphs = SlotGraphs(dataset, profiles or {}, talk_vectors or {}, weight_mode)
    if participants is None:
        participants = default_population(dataset, graphs.profiles, config)
    graph = graphs.get(slot_id, merged)
    sched = dataset.schedule
    op = MixtureOperator(graph, config.mixture)
    cases = decision_cases(dataset, participants=participants, slots=[slot_id])
    dists = {}
    out = []
    for c in cases:
        if c.participant not in dists:
            dists[c.participant] = stationary(op.rooted(G.person(c.participant), config.alpha),
                                              config.tol, config.max_iter, kernels)
        dist = dists[c.participant]
        if merged:
            scores = {t: dist[G.session(sched.talks[t].session)] for t in c.candidates}
        else:
            scores = {t: dist[G.talk(t)] for t in c.candidates}
        out.append(decide(c.participant, c.slot, c.position, scores, c.attended))
    return out


def hrpr_predict_all(dataset, config: WalkConfig, merged=False, *, graphs: SlotGraphs, participants=None,
                     kernels=None) -> list[Decision]:
    return [d for s in dataset.schedule.slots
            for d in hrpr_predict(dataset, s.id, config, merged, graphs=graphs,
                                  participants=participants, kernels=kernels)]


@dataclass(frozen=True)
class SweepPoint:
    p_cosine: float
    p_presenter: float
    p_break: float
    auc: float
    accuracy: float


def simplex_grid(step=0.1) -> list[tuple[float, float, float]]:
    """All ``(p_cosine, p_presenter, p_break)`` on the step grid summing to one."""
    k = round(1 / step)
    if k < 1 or abs(k * step - 1) > 1e-9:
        raise ValueError(f"step {step} does not divide 1 evenly")
    return [(a / k, b / k, (k - a - b) / k) for a in range(k + 1) for b in range(k + 1 - a)]


def mixture_for(p_cosine, p_presenter, p_break) -> tuple[float, float, float]:
    """Reorder named probabilities into layer order."""
    by_name = {"cosine": p_cosine, "break": p_break, "presenter": p_presenter}
    return tuple(by_name[n] for n in G.LAYER_NAMES)


def thread_count() -> int:
    cap = os.environ.get("TALKWALK_THREADS")
    n = min(4, os.cpu_count() or 1)
    return max(1, min(n, int(cap))) if cap else n


def sweep(dataset, alpha, merged=False, step=0.1, *, graphs: SlotGraphs, tol=1e-10, max_iter=100_000,
          threads=None, kernels=None) -> list[SweepPoint]:
    """Evaluate HRPR at every mixture on the simplex grid, ordered by (p_cosine, p_presenter)."""
    from .evaluation import accuracy_ci, auc

    graphs.build_all(merged)
    grid = simplex_grid(step)

    def run(point):
        cfg = WalkConfig(alpha, mixture_for(*point), tol, max_iter)
        decisions = hrpr_predict_all(dataset, cfg, merged, graphs=graphs, kernels=kernels)
        acc, _ = accuracy_ci(decisions)
        return SweepPoint(*point, auc(decisions), acc)

    n = thread_count() if threads is None else threads
    if n <= 1:
        return [run(p) for p in grid]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(run, grid))
