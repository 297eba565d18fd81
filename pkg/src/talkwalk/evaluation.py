"""Accuracy, AUC and influence-factor analyses."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

Z95 = 1.959963984540054
DEFAULT_THRESHOLDS = (20, 40, 80, 160, 320, 640, 1280)


def proportion_ci(k: int, n: int) -> tuple[float, float, float]:
    """Proportion with a clamped normal-approximation 95% interval."""
    if n <= 0:
        raise ValueError("empty sample")
    p = k / n
    half = Z95 * math.sqrt(p * (1 - p) / n)
    return p, max(0.0, p - half), min(1.0, p + half)


def accuracy_ci(decisions) -> tuple[float, tuple[float, float]]:
    decisions = list(decisions)
    if not decisions:
        raise ValueError("no decisions to evaluate")
    p, lo, hi = proportion_ci(sum(d.correct for d in decisions), len(decisions))
    return p, (lo, hi)


def expand(decisions) -> tuple[np.ndarray, np.ndarray]:
    """Normalized scores of attended (positive) and non-attended (negative) candidates."""
    pos, neg = [], []
    for d in decisions:
        for t, s in d.normalized.items():
            (pos if t == d.attended else neg).append(s)
    return np.asarray(pos, dtype=float), np.asarray(neg, dtype=float)


def mann_whitney_auc(pos, neg) -> float:
    """Fraction of (positive, negative) pairs ranked correctly, ties counting one half."""
    pos = np.asarray(pos, dtype=float)
    neg = np.asarray(neg, dtype=float)
    if pos.size == 0 or neg.size == 0:
        raise ValueError("AUC needs at least one positive and one negative")
    ranks = rankdata(np.concatenate([pos, neg]))
    u = ranks[: pos.size].sum() - pos.size * (pos.size + 1) / 2
    return float(u / (pos.size * neg.size))


def roc_curve(pos, neg) -> tuple[np.ndarray, np.ndarray]:
    """ROC points obtained by lowering the threshold through every distinct score."""
    pos = np.sort(np.asarray(pos, dtype=float))
    neg = np.sort(np.asarray(neg, dtype=float))
    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    tp = pos.size - np.searchsorted(pos, thresholds, side="left")
    fp = neg.size - np.searchsorted(neg, thresholds, side="left")
    fpr = np.concatenate([[0.0], fp / neg.size])
    tpr = np.concatenate([[0.0], tp / pos.size])
    return fpr, tpr


def roc_auc_trapezoid(pos, neg) -> float:
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("AUC needs at least one positive and one negative")
    fpr, tpr = roc_curve(pos, neg)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2))


def auc(decisions) -> float:
    pos, neg = expand(decisions)
    return mann_whitney_auc(pos, neg)


@dataclass
class EvaluationReport:
    accuracy: float
    accuracy_ci: tuple[float, float]
    auc: float
    decision_count: int
    tie_count: int
    population: str
    participant_count: int


def evaluate(decisions, population: str = "") -> EvaluationReport:
    decisions = list(decisions)
    acc, ci = accuracy_ci(decisions)
    return EvaluationReport(
        accuracy=acc,
        accuracy_ci=ci,
        auc=auc(decisions),
        decision_count=len(decisions),
        tie_count=sum(d.tie for d in decisions),
        population=population,
        participant_count=len({d.participant for d in decisions}),
    )


# -- influence factors -------------------------------------------------------

@dataclass
class InfluenceRow:
    key: str
    probability: float | None
    ci_lo: float | None
    ci_hi: float | None
    n: int


def _row(key, hits, n) -> InfluenceRow:
    if n == 0:
        return InfluenceRow(key, None, None, None, 0)
    p, lo, hi = proportion_ci(hits, n)
    return InfluenceRow(key, p, lo, hi, n)


SAME_TALK_CATEGORIES = ("coffee_break_contact", "prior_contact", "contact_by_end", "no_contact")


def influence_same_talk(dataset) -> list[InfluenceRow]:
    """P(two participants attend the same talk) by their contact history.

    The universe is every unordered pair of participants attending some talk at
    the same (slot, position).  Categories: contact during the break before the
    slot, any contact ending before the slot starts, any contact at all, and no
    contact ever.  Only the last is disjoint from the others.
    """
    sched = dataset.schedule
    contacts = dataset.contacts
    ever = set(contacts.aggregated())
    prior_by_slot = {s.id: set(contacts.aggregated(before=s.start)) for s in sched.slots}
    break_by_slot = {s.id: set(contacts.overlap(*sched.breaks[s.id])) if s.id in sched.breaks else set()
                     for s in sched.slots}
    hits = defaultdict(int)
    n = defaultdict(int)
    for (slot, _pos), who in sorted(dataset.attendance.by_time().items()):
        people = sorted(who)
        for i, a in enumerate(people):
            for b in people[i + 1:]:
                same = who[a] == who[b]
                pair = (a, b)
                cats = []
                if pair in break_by_slot[slot]:
                    cats.append("coffee_break_contact")
                if pair in prior_by_slot[slot]:
                    cats.append("prior_contact")
                if pair in ever:
                    cats.append("contact_by_end")
                else:
                    cats.append("no_contact")
                for cat in cats:
                    n[cat] += 1
                    hits[cat] += same
    return [_row(cat, hits[cat], n[cat]) for cat in SAME_TALK_CATEGORIES]


def influence_presenter(dataset, thresholds=DEFAULT_THRESHOLDS) -> list[InfluenceRow]:
    """P(q attends talk t) given pre-slot contact of at least θ seconds between q and t's presenter."""
    thresholds = list(thresholds)
    if any(t < 20 for t in thresholds) or any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be >= 20 s and strictly increasing")
    sched = dataset.schedule
    prior = {s.id: dataset.contacts.aggregated(before=s.start) for s in sched.slots}
    hits = [0] * len(thresholds)
    n = [0] * len(thresholds)
    for (slot, pos), who in sorted(dataset.attendance.by_time().items()):
        for t in sched.talks_at(slot, pos):
            presenter = sched.talks[t].presenter
            for q, attended in who.items():
                if q == presenter:
                    continue
                pair = (q, presenter) if q < presenter else (presenter, q)
                dur = prior[slot].get(pair, 0)
                for i, theta in enumerate(thresholds):
                    if dur >= theta:
                        n[i] += 1
                        hits[i] += attended == t
    return [_row(str(theta), h, k) for theta, h, k in zip(thresholds, hits, n)]
