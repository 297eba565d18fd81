"""Bag-of-words interest models: tokenizing, tf-idf vectors, cosine, silhouette."""

from __future__ import annotations

import enum
import math
import re
from collections import Counter
from importlib import resources
from pathlib import Path

from .porter import porter_stem

_SPLIT = re.compile(r"[^a-z]+")


class TalkRepresentation(enum.Enum):
    FULL_PAPER = "paper"
    ABSTRACT = "abstract"
    TITLE = "title"

    def text(self, talk) -> str:
        if self is TalkRepresentation.FULL_PAPER:
            return talk.fulltext
        if self is TalkRepresentation.ABSTRACT:
            return talk.abstract
        return talk.title


def load_stopwords(path=None) -> frozenset[str]:
    """Read one lowercase word per line; ``None`` loads the bundled English list."""
    if path is None:
        raw = resources.files("talkwalk").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in raw.splitlines() if w.strip())


def preprocess(text: str, stopwords=frozenset()) -> list[str]:
    """Lowercase, split on non-letters, drop 1-letter tokens and stopwords, then stem."""
    return [porter_stem(tok) for tok in _SPLIT.split(text.lower())
            if len(tok) > 1 and tok not in stopwords]


class DocVector:
    """Sparse non-negative term weights with a cached Euclidean norm."""

    __slots__ = ("weights", "norm")

    def __init__(self, weights=None):
        items = {} if weights is None else dict(weights)
        for term, w in items.items():
            if w < 0 or math.isnan(w):
                raise ValueError(f"negative weight for term {term!r}")
        self.weights = {t: float(items[t]) for t in sorted(items) if items[t] > 0}
        self.norm = math.sqrt(math.fsum(w * w for w in self.weights.values()))

    def __len__(self):
        return len(self.weights)

    def __eq__(self, other):
        return isinstance(other, DocVector) and self.weights == other.weights

    def __repr__(self):
        return f"DocVector({len(self.weights)} terms, norm={self.norm:.4g})"

    def scaled(self, factor: float) -> DocVector:
        return DocVector({t: w * factor for t, w in self.weights.items()})


def cosine(a: DocVector, b: DocVector) -> float:
    if a.norm == 0 or b.norm == 0:
        return 0.0
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    # fsum is exactly rounded, so the result does not depend on argument order
    dot = math.fsum(w * large.weights[t] for t, w in small.weights.items() if t in large.weights)
    return min(1.0, dot / (a.norm * b.norm))


def tfidf(counts: dict[str, Counter]) -> dict[str, DocVector]:
    """Raw term frequency times ``ln(N / df)`` over the given document universe."""
    n = len(counts)
    df = Counter()
    for c in counts.values():
        df.update(c.keys())
    out = {}
    for key, c in counts.items():
        out[key] = DocVector({t: tf * math.log(n / df[t]) for t, tf in c.items() if df[t] < n})
    return out


def build_vectors(corpus, schedule, representation=TalkRepresentation.ABSTRACT, stopwords=None):
    """Participant interest profiles and talk vectors sharing one tf-idf universe.

    Returns
    -------
    profiles : dict
        participant id -> DocVector, only for participants with at least one document.
    talks : dict
        talk id -> DocVector built from the chosen talk representation.
    """
    representation = TalkRepresentation(representation)
    stop = load_stopwords() if stopwords is None else stopwords
    counts: dict[tuple[str, str], Counter] = {}
    for pid in sorted(corpus.documents):
        texts = corpus.texts(pid)
        if not texts:
            continue
        c = Counter()
        for text in texts:
            c.update(preprocess(text, stop))
        counts["p", pid] = c
    for tid in sorted(schedule.talks):
        counts["t", tid] = Counter(preprocess(representation.text(schedule.talks[tid]), stop))
    vecs = tfidf(counts)
    profiles = {k[1]: v for k, v in vecs.items() if k[0] == "p"}
    talks = {k[1]: v for k, v in vecs.items() if k[0] == "t"}
    return profiles, talks


def _single_link(t, others, vectors) -> float | None:
    dists = [1.0 - cosine(vectors[t], vectors[u]) for u in others if u != t]
    return min(dists) if dists else None


def silhouette_pair(session_a, session_b, vectors):
    """Silhouette of every talk in two parallel sessions under single-link cosine distance.

    Returns ``(per_talk, average)``.  A talk alone in its session, or one whose
    two distances are both zero, gets 0.
    """
    for t in list(session_a) + list(session_b):
        if t not in vectors:
            raise KeyError(f"no vector for talk {t!r}")
    values = {}
    for own, other in ((session_a, session_b), (session_b, session_a)):
        for t in own:
            a = _single_link(t, own, vectors)
            b = _single_link(t, other, vectors)
            if a is None or b is None or max(a, b) == 0:
                values[t] = 0.0
            else:
                values[t] = (b - a) / max(a, b)
    avg = math.fsum(values.values()) / len(values) if values else 0.0
    return values, avg


def slot_silhouettes(schedule, vectors) -> dict[str, float]:
    """Average silhouette per slot; with more than two sessions each is contrasted with the rest pooled."""
    out = {}
    for slot in schedule.slots:
        groups = [list(schedule.sessions[sid].talk_ids) for sid in slot.session_ids]
        if len(groups) == 2:
            _, avg = silhouette_pair(groups[0], groups[1], vectors)
        else:
            vals = []
            for i, g in enumerate(groups):
                rest = [t for j, h in enumerate(groups) if j != i for t in h]
                per, _ = silhouette_pair(g, rest, vectors)
                vals.extend(per[t] for t in g)
            avg = math.fsum(vals) / len(vals)
        out[slot.id] = avg
    return out
