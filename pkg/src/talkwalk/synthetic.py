"""Synthetic conferences with planted interests and homophilic contacts."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .dataset import (AttendanceTable, ContactLog, Corpus, Dataset, Schedule, Session, Talk,
                      TimeSlot)

CONFERENCE_START = 1_300_000_000
BREAK_SECONDS = 1_200
TALK_SECONDS = 1_800
BASE_CONTACT_RATE = 0.06
SAME_TOPIC_CONTACT_RATE = 0.35

_CONSONANTS = "bdfgklmnprstvz"
_WORD_VOWELS = "aiou"


@dataclass(frozen=True)
class SyntheticConfig:
    participants: int = 60
    slots: int = 7
    talks_per_slot: int = 2
    topic_count: int = 2
    interest_strength: float = 0.9
    contact_homophily: float = 0.8
    seed: int = 0
    rooms: int = 2
    unprofiled: int = 0

    def validate(self):
        for name in ("participants", "slots", "talks_per_slot", "topic_count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.rooms < 2:
            raise ValueError("rooms must be at least 2")
        for name in ("interest_strength", "contact_homophily"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0 <= self.unprofiled <= self.participants:
            raise ValueError("unprofiled must lie in [0, participants]")
        if self.rooms * self.talks_per_slot > self.participants:
            raise ValueError("not enough participants to present every talk of a slot")


def _vocabulary(rng, size):
    words = set()
    while len(words) < size:
        k = int(rng.integers(2, 4))
        w = "".join(rng.choice(list(_CONSONANTS)) + rng.choice(list(_WORD_VOWELS)) for _ in range(k))
        words.add(w)
    return sorted(words)


def _text(rng, topic_words, general, n, p_topic):
    pick_topic = rng.random(n) < p_topic
    ti = rng.integers(0, len(topic_words), n)
    gi = rng.integers(0, len(general), n)
    return " ".join(topic_words[a] if t else general[b] for t, a, b in zip(pick_topic, ti, gi))


def generate_synthetic(config: SyntheticConfig) -> tuple[Dataset, dict]:
    """Build a dataset whose attendance follows planted topic interests.

    Each participant has one interest topic and each session one topic.  A
    participant picks a session with probability
    ``(1 - s) / rooms + s * match / n_matching`` (uniform when nothing matches),
    where ``s`` is the interest strength, then attends all its talks.
    Presenters attend their own session and are drawn from the session's
    topic with probability ``s``.  Pairs sharing a topic meet in breaks
    at an elevated rate controlled by the contact homophily.

    Returns the dataset and a dict of planted parameters.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    people = [f"u{i:03d}" for i in range(config.participants)]
    interest = {p: int(rng.integers(config.topic_count)) for p in people}
    vocab = _vocabulary(rng, 40 * config.topic_count + 80)
    general = vocab[: 80]
    topic_words = [vocab[80 + 40 * k: 80 + 40 * (k + 1)] for k in range(config.topic_count)]
    rooms = [f"R{r + 1}" for r in range(config.rooms)]
    tracks = {f"track{k}": int(rng.integers(5, 30)) for k in range(config.topic_count)}

    slots, sessions, talks, breaks = [], {}, {}, {}
    session_topic = {}
    presenting = {}
    t = CONFERENCE_START
    for si in range(config.slots):
        slot_id = f"S{si + 1}"
        breaks[slot_id] = (t, t + BREAK_SECONDS)
        start = t + BREAK_SECONDS
        end = start + TALK_SECONDS * config.talks_per_slot
        replace = config.topic_count < config.rooms
        topics = rng.choice(config.topic_count, config.rooms, replace=replace)
        taken = set()
        sids = []
        for room, topic in zip(rooms, topics):
            sid = f"{slot_id}{room}"
            sids.append(sid)
            session_topic[sid] = int(topic)
            tids = []
            for pos in range(config.talks_per_slot):
                tid = f"{sid}T{pos + 1}"
                # presenters share their session's topic only as often as interests drive attendance
                matched = rng.random() < config.interest_strength
                pool = [p for p in people if p not in taken and (not matched or interest[p] == topic)]
                if not pool:
                    pool = [p for p in people if p not in taken]
                presenter = pool[int(rng.integers(len(pool)))]
                taken.add(presenter)
                presenting.setdefault((slot_id, presenter), sid)
                words = topic_words[int(topic)]
                talks[tid] = Talk(
                    id=tid,
                    title=_text(rng, words, general, 6, 0.6),
                    abstract=_text(rng, words, general, 50, 0.6),
                    fulltext=_text(rng, words, general, 400, 0.6),
                    presenter=presenter,
                    track=f"track{int(topic)}",
                    session=sid,
                )
                tids.append(tid)
            sessions[sid] = Session(sid, room, slot_id, tuple(tids))
        slots.append(TimeSlot(slot_id, start, end, tuple(sids)))
        t = end
    schedule = Schedule(tuple(slots), sessions, talks, tracks, breaks)

    s = config.interest_strength
    records = []
    for slot in slots:
        match_sets = {p: [sid for sid in slot.session_ids if session_topic[sid] == interest[p]] for p in people}
        for p in people:
            draw = rng.random()
            if (slot.id, p) in presenting:
                chosen = presenting[slot.id, p]
            else:
                matches = match_sets[p]
                r = len(slot.session_ids)
                if matches:
                    probs = np.array([(1 - s) / r + (s / len(matches) if sid in matches else 0.0)
                                      for sid in slot.session_ids])
                else:
                    probs = np.full(r, 1.0 / r)
                cum = np.cumsum(probs)
                cum[-1] = 1.0
                chosen = slot.session_ids[int(np.searchsorted(cum, draw, side="right"))]
            records.extend((p, tid) for tid in sessions[chosen].talk_ids)
    attendance = AttendanceTable.from_records(records, schedule)

    h = config.contact_homophily
    p_same = BASE_CONTACT_RATE + h * (SAME_TOPIC_CONTACT_RATE - BASE_CONTACT_RATE)
    p_diff = BASE_CONTACT_RATE * (1 - h)
    rows = []
    for slot in slots:
        b0, b1 = breaks[slot.id]
        for i, a in enumerate(people):
            for b in people[i + 1:]:
                rate = p_same if interest[a] == interest[b] else p_diff
                if rng.random() < rate:
                    dur = min(20 * (1 + int(rng.geometric(0.12))), b1 - b0)
                    st = b0 + int(rng.integers(0, b1 - b0 - dur + 1))
                    rows.append((a, b, st, st + dur))
    contacts = ContactLog.from_rows(rows)

    docs = {}
    for i, p in enumerate(people):
        if i < config.unprofiled:
            continue
        own = topic_words[interest[p]]
        k = int(rng.integers(1, 4))
        docs[p] = tuple((f"d{j + 1}", _text(rng, own, general, 150, 0.5)) for j in range(k))
    corpus = Corpus(docs, schedule.start)

    truth = {
        "config": asdict(config),
        "participant_topic": interest,
        "session_topic": session_topic,
    }
    return Dataset(schedule, attendance, contacts, corpus), truth
