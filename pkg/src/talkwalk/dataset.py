"""Conference data model: schedule, attendance, contacts and publication corpus.

A *slot* is a block of parallel sessions held in different rooms.  Each
session is an ordered list of talks; talks at the same index ("position") of
the parallel sessions run at the same time.  A participant attends at most one
talk per (slot, position), which is the unit every prediction is made for.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

log = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 20


class ValidationError(ValueError):
    """Input data violates the dataset schema or its invariants."""


@dataclass(frozen=True)
class TimeSlot:
    id: str
    start: int
    end: int
    session_ids: tuple[str, ...]


@dataclass(frozen=True)
class Session:
    id: str
    room: str
    slot: str
    talk_ids: tuple[str, ...]


@dataclass(frozen=True)
class Talk:
    id: str
    title: str
    abstract: str
    fulltext: str
    presenter: str
    track: str
    session: str
    # where the full text was read from; not part of the talk's identity
    fulltext_path: str = field(default="", compare=False)


@dataclass(frozen=True)
class Schedule:
    slots: tuple[TimeSlot, ...]
    sessions: dict[str, Session]
    talks: dict[str, Talk]
    tracks: dict[str, int]
    breaks: dict[str, tuple[int, int]]

    def __post_init__(self):
        self._validate()

    def _validate(self):
        slot_ids = {s.id for s in self.slots}
        if len(slot_ids) != len(self.slots):
            raise ValidationError("duplicate slot id")
        for slot in self.slots:
            if not slot.start < slot.end:
                raise ValidationError(f"slot {slot.id!r}: start must precede end")
            if len(slot.session_ids) < 2:
                raise ValidationError(f"slot {slot.id!r}: needs at least 2 parallel sessions")
            rooms = []
            for sid in slot.session_ids:
                sess = self.sessions.get(sid)
                if sess is None:
                    raise ValidationError(f"slot {slot.id!r}: unknown session {sid!r}")
                if sess.slot != slot.id:
                    raise ValidationError(f"session {sid!r} listed in slot {slot.id!r} but belongs to {sess.slot!r}")
                rooms.append(sess.room)
            if len(set(rooms)) != len(rooms):
                raise ValidationError(f"slot {slot.id!r}: parallel sessions must use different rooms")
        listed = [sid for s in self.slots for sid in s.session_ids]
        if len(set(listed)) != len(listed):
            raise ValidationError("session listed in more than one slot")
        for sid, sess in self.sessions.items():
            if sess.slot not in slot_ids:
                raise ValidationError(f"session {sid!r}: unknown slot {sess.slot!r}")
            if sid not in listed:
                raise ValidationError(f"session {sid!r} not listed by its slot")
            for tid in sess.talk_ids:
                talk = self.talks.get(tid)
                if talk is None:
                    raise ValidationError(f"session {sid!r}: unknown talk {tid!r}")
                if talk.session != sid:
                    raise ValidationError(f"talk {tid!r} listed in session {sid!r} but belongs to {talk.session!r}")
        seen = [tid for s in self.sessions.values() for tid in s.talk_ids]
        if len(set(seen)) != len(seen):
            raise ValidationError("talk listed in more than one session")
        for tid, talk in self.talks.items():
            if tid not in seen:
                raise ValidationError(f"talk {tid!r} not listed by its session")
            if talk.track not in self.tracks:
                raise ValidationError(f"talk {tid!r}: unknown track {talk.track!r}")
            if not talk.presenter:
                raise ValidationError(f"talk {tid!r}: missing presenter")
        for track, count in self.tracks.items():
            if count < 0:
                raise ValidationError(f"track {track!r}: negative accepted-paper count")
        for slot_id, (b0, b1) in self.breaks.items():
            if slot_id not in slot_ids:
                raise ValidationError(f"break for unknown slot {slot_id!r}")
            if b1 < b0:
                raise ValidationError(f"break before slot {slot_id!r} ends before it starts")
            if b1 > self.slot(slot_id).start:
                raise ValidationError(f"break before slot {slot_id!r} ends after the slot starts")

    def slot(self, slot_id: str) -> TimeSlot:
        for s in self.slots:
            if s.id == slot_id:
                return s
        raise KeyError(slot_id)

    def slot_talks(self, slot_id: str) -> list[str]:
        return [tid for sid in self.slot(slot_id).session_ids for tid in self.sessions[sid].talk_ids]

    def positions(self, slot_id: str) -> range:
        return range(max(len(self.sessions[sid].talk_ids) for sid in self.slot(slot_id).session_ids))

    def talks_at(self, slot_id: str, position: int) -> list[str]:
        """Talks running in parallel at ``position`` of ``slot_id``, in session order."""
        out = []
        for sid in self.slot(slot_id).session_ids:
            tids = self.sessions[sid].talk_ids
            if position < len(tids):
                out.append(tids[position])
        return out

    def locate(self, talk_id: str) -> tuple[str, int]:
        """Return ``(slot_id, position)`` of a talk."""
        sess = self.sessions[self.talks[talk_id].session]
        return sess.slot, sess.talk_ids.index(talk_id)

    def presenters(self, slot_id: str) -> dict[str, list[str]]:
        """Presenter id -> talks they give in ``slot_id``."""
        out: dict[str, list[str]] = defaultdict(list)
        for tid in self.slot_talks(slot_id):
            out[self.talks[tid].presenter].append(tid)
        return dict(out)

    @property
    def start(self) -> int:
        return min(s.start for s in self.slots)


@dataclass(frozen=True, order=True)
class Contact:
    u: str
    v: str
    start: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.start


def canonicalize_contacts(rows, resolution: int = DEFAULT_RESOLUTION) -> tuple[Contact, ...]:
    """Order endpoints, merge overlapping intervals per pair, drop short contacts."""
    by_pair = defaultdict(list)
    for u, v, start, end in rows:
        if u == v:
            raise ValidationError(f"self contact for {u!r}")
        if end < start:
            raise ValidationError(f"contact {u!r}-{v!r} ends before it starts")
        a, b = (u, v) if u < v else (v, u)
        by_pair[a, b].append((start, end))
    out = []
    for (a, b), ivs in by_pair.items():
        ivs.sort()
        merged = [list(ivs[0])]
        for s, e in ivs[1:]:
            if s <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        out.extend(Contact(a, b, s, e) for s, e in merged if e - s >= resolution)
    return tuple(sorted(out))


@dataclass(frozen=True)
class ContactLog:
    intervals: tuple[Contact, ...] = ()

    @classmethod
    def from_rows(cls, rows, resolution: int = DEFAULT_RESOLUTION) -> ContactLog:
        return cls(canonicalize_contacts(rows, resolution))

    def aggregated(self, before: int | None = None) -> dict[tuple[str, str], int]:
        """Total contact seconds per unordered pair, optionally only intervals ending before ``before``."""
        agg: dict[tuple[str, str], int] = defaultdict(int)
        for c in self.intervals:
            if before is None or c.end < before:
                agg[c.u, c.v] += c.duration
        return dict(agg)

    def overlap(self, start: int, end: int) -> dict[tuple[str, str], int]:
        """Seconds of contact per pair falling inside ``[start, end]``."""
        agg: dict[tuple[str, str], int] = defaultdict(int)
        for c in self.intervals:
            sec = min(c.end, end) - max(c.start, start)
            if sec > 0:
                agg[c.u, c.v] += sec
        return dict(agg)

    @property
    def participants(self) -> set[str]:
        return {c.u for c in self.intervals} | {c.v for c in self.intervals}


@dataclass(frozen=True)
class AttendanceTable:
    records: tuple[tuple[str, str], ...]
    # (participant, slot, position) -> talk
    index: dict[tuple[str, str, int], str] = field(compare=False, repr=False)

    @classmethod
    def from_records(cls, records, schedule: Schedule) -> AttendanceTable:
        index = {}
        for participant, talk in records:
            if talk not in schedule.talks:
                raise ValidationError(f"attendance of {participant!r}: unknown talk {talk!r}")
            slot, pos = schedule.locate(talk)
            key = (participant, slot, pos)
            if key in index:
                raise ValidationError(
                    f"participant {participant!r} attends both {index[key]!r} and {talk!r} at the same time"
                )
            index[key] = talk
        return cls(tuple(sorted(records)), index)

    @property
    def participants(self) -> list[str]:
        return sorted({p for p, _ in self.records})

    def attended(self, participant: str, slot: str, position: int) -> str | None:
        return self.index.get((participant, slot, position))

    def by_time(self) -> dict[tuple[str, int], dict[str, str]]:
        """(slot, position) -> {participant: talk}."""
        out: dict[tuple[str, int], dict[str, str]] = defaultdict(dict)
        for (p, slot, pos), talk in self.index.items():
            out[slot, pos][p] = talk
        return dict(out)


@dataclass(frozen=True)
class Corpus:
    documents: dict[str, tuple[tuple[str, str], ...]]
    cutoff: int = 0

    def texts(self, participant: str) -> list[str]:
        return [text for _, text in self.documents.get(participant, ())]


@dataclass(frozen=True)
class Dataset:
    schedule: Schedule
    attendance: AttendanceTable
    contacts: ContactLog
    corpus: Corpus

    @property
    def participants(self) -> list[str]:
        people = set(self.attendance.participants) | self.contacts.participants
        people |= set(self.corpus.documents)
        people |= {t.presenter for t in self.schedule.talks.values()}
        return sorted(people)


# -- loading -----------------------------------------------------------------

def _require(obj, key, where):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise ValidationError(f"{where}: missing field {key!r}") from None


def parse_schedule(raw: dict, base_dir: Path | None = None) -> Schedule:
    base_dir = Path(base_dir) if base_dir is not None else Path(".")
    try:
        slots = tuple(
            TimeSlot(str(_require(s, "id", "slot")), int(_require(s, "start", "slot")),
                     int(_require(s, "end", "slot")), tuple(str(x) for x in _require(s, "sessions", "slot")))
            for s in _require(raw, "slots", "schedule")
        )
        sessions = {}
        for s in _require(raw, "sessions", "schedule"):
            sess = Session(str(_require(s, "id", "session")), str(_require(s, "room", "session")),
                           str(_require(s, "slot", "session")), tuple(str(x) for x in _require(s, "talks", "session")))
            if sess.id in sessions:
                raise ValidationError(f"duplicate session id {sess.id!r}")
            sessions[sess.id] = sess
        talks = {}
        for t in _require(raw, "talks", "schedule"):
            tid = str(_require(t, "id", "talk"))
            rel = t.get("fulltext_path") or ""
            fulltext = ""
            if rel:
                path = base_dir / rel
                if not path.is_file():
                    raise ValidationError(f"talk {tid!r}: full text {str(path)!r} not found")
                fulltext = path.read_text(encoding="utf-8")
            if tid in talks:
                raise ValidationError(f"duplicate talk id {tid!r}")
            talks[tid] = Talk(tid, t.get("title", ""), t.get("abstract", ""), fulltext,
                              str(_require(t, "presenter", f"talk {tid!r}")),
                              str(_require(t, "track", f"talk {tid!r}")),
                              str(_require(t, "session", f"talk {tid!r}")), rel)
        tracks = {str(_require(t, "id", "track")): int(_require(t, "accepted_papers", "track"))
                  for t in _require(raw, "tracks", "schedule")}
        breaks = {}
        for b in raw.get("breaks", []):
            breaks[str(_require(b, "slot", "break"))] = (int(_require(b, "start", "break")),
                                                         int(_require(b, "end", "break")))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"schedule: {exc}") from exc
    return Schedule(slots, sessions, talks, tracks, breaks)


def _read_csv(path: Path, header: list[str]):
    """Yield ``(line_number, row)`` after checking the header; an empty file yields nothing."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None:
            return
        if [c.strip() for c in first] != header:
            raise ValidationError(f"{path}:1: expected header {','.join(header)}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValidationError(f"{path}:{reader.line_num}: expected {len(header)} fields, got {len(row)}")
            yield reader.line_num, [c.strip() for c in row]


def read_attendance(path, schedule: Schedule) -> AttendanceTable:
    records = []
    for line, (p, t) in _read_csv(Path(path), ["participant_id", "talk_id"]):
        if not p or not t:
            raise ValidationError(f"{path}:{line}: empty field")
        records.append((p, t))
        if t not in schedule.talks:
            raise ValidationError(f"{path}:{line}: unknown talk {t!r}")
    try:
        return AttendanceTable.from_records(records, schedule)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def read_contacts(path, resolution: int = DEFAULT_RESOLUTION) -> ContactLog:
    rows = []
    for line, (u, v, s, e) in _read_csv(Path(path), ["u", "v", "start", "end"]):
        try:
            start, end = int(s), int(e)
        except ValueError:
            raise ValidationError(f"{path}:{line}: start/end must be integer seconds") from None
        if not u or not v:
            raise ValidationError(f"{path}:{line}: empty participant id")
        if u == v:
            raise ValidationError(f"{path}:{line}: contact of {u!r} with itself")
        if end < start:
            raise ValidationError(f"{path}:{line}: end before start")
        rows.append((u, v, start, end))
    return ContactLog.from_rows(rows, resolution)


def read_corpus(corpus_dir, cutoff: int = 0) -> Corpus:
    docs = {}
    if corpus_dir is not None:
        root = Path(corpus_dir)
        if not root.is_dir():
            raise ValidationError(f"corpus directory {str(root)!r} not found")
        for pdir in sorted(p for p in root.iterdir() if p.is_dir()):
            files = sorted(pdir.glob("*.txt"))
            docs[pdir.name] = tuple((f.stem, f.read_text(encoding="utf-8")) for f in files)
    return Corpus(docs, cutoff)


def load_dataset(schedule_path, attendance_path, contacts_path, corpus_dir=None,
                 resolution: int = DEFAULT_RESOLUTION) -> Dataset:
    schedule_path = Path(schedule_path)
    for p in (schedule_path, attendance_path, contacts_path):
        if not Path(p).is_file():
            raise ValidationError(f"{p}: file not found")
    try:
        raw = json.loads(schedule_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{schedule_path}:{exc.lineno}: {exc.msg}") from None
    schedule = parse_schedule(raw, schedule_path.parent)
    attendance = read_attendance(attendance_path, schedule)
    contacts = read_contacts(contacts_path, resolution)
    corpus = read_corpus(corpus_dir, cutoff=schedule.start)
    log.info("loaded %d talks, %d attendance records, %d contacts, %d corpus authors",
             len(schedule.talks), len(attendance.records), len(contacts.intervals), len(corpus.documents))
    return Dataset(schedule, attendance, contacts, corpus)


def load_dir(path, resolution: int = DEFAULT_RESOLUTION) -> Dataset:
    """Load a directory laid out as written by :func:`save_dataset`."""
    path = Path(path)
    corpus = path / "corpus"
    return load_dataset(path / "schedule.json", path / "attendance.csv", path / "contacts.csv",
                        corpus if corpus.is_dir() else None, resolution)


def schedule_to_json(schedule: Schedule, fulltext_paths: dict[str, str]) -> dict:
    return {
        "slots": [{"id": s.id, "start": s.start, "end": s.end, "sessions": list(s.session_ids)}
                  for s in schedule.slots],
        "sessions": [{"id": s.id, "room": s.room, "slot": s.slot, "talks": list(s.talk_ids)}
                     for s in schedule.sessions.values()],
        "talks": [{"id": t.id, "title": t.title, "abstract": t.abstract,
                   "fulltext_path": fulltext_paths.get(t.id, ""), "presenter": t.presenter,
                   "track": t.track, "session": t.session} for t in schedule.talks.values()],
        "tracks": [{"id": k, "accepted_papers": v} for k, v in schedule.tracks.items()],
        "breaks": [{"slot": k, "start": v[0], "end": v[1]} for k, v in schedule.breaks.items()],
    }


def save_dataset(dataset: Dataset, outdir) -> Path:
    """Write ``dataset`` in the on-disk layout read by :func:`load_dir`."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for t in dataset.schedule.talks.values():
        if t.fulltext:
            rel = f"talks/{t.id}.txt"
            (out / "talks").mkdir(exist_ok=True)
            (out / rel).write_text(t.fulltext, encoding="utf-8")
            paths[t.id] = rel
    doc = schedule_to_json(dataset.schedule, paths)
    (out / "schedule.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    with open(out / "attendance.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["participant_id", "talk_id"])
        w.writerows(dataset.attendance.records)
    with open(out / "contacts.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v", "start", "end"])
        w.writerows((c.u, c.v, c.start, c.end) for c in dataset.contacts.intervals)
    for pid, docs in dataset.corpus.documents.items():
        pdir = out / "corpus" / pid
        pdir.mkdir(parents=True, exist_ok=True)
        for doc_id, text in docs:
            (pdir / f"{doc_id}.txt").write_text(text, encoding="utf-8")
    return out


# -- statistics --------------------------------------------------------------

@dataclass
class StatsReport:
    node_count: int
    edge_count: int
    average_degree: float
    average_path_length: float
    diameter: int
    average_aggregated_contact_duration: float
    contact_length_histogram: list[tuple[int, int]]
    aggregated_contact_length_histogram: list[tuple[int, int]]
    papers_per_participant_histogram: list[tuple[int, int]]
    sessions_attended: int
    sessions_all_talks: int
    sessions_changed: int
    sessions_exactly_2: int
    sessions_exactly_1: int


def cumulative_histogram(values) -> list[tuple[int, int]]:
    """``(x, number of values >= x)`` for every distinct value ``x``."""
    vals = np.sort(np.asarray(list(values), dtype=np.int64))
    if vals.size == 0:
        return []
    xs = np.unique(vals)
    counts = vals.size - np.searchsorted(vals, xs, side="left")
    return [(int(x), int(c)) for x, c in zip(xs, counts)]


def graph_metrics(nodes, edges) -> tuple[float, int]:
    """Average hop distance over ordered reachable pairs and the diameter of the largest component."""
    nodes = sorted(nodes)
    n = len(nodes)
    if n < 2 or not edges:
        return 0.0, 0
    idx = {v: i for i, v in enumerate(nodes)}
    rows = [idx[a] for a, b in edges] + [idx[b] for a, b in edges]
    cols = [idx[b] for a, b in edges] + [idx[a] for a, b in edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    dist = shortest_path(adj, directed=False, unweighted=True)
    off = ~np.eye(n, dtype=bool) & np.isfinite(dist)
    apl = float(dist[off].mean()) if off.any() else 0.0
    _, labels = connected_components(adj, directed=False)
    big = np.argmax(np.bincount(labels))
    members = labels == big
    sub = dist[np.ix_(members, members)]
    return apl, int(sub.max())


def session_behavior(schedule: Schedule, attendance: AttendanceTable) -> dict[str, int]:
    """Per (participant, session) attendance categories.

    A participant-session pair is *changed* when the participant also attended
    a parallel session of the same slot; otherwise it is classified by how many
    of the session's talks were attended.
    """
    per_session: dict[tuple[str, str], int] = defaultdict(int)
    sessions_in_slot: dict[tuple[str, str], set] = defaultdict(set)
    for p, talk in attendance.records:
        sid = schedule.talks[talk].session
        per_session[p, sid] += 1
        sessions_in_slot[p, schedule.sessions[sid].slot].add(sid)
    counts = dict(sessions=len(per_session), all_talks=0, changed=0, exactly_2=0, exactly_1=0)
    for (p, sid), k in per_session.items():
        sess = schedule.sessions[sid]
        if len(sessions_in_slot[p, sess.slot]) > 1:
            counts["changed"] += 1
        elif k == len(sess.talk_ids):
            counts["all_talks"] += 1
        elif k == 2:
            counts["exactly_2"] += 1
        elif k == 1:
            counts["exactly_1"] += 1
    return counts


def dataset_stats(dataset: Dataset) -> StatsReport:
    agg = dataset.contacts.aggregated()
    nodes = dataset.contacts.participants
    apl, diam = graph_metrics(nodes, list(agg))
    n, m = len(nodes), len(agg)
    behavior = session_behavior(dataset.schedule, dataset.attendance)
    return StatsReport(
        node_count=n,
        edge_count=m,
        average_degree=2 * m / n if n else 0.0,
        average_path_length=apl,
        diameter=diam,
        average_aggregated_contact_duration=float(np.mean(list(agg.values()))) if agg else 0.0,
        contact_length_histogram=cumulative_histogram(c.duration for c in dataset.contacts.intervals),
        aggregated_contact_length_histogram=cumulative_histogram(agg.values()),
        papers_per_participant_histogram=cumulative_histogram(
            len(d) for d in dataset.corpus.documents.values()),
        sessions_attended=behavior["sessions"],
        sessions_all_talks=behavior["all_talks"],
        sessions_changed=behavior["changed"],
        sessions_exactly_2=behavior["exactly_2"],
        sessions_exactly_1=behavior["exactly_1"],
    )
