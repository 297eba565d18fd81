"""Command-line entry point: ``talkwalk <command> [options]``.

Exit status is 0 on success, 1 when the input data fails validation and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import logging
import platform
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
import scipy

from . import __version__, _backend
from . import graphs as G
from .dataset import ValidationError, dataset_stats, load_dataset, save_dataset
from .evaluation import DEFAULT_THRESHOLDS, evaluate, influence_presenter, influence_same_talk
from .predict import (COSINE_MODES, SlotGraphs, baseline_majority, baseline_room, cosine_predict_all,
                      default_population, hrpr_predict_all, mixture_for, sweep)
from .reference import compare
from .report import (EDGE_HEADER, PREDICTION_HEADER, emit_report, prediction_rows,
                     write_csv, write_json)
from .synthetic import SyntheticConfig, generate_synthetic
from .text import TalkRepresentation, build_vectors, load_stopwords, slot_silhouettes
from .walk import DEFAULT_ALPHA, DEFAULT_MAX_ITER, DEFAULT_TOL, WalkConfig

log = logging.getLogger("talkwalk")

COMMANDS = ("stats", "influence", "baseline", "cosine", "hrpr", "sweep", "silhouette", "synth")


@dataclass
class RunConfig:
    command: str
    schedule: str | None
    attendance: str | None
    contacts: str | None
    corpus: str | None
    stopwords: str | None
    representation: str
    alpha: float
    tol: float
    max_iter: int
    merged: bool
    weight_mode: str
    step: float
    seed: int
    out: str


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("inputs")
    g.add_argument("--data", help="directory holding schedule.json, attendance.csv, contacts.csv, corpus/")
    g.add_argument("--schedule")
    g.add_argument("--attendance")
    g.add_argument("--contacts")
    g.add_argument("--corpus")
    g.add_argument("--stopwords", help="one lowercase stopword per line (default: bundled English list)")
    g = p.add_argument_group("model")
    g.add_argument("--representation", choices=[r.value for r in TalkRepresentation], default="abstract")
    g.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="restart probability")
    g.add_argument("--tol", type=float, default=DEFAULT_TOL)
    g.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    g.add_argument("--merged", action="store_true", help="merge each session's talk nodes")
    g.add_argument("--weight-mode", choices=G.WEIGHT_MODES, default="duration")
    g.add_argument("--step", type=float, default=0.1, help="sweep grid step")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="out", help="output directory")
    g.add_argument("--reference", choices=["ht2011"],
                   help="also report published HT 2011 values with deltas")
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="talkwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"talkwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("stats", help="contact-graph and session-behaviour statistics")
    _common(p)
    p = sub.add_parser("influence", help="same-talk and presenter influence probabilities")
    _common(p)
    p.add_argument("--thresholds", type=lambda s: [int(x) for x in s.split(",")],
                   default=list(DEFAULT_THRESHOLDS), help="comma-separated contact-duration thresholds (s)")
    p = sub.add_parser("baseline", help="track-majority and first-room baselines")
    _common(p)
    p = sub.add_parser("cosine", help="cosine interest predictors")
    _common(p)
    p.add_argument("--mode", choices=COSINE_MODES + ("all",), default="all")
    p = sub.add_parser("hrpr", help="hybrid rooted PageRank predictor for one mixture")
    _common(p)
    p.add_argument("--p-cosine", type=float, default=1.0)
    p.add_argument("--p-presenter", type=float, default=0.0)
    p.add_argument("--p-break", type=float, default=0.0)
    p.add_argument("--dump-edges", action="store_true", help="write edges.csv with every slot graph")
    p = sub.add_parser("sweep", help="HRPR over the whole mixture simplex grid")
    _common(p)
    p = sub.add_parser("silhouette", help="silhouette of parallel sessions per talk representation")
    _common(p)
    p = sub.add_parser("synth", help="write a synthetic conference dataset")
    _common(p)
    p.add_argument("--participants", type=int, default=60)
    p.add_argument("--slots", type=int, default=7)
    p.add_argument("--talks-per-slot", type=int, default=2)
    p.add_argument("--topics", type=int, default=2)
    p.add_argument("--interest-strength", type=float, default=0.9)
    p.add_argument("--contact-homophily", type=float, default=0.8)
    p.add_argument("--unprofiled", type=int, default=0)
    return parser


def _paths(args):
    if args.data:
        base = Path(args.data)
        args.schedule = args.schedule or str(base / "schedule.json")
        args.attendance = args.attendance or str(base / "attendance.csv")
        args.contacts = args.contacts or str(base / "contacts.csv")
        if args.corpus is None and (base / "corpus").is_dir():
            args.corpus = str(base / "corpus")
    missing = [f"--{n}" for n in ("schedule", "attendance", "contacts") if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing input paths: {' '.join(missing)} (or --data)")


class UsageError(Exception):
    pass


def _load(args):
    _paths(args)
    return load_dataset(args.schedule, args.attendance, args.contacts, args.corpus)


def _vectors(args, ds, representation=None):
    stop = load_stopwords(args.stopwords)
    rep = TalkRepresentation(representation or args.representation)
    return build_vectors(ds.corpus, ds.schedule, rep, stop)


def _manifest(args, out: Path, outputs, extra=None):
    cfg = RunConfig(args.command, args.schedule, args.attendance, args.contacts, args.corpus, args.stopwords,
                    args.representation, args.alpha, args.tol, args.max_iter, args.merged, args.weight_mode,
                    args.step, args.seed, args.out)
    options = {k: v for k, v in sorted(vars(args).items())
               if k not in asdict(cfg) and k not in ("data", "verbose", "func")}
    doc = {
        "command": args.command,
        "config": asdict(cfg),
        "options": options,
        "seed": args.seed,
        "versions": {
            "talkwalk": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "kernels": _backend.NAME,
        },
        "outputs": sorted(outputs),
    }
    if extra:
        doc.update(extra)
    write_json(out / "manifest.json", doc)


def cmd_stats(args, out):
    ds = _load(args)
    st = dataset_stats(ds)
    files = {"stats.json": st}
    write_json(out / "stats.json", st)
    for name, hist in (("contact_lengths.csv", st.contact_length_histogram),
                       ("aggregated_contact_lengths.csv", st.aggregated_contact_length_histogram),
                       ("papers_per_participant.csv", st.papers_per_participant_histogram)):
        write_csv(out / name, ["x", "count"], hist)
        files[name] = hist
    if args.reference:
        write_json(out / "reference.json", compare("stats", asdict(st)))
        files["reference.json"] = None
    return list(files)


def cmd_influence(args, out):
    ds = _load(args)
    pres = [replace(r, key=f"presenter_ge_{r.key}") for r in influence_presenter(ds, args.thresholds)]
    rows = influence_same_talk(ds) + pres
    emit_report(rows, out / "influence.csv")
    outputs = ["influence.csv"]
    if args.reference:
        mine = {r.key: r.probability for r in rows}
        # durations are whole seconds, so "longer than 960" is "at least 961"
        mine["presenter_gt_960"] = influence_presenter(ds, [961])[0].probability
        write_json(out / "reference.json", compare("influence", mine))
        outputs.append("reference.json")
    return outputs


def _write_predictions(out, name, decisions):
    write_csv(out / name, PREDICTION_HEADER, prediction_rows(decisions))


def cmd_baseline(args, out):
    ds = _load(args)
    maj, room = baseline_majority(ds), baseline_room(ds)
    _write_predictions(out, "predictions_majority.csv", maj)
    _write_predictions(out, "predictions_room.csv", room)
    metrics = {"majority": evaluate(maj, "all attendees"),
               "room": evaluate(room, "all attendees, first slot excluded")}
    write_json(out / "metrics.json", metrics)
    outputs = ["predictions_majority.csv", "predictions_room.csv", "metrics.json"]
    if args.reference:
        write_json(out / "reference.json", compare("baseline", {
            "majority.accuracy": metrics["majority"].accuracy, "room.accuracy": metrics["room"].accuracy}))
        outputs.append("reference.json")
    return outputs


def cmd_cosine(args, out):
    ds = _load(args)
    profiles, talks = _vectors(args, ds)
    modes = COSINE_MODES if args.mode == "all" else (args.mode,)
    metrics, outputs = {}, []
    for mode in modes:
        dec = cosine_predict_all(ds, profiles, talks, mode)
        name = f"predictions_{mode}.csv"
        _write_predictions(out, name, dec)
        outputs.append(name)
        metrics[mode] = evaluate(dec, f"participants with a profile ({len(profiles)})")
    write_json(out / "metrics.json", metrics)
    return outputs + ["metrics.json"]


def cmd_hrpr(args, out):
    ds = _load(args)
    profiles, talks = _vectors(args, ds)
    graphs = SlotGraphs(ds, profiles, talks, args.weight_mode)
    cfg = WalkConfig(args.alpha, mixture_for(args.p_cosine, args.p_presenter, args.p_break), args.tol,
                     args.max_iter)
    pop = default_population(ds, profiles, cfg)
    dec = hrpr_predict_all(ds, cfg, args.merged, graphs=graphs, participants=pop)
    _write_predictions(out, "predictions.csv", dec)
    label = f"participants with a profile ({len(profiles)})" if pop is not None else "all attendees"
    metrics = {"hrpr": evaluate(dec, label)}
    if pop is not None:
        metrics["hrpr_all_attendees"] = evaluate(
            hrpr_predict_all(ds, cfg, args.merged, graphs=graphs, participants=None), "all attendees")
    metrics["alpha"] = args.alpha
    metrics["mixture"] = {"p_cosine": args.p_cosine, "p_presenter": args.p_presenter, "p_break": args.p_break}
    write_json(out / "metrics.json", metrics)
    outputs = ["predictions.csv", "metrics.json"]
    if args.dump_edges:
        rows = [r for s in ds.schedule.slots for r in G.edge_rows(graphs.get(s.id, args.merged))]
        write_csv(out / "edges.csv", EDGE_HEADER, rows)
        outputs.append("edges.csv")
    return outputs


def cmd_sweep(args, out):
    ds = _load(args)
    profiles, talks = _vectors(args, ds)
    graphs = SlotGraphs(ds, profiles, talks, args.weight_mode)
    points = sweep(ds, args.alpha, args.merged, args.step, graphs=graphs, tol=args.tol, max_iter=args.max_iter)
    emit_report(points, out / "sweep.csv")
    outputs = ["sweep.csv"]
    if args.reference:
        best = max(points, key=lambda p: p.auc)
        tag = "merged" if args.merged else "unmerged"
        mine = {f"{tag}_best.auc": best.auc, f"{tag}_best.accuracy": best.accuracy}
        pb = [p for p in points if p.p_cosine == 0]
        if args.merged and pb:
            mine["merged_presenter_break_best.auc"] = max(p.auc for p in pb)
        write_json(out / "reference.json", compare("sweep", mine))
        outputs.append("reference.json")
    return outputs


def cmd_silhouette(args, out):
    ds = _load(args)
    rows = []
    for rep in TalkRepresentation:
        _, talks = _vectors(args, ds, rep.value)
        for slot, avg in slot_silhouettes(ds.schedule, talks).items():
            rows.append((slot, rep.value, avg))
    write_csv(out / "silhouette.csv", ["slot", "representation", "avg_silh"], rows)
    return ["silhouette.csv"]


def cmd_synth(args, out):
    cfg = SyntheticConfig(participants=args.participants, slots=args.slots, talks_per_slot=args.talks_per_slot,
                          topic_count=args.topics, interest_strength=args.interest_strength,
                          contact_homophily=args.contact_homophily, seed=args.seed, unprofiled=args.unprofiled)
    ds, truth = generate_synthetic(cfg)
    save_dataset(ds, out)
    write_json(out / "truth.json", truth)
    return ["schedule.json", "attendance.csv", "contacts.csv", "corpus/", "talks/", "truth.json"]


HANDLERS = {
    "stats": cmd_stats, "influence": cmd_influence, "baseline": cmd_baseline, "cosine": cmd_cosine,
    "hrpr": cmd_hrpr, "sweep": cmd_sweep, "silhouette": cmd_silhouette, "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        outputs = HANDLERS[args.command](args, out)
        _manifest(args, out, outputs)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"talkwalk: error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as exc:
        print(f"talkwalk: validation error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"talkwalk: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
