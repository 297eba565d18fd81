import csv
import json
import subprocess
import sys

import pytest

from talkwalk.cli import main
from talkwalk.dataset import dataset_stats, load_dir, save_dataset
from talkwalk.report import dumps_json

from conftest import small_dataset


@pytest.fixture
def data_dir(tmp_path):
    return save_dataset(small_dataset(), tmp_path / "data")


def run(*args):
    return main([str(a) for a in args])


def tree(path):
    return {p.relative_to(path).as_posix(): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


class TestCommands:
    def test_stats_matches_library(self, data_dir, tmp_path):
        assert run("stats", "--data", data_dir, "--out", tmp_path / "o") == 0
        assert (tmp_path / "o" / "stats.json").read_text() == dumps_json(dataset_stats(load_dir(data_dir)))
        for name in ("contact_lengths.csv", "aggregated_contact_lengths.csv", "papers_per_participant.csv",
                     "manifest.json"):
            assert (tmp_path / "o" / name).is_file()

    def test_manifest_echoes_config(self, data_dir, tmp_path):
        run("hrpr", "--data", data_dir, "--out", tmp_path / "o", "--alpha", "0.3", "--seed", "7", "--merged",
            "--p-cosine", "0.5", "--p-break", "0.5", "--p-presenter", "0")
        man = json.loads((tmp_path / "o" / "manifest.json").read_text())
        cfg = man["config"]
        assert cfg["alpha"] == 0.3 and cfg["merged"] is True and cfg["seed"] == 7
        assert cfg["weight_mode"] == "duration" and cfg["representation"] == "abstract"
        assert {"tol", "max_iter", "schedule", "attendance", "contacts", "corpus", "out"} <= set(cfg)
        assert man["options"]["p_cosine"] == 0.5
        assert set(man["versions"]) >= {"talkwalk", "numpy", "scipy", "python", "kernels"}
        metrics = json.loads((tmp_path / "o" / "metrics.json").read_text())
        assert metrics["hrpr"]["decision_count"] > 0

    def test_sweep_rows(self, data_dir, tmp_path):
        assert run("sweep", "--data", data_dir, "--out", tmp_path / "o", "--merged", "--alpha", "0.15",
                   "--step", "0.1") == 0
        rows = list(csv.reader(open(tmp_path / "o" / "sweep.csv")))
        assert rows[0] == ["p_cosine", "p_presenter", "p_break", "auc", "accuracy"]
        assert len(rows) == 67

    def test_predictions_and_edges(self, data_dir, tmp_path):
        assert run("hrpr", "--data", data_dir, "--out", tmp_path / "o", "--dump-edges") == 0
        pred = list(csv.DictReader(open(tmp_path / "o" / "predictions.csv")))
        assert set(pred[0]) == {"participant", "slot", "talk", "raw_score", "norm_score", "predicted",
                                "correct", "tie"}
        edges = list(csv.DictReader(open(tmp_path / "o" / "edges.csv")))
        assert {e["layer"] for e in edges} == {"cosine", "break", "presenter"}

    def test_other_commands(self, data_dir, tmp_path):
        for cmd, files in (("influence", ["influence.csv"]),
                           ("baseline", ["predictions_majority.csv", "predictions_room.csv", "metrics.json"]),
                           ("cosine", ["predictions_talk-wise.csv", "metrics.json"]),
                           ("silhouette", ["silhouette.csv"])):
            out = tmp_path / cmd
            assert run(cmd, "--data", data_dir, "--out", out, "--reference", "ht2011") == 0
            for f in files:
                assert (out / f).is_file()
        reps = {r[1] for r in csv.reader(open(tmp_path / "silhouette" / "silhouette.csv"))}
        assert {"paper", "abstract", "title"} <= reps
        ref = json.loads((tmp_path / "baseline" / "reference.json").read_text())
        assert ref[0]["metric"] == "majority.accuracy" and ref[0]["reference"] == 0.5405

    def test_explicit_paths(self, data_dir, tmp_path):
        assert run("stats", "--schedule", data_dir / "schedule.json", "--attendance", data_dir / "attendance.csv",
                   "--contacts", data_dir / "contacts.csv", "--out", tmp_path / "o") == 0


class TestDeterminism:
    def test_synth_twice_identical(self, tmp_path):
        for name in ("a", "b"):
            assert run("synth", "--seed", "1", "--participants", "20", "--slots", "3",
                       "--out", tmp_path / name) == 0
        a, b = tree(tmp_path / "a"), tree(tmp_path / "b")
        a.pop("manifest.json"), b.pop("manifest.json")
        assert a == b and "truth.json" in a

    def test_same_config_same_bytes(self, data_dir, tmp_path):
        out = tmp_path / "o"
        run("cosine", "--data", data_dir, "--out", out)
        first = tree(out)
        run("cosine", "--data", data_dir, "--out", out)
        assert tree(out) == first


class TestExitCodes:
    def test_validation_error(self, data_dir, tmp_path, capsys):
        (data_dir / "attendance.csv").write_text("participant_id,talk_id\nu1,zz\n")
        assert run("stats", "--data", data_dir, "--out", tmp_path / "o") == 1
        assert "attendance.csv:2" in capsys.readouterr().err

    def test_missing_inputs(self, tmp_path):
        assert run("stats", "--out", tmp_path / "o") == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as info:
            run("stats", "--bogus")
        assert info.value.code == 2

    def test_module_entry_point(self, data_dir, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "talkwalk", "stats", "--data", str(data_dir),
                               "--out", str(tmp_path / "o")], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        proc = subprocess.run([sys.executable, "-m", "talkwalk", "nope"], capture_output=True, text=True)
        assert proc.returncode == 2
