import numpy as np
import pytest

from talkwalk.evaluation import (Z95, accuracy_ci, auc, evaluate, expand, influence_presenter,
                                 influence_same_talk, mann_whitney_auc, proportion_ci, roc_auc_trapezoid)
from talkwalk.predict import decide


class TestAuc:
    @pytest.mark.parametrize("pos,neg,expected", [
        ([0.9, 0.8], [0.7, 0.1], 1.0),
        ([0.9, 0.4], [0.6, 0.2], 0.75),
        ([0.5, 0.5], [0.5, 0.5], 0.5),
        ([0.1], [0.9], 0.0),
        ([0.5, 0.9], [0.5], 0.75),
    ])
    def test_examples(self, pos, neg, expected):
        assert mann_whitney_auc(pos, neg) == expected
        assert roc_auc_trapezoid(pos, neg) == pytest.approx(expected, abs=1e-15)

    def test_antisymmetric(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            pos, neg = rng.random(int(rng.integers(1, 30))), rng.random(int(rng.integers(1, 30)))
            assert mann_whitney_auc(pos, neg) + mann_whitney_auc(neg, pos) == pytest.approx(1.0, abs=1e-12)

    def test_empty(self):
        with pytest.raises(ValueError):
            mann_whitney_auc([], [0.1])

    def test_decision_auc(self):
        dec = [decide("u", "S", 0, {"a": 0.9, "b": 0.1}, "a"), decide("u", "S", 1, {"a": 0.3, "b": 0.7}, "a")]
        pos, neg = expand(dec)
        assert sorted(pos) == [0.3, 0.9] and sorted(neg) == [0.1, 0.7]
        assert auc(dec) == 0.75


class TestAccuracy:
    def test_ci_half_width(self):
        p, lo, hi = proportion_ci(50, 100)
        assert p == 0.5
        assert (hi - lo) / 2 == pytest.approx(0.098, abs=5e-4)
        assert (hi - lo) / 2 == pytest.approx(Z95 * 0.05)

    def test_ci_clamped(self):
        assert proportion_ci(10, 10) == (1.0, 1.0, 1.0)
        assert proportion_ci(0, 10)[1] == 0.0

    def test_empty(self):
        with pytest.raises(ValueError):
            accuracy_ci([])

    def test_report(self):
        dec = [decide("u", "S", 0, {"a": 1.0, "b": 1.0}, "a"), decide("v", "S", 0, {"a": 0.2, "b": 0.8}, "a")]
        rep = evaluate(dec, "everyone")
        assert rep.accuracy == 0.5 and rep.tie_count == 1
        assert rep.decision_count == 2 and rep.participant_count == 2
        assert rep.population == "everyone"


class TestInfluence:
    def test_same_talk_fixture(self, dataset):
        rows = {r.key: r for r in influence_same_talk(dataset)}
        assert (rows["coffee_break_contact"].probability, rows["coffee_break_contact"].n) == (1.0, 5)
        assert (rows["prior_contact"].probability, rows["prior_contact"].n) == (0.75, 8)
        assert (rows["contact_by_end"].probability, rows["contact_by_end"].n) == (0.7, 10)
        assert rows["no_contact"].n == 14
        assert rows["no_contact"].probability == pytest.approx(2 / 14)

    def test_presenter_fixture(self, dataset):
        rows = influence_presenter(dataset, [20, 80, 160])
        assert [(r.key, r.probability, r.n) for r in rows] == [("20", 1.0, 5), ("80", 1.0, 2), ("160", None, 0)]
        assert rows[2].ci_lo is None

    @pytest.mark.parametrize("th", [[10], [40, 20], [20, 20]])
    def test_bad_thresholds(self, dataset, th):
        with pytest.raises(ValueError):
            influence_presenter(dataset, th)
