import math
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from talkwalk.porter import porter_stem
from talkwalk.text import (DocVector, TalkRepresentation, build_vectors, cosine, load_stopwords, preprocess,
                           silhouette_pair, slot_silhouettes, tfidf)

VECTORS = [tuple(line.split("\t")) for line in
           (Path(__file__).parent / "data" / "porter_vectors.tsv").read_text().splitlines() if line]


class TestPorter:
    def test_vector_count(self):
        assert len(VECTORS) >= 50

    @pytest.mark.parametrize("word,stem", VECTORS)
    def test_reference_vectors(self, word, stem):
        assert porter_stem(word) == stem

    @pytest.mark.parametrize("word", ["a", "is", "as", "by"])
    def test_short_words_untouched(self, word):
        assert porter_stem(word) == word

    def test_idempotent_on_common_stems(self):
        for _, stem in VECTORS:
            # stemming is not idempotent in general; these stems are fixed points
            if stem in ("caress", "sky", "feed", "roll", "walk", "network", "adjust"):
                assert porter_stem(stem) == stem


class TestPreprocess:
    def test_pipeline(self):
        stop = frozenset({"the", "of"})
        assert preprocess("The Ponies of x-Rays, RELATIONAL!", stop) == ["poni", "rai", "relat"]

    def test_digits_split_tokens(self):
        assert preprocess("web2mining", frozenset()) == ["web", "mine"]

    def test_bundled_stopwords(self):
        stop = load_stopwords()
        assert {"the", "and", "of"} <= stop
        assert "graph" not in stop

    def test_custom_stopwords(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("Graph\n\nwalk\n")
        assert load_stopwords(p) == frozenset({"graph", "walk"})


class TestTfidf:
    def test_weights(self):
        vecs = tfidf({"x": Counter(a=2, b=1), "y": Counter(b=3), "z": Counter(c=1)})
        assert vecs["x"].weights == pytest.approx({"a": 2 * math.log(3), "b": math.log(1.5)})
        assert vecs["y"].weights == pytest.approx({"b": 3 * math.log(1.5)})

    def test_term_in_every_document_vanishes(self):
        vecs = tfidf({"x": Counter(a=1, b=1), "y": Counter(a=2)})
        assert "a" not in vecs["x"].weights
        assert vecs["y"].norm == 0

    def test_build_vectors_shares_universe(self, dataset):
        profiles, talks = build_vectors(dataset.corpus, dataset.schedule)
        assert set(profiles) == {"u1", "u2", "u3"}
        assert set(talks) == set(dataset.schedule.talks)
        assert cosine(profiles["u1"], talks["a1"]) > cosine(profiles["u1"], talks["b1"])
        assert cosine(profiles["u2"], talks["b1"]) > cosine(profiles["u2"], talks["a1"])

    def test_representations_differ(self, dataset):
        _, by_title = build_vectors(dataset.corpus, dataset.schedule, TalkRepresentation.TITLE)
        _, by_paper = build_vectors(dataset.corpus, dataset.schedule, "paper")
        assert by_title["a1"] == by_title["a2"]
        assert by_title["a1"] != by_paper["a1"]


def sparse_vector(rng, vocab=40):
    k = int(rng.integers(1, min(12, vocab + 1)))
    terms = rng.choice(vocab, k, replace=False)
    return DocVector({f"w{t}": float(rng.exponential()) + 1e-3 for t in terms})


class TestCosine:
    def test_property_suite(self):
        rng = np.random.default_rng(2024)
        vecs = [sparse_vector(rng) for _ in range(1000)]
        for i, v in enumerate(vecs):
            assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)
            assert cosine(v, v.scaled(float(rng.uniform(0.01, 100)))) == pytest.approx(1.0, abs=1e-12)
            w = vecs[(i + 1) % len(vecs)]
            c = cosine(v, w)
            assert 0.0 <= c <= 1.0
            assert c == cosine(w, v)
            if not set(v.weights) & set(w.weights):
                assert c == 0.0

    def test_orthogonal(self):
        assert cosine(DocVector({"a": 1.0}), DocVector({"b": 2.0})) == 0.0

    def test_empty_vector(self):
        assert cosine(DocVector(), DocVector({"a": 1.0})) == 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            DocVector({"a": -1.0})

    @settings(max_examples=200, deadline=None)
    @given(st.dictionaries(st.sampled_from("abcdefgh"), st.floats(0.001, 1e3), min_size=1),
           st.dictionaries(st.sampled_from("abcdefgh"), st.floats(0.001, 1e3), min_size=1),
           st.floats(1e-3, 1e3))
    def test_symmetric_and_scale_invariant(self, a, b, k):
        va, vb = DocVector(a), DocVector(b)
        assert cosine(va, vb) == cosine(vb, va)
        assert cosine(va.scaled(k), vb) == pytest.approx(cosine(va, vb), abs=1e-12)


class TestSilhouette:
    def test_perfect_separation(self):
        vecs = {"a1": DocVector({"x": 1.0}), "a2": DocVector({"x": 2.0}),
                "b1": DocVector({"y": 1.0}), "b2": DocVector({"y": 3.0})}
        per, avg = silhouette_pair(["a1", "a2"], ["b1", "b2"], vecs)
        assert avg == 1.0
        assert set(per.values()) == {1.0}

    def test_all_identical(self):
        vecs = {t: DocVector({"x": 1.0, "y": 1.0}) for t in ("a1", "a2", "b1", "b2")}
        assert silhouette_pair(["a1", "a2"], ["b1", "b2"], vecs)[1] == 0.0

    def test_single_talk_session(self):
        vecs = {"a1": DocVector({"x": 1.0}), "b1": DocVector({"y": 1.0}), "b2": DocVector({"y": 1.0})}
        per, _ = silhouette_pair(["a1"], ["b1", "b2"], vecs)
        assert per["a1"] == 0.0
        assert per["b1"] == 1.0

    def test_hand_computed_value(self):
        # a1 is nearer to b1 than to its own session mate
        vecs = {"a1": DocVector({"x": 1.0, "y": 1.0}), "a2": DocVector({"x": 1.0}),
                "b1": DocVector({"y": 1.0, "x": 1.0, "z": 0.1}), "b2": DocVector({"z": 1.0})}
        per, _ = silhouette_pair(["a1", "a2"], ["b1", "b2"], vecs)
        a = 1 - 1 / math.sqrt(2)
        b = 1 - cosine(vecs["a1"], vecs["b1"])
        assert per["a1"] == pytest.approx((b - a) / max(a, b))
        assert per["a1"] < 0

    def test_bounds_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            na, nb = rng.integers(1, 5, 2)
            ids_a = [f"a{i}" for i in range(na)]
            ids_b = [f"b{i}" for i in range(nb)]
            vecs = {t: sparse_vector(rng, vocab=8) for t in ids_a + ids_b}
            per, avg = silhouette_pair(ids_a, ids_b, vecs)
            assert all(-1.0 <= v <= 1.0 for v in per.values())
            assert -1.0 <= avg <= 1.0

    def test_missing_vector(self):
        with pytest.raises(KeyError):
            silhouette_pair(["a"], ["b"], {"a": DocVector({"x": 1.0})})

    def test_slot_silhouettes(self, dataset):
        _, talks = build_vectors(dataset.corpus, dataset.schedule, TalkRepresentation.TITLE)
        out = slot_silhouettes(dataset.schedule, talks)
        assert set(out) == {"S1", "S2"}
        assert out["S1"] == 1.0
