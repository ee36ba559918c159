import math
import random
from dataclasses import dataclass

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ficnet.segmentation import NoSegmentsError
from ficnet.sentiment import (
    SentimentLexicon,
    classify,
    entity_sentiment,
    load_external_scores,
    load_lexicon,
    score_sentence,
    standardize,
)


@dataclass(frozen=True)
class Span:
    start: int
    end: int


LEX = SentimentLexicon({"good": 1.0, "bad": -1.0})
NEG_LEX = SentimentLexicon({"good": 1.0}, negations=frozenset({"not"}))


class TestScoreSentence:
    def test_mean_of_matches(self):
        assert math.isclose(score_sentence("good good bad", LEX), 1 / 3)

    def test_no_hits_is_neutral(self):
        assert score_sentence("nothing matches here", LEX) == 0.0

    def test_negation_flip(self):
        assert score_sentence("not good", NEG_LEX, negation=True) == -1.0
        # off by default
        assert score_sentence("not good", NEG_LEX) == 1.0

    def test_case_folding(self):
        assert score_sentence("GOOD", LEX) == 1.0
        assert score_sentence("GOOD", LEX, case_insensitive=False) == 0.0

    def test_lexicon_polarity_bounds(self):
        with pytest.raises(ValueError):
            SentimentLexicon({"x": 2.0})


class TestStandardize:
    def test_all_equal_maps_to_zero(self):
        assert standardize([0.0, 0.0, 0.0]) == [0.0, 0.0, 0.0]
        assert standardize([0.4, 0.4]) == [0.0, 0.0]

    def test_single_sentence(self):
        assert standardize([0.7]) == [0.0]

    def test_sign_preserved(self):
        out = standardize([-1.0, 1.0])
        assert classify(out[0]) == "negative"
        assert classify(out[1]) == "positive"

    @given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=50))
    def test_bounds(self, scores):
        out = standardize(scores)
        assert all(-1.0 <= s <= 1.0 for s in out)
        assert len(out) == len(scores)


class TestClassify:
    def test_band_is_inclusive(self):
        assert classify(0.05) == "neutral"
        assert classify(-0.05) == "neutral"
        assert classify(0.0500001) == "positive"
        assert classify(-0.0500001) == "negative"


class TestEntitySentiment:
    def test_symmetric_cancellation(self):
        std = [0.2, 0.2, -0.2, -0.2]
        score = entity_sentiment([Span(1, 2), Span(3, 4)], std)
        assert score == 0.0
        assert classify(score) == "neutral"

    def test_single_segment_identity(self):
        std = [-0.3, -0.3, 0.9]
        assert math.isclose(entity_sentiment([Span(1, 2)], std), -0.3)
        assert classify(-0.3) == "negative"

    def test_mean_against_threshold(self):
        std = [0.10, 0.06]
        score = entity_sentiment([Span(1, 1), Span(2, 2)], std)
        assert math.isclose(score, 0.08)
        assert classify(score) == "positive"

    def test_absent_entity_raises(self):
        with pytest.raises(NoSegmentsError):
            entity_sentiment([], [0.0])

    def test_permutation_invariance(self):
        rng = random.Random(9)
        std = [rng.uniform(-1, 1) for _ in range(30)]
        spans = [Span(1, 5), Span(7, 9), Span(12, 30), Span(2, 2)]
        base = entity_sentiment(spans, std)
        for _ in range(5):
            shuffled = spans[:]
            rng.shuffle(shuffled)
            assert math.isclose(entity_sentiment(shuffled, std), base, rel_tol=1e-12)

    def test_plugin_scorer_contract(self):
        # any sentence -> float callable slots in before standardization
        sentences = ["alpha", "beta beta", "gamma!"]
        scorer = lambda s: float(len(s))
        std = standardize([scorer(s) for s in sentences])
        assert all(-1 <= v <= 1 for v in std)


class TestFileFormats:
    def test_lexicon_round_trip(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("# comment\ngood\t0.8\nbad\t-0.5\n\n", encoding="utf-8")
        lex = load_lexicon(path, negations=["not"])
        assert lex.polarities == {"good": 0.8, "bad": -0.5}
        assert lex.negations == frozenset({"not"})

    def test_lexicon_rejects_bad_rows(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good 0.8\n", encoding="utf-8")  # space, not tab
        with pytest.raises(ValueError, match="token<TAB>polarity"):
            load_lexicon(path)

    def test_external_scores(self, tmp_path):
        path = tmp_path / "scores.tsv"
        path.write_text("1\t1\t0.5\n1\t2\t-0.25\n2\t1\t0\n", encoding="utf-8")
        table = load_external_scores(path)
        assert table[(1, 2)] == -0.25
        assert len(table) == 3
