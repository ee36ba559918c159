"""Sentence sentiment scoring and segment/node/edge aggregation.

The default scorer is lexicon-based: the raw score of a sentence is the mean
polarity of its matched tokens (0 when nothing matches), with an optional
single-preceding-token negation flip. Raw chapter scores are standardized
(z-score within the chapter, squashed to [-1, 1] by s/(1+|s|)); an entity's
sentiment is the unweighted mean of its segments' scores, where a segment
scores the mean standardized score over its sentence span.

Any callable mapping a sentence string to a finite float can replace the
lexicon scorer; aggregation is unchanged. Precomputed per-sentence scores
(e.g. from a neural model) can be supplied as an external score table.

Lexicon file: UTF-8, one ``token<TAB>polarity`` line each, ``#`` comments and
blank lines allowed, polarity in [-1, 1].
External score file: one ``chapter_index<TAB>sentence_index<TAB>score`` line
each (1-based indices); unlisted sentences score 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, Sequence

from ficnet.corpus import word_tokens
from ficnet.segmentation import NoSegmentsError

DEFAULT_NEUTRAL_BAND = 0.05

Scorer = Callable[[str], float]


class HasSpan(Protocol):
    start: int
    end: int


@dataclass(frozen=True)
class SentimentLexicon:
    polarities: Mapping[str, float]  # token -> polarity in [-1, 1]
    negations: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for token, polarity in self.polarities.items():
            if not token:
                raise ValueError("lexicon tokens must be non-empty")
            if not -1.0 <= polarity <= 1.0:
                raise ValueError(
                    f"lexicon polarity for {token!r} must be in [-1, 1], got {polarity}"
                )


def load_lexicon(
    path: str | Path,
    negations: Iterable[str] = (),
    case_insensitive: bool = True,
) -> SentimentLexicon:
    polarities: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'token<TAB>polarity'")
        token, raw = parts
        try:
            polarity = float(raw)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: polarity {raw!r} is not a number") from exc
        if case_insensitive:
            token = token.casefold()
        polarities[token] = polarity
    folded_negations = frozenset(
        n.casefold() if case_insensitive else n for n in negations
    )
    return SentimentLexicon(polarities=polarities, negations=folded_negations)


def load_external_scores(path: str | Path) -> dict[tuple[int, int], float]:
    """Read a chapter/sentence score table keyed by 1-based indices."""
    scores: dict[tuple[int, int], float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(
                f"{path}:{lineno}: expected 'chapter<TAB>sentence<TAB>score'"
            )
        try:
            scores[(int(parts[0]), int(parts[1]))] = float(parts[2])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed score row") from exc
    return scores


def score_sentence(
    sentence: str,
    lexicon: SentimentLexicon,
    negation: bool = False,
    case_insensitive: bool = True,
) -> float:
    """Mean matched polarity of the sentence, 0 when nothing matches.

    With negation enabled, a matched token directly preceded by a negation
    token contributes its polarity sign-flipped.
    """
    tokens = word_tokens(sentence)
    if case_insensitive:
        tokens = [t.casefold() for t in tokens]
    total = 0.0
    matched = 0
    previous = None
    for token in tokens:
        polarity = lexicon.polarities.get(token)
        if polarity is not None:
            if negation and previous in lexicon.negations:
                polarity = -polarity
            total += polarity
            matched += 1
        previous = token
    return total / max(1, matched)


def make_lexicon_scorer(
    lexicon: SentimentLexicon,
    negation: bool = False,
    case_insensitive: bool = True,
) -> Scorer:
    def scorer(sentence: str) -> float:
        return score_sentence(sentence, lexicon, negation, case_insensitive)

    return scorer


def standardize(scores: Sequence[float]) -> list[float]:
    """Z-score within the chapter, squashed to [-1, 1] by s/(1+|s|).

    All-equal inputs (including a single sentence) map to all zeros.
    """
    n = len(scores)
    if n == 0:
        return []
    mean = sum(scores) / n
    variance = sum((s - mean) ** 2 for s in scores) / n
    std = math.sqrt(variance)
    if std < 1e-12:
        return [0.0] * n
    out = []
    for s in scores:
        z = (s - mean) / std
        out.append(z / (1 + abs(z)))
    return out


def classify(score: float, neutral_band: float = DEFAULT_NEUTRAL_BAND) -> str:
    """Tri-polar class; scores within the band (boundary inclusive) are neutral."""
    if score > neutral_band:
        return "positive"
    if score < -neutral_band:
        return "negative"
    return "neutral"


def segment_score(span: HasSpan, standardized: Sequence[float]) -> float:
    """Mean standardized score over the segment's sentence span (1-based)."""
    window = standardized[span.start - 1 : span.end]
    return sum(window) / len(window)


def entity_sentiment(
    segments: Sequence[HasSpan], standardized: Sequence[float]
) -> float:
    """Unweighted mean of segment scores for a node or an edge."""
    if not segments:
        raise NoSegmentsError("entity has no segments to score")
    return sum(segment_score(seg, standardized) for seg in segments) / len(segments)
