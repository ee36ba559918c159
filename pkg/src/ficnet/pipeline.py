"""End-to-end extraction: corpus -> segments -> chapter graphs -> story graph.

Per chapter: match occurrences, resolve segmentation thresholds (auto-derived
unless overridden per run or per story), build segments and interaction hulls,
assemble the weighted graph, and attach sentiment from the configured scorer.
Chapter graphs then merge into the story graph. Everything here is pure and
deterministic, so stories can be processed in parallel.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from ficnet.analytics import StoryData
from ficnet.corpus import Corpus, Story, TextConfig, find_occurrences
from ficnet.graph import (
    ChapterGraph,
    StoryGraph,
    WeightParams,
    build_chapter_graph,
    merge_story,
)
from ficnet.segmentation import (
    Segment,
    SegmentationParams,
    auto_params,
    detect_interactions,
    segment_chapter,
)
from ficnet.sentiment import (
    DEFAULT_NEUTRAL_BAND,
    SentimentLexicon,
    classify,
    entity_sentiment,
    make_lexicon_scorer,
    standardize,
)
from ficnet.topics import TopicModel, chapter_topic_vectors


@dataclass(frozen=True)
class ExtractionConfig:
    weights: WeightParams = WeightParams()
    delta_a: int | None = None  # run-wide overrides of the auto thresholds
    delta_b: int | None = None
    delta_c: int | None = None
    strict_delta_c: bool = False
    neutral_band: float = DEFAULT_NEUTRAL_BAND
    lexicon: SentimentLexicon | None = None
    negation: bool = False
    # (chapter, sentence) -> raw score; replaces the lexicon scorer. The table
    # has no story key, so it is meant for single-story corpora; unlisted
    # sentences score 0.
    external_scores: Mapping[tuple[int, int], float] | None = None


@dataclass
class StoryResult:
    story: Story
    chapter_graphs: tuple[ChapterGraph, ...]
    chapter_segments: tuple[Mapping[str, tuple[Segment, ...]], ...]
    graph: StoryGraph

    def data(self) -> StoryData:
        entry = self.story.entry
        return StoryData(
            story_id=entry.id,
            writer=entry.writer,
            year=entry.year,
            genres=entry.genres,
            roster=self.story.roster_by_id(),
            graph=self.graph,
        )


def resolve_params(
    length: int,
    active_characters: int,
    config: ExtractionConfig,
    story_override: Mapping[str, int],
) -> SegmentationParams:
    """Auto thresholds, patched by run-wide then per-story overrides."""
    base = auto_params(length, max(1, active_characters), config.strict_delta_c)
    values = {
        "delta_a": base.delta_a,
        "delta_b": base.delta_b,
        "delta_c": base.delta_c,
    }
    for key in values:
        run_value = getattr(config, key)
        if run_value is not None:
            values[key] = run_value
        if key in story_override:
            values[key] = story_override[key]
    return SegmentationParams(strict_delta_c=config.strict_delta_c, **values)


def extract_story(
    story: Story, text_config: TextConfig, config: ExtractionConfig
) -> StoryResult:
    scorer = None
    if config.external_scores is None and config.lexicon is not None:
        scorer = make_lexicon_scorer(
            config.lexicon, config.negation, text_config.case_insensitive
        )

    chapter_graphs: list[ChapterGraph] = []
    chapter_segments: list[Mapping[str, tuple[Segment, ...]]] = []
    for chapter in story.chapters:
        occurrences = find_occurrences(chapter, story.roster, text_config)
        active = sum(1 for cid in occurrences.characters() if occurrences.sentences(cid))
        params = resolve_params(chapter.length, active, config, story.entry.seg_override)
        segments = segment_chapter(occurrences, params)
        interactions = detect_interactions(segments, occurrences, params, chapter.length)
        graph = build_chapter_graph(
            chapter.index, chapter.length, segments, interactions, params, config.weights
        )

        if config.external_scores is not None:
            raw = [
                config.external_scores.get((chapter.index, i), 0.0)
                for i in range(1, chapter.length + 1)
            ]
        elif scorer is not None:
            raw = [scorer(s) for s in chapter.sentences]
        else:
            raw = [0.0] * chapter.length
        standardized = standardize(raw)
        for cid, attrs in graph.nodes.items():
            score = entity_sentiment(segments[cid], standardized)
            attrs.sentiment = score
            attrs.sentiment_class = classify(score, config.neutral_band)
        by_pair: dict[tuple[str, str], list] = {}
        for inter in interactions:
            by_pair.setdefault(inter.pair, []).append(inter)
        for pair, attrs in graph.edges.items():
            score = entity_sentiment(by_pair[pair], standardized)
            attrs.sentiment = score
            attrs.sentiment_class = classify(score, config.neutral_band)

        chapter_graphs.append(graph)
        chapter_segments.append(segments)

    merged = merge_story(story.id, chapter_graphs, config.neutral_band)
    return StoryResult(
        story=story,
        chapter_graphs=tuple(chapter_graphs),
        chapter_segments=tuple(chapter_segments),
        graph=merged,
    )


def extract_corpus(
    corpus: Corpus, config: ExtractionConfig, jobs: int = 1
) -> list[StoryResult]:
    """Extract every story; with jobs > 1 stories run in a process pool."""
    if jobs > 1 and len(corpus.stories) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(
                pool.map(
                    extract_story,
                    corpus.stories,
                    [corpus.config] * len(corpus.stories),
                    [config] * len(corpus.stories),
                )
            )
    return [extract_story(story, corpus.config, config) for story in corpus.stories]


def located_segments(
    result: StoryResult, character_id: str
) -> list[tuple[str, int, Segment]]:
    """(story, chapter, segment) triples for one character across chapters."""
    triples = []
    for chapter_graph, segments in zip(result.chapter_graphs, result.chapter_segments):
        for seg in segments.get(character_id, ()):
            triples.append((result.story.id, chapter_graph.index, seg))
    return triples


def attach_topics(
    result: StoryResult, model: TopicModel, neutral_band: float = DEFAULT_NEUTRAL_BAND
) -> StoryResult:
    """Set chapter-level node topic vectors and rebuild the story merge."""
    for chapter_graph, segments in zip(result.chapter_graphs, result.chapter_segments):
        vectors = chapter_topic_vectors(
            model, result.story.id, chapter_graph.index, segments
        )
        for cid, attrs in chapter_graph.nodes.items():
            attrs.topics = vectors.get(cid)
    result.graph = merge_story(result.story.id, result.chapter_graphs, neutral_band)
    return result
