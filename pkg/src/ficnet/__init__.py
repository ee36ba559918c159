"""Weighted character interaction graphs and group statistics for chaptered fiction."""

__version__ = "0.1.0"

from ficnet.corpus import (
    Chapter,
    CharacterRecord,
    Corpus,
    CorpusError,
    Story,
    TextConfig,
    find_occurrences,
    load_corpus,
    split_sentences,
)
from ficnet.graph import (
    ChapterGraph,
    StoryGraph,
    WeightParams,
    build_chapter_graph,
    edge_weight,
    importance,
    merge_story,
    node_weight,
)
from ficnet.pipeline import ExtractionConfig, StoryResult, extract_corpus, extract_story
from ficnet.segmentation import (
    InteractionSegment,
    Segment,
    SegmentationParams,
    auto_params,
    build_segments,
    detect_interactions,
)
from ficnet.stats import TTestResult, regularized_incomplete_beta, t_test

__all__ = [
    "__version__",
    "Chapter",
    "CharacterRecord",
    "ChapterGraph",
    "Corpus",
    "CorpusError",
    "ExtractionConfig",
    "InteractionSegment",
    "Segment",
    "SegmentationParams",
    "Story",
    "StoryGraph",
    "StoryResult",
    "TTestResult",
    "TextConfig",
    "WeightParams",
    "auto_params",
    "build_chapter_graph",
    "build_segments",
    "detect_interactions",
    "edge_weight",
    "extract_corpus",
    "extract_story",
    "find_occurrences",
    "importance",
    "load_corpus",
    "merge_story",
    "node_weight",
    "regularized_incomplete_beta",
    "split_sentences",
    "t_test",
]
