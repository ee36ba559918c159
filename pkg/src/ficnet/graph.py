"""Weighted character interaction graphs.

Node weight for a character with kept segments i = 1..s (chapter length L,
segment length l_i, occurrence-sentence count l'_i):

    w = (1/L) * sum_i (1 + i*alpha) * (l_i + beta * l'_i)

Edge weight over a pair's merged interaction hulls (hull length l_i, l'_i
sentences with exactly one member, l''_i with both):

    w = (1/L) * sum_i (1 + i*alpha) * (l_i + beta * l'_i + gamma * l''_i)

Member importance on a hull of length l, with the member's own kept-segment
length l_m meeting the hull and its addressed count a_m inside the hull:

    phi_m = l / l_m + a_m / l

Chapter graphs carry a node per character with at least one kept segment and
an edge per pair with at least one interaction hull. The story graph is the
union of the chapter graphs with weights combined proportionally to chapter
sentence counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ficnet.segmentation import InteractionSegment, Segment, SegmentationParams
from ficnet.sentiment import classify

LPRIME_MODES = ("exactly_one", "either")


@dataclass(frozen=True)
class WeightParams:
    alpha: float = 0.1  # per-ordinal scaling
    beta: float = 0.1  # single-presence bonus
    gamma: float | None = None  # joint-presence bonus; None -> 2 * beta
    lprime_mode: str = "exactly_one"

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.lprime_mode not in LPRIME_MODES:
            raise ValueError(f"lprime_mode must be one of {LPRIME_MODES}")

    @property
    def joint_bonus(self) -> float:
        return 2 * self.beta if self.gamma is None else self.gamma


def node_weight(
    segments: Sequence[Segment], length: int, params: WeightParams | None = None
) -> float:
    params = params or WeightParams()
    total = 0.0
    for seg in segments:
        total += (1 + seg.ordinal * params.alpha) * (
            seg.length + params.beta * seg.occurrence_count
        )
    return total / length


def edge_weight(
    interactions: Sequence[InteractionSegment],
    length: int,
    params: WeightParams | None = None,
) -> float:
    params = params or WeightParams()
    total = 0.0
    for inter in interactions:
        single = inter.single_count
        if params.lprime_mode == "either":
            single += inter.joint_count
        total += (1 + inter.ordinal * params.alpha) * (
            inter.length
            + params.beta * single
            + params.joint_bonus * inter.joint_count
        )
    return total / length


def importance(interaction: InteractionSegment) -> tuple[float, float]:
    """Per-member importance of one interaction hull (first, second)."""
    l = interaction.length
    return tuple(
        l / own + addressed / l
        for own, addressed in zip(interaction.own_lengths, interaction.addressed)
    )


@dataclass
class NodeAttrs:
    weight: float
    appearances: int  # occurrence sentences across kept segments
    segment_count: int
    sequence: tuple[tuple[int, int, int, int], ...]  # (chapter, ordinal, start, end)
    sentiment: float = 0.0
    sentiment_class: str = "neutral"
    topics: tuple[float, ...] | None = None
    chapter_presence: int = 1


@dataclass
class EdgeAttrs:
    weight: float
    phi: tuple[float, float]  # member importances, aligned with the sorted pair
    segment_count: int
    sequence: tuple[tuple[int, int, int, int], ...]
    sentiment: float = 0.0
    sentiment_class: str = "neutral"


@dataclass
class ChapterGraph:
    index: int
    length: int  # sentences
    params: SegmentationParams
    nodes: dict[str, NodeAttrs] = field(default_factory=dict)
    edges: dict[tuple[str, str], EdgeAttrs] = field(default_factory=dict)


@dataclass
class StoryGraph:
    story_id: str
    chapter_count: int
    total_sentences: int
    nodes: dict[str, NodeAttrs] = field(default_factory=dict)
    edges: dict[tuple[str, str], EdgeAttrs] = field(default_factory=dict)
    # provenance: (chapter index, length, params) per chapter
    chapter_params: tuple[tuple[int, int, SegmentationParams], ...] = ()


def build_chapter_graph(
    chapter_index: int,
    length: int,
    segments: Mapping[str, Sequence[Segment]],
    interactions: Sequence[InteractionSegment],
    seg_params: SegmentationParams,
    weight_params: WeightParams | None = None,
) -> ChapterGraph:
    """Assemble one chapter's graph from its segments and interaction hulls."""
    weight_params = weight_params or WeightParams()
    graph = ChapterGraph(index=chapter_index, length=length, params=seg_params)

    for cid in sorted(segments):
        segs = segments[cid]
        if not segs:
            continue
        graph.nodes[cid] = NodeAttrs(
            weight=node_weight(segs, length, weight_params),
            appearances=sum(s.occurrence_count for s in segs),
            segment_count=len(segs),
            sequence=tuple((chapter_index, s.ordinal, s.start, s.end) for s in segs),
        )

    by_pair: dict[tuple[str, str], list[InteractionSegment]] = {}
    for inter in interactions:
        by_pair.setdefault(inter.pair, []).append(inter)
    for pair in sorted(by_pair):
        inters = sorted(by_pair[pair], key=lambda x: x.ordinal)
        phis = [importance(i) for i in inters]
        graph.edges[pair] = EdgeAttrs(
            weight=edge_weight(inters, length, weight_params),
            phi=(
                sum(p[0] for p in phis) / len(phis),
                sum(p[1] for p in phis) / len(phis),
            ),
            segment_count=len(inters),
            sequence=tuple((chapter_index, i.ordinal, i.start, i.end) for i in inters),
        )
    return graph


def _weighted_mean(pairs: Iterable[tuple[float, float]]) -> float:
    """Mean of values weighted by lengths; pairs are (length, value)."""
    total = weight = 0.0
    for w, v in pairs:
        total += w * v
        weight += w
    return total / weight if weight else 0.0


def merge_story(
    story_id: str,
    chapters: Sequence[ChapterGraph],
    neutral_band: float = 0.05,
) -> StoryGraph:
    """Merge chapter graphs into the story graph.

    Weights combine over all chapters proportionally to chapter length with 0
    where the entity is absent; sentiment, topics, and importances average
    (length-weighted) over the chapters where the entity is present.
    """
    if not chapters:
        raise ValueError("merge_story requires at least one chapter graph")
    total = sum(ch.length for ch in chapters)
    story = StoryGraph(
        story_id=story_id,
        chapter_count=len(chapters),
        total_sentences=total,
        chapter_params=tuple((ch.index, ch.length, ch.params) for ch in chapters),
    )

    node_ids = sorted({cid for ch in chapters for cid in ch.nodes})
    for cid in node_ids:
        present = [(ch.length, ch.nodes[cid]) for ch in chapters if cid in ch.nodes]
        weight = sum(l * n.weight for l, n in present) / total
        sentiment = _weighted_mean((l, n.sentiment) for l, n in present)
        topic_rows = [(l, n.topics) for l, n in present if n.topics is not None]
        topics = None
        if topic_rows:
            dim = len(topic_rows[0][1])
            topics = tuple(
                _weighted_mean((l, row[k]) for l, row in topic_rows) for k in range(dim)
            )
        story.nodes[cid] = NodeAttrs(
            weight=weight,
            appearances=sum(n.appearances for _, n in present),
            segment_count=sum(n.segment_count for _, n in present),
            sequence=tuple(item for _, n in present for item in n.sequence),
            sentiment=sentiment,
            sentiment_class=classify(sentiment, neutral_band),
            topics=topics,
            chapter_presence=len(present),
        )

    pairs = sorted({pair for ch in chapters for pair in ch.edges})
    for pair in pairs:
        present_e = [(ch.length, ch.edges[pair]) for ch in chapters if pair in ch.edges]
        weight = sum(l * e.weight for l, e in present_e) / total
        sentiment = _weighted_mean((l, e.sentiment) for l, e in present_e)
        story.edges[pair] = EdgeAttrs(
            weight=weight,
            phi=(
                _weighted_mean((l, e.phi[0]) for l, e in present_e),
                _weighted_mean((l, e.phi[1]) for l, e in present_e),
            ),
            segment_count=sum(e.segment_count for _, e in present_e),
            sequence=tuple(item for _, e in present_e for item in e.sequence),
            sentiment=sentiment,
            sentiment_class=classify(sentiment, neutral_band),
        )
    return story
