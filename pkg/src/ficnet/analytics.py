"""Story-graph feature extraction and group-level aggregation.

Per-story group figures: the proportion of nodes in a group and the group's
share of total node weight (both partition to 1 per story), plus mean degree
and mean sentiment over the group's members. Writer-level figures are
unweighted means over the writer's stories; mean degree/sentiment skip stories
where the group is empty. Group-pair significance tests compare the per-story
weight shares of the two groups.

Edge-type distributions are pooled over all of a writer's edges (count-based,
with a weight-based variant). The pseudo-writer ``ALL`` aggregates every story.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ficnet.corpus import AGE_GROUPS, CharacterRecord, FAMILY_STATUSES, ROLES
from ficnet.graph import StoryGraph
from ficnet.stats import DegenerateVarianceError, TTestResult, t_test

log = logging.getLogger(__name__)

ALL_WRITERS = "ALL"

GROUP_KEYS: dict[str, tuple[str, ...]] = {
    "gender": ("male", "female"),
    "age": AGE_GROUPS,
    "age_gender": ("M-A1", "F-A1", "M-A2", "F-A2", "M-A3", "F-A3"),
    "family": FAMILY_STATUSES,
    "role": ROLES,
}

GENDER_PAIR_CLASSES = ("M-M", "M-F", "F-F")
AGE_PAIR_CLASSES = ("A1-A1", "A1-A2", "A1-A3", "A2-A2", "A2-A3", "A3-A3")


class MissingCharacterError(Exception):
    """A graph node has no matching roster record."""


@dataclass(frozen=True)
class StoryData:
    """One story's graph plus the metadata analytics needs."""

    story_id: str
    writer: str
    year: int | None
    genres: frozenset[str]
    roster: Mapping[str, CharacterRecord]
    graph: StoryGraph

    def record(self, character_id: str) -> CharacterRecord:
        try:
            return self.roster[character_id]
        except KeyError:
            raise MissingCharacterError(
                f"story {self.story_id!r}: node {character_id!r} has no roster record"
            ) from None


@dataclass(frozen=True)
class GraphFeatures:
    node_count: int
    edge_count: int
    density: float
    degrees: Mapping[str, int]
    strengths: Mapping[str, float]
    chapter_presence: Mapping[str, int]


def graph_features(graph: StoryGraph) -> GraphFeatures:
    n = len(graph.nodes)
    e = len(graph.edges)
    degrees = {cid: 0 for cid in graph.nodes}
    strengths = {cid: 0.0 for cid in graph.nodes}
    for (c1, c2), attrs in graph.edges.items():
        degrees[c1] += 1
        degrees[c2] += 1
        strengths[c1] += attrs.weight
        strengths[c2] += attrs.weight
    return GraphFeatures(
        node_count=n,
        edge_count=e,
        density=2.0 * e / (n * (n - 1)) if n >= 2 else 0.0,
        degrees=degrees,
        strengths=strengths,
        chapter_presence={cid: a.chapter_presence for cid, a in graph.nodes.items()},
    )


def _gender_letter(record: CharacterRecord) -> str:
    return "M" if record.gender == "male" else "F"


def group_of(record: CharacterRecord, key: str) -> str:
    if key == "gender":
        return record.gender
    if key == "age":
        return record.age_group
    if key == "age_gender":
        return f"{_gender_letter(record)}-{record.age_group}"
    if key == "family":
        return record.family_status
    if key == "role":
        return record.role
    raise ValueError(f"unknown grouping key {key!r}; expected one of {sorted(GROUP_KEYS)}")


@dataclass(frozen=True)
class GroupCell:
    proportion: float
    weight_share: float
    mean_degree: float | None
    mean_sentiment: float | None
    member_count: int


@dataclass
class GroupSummary:
    key: str
    groups: tuple[str, ...]
    writers: tuple[str, ...]  # in corpus order, without ALL
    story_stats: dict[str, dict[str, GroupCell]] = field(default_factory=dict)
    story_writer: dict[str, str] = field(default_factory=dict)
    writer_stats: dict[str, dict[str, GroupCell]] = field(default_factory=dict)
    tests: dict[str, dict[tuple[str, str], TTestResult | None]] = field(default_factory=dict)


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _story_groups(story: StoryData, key: str) -> dict[str, GroupCell]:
    groups = GROUP_KEYS[key]
    features = graph_features(story.graph)
    members: dict[str, list[str]] = {g: [] for g in groups}
    for cid in story.graph.nodes:
        members[group_of(story.record(cid), key)].append(cid)
    total_nodes = len(story.graph.nodes)
    total_weight = sum(a.weight for a in story.graph.nodes.values())
    cells = {}
    for g in groups:
        ids = members[g]
        weight = sum(story.graph.nodes[cid].weight for cid in ids)
        cells[g] = GroupCell(
            proportion=len(ids) / total_nodes,
            weight_share=weight / total_weight if total_weight else 0.0,
            mean_degree=_mean([features.degrees[cid] for cid in ids]),
            mean_sentiment=_mean([story.graph.nodes[cid].sentiment for cid in ids]),
            member_count=len(ids),
        )
    return cells


def _roll_up(per_story: Sequence[dict[str, GroupCell]], groups: Sequence[str]) -> dict[str, GroupCell]:
    cells = {}
    for g in groups:
        proportions = [s[g].proportion for s in per_story]
        shares = [s[g].weight_share for s in per_story]
        degrees = [s[g].mean_degree for s in per_story if s[g].mean_degree is not None]
        sentiments = [s[g].mean_sentiment for s in per_story if s[g].mean_sentiment is not None]
        cells[g] = GroupCell(
            proportion=sum(proportions) / len(proportions),
            weight_share=sum(shares) / len(shares),
            mean_degree=_mean(degrees),
            mean_sentiment=_mean(sentiments),
            member_count=sum(s[g].member_count for s in per_story),
        )
    return cells


def _pair_tests(
    per_story: Sequence[dict[str, GroupCell]],
    groups: Sequence[str],
    alpha: float,
    variant: str,
    tails: int,
) -> dict[tuple[str, str], TTestResult | None]:
    tests: dict[tuple[str, str], TTestResult | None] = {}
    for i, g1 in enumerate(groups):
        for g2 in groups[i + 1:]:
            a = [s[g1].weight_share for s in per_story]
            b = [s[g2].weight_share for s in per_story]
            try:
                tests[(g1, g2)] = t_test(a, b, variant=variant, alpha=alpha, tails=tails)
            except (ValueError, DegenerateVarianceError):
                tests[(g1, g2)] = None
    return tests


def group_summary(
    stories: Sequence[StoryData],
    key: str,
    alpha: float = 0.05,
    variant: str = "pooled",
    tails: int = 2,
) -> GroupSummary:
    """Group proportions, weight shares, degree/sentiment means, and pair tests."""
    if key not in GROUP_KEYS:
        raise ValueError(f"unknown grouping key {key!r}; expected one of {sorted(GROUP_KEYS)}")
    groups = GROUP_KEYS[key]
    writers = tuple(dict.fromkeys(s.writer for s in stories))
    summary = GroupSummary(key=key, groups=groups, writers=writers)

    by_writer: dict[str, list[dict[str, GroupCell]]] = {w: [] for w in writers}
    all_stats: list[dict[str, GroupCell]] = []
    for story in stories:
        if not story.graph.nodes:
            log.warning("story %r has an empty graph; skipped in group summary",
                        story.story_id)
            continue
        cells = _story_groups(story, key)
        summary.story_stats[story.story_id] = cells
        summary.story_writer[story.story_id] = story.writer
        by_writer[story.writer].append(cells)
        all_stats.append(cells)

    for writer, per_story in by_writer.items():
        if per_story:
            summary.writer_stats[writer] = _roll_up(per_story, groups)
            summary.tests[writer] = _pair_tests(per_story, groups, alpha, variant, tails)
    if all_stats:
        summary.writer_stats[ALL_WRITERS] = _roll_up(all_stats, groups)
        summary.tests[ALL_WRITERS] = _pair_tests(all_stats, groups, alpha, variant, tails)
    return summary


@dataclass(frozen=True)
class EdgeTypeDistribution:
    attribute: str  # "gender" or "age"
    classes: tuple[str, ...]
    by_weight: bool
    # writer -> class -> proportion; empty mapping when the writer has no edges
    proportions: Mapping[str, Mapping[str, float]]


def _edge_class(story: StoryData, pair: tuple[str, str], attribute: str) -> str:
    rec1, rec2 = story.record(pair[0]), story.record(pair[1])
    if attribute == "gender":
        order = ("M", "F")
        first, second = _gender_letter(rec1), _gender_letter(rec2)
    elif attribute == "age":
        order = AGE_GROUPS
        first, second = rec1.age_group, rec2.age_group
    else:
        raise ValueError(f"unknown edge attribute {attribute!r}")
    a, b = sorted((first, second), key=order.index)
    return f"{a}-{b}"


def edge_type_distribution(
    stories: Sequence[StoryData], attribute: str = "gender", by_weight: bool = False
) -> EdgeTypeDistribution:
    """Edge proportions over unordered endpoint-attribute classes, per writer."""
    classes = GENDER_PAIR_CLASSES if attribute == "gender" else AGE_PAIR_CLASSES
    if attribute not in ("gender", "age"):
        raise ValueError(f"unknown edge attribute {attribute!r}")
    totals: dict[str, dict[str, float]] = {}
    for story in stories:
        for scope in (story.writer, ALL_WRITERS):
            bucket = totals.setdefault(scope, {c: 0.0 for c in classes})
            for pair, attrs in story.graph.edges.items():
                bucket[_edge_class(story, pair, attribute)] += (
                    attrs.weight if by_weight else 1.0
                )
    proportions: dict[str, dict[str, float]] = {}
    for scope, bucket in totals.items():
        total = sum(bucket.values())
        proportions[scope] = (
            {c: bucket[c] / total for c in classes} if total else {}
        )
    return EdgeTypeDistribution(
        attribute=attribute, classes=classes, by_weight=by_weight, proportions=proportions
    )


@dataclass(frozen=True)
class ProtagonistRow:
    story_id: str
    writer: str
    character_id: str
    gender: str
    age_group: str
    weight: float
    degree: int
    sentiment: float


@dataclass(frozen=True)
class ProtagonistGenderStats:
    share: float
    mean_weight: float | None
    mean_degree: float | None
    mean_sentiment: float | None
    count: int


@dataclass
class ProtagonistProfile:
    rows: tuple[ProtagonistRow, ...]
    writers: tuple[str, ...]
    # writer -> gender letter -> stats
    by_writer: dict[str, dict[str, ProtagonistGenderStats]] = field(default_factory=dict)
    # writer -> metric name -> test (M vs F samples)
    tests: dict[str, dict[str, TTestResult | None]] = field(default_factory=dict)


def protagonist_profile(
    stories: Sequence[StoryData],
    alpha: float = 0.05,
    variant: str = "pooled",
    tails: int = 2,
) -> ProtagonistProfile:
    """Weight/degree/sentiment of roster-flagged protagonists, split by gender."""
    rows: list[ProtagonistRow] = []
    for story in stories:
        features = graph_features(story.graph)
        for cid in sorted(story.graph.nodes):
            record = story.record(cid)
            if record.role != "protagonist":
                continue
            rows.append(
                ProtagonistRow(
                    story_id=story.story_id,
                    writer=story.writer,
                    character_id=cid,
                    gender=record.gender,
                    age_group=record.age_group,
                    weight=story.graph.nodes[cid].weight,
                    degree=features.degrees[cid],
                    sentiment=story.graph.nodes[cid].sentiment,
                )
            )
    writers = tuple(dict.fromkeys(s.writer for s in stories))
    profile = ProtagonistProfile(rows=tuple(rows), writers=writers)
    for scope in (*writers, ALL_WRITERS):
        scoped = [r for r in rows if scope == ALL_WRITERS or r.writer == scope]
        if not scoped:
            continue
        stats: dict[str, ProtagonistGenderStats] = {}
        samples: dict[str, dict[str, list[float]]] = {}
        for letter, gender in (("M", "male"), ("F", "female")):
            members = [r for r in scoped if r.gender == gender]
            samples[letter] = {
                "weight": [r.weight for r in members],
                "degree": [float(r.degree) for r in members],
                "sentiment": [r.sentiment for r in members],
            }
            stats[letter] = ProtagonistGenderStats(
                share=len(members) / len(scoped),
                mean_weight=_mean(samples[letter]["weight"]),
                mean_degree=_mean(samples[letter]["degree"]),
                mean_sentiment=_mean(samples[letter]["sentiment"]),
                count=len(members),
            )
        profile.by_writer[scope] = stats
        profile.tests[scope] = {}
        for metric in ("weight", "degree", "sentiment"):
            try:
                profile.tests[scope][metric] = t_test(
                    samples["M"][metric], samples["F"][metric],
                    variant=variant, alpha=alpha, tails=tails,
                )
            except (ValueError, DegenerateVarianceError):
                profile.tests[scope][metric] = None
    return profile


@dataclass(frozen=True)
class TimeSeriesPoint:
    writer: str
    story_id: str
    year: int
    values: Mapping[str, float]


def time_series(stories: Sequence[StoryData], metric: str) -> list[TimeSeriesPoint]:
    """Per-story series over publication years.

    ``age_proportions``: node-count share of each age group. ``family_weight``:
    weight share of nodes with a family status other than ``none``. Stories
    without a year are skipped with a warning.
    """
    if metric not in ("age_proportions", "family_weight"):
        raise ValueError(f"unknown time series metric {metric!r}")
    points = []
    for story in stories:
        if story.year is None:
            log.warning("story %r has no publication year; skipped in time series",
                        story.story_id)
            continue
        if not story.graph.nodes:
            log.warning("story %r has an empty graph; skipped in time series",
                        story.story_id)
            continue
        if metric == "age_proportions":
            total = len(story.graph.nodes)
            counts = {g: 0 for g in AGE_GROUPS}
            for cid in story.graph.nodes:
                counts[story.record(cid).age_group] += 1
            values = {g: counts[g] / total for g in AGE_GROUPS}
        else:
            total_weight = sum(a.weight for a in story.graph.nodes.values())
            family = sum(
                attrs.weight
                for cid, attrs in story.graph.nodes.items()
                if story.record(cid).family_status != "none"
            )
            values = {
                "family_weight": family / total_weight if total_weight else 0.0
            }
        points.append(
            TimeSeriesPoint(
                writer=story.writer, story_id=story.story_id, year=story.year,
                values=values,
            )
        )
    points.sort(key=lambda p: (p.year, p.writer, p.story_id))
    return points


def within_gender_age_distribution(
    stories: Sequence[StoryData],
) -> dict[str, dict[str, float]]:
    """Share of each gender's pooled characters per age group, per writer.

    Rows are keyed like M-A1 .. F-A3; each gender's three shares sum to 1 for
    writers that have characters of that gender.
    """
    counts: dict[str, dict[str, int]] = {}
    for story in stories:
        for scope in (story.writer, ALL_WRITERS):
            bucket = counts.setdefault(
                scope, {f"{g}-{a}": 0 for g in ("M", "F") for a in AGE_GROUPS}
            )
            for cid in story.graph.nodes:
                record = story.record(cid)
                bucket[f"{_gender_letter(record)}-{record.age_group}"] += 1
    shares: dict[str, dict[str, float]] = {}
    for scope, bucket in counts.items():
        shares[scope] = {}
        for g in ("M", "F"):
            total = sum(bucket[f"{g}-{a}"] for a in AGE_GROUPS)
            for a in AGE_GROUPS:
                shares[scope][f"{g}-{a}"] = bucket[f"{g}-{a}"] / total if total else 0.0
    return shares


def genre_scatter(stories: Sequence[StoryData]) -> list[tuple[str, str, str, int, float]]:
    """(genre, writer, story, node_count, density) rows; multi-genre stories
    contribute one row per genre."""
    rows = []
    for story in stories:
        features = graph_features(story.graph)
        for genre in sorted(story.genres):
            rows.append(
                (genre, story.writer, story.story_id,
                 features.node_count, features.density)
            )
    rows.sort()
    return rows
