"""Character segments and pairwise interaction segments.

Occurrence sentences of one character are chained while consecutive gaps stay
below ``delta_a``; chains with at least ``delta_c`` occurrence sentences are
kept as segments. Two characters interact wherever their ``delta_b``-padded
segments overlap; each such overlap contributes the hull of the two raw
segments, and overlapping hulls of the same pair are merged before ordinals
are assigned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ficnet.corpus import OccurrenceMatrix


class NoSegmentsError(Exception):
    """An entity with no segments was queried for a segment-derived value."""


@dataclass(frozen=True)
class SegmentationParams:
    delta_a: int  # intra-character sentence distance threshold, >= 1
    delta_b: int  # inter-character padding threshold, >= 0
    delta_c: int  # minimum appearance threshold, >= 1
    strict_delta_c: bool = False  # True: keep chains with count > delta_c

    def __post_init__(self) -> None:
        if self.delta_a < 1:
            raise ValueError(f"delta_a must be >= 1, got {self.delta_a}")
        if self.delta_b < 0:
            raise ValueError(f"delta_b must be >= 0, got {self.delta_b}")
        if self.delta_c < 1:
            raise ValueError(f"delta_c must be >= 1, got {self.delta_c}")

    def keeps(self, occurrence_count: int) -> bool:
        if self.strict_delta_c:
            return occurrence_count > self.delta_c
        return occurrence_count >= self.delta_c


def auto_params(
    length: int, character_count: int, strict_delta_c: bool = False
) -> SegmentationParams:
    """Derive thresholds from chapter length and active character count.

    delta_a = clamp(ceil(L / (5K)), 3, 15); delta_b = max(1, ceil(delta_a/2));
    delta_c = max(1, floor(L/200) + 1).
    """
    if length < 1:
        raise ValueError(f"chapter length must be >= 1, got {length}")
    if character_count < 1:
        raise ValueError(f"character count must be >= 1, got {character_count}")
    delta_a = min(15, max(3, math.ceil(length / (5 * character_count))))
    delta_b = max(1, math.ceil(delta_a / 2))
    delta_c = max(1, length // 200 + 1)
    return SegmentationParams(delta_a, delta_b, delta_c, strict_delta_c)


@dataclass(frozen=True)
class Segment:
    character: str
    start: int  # first occurrence sentence of the chain
    end: int  # last occurrence sentence of the chain
    occurrences: tuple[int, ...]
    ordinal: int  # 1-based among the character's kept segments in the chapter

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def occurrence_count(self) -> int:
        return len(self.occurrences)


def build_segments(
    character: str, occurrences: Sequence[int], params: SegmentationParams
) -> tuple[Segment, ...]:
    """Chain sorted occurrence sentences into kept segments."""
    chains: list[list[int]] = []
    for idx in occurrences:
        if chains and idx - chains[-1][-1] < params.delta_a:
            chains[-1].append(idx)
        else:
            chains.append([idx])
    segments = []
    ordinal = 0
    for chain in chains:
        if params.keeps(len(chain)):
            ordinal += 1
            segments.append(
                Segment(
                    character=character,
                    start=chain[0],
                    end=chain[-1],
                    occurrences=tuple(chain),
                    ordinal=ordinal,
                )
            )
    return tuple(segments)


def segment_chapter(
    occurrences: OccurrenceMatrix, params: SegmentationParams
) -> dict[str, tuple[Segment, ...]]:
    """Build kept segments for every character of one chapter."""
    return {
        cid: build_segments(cid, occurrences.sentences(cid), params)
        for cid in occurrences.characters()
    }


@dataclass(frozen=True)
class InteractionSegment:
    first: str  # smaller character id
    second: str
    start: int  # hull bounds over the contributing raw segments
    end: int
    single_count: int  # sentences in the hull with exactly one member present
    joint_count: int  # sentences in the hull with both members present
    addressed: tuple[int, int]  # total alias matches per member in the hull
    own_lengths: tuple[int, int]  # per member: kept-segment length meeting the hull
    ordinal: int  # 1-based among the pair's merged hulls in the chapter

    @property
    def pair(self) -> tuple[str, str]:
        return (self.first, self.second)

    @property
    def length(self) -> int:
        return self.end - self.start + 1


def _merge_hulls(hulls: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Merge inclusive intervals that share at least one sentence."""
    merged: list[tuple[int, int]] = []
    for start, end in sorted(hulls):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def detect_interactions(
    segments: Mapping[str, Sequence[Segment]],
    occurrences: OccurrenceMatrix,
    params: SegmentationParams,
    length: int,
) -> tuple[InteractionSegment, ...]:
    """Find merged interaction hulls for every unordered character pair."""
    interactions: list[InteractionSegment] = []
    characters = sorted(cid for cid, segs in segments.items() if segs)
    for i, c1 in enumerate(characters):
        for c2 in characters[i + 1:]:
            hulls = []
            for s1 in segments[c1]:
                for s2 in segments[c2]:
                    if (s1.start - params.delta_b <= s2.end + params.delta_b
                            and s2.start - params.delta_b <= s1.end + params.delta_b):
                        hulls.append(
                            (max(1, min(s1.start, s2.start)),
                             min(length, max(s1.end, s2.end)))
                        )
            for ordinal, (start, end) in enumerate(_merge_hulls(hulls), start=1):
                single = joint = 0
                for sent in range(start, end + 1):
                    p1 = occurrences.present(c1, sent)
                    p2 = occurrences.present(c2, sent)
                    if p1 and p2:
                        joint += 1
                    elif p1 or p2:
                        single += 1
                own = tuple(
                    sum(
                        seg.length
                        for seg in segments[cid]
                        if seg.start <= end and start <= seg.end
                    )
                    for cid in (c1, c2)
                )
                interactions.append(
                    InteractionSegment(
                        first=c1,
                        second=c2,
                        start=start,
                        end=end,
                        single_count=single,
                        joint_count=joint,
                        addressed=(
                            occurrences.total_addressed(c1, start, end),
                            occurrences.total_addressed(c2, start, end),
                        ),
                        own_lengths=own,
                        ordinal=ordinal,
                    )
                )
    return tuple(interactions)
