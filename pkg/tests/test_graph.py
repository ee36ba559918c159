import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ficnet.corpus import OccurrenceMatrix
from ficnet.graph import (
    WeightParams,
    build_chapter_graph,
    edge_weight,
    importance,
    merge_story,
    node_weight,
)
from ficnet.segmentation import (
    InteractionSegment,
    Segment,
    SegmentationParams,
    detect_interactions,
    segment_chapter,
)
from oracles import oracle_edge_weight, oracle_node_weight


def seg(ordinal, start, end, occ_count):
    # occurrence list consistent with the span invariants
    if end == start:
        occ = (start,)
    else:
        inner = list(range(start + 1, end))[: max(0, occ_count - 2)]
        occ = tuple(sorted({start, end, *inner}))
    return Segment("c", start, end, occ, ordinal)


def inter(ordinal, start, end, single, joint, addressed=(0, 0), own=(1, 1)):
    return InteractionSegment("a", "b", start, end, single, joint, addressed, own, ordinal)


class TestNodeWeight:
    def test_two_segments(self):
        segs = [seg(1, 1, 20, 5), seg(2, 30, 39, 4)]
        assert format(node_weight(segs, 100), ".6g") == "0.3503"

    def test_single_segment(self):
        assert format(node_weight([seg(1, 1, 20, 5)], 100), ".6g") == "0.2255"

    def test_empty(self):
        assert node_weight([], 50) == 0.0

    @given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 10)), min_size=0, max_size=8),
           st.integers(10, 500))
    def test_matches_direct_formula(self, shapes, length):
        segs = []
        cursor = 1
        configs = []
        for i, (span, occ_count) in enumerate(shapes, start=1):
            occ_count = min(occ_count, span)
            segs.append(seg(i, cursor, cursor + span - 1, occ_count))
            configs.append((i, span, segs[-1].occurrence_count))
            cursor += span + 1
        expected = oracle_node_weight(configs, length)
        assert math.isclose(node_weight(segs, length), expected, rel_tol=1e-12, abs_tol=1e-15)

    def test_scale_invariant_ranking(self):
        rng = random.Random(3)
        for _ in range(20):
            length = rng.randint(20, 80)
            chars = {}
            for cid in "abcd":
                spans = []
                cursor = 1
                for i in range(1, rng.randint(1, 4) + 1):
                    span = rng.randint(1, 8)
                    spans.append((i, span))
                    cursor += span + 1
                chars[cid] = spans
            factor = rng.randint(2, 5)

            def weights(scale):
                out = {}
                for cid, spans in chars.items():
                    segs = []
                    cursor = 1
                    for i, span in spans:
                        s = cursor
                        e = cursor + span * scale - 1
                        segs.append(Segment(cid, s, e, tuple(range(s, e + 1)), i))
                        cursor = e + 2
                    out[cid] = node_weight(segs, length * scale)
                return out

            base = weights(1)
            scaled = weights(factor)
            rank = lambda d: sorted(d, key=d.get)
            assert rank(base) == rank(scaled)


class TestEdgeWeight:
    def test_single_hull(self):
        assert format(edge_weight([inter(1, 1, 12, 6, 3)], 100), ".6g") == "0.1452"

    def test_hull_without_joint(self):
        assert format(edge_weight([inter(1, 2, 20, 5, 0)], 100), ".6g") == "0.2145"

    def test_empty(self):
        assert edge_weight([], 10) == 0.0

    def test_either_mode_counts_joint_in_lprime(self):
        one = edge_weight([inter(1, 1, 12, 6, 3)], 100,
                          WeightParams(lprime_mode="exactly_one"))
        either = edge_weight([inter(1, 1, 12, 6, 3)], 100,
                             WeightParams(lprime_mode="either"))
        # l' gains the 3 joint sentences: 1.1 * 0.1 * 3 / 100
        assert math.isclose(either - one, 1.1 * 0.3 / 100, rel_tol=1e-12)

    def test_gamma_defaults_to_twice_beta(self):
        params = WeightParams(beta=0.25)
        assert params.joint_bonus == 0.5
        assert WeightParams(beta=0.25, gamma=0.1).joint_bonus == 0.1

    @given(st.lists(st.tuples(st.integers(1, 30), st.integers(0, 10), st.integers(0, 10)),
                    min_size=0, max_size=8),
           st.integers(10, 500))
    def test_matches_direct_formula(self, shapes, length):
        inters = []
        configs = []
        cursor = 1
        for i, (span, single, joint) in enumerate(shapes, start=1):
            single = min(single, span)
            joint = min(joint, span - single)
            inters.append(inter(i, cursor, cursor + span - 1, single, joint))
            configs.append((i, span, single, joint))
            cursor += span + 1
        expected = oracle_edge_weight(configs, length)
        assert math.isclose(edge_weight(inters, length), expected, rel_tol=1e-12, abs_tol=1e-15)


class TestImportance:
    def test_hand_values(self):
        phi = importance(inter(1, 1, 8, 0, 0, addressed=(4, 2), own=(20, 10)))
        assert math.isclose(phi[0], 0.9, rel_tol=1e-12)
        assert math.isclose(phi[1], 1.05, rel_tol=1e-12)

    def test_nested_equal_segments(self):
        phi = importance(inter(1, 1, 10, 0, 0, addressed=(0, 0), own=(10, 10)))
        assert phi == (1.0, 1.0)


def chapter_inputs(rng, length=40, chars=4):
    occ = {
        f"c{i}": sorted(rng.sample(range(1, length + 1), rng.randint(0, 12)))
        for i in range(chars)
    }
    matrix = OccurrenceMatrix(
        {c: {i: rng.randint(1, 3) for i in s} for c, s in occ.items()}
    )
    params = SegmentationParams(rng.randint(2, 8), rng.randint(0, 4), rng.randint(1, 2))
    segments = segment_chapter(matrix, params)
    interactions = detect_interactions(segments, matrix, params, length)
    return matrix, params, segments, interactions


class TestBuildChapterGraph:
    def test_single_character_no_edges(self):
        params = SegmentationParams(3, 1, 1)
        segments = {"solo": (Segment("solo", 2, 6, (2, 4, 6), 1),)}
        g = build_chapter_graph(1, 10, segments, (), params)
        assert set(g.nodes) == {"solo"}
        assert g.edges == {}

    def test_two_characters_one_edge(self):
        rng = random.Random(1)
        matrix, params, segments, interactions = chapter_inputs(rng, chars=2)
        g = build_chapter_graph(1, 40, segments, interactions, params)
        for pair, attrs in g.edges.items():
            inters = [i for i in interactions if i.pair == pair]
            assert math.isclose(attrs.weight, edge_weight(inters, 40), rel_tol=1e-12)
            assert pair[0] in g.nodes and pair[1] in g.nodes

    def test_node_present_iff_kept_segment(self):
        rng = random.Random(2)
        for _ in range(20):
            _, params, segments, interactions = chapter_inputs(rng)
            g = build_chapter_graph(1, 40, segments, interactions, params)
            assert set(g.nodes) == {c for c, s in segments.items() if s}

    def test_weights_match_direct_recomputation(self):
        rng = random.Random(3)
        for _ in range(30):
            _, params, segments, interactions = chapter_inputs(rng)
            g = build_chapter_graph(1, 40, segments, interactions, params)
            for cid, attrs in g.nodes.items():
                expected = oracle_node_weight(
                    [(s.ordinal, s.length, s.occurrence_count) for s in segments[cid]],
                    40,
                )
                assert math.isclose(attrs.weight, expected, rel_tol=1e-12)


def story_chapter(rng, index, length=30):
    _, params, segments, interactions = chapter_inputs(rng, length=length, chars=4)
    g = build_chapter_graph(index, length, segments, interactions, params)
    for attrs in g.nodes.values():
        attrs.sentiment = rng.uniform(-1, 1)
        attrs.topics = (0.25, 0.75)
    return g


class TestMergeStory:
    def test_single_chapter_identity(self):
        rng = random.Random(4)
        ch = story_chapter(rng, 1)
        merged = merge_story("s", [ch])
        for cid, attrs in ch.nodes.items():
            assert math.isclose(merged.nodes[cid].weight, attrs.weight, rel_tol=1e-12)
            assert math.isclose(merged.nodes[cid].sentiment, attrs.sentiment, rel_tol=1e-12)

    def test_k_fold_duplication(self):
        rng = random.Random(5)
        ch = story_chapter(rng, 1)
        for k in (2, 3, 7):
            merged = merge_story("s", [ch] * k)
            for cid, attrs in ch.nodes.items():
                assert math.isclose(merged.nodes[cid].weight, attrs.weight, rel_tol=1e-12)
            for pair, attrs in ch.edges.items():
                assert math.isclose(merged.edges[pair].weight, attrs.weight, rel_tol=1e-12)

    def test_length_weighted_example(self):
        params = SegmentationParams(3, 1, 1)
        seg_a = {"a": (Segment("a", 1, 30, tuple(range(1, 31)), 1),)}
        ch1 = build_chapter_graph(1, 60, seg_a, (), params)
        ch1.nodes["a"].weight = 0.3  # pin the worked value
        ch2 = build_chapter_graph(2, 40, {"b": (Segment("b", 1, 4, (1, 4), 1),)}, (), params)
        merged = merge_story("s", [ch1, ch2])
        assert math.isclose(merged.nodes["a"].weight, 0.18, rel_tol=1e-12)
        assert merged.nodes["a"].chapter_presence == 1

    def test_equal_length_chapters_average(self):
        params = SegmentationParams(3, 1, 1)
        segs = {"a": (Segment("a", 1, 10, tuple(range(1, 11)), 1),)}
        ch1 = build_chapter_graph(1, 50, segs, (), params)
        ch2 = build_chapter_graph(2, 50, segs, (), params)
        ch1.nodes["a"].weight = 0.2
        ch2.nodes["a"].weight = 0.2
        merged = merge_story("s", [ch1, ch2])
        assert math.isclose(merged.nodes["a"].weight, 0.2, rel_tol=1e-12)

    def test_union_and_presence_counts(self):
        rng = random.Random(6)
        chapters = [story_chapter(rng, i + 1) for i in range(3)]
        merged = merge_story("s", chapters)
        assert set(merged.nodes) == {c for ch in chapters for c in ch.nodes}
        assert set(merged.edges) == {p for ch in chapters for p in ch.edges}
        for cid, attrs in merged.nodes.items():
            assert attrs.chapter_presence == sum(1 for ch in chapters if cid in ch.nodes)
            assert attrs.chapter_presence <= merged.chapter_count

    def test_sentiment_averages_only_where_present(self):
        params = SegmentationParams(3, 1, 1)
        segs = {"a": (Segment("a", 1, 10, tuple(range(1, 11)), 1),)}
        ch1 = build_chapter_graph(1, 60, segs, (), params)
        ch1.nodes["a"].sentiment = -0.5
        ch2 = build_chapter_graph(2, 40, {"b": (Segment("b", 1, 4, (1, 4), 1),)}, (), params)
        merged = merge_story("s", [ch1, ch2])
        # absent in chapter 2: sentiment is NOT diluted toward 0
        assert math.isclose(merged.nodes["a"].sentiment, -0.5, rel_tol=1e-12)
        assert merged.nodes["a"].sentiment_class == "negative"

    def test_requires_chapters(self):
        with pytest.raises(ValueError):
            merge_story("s", [])
