import logging
import math
import random

import pytest

from ficnet.analytics import (
    ALL_WRITERS,
    GROUP_KEYS,
    MissingCharacterError,
    StoryData,
    edge_type_distribution,
    genre_scatter,
    graph_features,
    group_of,
    group_summary,
    protagonist_profile,
    time_series,
    within_gender_age_distribution,
)
from ficnet.graph import EdgeAttrs, NodeAttrs, StoryGraph
from ficnet.segmentation import SegmentationParams
from conftest import character, random_story_data


def story_data(nodes, edges=(), story_id="s", writer="w", year=None, genres=(),
               roster_overrides=None):
    """nodes: {cid: (weight, gender, age, role, family)}; edges: [(a, b, weight)]"""
    graph_nodes = {}
    roster = {}
    for cid, (weight, gender, age, role, family) in nodes.items():
        graph_nodes[cid] = NodeAttrs(weight=weight, appearances=1, segment_count=1,
                                     sequence=())
        roster[cid] = character(cid, gender=gender, age=age, role=role, family=family)
    if roster_overrides:
        roster.update(roster_overrides)
    graph_edges = {
        (a, b): EdgeAttrs(weight=w, phi=(1.0, 1.0), segment_count=1, sequence=())
        for a, b, w in edges
    }
    graph = StoryGraph(
        story_id=story_id, chapter_count=1, total_sentences=10,
        nodes=graph_nodes, edges=graph_edges,
        chapter_params=((1, 10, SegmentationParams(3, 1, 1)),),
    )
    return StoryData(story_id=story_id, writer=writer, year=year,
                     genres=frozenset(genres), roster=roster, graph=graph)


M, F = "male", "female"


class TestGraphFeatures:
    def test_triangle_is_complete(self):
        data = story_data(
            {c: (0.5, M, "A2", "regular", "none") for c in "abc"},
            [("a", "b", 0.1), ("a", "c", 0.2), ("b", "c", 0.3)],
        )
        assert graph_features(data.graph).density == 1.0

    def test_four_nodes_three_edges(self):
        data = story_data(
            {c: (0.5, M, "A2", "regular", "none") for c in "abcd"},
            [("a", "b", 0.1), ("a", "c", 0.2), ("b", "c", 0.3)],
        )
        assert graph_features(data.graph).density == 0.5

    def test_single_node_degenerate(self):
        data = story_data({"a": (0.5, M, "A2", "regular", "none")})
        features = graph_features(data.graph)
        assert features.density == 0.0
        assert features.degrees["a"] == 0

    def test_strength_identity_random_graphs(self):
        rng = random.Random(42)
        for _ in range(100):
            data = random_story_data(rng)
            features = graph_features(data.graph)
            total_strength = sum(features.strengths.values())
            total_edge_weight = sum(e.weight for e in data.graph.edges.values())
            assert math.isclose(total_strength, 2 * total_edge_weight,
                                rel_tol=1e-12, abs_tol=1e-12)
            assert 0.0 <= features.density <= 1.0
            assert sum(features.degrees.values()) == 2 * features.edge_count
            for cid in data.graph.nodes:
                incident = [e.weight for pair, e in data.graph.edges.items()
                            if cid in pair]
                if incident:
                    assert features.strengths[cid] >= max(incident) - 1e-12


class TestGroupSummary:
    def test_hand_example(self):
        data = story_data({
            "a": (0.4, M, "A2", "regular", "none"),
            "b": (0.2, M, "A2", "regular", "none"),
            "c": (0.4, F, "A2", "regular", "none"),
        })
        summary = group_summary([data], "gender")
        cells = summary.story_stats["s"]
        assert math.isclose(cells["male"].weight_share, 0.6)
        assert math.isclose(cells["female"].weight_share, 0.4)
        assert math.isclose(cells["male"].proportion, 2 / 3)
        assert math.isclose(cells["female"].proportion, 1 / 3)

    def test_single_group_cast(self):
        data = story_data({
            "a": (0.4, M, "A2", "regular", "none"),
            "b": (0.2, M, "A1", "regular", "none"),
        })
        summary = group_summary([data], "gender")
        assert summary.story_stats["s"]["male"].weight_share == 1.0
        assert summary.story_stats["s"]["female"].weight_share == 0.0

    def test_writer_mean_over_stories(self):
        s1 = story_data({"a": (0.5, F, "A2", "regular", "none"),
                         "b": (0.5, M, "A2", "regular", "none")}, story_id="s1")
        s2 = story_data({"a": (0.7, F, "A2", "regular", "none"),
                         "b": (0.3, M, "A2", "regular", "none")}, story_id="s2")
        summary = group_summary([s1, s2], "gender")
        assert math.isclose(summary.writer_stats["w"]["female"].weight_share, 0.6)

    def test_partition_sums(self):
        rng = random.Random(5)
        for _ in range(40):
            data = random_story_data(rng)
            for key in GROUP_KEYS:
                summary = group_summary([data], key)
                cells = summary.story_stats[data.story_id]
                assert abs(sum(c.proportion for c in cells.values()) - 1) <= 1e-9
                assert abs(sum(c.weight_share for c in cells.values()) - 1) <= 1e-9

    def test_missing_roster_record(self):
        data = story_data({"a": (0.4, M, "A2", "regular", "none")})
        data.roster.pop("a")
        with pytest.raises(MissingCharacterError, match="'a'"):
            group_summary([data], "gender")

    def test_significance_on_planted_effect(self):
        stories = []
        for i, (f_share, m_share) in enumerate([(0.8, 0.2), (0.82, 0.18), (0.78, 0.22)]):
            stories.append(story_data({
                "f1": (f_share, F, "A2", "regular", "none"),
                "m1": (m_share, M, "A2", "regular", "none"),
            }, story_id=f"s{i}"))
        summary = group_summary(stories, "gender")
        test = summary.tests["w"][("male", "female")]
        assert test is not None and test.significant
        assert test.t_statistic < 0  # male below female

    def test_degenerate_test_reported_as_none(self):
        stories = [
            story_data({"m": (1.0, M, "A2", "regular", "none")}, story_id="s1"),
            story_data({"m": (1.0, M, "A2", "regular", "none")}, story_id="s2"),
        ]
        summary = group_summary(stories, "gender")
        assert summary.tests["w"][("male", "female")] is None

    def test_node_id_permutation_invariance(self):
        rng = random.Random(17)
        data = random_story_data(rng)
        mapping = {cid: f"z{idx}" for idx, cid in enumerate(sorted(data.graph.nodes))}
        renamed = StoryData(
            story_id=data.story_id, writer=data.writer, year=data.year,
            genres=data.genres,
            roster={mapping[c]: data.roster[c] for c in data.roster},
            graph=StoryGraph(
                story_id=data.graph.story_id,
                chapter_count=data.graph.chapter_count,
                total_sentences=data.graph.total_sentences,
                nodes={mapping[c]: a for c, a in data.graph.nodes.items()},
                edges={tuple(sorted((mapping[x], mapping[y]))): a
                       for (x, y), a in data.graph.edges.items()},
                chapter_params=data.graph.chapter_params,
            ),
        )
        for key in GROUP_KEYS:
            a = group_summary([data], key).writer_stats["w"]
            b = group_summary([renamed], key).writer_stats["w"]
            for g in GROUP_KEYS[key]:
                assert math.isclose(a[g].proportion, b[g].proportion, abs_tol=1e-12)
                assert math.isclose(a[g].weight_share, b[g].weight_share, abs_tol=1e-12)

    def test_regrouping_oracle(self):
        # brute-force recomputation from raw node lists on small graphs
        rng = random.Random(23)
        for _ in range(40):
            data = random_story_data(rng)
            for key in GROUP_KEYS:
                summary = group_summary([data], key)
                cells = summary.story_stats[data.story_id]
                raw = [(cid, data.roster[cid], data.graph.nodes[cid].weight)
                       for cid in data.graph.nodes]
                total_w = sum(w for _, _, w in raw)
                for g in GROUP_KEYS[key]:
                    members = [r for r in raw if group_of(r[1], key) == g]
                    assert cells[g].member_count == len(members)
                    assert math.isclose(
                        cells[g].proportion, len(members) / len(raw), abs_tol=1e-12
                    )
                    assert math.isclose(
                        cells[g].weight_share,
                        sum(w for _, _, w in members) / total_w,
                        abs_tol=1e-12,
                    )


class TestEdgeTypes:
    def test_gender_pairs(self):
        data = story_data(
            {"a": (0.3, M, "A2", "regular", "none"),
             "b": (0.3, F, "A2", "regular", "none"),
             "c": (0.3, M, "A2", "regular", "none")},
            [("a", "b", 0.5), ("a", "c", 0.5)],
        )
        dist = edge_type_distribution([data], "gender").proportions["w"]
        assert dist == {"M-M": 0.5, "M-F": 0.5, "F-F": 0.0}

    def test_single_age_edge(self):
        data = story_data(
            {"a": (0.3, M, "A2", "regular", "none"),
             "b": (0.3, F, "A3", "regular", "none")},
            [("a", "b", 0.5)],
        )
        dist = edge_type_distribution([data], "age").proportions["w"]
        assert dist["A2-A3"] == 1.0
        assert sum(dist.values()) == 1.0

    def test_no_edges_reported_empty(self):
        data = story_data({"a": (0.3, M, "A2", "regular", "none")})
        assert edge_type_distribution([data], "gender").proportions["w"] == {}

    def test_by_weight_variant(self):
        data = story_data(
            {"a": (0.3, M, "A2", "regular", "none"),
             "b": (0.3, F, "A2", "regular", "none"),
             "c": (0.3, M, "A2", "regular", "none")},
            [("a", "b", 0.9), ("a", "c", 0.1)],
        )
        dist = edge_type_distribution([data], "gender", by_weight=True).proportions["w"]
        assert math.isclose(dist["M-F"], 0.9)
        assert math.isclose(dist["M-M"], 0.1)


class TestProtagonists:
    def test_singleton_echo(self):
        data = story_data(
            {"hero": (0.9, F, "A2", "protagonist", "none"),
             "side": (0.1, M, "A2", "regular", "none")},
            [("hero", "side", 0.4)] + [(f"x{i}", "hero", 0.01) for i in range(7)],
            roster_overrides={
                f"x{i}": character(f"x{i}") for i in range(7)
            },
        )
        for i in range(7):
            data.graph.nodes[f"x{i}"] = NodeAttrs(weight=0.01, appearances=1,
                                                  segment_count=1, sequence=())
        data.graph.nodes["hero"].sentiment = -0.1
        profile = protagonist_profile([data])
        stats = profile.by_writer["w"]["F"]
        assert stats.count == 1
        assert math.isclose(stats.mean_weight, 0.9)
        assert stats.mean_degree == 8
        assert math.isclose(stats.mean_sentiment, -0.1)

    def test_mean_degree_two_protagonists(self):
        s1 = story_data(
            {"p": (0.5, M, "A2", "protagonist", "none"),
             **{f"n{i}": (0.1, F, "A2", "regular", "none") for i in range(9)}},
            [("p", f"n{i}", 0.1) for i in range(9)],
            story_id="s1",
        )
        s2 = story_data(
            {"p": (0.5, M, "A2", "protagonist", "none"),
             **{f"n{i}": (0.1, F, "A2", "regular", "none") for i in range(7)}},
            [("p", f"n{i}", 0.1) for i in range(7)],
            story_id="s2",
        )
        profile = protagonist_profile([s1, s2])
        assert profile.by_writer["w"]["M"].mean_degree == 8

    def test_no_protagonists_empty_profile(self):
        data = story_data({"a": (0.5, M, "A2", "regular", "none")})
        profile = protagonist_profile([data])
        assert profile.rows == ()
        assert profile.by_writer == {}

    def test_regrouping_oracle(self):
        rng = random.Random(31)
        for _ in range(25):
            stories = [random_story_data(rng, story_id=f"s{k}") for k in range(3)]
            profile = protagonist_profile(stories)
            raw = [
                (s.writer, s.roster[cid], s.graph.nodes[cid].weight)
                for s in stories for cid in s.graph.nodes
                if s.roster[cid].role == "protagonist"
            ]
            for letter, gender in (("M", "male"), ("F", "female")):
                members = [w for _, rec, w in raw if rec.gender == gender]
                stats = profile.by_writer.get(ALL_WRITERS)
                if stats is None:
                    assert not raw
                    continue
                if members:
                    assert math.isclose(stats[letter].mean_weight,
                                        sum(members) / len(members), abs_tol=1e-12)
                else:
                    assert stats[letter].mean_weight is None


class TestTimeSeries:
    def test_family_weight_cases(self):
        none_flagged = story_data({"a": (0.5, M, "A2", "regular", "none")},
                                  year=1900, story_id="s1")
        all_flagged = story_data({"a": (0.5, M, "A2", "regular", "father")},
                                 year=1901, story_id="s2")
        partial = story_data({"a": (0.3, M, "A2", "regular", "mother"),
                              "b": (0.7, F, "A2", "regular", "none")},
                             year=1902, story_id="s3")
        points = time_series([none_flagged, all_flagged, partial], "family_weight")
        values = {p.story_id: p.values["family_weight"] for p in points}
        assert values == {"s1": 0.0, "s2": 1.0, "s3": 0.3}
        assert [p.year for p in points] == [1900, 1901, 1902]

    def test_missing_year_skipped_with_warning(self, caplog):
        data = story_data({"a": (0.5, M, "A2", "regular", "none")})
        with caplog.at_level(logging.WARNING):
            points = time_series([data], "age_proportions")
        assert points == []
        assert any("year" in r.message for r in caplog.records)

    def test_age_proportions_partition(self):
        data = story_data({
            "a": (0.5, M, "A1", "regular", "none"),
            "b": (0.3, F, "A2", "regular", "none"),
            "c": (0.2, F, "A2", "regular", "none"),
        }, year=1910)
        point = time_series([data], "age_proportions")[0]
        assert math.isclose(point.values["A1"], 1 / 3)
        assert math.isclose(point.values["A2"], 2 / 3)
        assert point.values["A3"] == 0.0


class TestCombinedDistribution:
    def test_within_gender_shares(self):
        data = story_data({
            "a": (0.5, M, "A1", "regular", "none"),
            "b": (0.3, M, "A2", "regular", "none"),
            "c": (0.2, F, "A2", "regular", "none"),
        })
        shares = within_gender_age_distribution([data])["w"]
        assert math.isclose(shares["M-A1"], 0.5)
        assert math.isclose(shares["M-A2"], 0.5)
        assert shares["F-A2"] == 1.0
        assert sum(shares[f"M-{a}"] for a in ("A1", "A2", "A3")) == 1.0


class TestGenreScatter:
    def test_multi_genre_fanout(self):
        data = story_data({"a": (0.5, M, "A2", "regular", "none")},
                          genres=("social", "romantic"))
        rows = genre_scatter([data])
        assert [r[0] for r in rows] == ["romantic", "social"]
        assert all(r[3] == 1 and r[4] == 0.0 for r in rows)
