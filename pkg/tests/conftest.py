import random
from pathlib import Path

import pytest
import yaml

from ficnet.analytics import StoryData
from ficnet.corpus import CharacterRecord
from ficnet.graph import EdgeAttrs, NodeAttrs, StoryGraph
from ficnet.segmentation import SegmentationParams

DATA_DIR = Path(__file__).parent / "data"


def pytest_runtest_logreport(report):
    # one visible PASS/FAIL line per acceptance criterion
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\n[acceptance] {name}: {outcome}")


@pytest.fixture
def make_corpus(tmp_path):
    """Write a manifest + story/roster files into tmp_path, return manifest path.

    stories: list of dicts with keys id, writer, text, characters (list of
    dicts passed through to the roster), plus optional year/genres/title/
    segmentation/co_protagonists.
    """

    def _make(writers, stories, config=None):
        (tmp_path / "texts").mkdir(exist_ok=True)
        (tmp_path / "rosters").mkdir(exist_ok=True)
        manifest = {"writers": writers, "stories": []}
        if config:
            manifest["config"] = config
        for story in stories:
            sid = story["id"]
            text_rel = f"texts/{sid}.txt"
            roster_rel = f"rosters/{sid}.yaml"
            (tmp_path / text_rel).write_text(story["text"], encoding="utf-8")
            roster = {"characters": story["characters"]}
            if story.get("co_protagonists"):
                roster["co_protagonists"] = True
            (tmp_path / roster_rel).write_text(
                yaml.safe_dump(roster, allow_unicode=True), encoding="utf-8"
            )
            entry = {
                "id": sid,
                "title": story.get("title", sid),
                "writer": story["writer"],
                "text": text_rel,
                "roster": roster_rel,
            }
            for key in ("year", "genres", "segmentation"):
                if key in story:
                    entry[key] = story[key]
            manifest["stories"].append(entry)
        path = tmp_path / "manifest.yaml"
        path.write_text(yaml.safe_dump(manifest, allow_unicode=True), encoding="utf-8")
        return path

    return _make


def character(cid, gender="male", age="A2", role="regular", family="none", **kw):
    return CharacterRecord(
        id=cid, canonical_name=cid.capitalize(), aliases=(cid.capitalize(),),
        gender=gender, age_group=age, role=role, family_status=family, **kw,
    )


def random_story_graph(rng: random.Random, story_id="s", max_nodes=10):
    """A random but internally consistent StoryGraph plus a matching roster."""
    n = rng.randint(1, max_nodes)
    ids = [f"c{i}" for i in range(n)]
    nodes = {}
    roster = {}
    for cid in ids:
        nodes[cid] = NodeAttrs(
            weight=rng.uniform(0.01, 2.0),
            appearances=rng.randint(1, 30),
            segment_count=rng.randint(1, 5),
            sequence=(),
            sentiment=rng.uniform(-1, 1),
            chapter_presence=rng.randint(1, 4),
        )
        roster[cid] = character(
            cid,
            gender=rng.choice(("male", "female")),
            age=rng.choice(("A1", "A2", "A3")),
            role=rng.choice(("protagonist", "antagonist", "regular")),
            family=rng.choice(("father", "mother", "none", "none")),
        )
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                edges[(ids[i], ids[j])] = EdgeAttrs(
                    weight=rng.uniform(0.01, 1.5),
                    phi=(rng.uniform(0, 3), rng.uniform(0, 3)),
                    segment_count=rng.randint(1, 4),
                    sequence=(),
                    sentiment=rng.uniform(-1, 1),
                )
    graph = StoryGraph(
        story_id=story_id,
        chapter_count=rng.randint(1, 5),
        total_sentences=rng.randint(10, 300),
        nodes=nodes,
        edges=edges,
        chapter_params=((1, 50, SegmentationParams(3, 1, 1)),),
    )
    return graph, roster


def random_story_data(rng: random.Random, story_id="s", writer="w", year=None):
    graph, roster = random_story_graph(rng, story_id)
    return StoryData(
        story_id=story_id,
        writer=writer,
        year=year,
        genres=frozenset(rng.sample(("social", "political", "romantic", "historical"),
                                    rng.randint(0, 2))),
        roster=roster,
        graph=graph,
    )
