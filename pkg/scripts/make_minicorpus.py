#!/usr/bin/env python3
"""Regenerate the synthetic annotated mini-corpus under tests/data/minicorpus.

Three writers, two stories each, fully deterministic. Female characters are
planted with much longer presence runs than male characters in every story, so
the female group's normalized aggregate weight exceeds the male group's by a
wide, low-variance margin (the effect the report's t-test must flag). Writers
use disjoint filler vocabularies so per-writer topic models have something to
separate, and sentences carry planted lexicon words for non-trivial sentiment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

import yaml

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "minicorpus"

POSITIVE = ["lovely", "bright", "gentle", "warm", "merry", "kind"]
NEGATIVE = ["grim", "bitter", "cruel", "weary", "broken", "cold"]

VOCAB = {
    "anat": ["garden", "rose", "lantern", "orchard", "veranda", "jasmine",
             "courtyard", "almirah", "monsoon", "letter"],
    "binu": ["river", "boat", "ferry", "reed", "fisher", "tide",
             "estuary", "net", "sandbank", "oar"],
    "chand": ["tram", "lamp", "bazaar", "press", "ledger", "alley",
              "rooftop", "ticket", "crowd", "office"],
}


@dataclass
class Member:
    id: str
    name: str
    gender: str
    age_group: str
    role: str
    family_status: str | None = None
    religion: str | None = None
    social_status: str | None = None
    # per chapter: list of (start, end, density) presence blocks, 1-based
    blocks: dict[int, list[tuple[int, int, float]]] = field(default_factory=dict)


@dataclass
class StoryPlan:
    id: str
    title: str
    writer: str
    year: int
    genres: list[str]
    chapter_lengths: list[int]
    members: list[Member]


def female_lead(name, cid, age="A2", family=None):
    return Member(cid, name, "female", age, "protagonist", family_status=family)


def plan_blocks(member: Member, lengths: list[int], kind: str) -> None:
    """Presence plans: 'lead' covers most of every chapter, 'second' one long
    mid block, 'minor' one or two short blocks."""
    for ch, length in enumerate(lengths, start=1):
        if kind == "lead":
            member.blocks[ch] = [(1, length, 0.8)]
        elif kind == "second":
            member.blocks[ch] = [(max(1, length // 5), length - length // 6, 0.7)]
        elif kind == "minor":
            third = max(3, length // 6)
            member.blocks[ch] = [(2, 2 + third, 0.6),
                                 (length - third - 1, length - 1, 0.5)]
        elif kind == "cameo":
            span = max(3, length // 8)
            start = max(1, length // 2 - span)
            member.blocks[ch] = [(start, start + span, 0.55)]


def build_stories() -> list[StoryPlan]:
    stories = []

    s = StoryPlan("mira_garden", "The Garden of Mira", "anat", 1872,
                  ["social", "romantic"], [55, 45],
                  [
                      female_lead("Mira", "mira", family="mother"),
                      Member("tara", "Tara", "female", "A1", "regular",
                             family_status="none", religion="hindu"),
                      Member("debu", "Debu", "male", "A2", "regular",
                             social_status="poor"),
                      Member("haran", "Haran", "male", "A3", "antagonist",
                             family_status="father", social_status="landlord"),
                  ])
    plan_blocks(s.members[0], s.chapter_lengths, "lead")
    plan_blocks(s.members[1], s.chapter_lengths, "second")
    plan_blocks(s.members[2], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    s = StoryPlan("stone_court", "The Stone Court", "anat", 1881,
                  ["historical"], [60, 40, 30],
                  [
                      female_lead("Rani", "rani", age="A3"),
                      Member("lila", "Lila", "female", "A2", "regular",
                             family_status="aunt"),
                      Member("gopal", "Gopal", "male", "A2", "regular",
                             religion="hindu"),
                      Member("sadhu", "Sadhu", "male", "A3", "regular",
                             social_status="other"),
                  ])
    plan_blocks(s.members[0], s.chapter_lengths, "lead")
    plan_blocks(s.members[1], s.chapter_lengths, "second")
    plan_blocks(s.members[2], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    s = StoryPlan("river_song", "A Song on the River", "binu", 1905,
                  ["social"], [50, 50],
                  [
                      female_lead("Shanti", "shanti", family="mother"),
                      Member("bina", "Bina", "female", "A1", "regular"),
                      Member("kanai", "Kanai", "male", "A2", "regular",
                             social_status="poor"),
                      Member("noren", "Noren", "male", "A2", "antagonist"),
                  ])
    plan_blocks(s.members[0], s.chapter_lengths, "lead")
    plan_blocks(s.members[1], s.chapter_lengths, "second")
    plan_blocks(s.members[2], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    s = StoryPlan("paper_moon", "The Paper Moon", "binu", 1916,
                  ["political", "romantic"], [65, 35],
                  [
                      female_lead("Ila", "ila", age="A1"),
                      Member("ruma", "Ruma", "female", "A2", "regular",
                             family_status="mother"),
                      Member("tapan", "Tapan", "male", "A2", "regular"),
                      Member("jiban", "Jiban", "male", "A3", "regular",
                             family_status="uncle", social_status="wealthy"),
                  ])
    plan_blocks(s.members[0], s.chapter_lengths, "lead")
    plan_blocks(s.members[1], s.chapter_lengths, "second")
    plan_blocks(s.members[2], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    s = StoryPlan("glass_fair", "The Glass Fair", "chand", 1930,
                  ["social", "political"], [45, 55],
                  [
                      female_lead("Protima", "protima"),
                      Member("juthi", "Juthi", "female", "A2", "regular",
                             family_status="other"),
                      Member("montu", "Montu", "male", "A1", "regular"),
                      Member("ratan", "Ratan", "male", "A2", "antagonist",
                             social_status="wealthy"),
                  ])
    plan_blocks(s.members[0], s.chapter_lengths, "lead")
    plan_blocks(s.members[1], s.chapter_lengths, "second")
    plan_blocks(s.members[2], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    s = StoryPlan("ember_lane", "Ember Lane", "chand", 1942,
                  ["romantic"], [40, 40, 40],
                  [
                      Member("arun", "Arun", "male", "A2", "protagonist"),
                      Member("kajol", "Kajol", "female", "A2", "regular",
                             family_status="mother"),
                      Member("mala", "Mala", "female", "A3", "regular",
                             family_status="aunt"),
                      Member("bidhu", "Bidhu", "male", "A3", "regular",
                             social_status="poor"),
                  ])
    # male protagonist story: females still dominate the narrative weight
    plan_blocks(s.members[1], s.chapter_lengths, "lead")
    plan_blocks(s.members[2], s.chapter_lengths, "second")
    plan_blocks(s.members[0], s.chapter_lengths, "minor")
    plan_blocks(s.members[3], s.chapter_lengths, "cameo")
    stories.append(s)

    return stories


def present(member: Member, chapter: int, sentence: int, rng: random.Random) -> bool:
    for start, end, density in member.blocks.get(chapter, []):
        if start <= sentence <= end:
            return rng.random() < density
    return False


def render_sentence(actors, vocab, rng: random.Random) -> str:
    words = []
    for i, member in enumerate(actors):
        name = member.name
        if rng.random() < 0.15:
            name += "s"  # exercises suffix matching
        words.append(name)
        if i + 1 < len(actors):
            words.append(rng.choice(["met", "watched", "followed", "answered"]))
    if not actors:
        words.append(rng.choice(["The", "A"]))
    words += rng.sample(vocab, rng.randint(2, 4))
    roll = rng.random()
    if roll < 0.18:
        words.append(rng.choice(POSITIVE))
    elif roll < 0.30:
        words.append(rng.choice(NEGATIVE))
    terminator = rng.choice([".", ".", ".", "!", "?"])
    return " ".join(words) + terminator


def write_story(plan: StoryPlan, rng: random.Random) -> None:
    lines = []
    for ch, length in enumerate(plan.chapter_lengths, start=1):
        if ch > 1:
            lines.append("###")
        for sentence in range(1, length + 1):
            actors = [m for m in plan.members if present(m, ch, sentence, rng)]
            lines.append(render_sentence(actors, VOCAB[plan.writer], rng))
    (OUT / "texts" / f"{plan.id}.txt").write_text("\n".join(lines) + "\n",
                                                  encoding="utf-8")

    characters = []
    for m in plan.members:
        record = {
            "id": m.id,
            "name": m.name,
            "gender": m.gender,
            "age_group": m.age_group,
            "role": m.role,
        }
        if m.family_status:
            record["family_status"] = m.family_status
        if m.religion:
            record["religion"] = m.religion
        if m.social_status:
            record["social_status"] = m.social_status
        characters.append(record)
    (OUT / "rosters" / f"{plan.id}.yaml").write_text(
        yaml.safe_dump({"characters": characters}, sort_keys=False,
                       allow_unicode=True),
        encoding="utf-8",
    )


def main() -> None:
    (OUT / "texts").mkdir(parents=True, exist_ok=True)
    (OUT / "rosters").mkdir(parents=True, exist_ok=True)
    stories = build_stories()
    rng = random.Random(20240601)
    for plan in stories:
        write_story(plan, rng)

    manifest = {
        "writers": [
            {"id": "anat", "name": "Anat Roy", "career": [1870, 1900]},
            {"id": "binu", "name": "Binu Das", "career": [1900, 1930]},
            {"id": "chand", "name": "Chand Sen", "career": [1925, 1960]},
        ],
        "stories": [
            {
                "id": plan.id,
                "title": plan.title,
                "writer": plan.writer,
                "year": plan.year,
                "genres": plan.genres,
                "text": f"texts/{plan.id}.txt",
                "roster": f"rosters/{plan.id}.yaml",
            }
            for plan in stories
        ],
        "config": {"suffixes": ["s"]},
    }
    (OUT / "manifest.yaml").write_text(
        yaml.safe_dump(manifest, sort_keys=False, allow_unicode=True),
        encoding="utf-8",
    )

    lexicon = [(w, 0.7) for w in POSITIVE] + [(w, -0.7) for w in NEGATIVE]
    (OUT / "lexicon.tsv").write_text(
        "".join(f"{w}\t{p}\n" for w, p in lexicon), encoding="utf-8"
    )
    (OUT / "stopwords.txt").write_text(
        "\n".join(["the", "a", "met", "watched", "followed", "answered"]) + "\n",
        encoding="utf-8",
    )
    print(f"wrote mini-corpus with {len(stories)} stories under {OUT}")


if __name__ == "__main__":
    main()
