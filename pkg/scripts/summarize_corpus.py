#!/usr/bin/env python3
"""Print headline findings for a corpus: per-writer graph structure, gender
weight shares with significance, and protagonist gender split.

Usage: python scripts/summarize_corpus.py MANIFEST [LEXICON]
"""

from __future__ import annotations

import sys

from ficnet.analytics import (
    ALL_WRITERS,
    graph_features,
    group_summary,
    protagonist_profile,
)
from ficnet.corpus import load_corpus
from ficnet.pipeline import ExtractionConfig, extract_corpus
from ficnet.sentiment import load_lexicon


def main(argv: list[str]) -> int:
    if not 2 <= len(argv) <= 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    corpus = load_corpus(argv[1])
    lexicon = load_lexicon(argv[2]) if len(argv) == 3 else None
    results = extract_corpus(corpus, ExtractionConfig(lexicon=lexicon))
    stories = [r.data() for r in results]

    print(f"{len(corpus.stories)} stories by {len(corpus.writers)} writers\n")

    by_writer: dict[str, list] = {}
    for story in stories:
        by_writer.setdefault(story.writer, []).append(graph_features(story.graph))
    print(f"{'writer':<10} {'stories':>7} {'nodes':>7} {'edges':>7} {'density':>8}")
    for writer in corpus.writers:
        feats = by_writer.get(writer.id)
        if not feats:
            continue
        n = len(feats)
        print(f"{writer.id:<10} {n:>7} "
              f"{sum(f.node_count for f in feats) / n:>7.2f} "
              f"{sum(f.edge_count for f in feats) / n:>7.2f} "
              f"{sum(f.density for f in feats) / n:>8.3f}")

    print("\ngender weight shares (story means) and male-vs-female test")
    summary = group_summary(stories, "gender")
    for writer in [w.id for w in corpus.writers] + [ALL_WRITERS]:
        cells = summary.writer_stats.get(writer)
        if cells is None:
            continue
        test = summary.tests[writer].get(("male", "female"))
        verdict = "n/a"
        if test is not None:
            verdict = f"t={test.t_statistic:.3f} p={test.p_value:.4g}" + (
                " *" if test.significant else ""
            )
        print(f"  {writer:<10} male={cells['male'].weight_share:.4f} "
              f"female={cells['female'].weight_share:.4f}  {verdict}")

    profile = protagonist_profile(stories)
    if profile.rows:
        print("\nprotagonists")
        for row in profile.rows:
            print(f"  {row.writer:<10} {row.story_id:<14} {row.character_id:<12} "
                  f"{row.gender:<6} {row.age_group}  w={row.weight:.3f} "
                  f"d={row.degree} s={row.sentiment:+.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
