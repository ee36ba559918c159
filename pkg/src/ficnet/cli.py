"""Command-line front end.

Commands::

    ficnet extract --manifest corpus.yaml --out outdir [--per-chapter] ...
    ficnet report  --manifest corpus.yaml --out outdir [--group gender] ...
    ficnet topics  --manifest corpus.yaml --out outdir [--topics 20] ...
    ficnet ttest   --csv-a a.csv --col-a x [--csv-b b.csv] --col-b y
    ficnet export  --graph story.txt --format graphml --out story.graphml

``extract`` writes one graph file per story (and per chapter with
``--per-chapter``) in each requested format; ``report`` recomputes extraction
in-run and writes the CSV tables plus ``report.md``; ``topics`` fits one LDA
model per writer and writes model files plus character topic vectors.
Every run writes ``provenance.yaml`` with the resolved configuration, the
per-chapter segmentation thresholds, the seed, and the version; reruns with
identical inputs and seed are byte-identical. Exit codes: 0 success,
1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import yaml

import ficnet
from ficnet.analytics import MissingCharacterError
from ficnet.corpus import Corpus, CorpusError, load_corpus
from ficnet.export import (
    FORMAT_EXTENSIONS,
    RENDERERS,
    from_chapter_graph,
    from_story_graph,
    parse_canonical,
)
from ficnet.graph import WeightParams
from ficnet.pipeline import (
    ExtractionConfig,
    StoryResult,
    attach_topics,
    extract_corpus,
    located_segments,
)
from ficnet.report import StatsConfig, compute_tables, write_tables
from ficnet.segmentation import NoSegmentsError
from ficnet.sentiment import load_external_scores, load_lexicon
from ficnet.stats import DegenerateVarianceError, t_test
from ficnet.topics import (
    TopicConfig,
    TopicFitError,
    TopicModel,
    character_name_tokens,
    character_topics,
    fit_lda,
    load_token_list,
    load_topic_labels,
    preprocess,
)

log = logging.getLogger(__name__)

VALIDATION_ERRORS = (
    CorpusError,
    MissingCharacterError,
    TopicFitError,
    NoSegmentsError,
    DegenerateVarianceError,
    ValueError,
    FileNotFoundError,
)

GROUP_CHOICES = ("gender", "age", "age_gender", "family", "role")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, type=Path, help="corpus manifest file")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="rng seed (topics)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel story extraction workers")
    parser.add_argument("--log-level", default="warning",
                        choices=("debug", "info", "warning", "error"))


def _add_extraction(parser: argparse.ArgumentParser) -> None:
    seg = parser.add_argument_group("segmentation")
    seg.add_argument("--delta-a", type=int, help="override intra-character gap threshold")
    seg.add_argument("--delta-b", type=int, help="override inter-character padding")
    seg.add_argument("--delta-c", type=int, help="override minimum appearance threshold")
    seg.add_argument("--strict-delta-c", action="store_true",
                     help="keep chains with count > delta_c instead of >=")
    weights = parser.add_argument_group("weights")
    weights.add_argument("--alpha", type=float, default=0.1, help="ordinal scaling")
    weights.add_argument("--beta", type=float, default=0.1, help="single-presence bonus")
    weights.add_argument("--gamma", type=float, default=None,
                         help="joint-presence bonus (default 2*beta)")
    weights.add_argument("--edge-lprime-mode", choices=("exactly-one", "either"),
                         default="exactly-one",
                         help="count edge l' as sentences with exactly one member "
                              "present, or with either member present")
    senti = parser.add_argument_group("sentiment")
    senti.add_argument("--lexicon", type=Path, help="token<TAB>polarity lexicon file")
    senti.add_argument("--negation-tokens", default="",
                       help="comma-separated negation tokens (enables negation flips)")
    senti.add_argument("--external-scores", type=Path,
                       help="chapter<TAB>sentence<TAB>score table replacing the scorer")
    senti.add_argument("--neutral-band", type=float, default=0.05,
                       help="|score| <= band classifies as neutral")


def _add_topics(parser: argparse.ArgumentParser) -> None:
    topics = parser.add_argument_group("topics")
    topics.add_argument("--topics", type=int, default=20, help="topic count")
    topics.add_argument("--iterations", type=int, default=1000)
    topics.add_argument("--burn-in", type=int, default=500)
    topics.add_argument("--doc-topic-prior", type=float, default=None,
                        help="Dirichlet prior on doc-topic rows (default 50/topics)")
    topics.add_argument("--topic-word-prior", type=float, default=0.01)
    topics.add_argument("--stopwords", type=Path, help="one stopword per line")
    topics.add_argument("--remove", type=Path,
                        help="extra removal tokens (e.g. common verbs), one per line")
    topics.add_argument("--labels", type=Path, help="index<TAB>name topic labels")


def _add_stats(parser: argparse.ArgumentParser) -> None:
    stats = parser.add_argument_group("significance")
    stats.add_argument("--welch", action="store_true",
                       help="Welch variant instead of pooled")
    stats.add_argument("--one-tailed", action="store_true")
    stats.add_argument("--alpha-level", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ficnet",
        description="Character interaction graphs and group statistics for "
                    "chaptered fiction",
    )
    parser.add_argument("--version", action="version", version=ficnet.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", help="write graph files per story")
    _add_common(extract)
    _add_extraction(extract)
    _add_topics(extract)
    extract.add_argument("--per-chapter", action="store_true",
                         help="also write one graph file per chapter")
    extract.add_argument("--formats", default="graphml,dot,txt",
                         help="comma-separated subset of graphml,dot,txt")
    extract.add_argument("--with-topics", action="store_true",
                         help="fit per-writer topic models and attach node topics")
    extract.set_defaults(func=cmd_extract)

    report = sub.add_parser("report", help="write CSV tables and report.md")
    _add_common(report)
    _add_extraction(report)
    _add_stats(report)
    report.add_argument("--group", action="append", choices=GROUP_CHOICES,
                        help="restrict group tables to this key (repeatable)")
    report.add_argument("--by-weight", action="store_true",
                        help="weight-based edge-type distributions")
    report.set_defaults(func=cmd_report)

    topics = sub.add_parser("topics", help="fit per-writer topic models")
    _add_common(topics)
    _add_extraction(topics)
    _add_topics(topics)
    topics.set_defaults(func=cmd_topics)

    ttest = sub.add_parser("ttest", help="two-sample t-test on two CSV columns")
    ttest.add_argument("--csv-a", required=True, type=Path)
    ttest.add_argument("--col-a", required=True)
    ttest.add_argument("--csv-b", type=Path, help="defaults to --csv-a")
    ttest.add_argument("--col-b", required=True)
    _add_stats(ttest)
    ttest.set_defaults(func=cmd_ttest)

    export = sub.add_parser("export", help="convert a canonical graph file")
    export.add_argument("--graph", required=True, type=Path,
                        help="canonical structured-text graph file")
    export.add_argument("--format", required=True, choices=("graphml", "dot", "txt"))
    export.add_argument("--out", required=True, type=Path)
    export.set_defaults(func=cmd_export)

    return parser


def _extraction_config(args: argparse.Namespace) -> ExtractionConfig:
    negations = [t for t in args.negation_tokens.split(",") if t]
    lexicon = None
    if args.lexicon is not None:
        lexicon = load_lexicon(args.lexicon, negations)
    external = None
    if args.external_scores is not None:
        external = load_external_scores(args.external_scores)
    return ExtractionConfig(
        weights=WeightParams(
            alpha=args.alpha,
            beta=args.beta,
            gamma=args.gamma,
            lprime_mode=args.edge_lprime_mode.replace("-", "_"),
        ),
        delta_a=args.delta_a,
        delta_b=args.delta_b,
        delta_c=args.delta_c,
        strict_delta_c=args.strict_delta_c,
        neutral_band=args.neutral_band,
        lexicon=lexicon,
        negation=bool(negations),
        external_scores=external,
    )


def _topic_config(args: argparse.Namespace, corpus: Corpus) -> TopicConfig:
    return TopicConfig(
        topics=args.topics,
        iterations=args.iterations,
        burn_in=args.burn_in,
        doc_topic_prior=args.doc_topic_prior,
        topic_word_prior=args.topic_word_prior,
        seed=args.seed,
        case_insensitive=corpus.config.case_insensitive,
    )


def _stats_config(args: argparse.Namespace) -> StatsConfig:
    return StatsConfig(
        alpha=args.alpha_level,
        variant="welch" if args.welch else "pooled",
        tails=1 if args.one_tailed else 2,
    )


def _provenance(
    command: str,
    args: argparse.Namespace,
    results: Sequence[StoryResult] = (),
    extra: dict | None = None,
) -> None:
    config = {
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "edge_lprime_mode": args.edge_lprime_mode,
        "delta_a": args.delta_a,
        "delta_b": args.delta_b,
        "delta_c": args.delta_c,
        "strict_delta_c": args.strict_delta_c,
        "neutral_band": args.neutral_band,
        "lexicon": str(args.lexicon) if args.lexicon else None,
        "negation_tokens": sorted(t for t in args.negation_tokens.split(",") if t),
        "external_scores": str(args.external_scores) if args.external_scores else None,
        "jobs": args.jobs,
    }
    if extra:
        config.update(extra)
    stories = {}
    for result in results:
        stories[result.story.id] = {
            "chapters": [
                {"chapter": index, "length": length, "delta_a": params.delta_a,
                 "delta_b": params.delta_b, "delta_c": params.delta_c}
                for index, length, params in result.graph.chapter_params
            ]
        }
    data = {
        "version": ficnet.__version__,
        "command": command,
        "manifest": str(args.manifest),
        "seed": args.seed,
        "config": config,
        "stories": stories,
    }
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "provenance.yaml").write_text(
        yaml.safe_dump(data, sort_keys=True, allow_unicode=True), encoding="utf-8"
    )


def _fit_writer_models(
    corpus: Corpus, args: argparse.Namespace
) -> dict[str, TopicModel]:
    """One LDA model per writer that has stories."""
    config = _topic_config(args, corpus)
    stopwords: set[str] = set()
    if args.stopwords is not None:
        stopwords |= load_token_list(args.stopwords)
    if args.remove is not None:
        stopwords |= load_token_list(args.remove)
    models: dict[str, TopicModel] = {}
    for writer in corpus.writers:
        stories = corpus.stories_by_writer(writer.id)
        if not stories:
            continue
        removal = stopwords | character_name_tokens(
            stories, corpus.config.case_insensitive
        )
        documents = [
            doc for story in stories for doc in preprocess(story, removal, config)
        ]
        try:
            models[writer.id] = fit_lda(documents, config)
        except TopicFitError as exc:
            raise TopicFitError(f"writer {writer.id!r}: {exc}") from exc
    return models


def _write_graphs(
    results: Sequence[StoryResult],
    out_dir: Path,
    formats: Sequence[str],
    per_chapter: bool,
) -> None:
    graphs_dir = out_dir / "graphs"
    graphs_dir.mkdir(parents=True, exist_ok=True)
    for result in results:
        docs = [from_story_graph(result.graph)]
        if per_chapter:
            docs += [
                from_chapter_graph(ch, result.story.id)
                for ch in result.chapter_graphs
            ]
        for doc in docs:
            for fmt in formats:
                path = graphs_dir / (doc.graph_id + FORMAT_EXTENSIONS[fmt])
                path.write_text(RENDERERS[fmt](doc), encoding="utf-8")


def cmd_extract(args: argparse.Namespace) -> int:
    formats = [f for f in args.formats.split(",") if f]
    unknown = [f for f in formats if f not in RENDERERS]
    if unknown:
        raise ValueError(f"unknown format(s): {', '.join(unknown)}")
    corpus = load_corpus(args.manifest)
    config = _extraction_config(args)
    results = extract_corpus(corpus, config, args.jobs)
    extra: dict = {"formats": formats, "per_chapter": args.per_chapter,
                   "with_topics": args.with_topics}
    if args.with_topics:
        models = _fit_writer_models(corpus, args)
        for result in results:
            model = models.get(result.story.entry.writer)
            if model is not None:
                attach_topics(result, model, args.neutral_band)
        extra.update(_topic_provenance(args))
    _write_graphs(results, args.out, formats, args.per_chapter)
    _provenance("extract", args, results, extra)
    log.info("extracted %d stories into %s", len(results), args.out)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.manifest)
    if not corpus.stories:
        raise CorpusError("corpus contains no stories")
    config = _extraction_config(args)
    results = extract_corpus(corpus, config, args.jobs)
    stats = _stats_config(args)
    tables = compute_tables(
        [r.data() for r in results],
        [w.id for w in corpus.writers],
        stats,
        group_keys=args.group,
        edge_types_by_weight=args.by_weight,
    )
    write_tables(tables, args.out, group_keys=args.group)
    _provenance(
        "report", args, results,
        {"stats_alpha": stats.alpha, "stats_variant": stats.variant,
         "stats_tails": stats.tails, "group_keys": args.group,
         "edge_types_by_weight": args.by_weight},
    )
    return 0


def _topic_provenance(args: argparse.Namespace) -> dict:
    return {
        "topics": args.topics,
        "iterations": args.iterations,
        "burn_in": args.burn_in,
        "doc_topic_prior": args.doc_topic_prior,
        "topic_word_prior": args.topic_word_prior,
        "stopwords": str(args.stopwords) if args.stopwords else None,
        "remove": str(args.remove) if args.remove else None,
        "labels": str(args.labels) if args.labels else None,
    }


def cmd_topics(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.manifest)
    if not corpus.stories:
        raise CorpusError("corpus contains no stories")
    labels = load_topic_labels(args.labels) if args.labels else {}
    models = _fit_writer_models(corpus, args)
    config = _extraction_config(args)
    results = extract_corpus(corpus, config, args.jobs)

    args.out.mkdir(parents=True, exist_ok=True)
    for writer_id, model in models.items():
        payload = {
            "writer": writer_id,
            "topic_count": model.config.topics,
            "seed": model.config.seed,
            "iterations": model.config.iterations,
            "burn_in": model.config.burn_in,
            "doc_topic_prior": model.config.alpha,
            "topic_word_prior": model.config.topic_word_prior,
            "vocabulary": list(model.vocabulary),
            "documents": [
                {"story": d.story_id, "chapter": d.chapter_index}
                for d in model.documents
            ],
            "doc_topic": [list(map(float, row)) for row in model.doc_topic],
            "topic_word": [list(map(float, row)) for row in model.topic_word],
            "top_words": [list(model.top_words(k, 10)) for k in range(model.config.topics)],
            "labels": {str(k): v for k, v in sorted(labels.items())},
        }
        path = args.out / f"topics_{writer_id}.json"
        path.write_text(
            json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    rows = []
    for result in results:
        writer_id = result.story.entry.writer
        model = models.get(writer_id)
        if model is None:
            continue
        for cid in sorted(result.graph.nodes):
            vector = character_topics(model, located_segments(result, cid))
            rows.append([writer_id, result.story.id, cid]
                        + [format(v, ".6g") for v in vector])
    topic_count = args.topics
    header = ["writer", "story", "character"] + [f"topic_{k}" for k in range(topic_count)]
    with (args.out / "character_topics.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    _provenance("topics", args, results, _topic_provenance(args))
    return 0


def _read_column(path: Path, column: str) -> list[float]:
    values = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise ValueError(f"{path}: no column named {column!r}")
        for row in reader:
            cell = (row[column] or "").strip()
            if cell:
                values.append(float(cell))
    return values


def cmd_ttest(args: argparse.Namespace) -> int:
    sample_a = _read_column(args.csv_a, args.col_a)
    sample_b = _read_column(args.csv_b or args.csv_a, args.col_b)
    stats = _stats_config(args)
    result = t_test(sample_a, sample_b, variant=stats.variant,
                    alpha=stats.alpha, tails=stats.tails)
    print(
        f"t={result.t_statistic:.6g} df={result.degrees_of_freedom:.6g} "
        f"p={result.p_value:.6g} variant={result.variant} "
        f"n_a={result.n_a} n_b={result.n_b} tails={result.tails} "
        f"significant={'true' if result.significant else 'false'}"
    )
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    doc = parse_canonical(args.graph.read_text(encoding="utf-8"))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(RENDERERS[args.format](doc), encoding="utf-8")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; map to 1
        return 0 if exc.code == 0 else 1
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING)
        if hasattr(args, "log_level") else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"ficnet: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        print(f"ficnet: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
