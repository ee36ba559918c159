"""CSV tables and the Markdown report.

Table shapes mirror the published layout: age/gender proportions with
normalized aggregate weights, protagonist characteristics, graph structure,
per-group mean degree, within-gender age distribution (percent), and edge-type
distributions. Significance tests are embedded as extra t/df/p/significant
columns where the compared pair is unambiguous, and as long-format
``group_<key>_tests.csv`` files otherwise. Significant cells are underlined in
the Markdown report.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ficnet.analytics import (
    ALL_WRITERS,
    GROUP_KEYS,
    AGE_PAIR_CLASSES,
    GENDER_PAIR_CLASSES,
    EdgeTypeDistribution,
    GroupSummary,
    ProtagonistProfile,
    StoryData,
    TimeSeriesPoint,
    edge_type_distribution,
    genre_scatter,
    graph_features,
    group_summary,
    protagonist_profile,
    time_series,
    within_gender_age_distribution,
)
from ficnet.export import fmt_number
from ficnet.stats import TTestResult


@dataclass(frozen=True)
class StatsConfig:
    alpha: float = 0.05
    variant: str = "pooled"
    tails: int = 2


def _cell(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_number(value)
    return value


def _test_cells(test: TTestResult | None) -> list[str]:
    if test is None:
        return ["", "", "", ""]
    return [
        fmt_number(test.t_statistic),
        fmt_number(test.degrees_of_freedom),
        fmt_number(test.p_value),
        _cell(test.significant),
    ]


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _scopes(writers: Sequence[str], present: Mapping[str, object]) -> list[str]:
    scopes = [w for w in writers if w in present]
    if ALL_WRITERS in present:
        scopes.append(ALL_WRITERS)
    return scopes


@dataclass
class ReportTables:
    """All computed summaries, reused by the CSV and Markdown emitters."""

    writers: tuple[str, ...]
    summaries: dict[str, GroupSummary]
    protagonists: ProtagonistProfile
    structure: dict[str, dict[str, float]]
    combined: dict[str, dict[str, float]]
    edge_types_gender: EdgeTypeDistribution
    edge_types_age: EdgeTypeDistribution
    series_age: list[TimeSeriesPoint]
    series_family: list[TimeSeriesPoint]
    scatter: list[tuple[str, str, str, int, float]]


def compute_tables(
    stories: Sequence[StoryData],
    writers: Sequence[str],
    stats: StatsConfig,
    group_keys: Sequence[str] | None = None,
    edge_types_by_weight: bool = False,
) -> ReportTables:
    keys = tuple(group_keys) if group_keys else tuple(GROUP_KEYS)
    summaries = {
        key: group_summary(stories, key, stats.alpha, stats.variant, stats.tails)
        for key in set(keys) | {"gender", "age"}
    }

    structure: dict[str, dict[str, float]] = {}
    buckets: dict[str, list] = {}
    for story in stories:
        features = graph_features(story.graph)
        for scope in (story.writer, ALL_WRITERS):
            buckets.setdefault(scope, []).append(features)
    for scope, feats in buckets.items():
        structure[scope] = {
            "node_count": sum(f.node_count for f in feats) / len(feats),
            "density": sum(f.density for f in feats) / len(feats),
            "edge_count": sum(f.edge_count for f in feats) / len(feats),
        }

    return ReportTables(
        writers=tuple(writers),
        summaries=summaries,
        protagonists=protagonist_profile(stories, stats.alpha, stats.variant, stats.tails),
        structure=structure,
        combined=within_gender_age_distribution(stories),
        edge_types_gender=edge_type_distribution(stories, "gender", edge_types_by_weight),
        edge_types_age=edge_type_distribution(stories, "age", edge_types_by_weight),
        series_age=time_series(stories, "age_proportions"),
        series_family=time_series(stories, "family_weight"),
        scatter=genre_scatter(stories),
    )


def _age_gender_weight_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    gender = tables.summaries["gender"]
    age = tables.summaries["age"]
    header = [
        "writer", "male", "w_male", "female", "w_female",
        "a1", "w_a1", "a2", "w_a2", "a3", "w_a3",
        "t", "df", "p", "significant",
    ]
    rows = []
    for scope in _scopes(tables.writers, gender.writer_stats):
        g = gender.writer_stats[scope]
        a = age.writer_stats[scope]
        test = gender.tests[scope].get(("male", "female"))
        rows.append(
            [scope,
             _cell(g["male"].proportion), _cell(g["male"].weight_share),
             _cell(g["female"].proportion), _cell(g["female"].weight_share),
             _cell(a["A1"].proportion), _cell(a["A1"].weight_share),
             _cell(a["A2"].proportion), _cell(a["A2"].weight_share),
             _cell(a["A3"].proportion), _cell(a["A3"].weight_share)]
            + _test_cells(test)
        )
    return header, rows


def _protagonist_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    profile = tables.protagonists
    header = ["writer", "m_share", "f_share", "w_m", "w_f", "d_m", "d_f", "s_m", "s_f"]
    for metric in ("weight", "degree", "sentiment"):
        header += [f"t_{metric}", f"df_{metric}", f"p_{metric}", f"significant_{metric}"]
    rows = []
    for scope in _scopes(tables.writers, profile.by_writer):
        stats = profile.by_writer[scope]
        row = [scope,
               _cell(stats["M"].share), _cell(stats["F"].share),
               _cell(stats["M"].mean_weight), _cell(stats["F"].mean_weight),
               _cell(stats["M"].mean_degree), _cell(stats["F"].mean_degree),
               _cell(stats["M"].mean_sentiment), _cell(stats["F"].mean_sentiment)]
        for metric in ("weight", "degree", "sentiment"):
            row += _test_cells(profile.tests[scope].get(metric))
        rows.append(row)
    return header, rows


def _structure_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    header = ["writer", "node_count", "density", "edge_count"]
    rows = [
        [scope,
         _cell(tables.structure[scope]["node_count"]),
         _cell(tables.structure[scope]["density"]),
         _cell(tables.structure[scope]["edge_count"])]
        for scope in _scopes(tables.writers, tables.structure)
    ]
    return header, rows


def _group_degree_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    gender = tables.summaries["gender"]
    age = tables.summaries["age"]
    header = ["writer", "m", "f", "a1", "a2", "a3"]
    rows = []
    for scope in _scopes(tables.writers, gender.writer_stats):
        g = gender.writer_stats[scope]
        a = age.writer_stats[scope]
        rows.append(
            [scope,
             _cell(g["male"].mean_degree), _cell(g["female"].mean_degree),
             _cell(a["A1"].mean_degree), _cell(a["A2"].mean_degree),
             _cell(a["A3"].mean_degree)]
        )
    return header, rows


def _combined_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    classes = GROUP_KEYS["age_gender"]
    header = ["writer"] + list(classes)
    rows = []
    for scope in _scopes(tables.writers, tables.combined):
        shares = tables.combined[scope]
        rows.append([scope] + [_cell(shares[c] * 100.0) for c in classes])
    return header, rows


def _edge_type_rows(tables: ReportTables) -> tuple[list[str], list[list[str]]]:
    header = ["writer"] + list(GENDER_PAIR_CLASSES) + list(AGE_PAIR_CLASSES)
    gender = tables.edge_types_gender.proportions
    age = tables.edge_types_age.proportions
    rows = []
    for scope in _scopes(tables.writers, gender):
        g = gender[scope]
        a = age[scope]
        rows.append(
            [scope]
            + [_cell(g.get(c)) for c in GENDER_PAIR_CLASSES]
            + [_cell(a.get(c)) for c in AGE_PAIR_CLASSES]
        )
    return header, rows


def _group_rows(summary: GroupSummary, writers: Sequence[str]) -> tuple[list[str], list[list[str]]]:
    header = ["writer"]
    for g in summary.groups:
        header += [f"prop_{g}", f"weight_{g}", f"degree_{g}", f"sentiment_{g}"]
    if len(summary.groups) == 2:
        header += ["t", "df", "p", "significant"]
    rows = []
    for scope in _scopes(writers, summary.writer_stats):
        cells = summary.writer_stats[scope]
        row: list[str] = [scope]
        for g in summary.groups:
            c = cells[g]
            row += [_cell(c.proportion), _cell(c.weight_share),
                    _cell(c.mean_degree), _cell(c.mean_sentiment)]
        if len(summary.groups) == 2:
            pair = (summary.groups[0], summary.groups[1])
            row += _test_cells(summary.tests[scope].get(pair))
        rows.append(row)
    return header, rows


def _group_test_rows(summary: GroupSummary, writers: Sequence[str]) -> tuple[list[str], list[list[str]]]:
    header = ["writer", "group_a", "group_b", "t", "df", "p", "significant"]
    rows = []
    for scope in _scopes(writers, summary.tests):
        for (g1, g2), test in sorted(summary.tests[scope].items()):
            rows.append([scope, g1, g2] + _test_cells(test))
    return header, rows


def write_tables(
    tables: ReportTables,
    out_dir: Path,
    group_keys: Sequence[str] | None = None,
) -> list[Path]:
    """Write every CSV table plus report.md; returns the written paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
        path = out_dir / name
        _write_csv(path, header, rows)
        written.append(path)

    emit("age_gender_weight.csv", *_age_gender_weight_rows(tables))
    emit("protagonists.csv", *_protagonist_rows(tables))
    emit("graph_structure.csv", *_structure_rows(tables))
    emit("group_degree.csv", *_group_degree_rows(tables))
    emit("age_gender_combined.csv", *_combined_rows(tables))
    emit("edge_types.csv", *_edge_type_rows(tables))

    keys = tuple(group_keys) if group_keys else tuple(GROUP_KEYS)
    for key in keys:
        summary = tables.summaries[key]
        emit(f"group_{key}.csv", *_group_rows(summary, tables.writers))
        emit(f"group_{key}_tests.csv", *_group_test_rows(summary, tables.writers))

    emit(
        "protagonist_list.csv",
        ["writer", "story", "character", "gender", "age_group",
         "weight", "degree", "sentiment"],
        [[r.writer, r.story_id, r.character_id, r.gender, r.age_group,
          _cell(r.weight), _cell(r.degree), _cell(r.sentiment)]
         for r in tables.protagonists.rows],
    )
    emit(
        "timeseries_age_groups.csv",
        ["writer", "story", "year", "a1", "a2", "a3"],
        [[p.writer, p.story_id, str(p.year),
          _cell(p.values["A1"]), _cell(p.values["A2"]), _cell(p.values["A3"])]
         for p in tables.series_age],
    )
    emit(
        "timeseries_family_weight.csv",
        ["writer", "story", "year", "family_weight"],
        [[p.writer, p.story_id, str(p.year), _cell(p.values["family_weight"])]
         for p in tables.series_family],
    )
    emit(
        "genre_scatter.csv",
        ["genre", "writer", "story", "node_count", "density"],
        [[genre, writer, story, str(nodes), _cell(density)]
         for genre, writer, story, nodes, density in tables.scatter],
    )

    md_path = out_dir / "report.md"
    md_path.write_text(render_markdown(tables), encoding="utf-8")
    written.append(md_path)
    return written


# ---------------------------------------------------------------------------
# Markdown


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(cell if cell else "-" for cell in row) + " |")
    return "\n".join(lines)


def _underline(cell: str) -> str:
    return f"<u>{cell}</u>" if cell else cell


def render_markdown(tables: ReportTables) -> str:
    sections = ["# Character interaction report", ""]

    gender = tables.summaries["gender"]
    header, rows = _age_gender_weight_rows(tables)
    for row in rows:
        test = gender.tests[row[0]].get(("male", "female"))
        if test is not None and test.significant:
            row[2] = _underline(row[2])  # w_male
            row[4] = _underline(row[4])  # w_female
    sections += [
        "## Age and gender proportions with normalized aggregate weight",
        "",
        "Underlined weights: significant male/female difference.",
        "",
        _md_table(header[:11], [r[:11] for r in rows]),
        "",
    ]

    profile = tables.protagonists
    header, rows = _protagonist_rows(tables)
    metric_columns = {"weight": (3, 4), "degree": (5, 6), "sentiment": (7, 8)}
    for row in rows:
        for metric, (ci, cj) in metric_columns.items():
            test = profile.tests[row[0]].get(metric)
            if test is not None and test.significant:
                row[ci] = _underline(row[ci])
                row[cj] = _underline(row[cj])
    sections += [
        "## Protagonist characteristics by gender",
        "",
        "Underlined cells: significant male/female difference for that metric.",
        "",
        _md_table(header[:9], [r[:9] for r in rows]),
        "",
    ]

    for title, builder in (
        ("Graph structure", _structure_rows),
        ("Mean degree by group", _group_degree_rows),
        ("Within-gender age distribution (%)", _combined_rows),
        ("Edge-type distribution", _edge_type_rows),
    ):
        header, rows = builder(tables)
        sections += [f"## {title}", "", _md_table(header, rows), ""]

    return "\n".join(sections)
