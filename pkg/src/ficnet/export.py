"""Graph serialization: canonical structured text, GraphML, and DOT.

All formats render from a common ``GraphDoc`` view with nodes sorted by id,
edges by sorted id pair, and numbers at 6 significant digits, so identical
inputs always produce byte-identical files. The canonical text format round
trips through :func:`parse_canonical`, which backs the format-conversion
command.

DOT styling: node size tracks node weight, edge thickness tracks edge weight,
edge color is the sentiment class (blue neutral, green positive, red negative).
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Sequence

from ficnet.graph import ChapterGraph, StoryGraph

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"
GRAPHML_SCHEMA = "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd"

SENTIMENT_COLORS = {"neutral": "blue", "positive": "green", "negative": "red"}

CANONICAL_MAGIC = "ficnet-graph 1"

# DOT size mappings (relative to the graph's maximum weight)
_DOT_MIN_WIDTH, _DOT_MAX_WIDTH = 0.35, 1.75
_DOT_MIN_PEN, _DOT_MAX_PEN = 0.5, 5.0


def fmt_number(value: float) -> str:
    """Canonical numeric rendering: 6 significant digits."""
    return format(float(value), ".6g")


@dataclass(frozen=True)
class NodeRow:
    id: str
    weight: float
    sentiment: float
    sentiment_class: str
    appearances: int
    segment_count: int
    chapter_presence: int
    topics: tuple[float, ...] | None
    sequence: tuple[tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class EdgeRow:
    source: str
    target: str
    weight: float
    sentiment: float
    sentiment_class: str
    phi_first: float
    phi_second: float
    segment_count: int
    sequence: tuple[tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class GraphDoc:
    graph_id: str
    kind: str  # "story" | "chapter"
    sentences: int
    chapter_count: int
    params: tuple[tuple[int, int, int, int, int], ...]  # (chapter, L, da, db, dc)
    nodes: tuple[NodeRow, ...]
    edges: tuple[EdgeRow, ...]


def from_story_graph(graph: StoryGraph) -> GraphDoc:
    nodes = tuple(
        NodeRow(
            id=cid,
            weight=attrs.weight,
            sentiment=attrs.sentiment,
            sentiment_class=attrs.sentiment_class,
            appearances=attrs.appearances,
            segment_count=attrs.segment_count,
            chapter_presence=attrs.chapter_presence,
            topics=attrs.topics,
            sequence=attrs.sequence,
        )
        for cid, attrs in sorted(graph.nodes.items())
    )
    edges = tuple(
        EdgeRow(
            source=pair[0],
            target=pair[1],
            weight=attrs.weight,
            sentiment=attrs.sentiment,
            sentiment_class=attrs.sentiment_class,
            phi_first=attrs.phi[0],
            phi_second=attrs.phi[1],
            segment_count=attrs.segment_count,
            sequence=attrs.sequence,
        )
        for pair, attrs in sorted(graph.edges.items())
    )
    return GraphDoc(
        graph_id=graph.story_id,
        kind="story",
        sentences=graph.total_sentences,
        chapter_count=graph.chapter_count,
        params=tuple(
            (index, length, p.delta_a, p.delta_b, p.delta_c)
            for index, length, p in graph.chapter_params
        ),
        nodes=nodes,
        edges=edges,
    )


def from_chapter_graph(graph: ChapterGraph, story_id: str) -> GraphDoc:
    story_like = StoryGraph(
        story_id=f"{story_id}.ch{graph.index:02d}",
        chapter_count=1,
        total_sentences=graph.length,
        nodes=graph.nodes,
        edges=graph.edges,
        chapter_params=((graph.index, graph.length, graph.params),),
    )
    doc = from_story_graph(story_like)
    return GraphDoc(
        graph_id=doc.graph_id,
        kind="chapter",
        sentences=doc.sentences,
        chapter_count=1,
        params=doc.params,
        nodes=doc.nodes,
        edges=doc.edges,
    )


# ---------------------------------------------------------------------------
# Canonical structured text


def _sequence_str(sequence: Sequence[tuple[int, int, int, int]]) -> str:
    return ";".join(f"{ch}:{o}:{s}-{e}" for ch, o, s, e in sequence)


def _parse_sequence(raw: str) -> tuple[tuple[int, int, int, int], ...]:
    if not raw:
        return ()
    items = []
    for part in raw.split(";"):
        ch, o, span = part.split(":")
        s, e = span.split("-")
        items.append((int(ch), int(o), int(s), int(e)))
    return tuple(items)


def render_canonical(doc: GraphDoc) -> str:
    lines = [
        CANONICAL_MAGIC,
        f"id {doc.graph_id}",
        f"kind {doc.kind}",
        f"chapters {doc.chapter_count}",
        f"sentences {doc.sentences}",
    ]
    for chapter, length, da, db, dc in doc.params:
        lines.append(
            f"params chapter={chapter} length={length} "
            f"delta_a={da} delta_b={db} delta_c={dc}"
        )
    for node in doc.nodes:
        fields = [
            f"weight={fmt_number(node.weight)}",
            f"sentiment={fmt_number(node.sentiment)}",
            f"class={node.sentiment_class}",
            f"appearances={node.appearances}",
            f"segments={node.segment_count}",
            f"chapters={node.chapter_presence}",
        ]
        if node.topics is not None:
            fields.append("topics=" + ",".join(fmt_number(t) for t in node.topics))
        fields.append(f"sequence={_sequence_str(node.sequence)}")
        lines.append(f"node {node.id} " + " ".join(fields))
    for edge in doc.edges:
        fields = [
            f"weight={fmt_number(edge.weight)}",
            f"sentiment={fmt_number(edge.sentiment)}",
            f"class={edge.sentiment_class}",
            f"phi1={fmt_number(edge.phi_first)}",
            f"phi2={fmt_number(edge.phi_second)}",
            f"segments={edge.segment_count}",
            f"sequence={_sequence_str(edge.sequence)}",
        ]
        lines.append(f"edge {edge.source} {edge.target} " + " ".join(fields))
    return "\n".join(lines) + "\n"


def parse_canonical(text: str) -> GraphDoc:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != CANONICAL_MAGIC:
        raise ValueError(f"not a canonical graph file (expected {CANONICAL_MAGIC!r})")

    header: dict[str, str] = {}
    params: list[tuple[int, int, int, int, int]] = []
    nodes: list[NodeRow] = []
    edges: list[EdgeRow] = []

    def kv(parts: list[str]) -> dict[str, str]:
        out = {}
        for part in parts:
            key, _, value = part.partition("=")
            out[key] = value
        return out

    for line in lines[1:]:
        parts = line.split(" ")
        tag = parts[0]
        if tag in ("id", "kind", "chapters", "sentences"):
            header[tag] = parts[1]
        elif tag == "params":
            fields = kv(parts[1:])
            params.append(
                (int(fields["chapter"]), int(fields["length"]), int(fields["delta_a"]),
                 int(fields["delta_b"]), int(fields["delta_c"]))
            )
        elif tag == "node":
            fields = kv(parts[2:])
            topics = None
            if "topics" in fields:
                topics = tuple(float(x) for x in fields["topics"].split(","))
            nodes.append(
                NodeRow(
                    id=parts[1],
                    weight=float(fields["weight"]),
                    sentiment=float(fields["sentiment"]),
                    sentiment_class=fields["class"],
                    appearances=int(fields["appearances"]),
                    segment_count=int(fields["segments"]),
                    chapter_presence=int(fields["chapters"]),
                    topics=topics,
                    sequence=_parse_sequence(fields["sequence"]),
                )
            )
        elif tag == "edge":
            fields = kv(parts[3:])
            edges.append(
                EdgeRow(
                    source=parts[1],
                    target=parts[2],
                    weight=float(fields["weight"]),
                    sentiment=float(fields["sentiment"]),
                    sentiment_class=fields["class"],
                    phi_first=float(fields["phi1"]),
                    phi_second=float(fields["phi2"]),
                    segment_count=int(fields["segments"]),
                    sequence=_parse_sequence(fields["sequence"]),
                )
            )
        else:
            raise ValueError(f"unknown canonical graph line: {line!r}")

    return GraphDoc(
        graph_id=header["id"],
        kind=header["kind"],
        sentences=int(header["sentences"]),
        chapter_count=int(header["chapters"]),
        params=tuple(params),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )


# ---------------------------------------------------------------------------
# GraphML

_NODE_KEYS = (
    ("weight", "double"),
    ("sentiment", "double"),
    ("sentiment_class", "string"),
    ("appearances", "int"),
    ("segment_count", "int"),
    ("chapter_presence", "int"),
    ("topics", "string"),
    ("sequence", "string"),
)
_EDGE_KEYS = (
    ("weight", "double"),
    ("sentiment", "double"),
    ("sentiment_class", "string"),
    ("phi_first", "double"),
    ("phi_second", "double"),
    ("segment_count", "int"),
    ("sequence", "string"),
)
_GRAPH_KEYS = (
    ("kind", "string"),
    ("chapter_count", "int"),
    ("sentences", "int"),
    ("segmentation_params", "string"),
)


def render_graphml(doc: GraphDoc) -> str:
    root = ET.Element(
        "graphml",
        {
            "xmlns": GRAPHML_NS,
            "xmlns:xsi": XSI_NS,
            "xsi:schemaLocation": f"{GRAPHML_NS} {GRAPHML_SCHEMA}",
        },
    )
    key_ids: dict[tuple[str, str], str] = {}
    counter = 0
    for domain, keys in (("graph", _GRAPH_KEYS), ("node", _NODE_KEYS), ("edge", _EDGE_KEYS)):
        for name, attr_type in keys:
            key_id = f"d{counter}"
            counter += 1
            key_ids[(domain, name)] = key_id
            ET.SubElement(
                root, "key",
                {"id": key_id, "for": domain, "attr.name": name, "attr.type": attr_type},
            )

    graph_el = ET.SubElement(root, "graph", {"id": doc.graph_id, "edgedefault": "undirected"})

    def data(parent: ET.Element, domain: str, name: str, value: str) -> None:
        el = ET.SubElement(parent, "data", {"key": key_ids[(domain, name)]})
        el.text = value

    data(graph_el, "graph", "kind", doc.kind)
    data(graph_el, "graph", "chapter_count", str(doc.chapter_count))
    data(graph_el, "graph", "sentences", str(doc.sentences))
    data(
        graph_el, "graph", "segmentation_params",
        ";".join(
            f"chapter={c}:length={l}:delta_a={da}:delta_b={db}:delta_c={dc}"
            for c, l, da, db, dc in doc.params
        ),
    )

    for node in doc.nodes:
        el = ET.SubElement(graph_el, "node", {"id": node.id})
        data(el, "node", "weight", fmt_number(node.weight))
        data(el, "node", "sentiment", fmt_number(node.sentiment))
        data(el, "node", "sentiment_class", node.sentiment_class)
        data(el, "node", "appearances", str(node.appearances))
        data(el, "node", "segment_count", str(node.segment_count))
        data(el, "node", "chapter_presence", str(node.chapter_presence))
        if node.topics is not None:
            data(el, "node", "topics", ",".join(fmt_number(t) for t in node.topics))
        data(el, "node", "sequence", _sequence_str(node.sequence))

    for i, edge in enumerate(doc.edges):
        el = ET.SubElement(
            graph_el, "edge", {"id": f"e{i}", "source": edge.source, "target": edge.target}
        )
        data(el, "edge", "weight", fmt_number(edge.weight))
        data(el, "edge", "sentiment", fmt_number(edge.sentiment))
        data(el, "edge", "sentiment_class", edge.sentiment_class)
        data(el, "edge", "phi_first", fmt_number(edge.phi_first))
        data(el, "edge", "phi_second", fmt_number(edge.phi_second))
        data(el, "edge", "segment_count", str(edge.segment_count))
        data(el, "edge", "sequence", _sequence_str(edge.sequence))

    ET.indent(root, space="  ")
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        + ET.tostring(root, encoding="unicode")
        + "\n"
    )


# ---------------------------------------------------------------------------
# DOT


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(doc: GraphDoc) -> str:
    max_node = max((n.weight for n in doc.nodes), default=0.0)
    max_edge = max((e.weight for e in doc.edges), default=0.0)
    lines = [
        f"graph {_dot_quote(doc.graph_id)} {{",
        f"  // kind={doc.kind} chapters={doc.chapter_count} sentences={doc.sentences}",
    ]
    for chapter, length, da, db, dc in doc.params:
        lines.append(
            f"  // params chapter={chapter} length={length} "
            f"delta_a={da} delta_b={db} delta_c={dc}"
        )
    lines.append("  graph [overlap=false];")
    lines.append('  node [shape=circle, style=filled, fillcolor=lightgray, fixedsize=true];')
    for node in doc.nodes:
        scale = node.weight / max_node if max_node > 0 else 0.0
        width = _DOT_MIN_WIDTH + (_DOT_MAX_WIDTH - _DOT_MIN_WIDTH) * scale
        lines.append(
            f"  {_dot_quote(node.id)} [label={_dot_quote(node.id)}, "
            f"width={fmt_number(width)}, fontsize=10, "
            f"tooltip={_dot_quote('weight=' + fmt_number(node.weight))}];"
        )
    for edge in doc.edges:
        scale = edge.weight / max_edge if max_edge > 0 else 0.0
        penwidth = _DOT_MIN_PEN + (_DOT_MAX_PEN - _DOT_MIN_PEN) * scale
        color = SENTIMENT_COLORS[edge.sentiment_class]
        lines.append(
            f"  {_dot_quote(edge.source)} -- {_dot_quote(edge.target)} "
            f"[penwidth={fmt_number(penwidth)}, color={color}, "
            f"tooltip={_dot_quote('weight=' + fmt_number(edge.weight))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


RENDERERS = {
    "txt": render_canonical,
    "graphml": render_graphml,
    "dot": render_dot,
}

FORMAT_EXTENSIONS = {"txt": ".txt", "graphml": ".graphml", "dot": ".dot"}
