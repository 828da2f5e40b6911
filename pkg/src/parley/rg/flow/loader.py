"""Flow pack loading and validation.

One YAML document per flow. Validation rejects dangling edge targets,
missing roots, bad caps and unregistered callbacks, naming the node or
edge at fault in every message.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional

import yaml

from ...types import ConfigurationError, DALabel
from .model import (
    DEFAULT_VISIT_CAP,
    PART_NAMES,
    FlowEdge,
    FlowGraph,
    FlowNode,
    Miniflow,
    SegmentSpec,
)

_ROOT_KEYS = {
    "system_unvisited": ("system", False),
    "system_visited": ("system", True),
    "user_unvisited": ("user", False),
    "user_visited": ("user", True),
}


def _parse_segment(raw: dict, where: str) -> SegmentSpec:
    part = raw.get("part", "body")
    if part not in PART_NAMES:
        raise ConfigurationError(f"{where}: unknown part {part!r}")
    if "callback" in raw:
        return SegmentSpec(kind="callback", callback=raw["callback"], part=part)
    templates = raw.get("templates")
    if not templates:
        raise ConfigurationError(f"{where}: segment needs templates or a callback")
    return SegmentSpec(kind="template_set", templates=[str(t) for t in templates], part=part)


def _parse_node(raw: dict, default_cap: int, flow_id: str) -> FlowNode:
    node_id = raw.get("id")
    if not node_id:
        raise ConfigurationError(f"flow {flow_id!r}: node without id")
    where = f"flow {flow_id!r} node {node_id!r}"
    segments = [_parse_segment(s, where) for s in raw.get("segments", [])]
    edges = []
    for i, e in enumerate(raw.get("edges", [])):
        if "default" in e:
            edges.append(FlowEdge(da_labels=frozenset(), target=e["default"], is_default=True))
            continue
        labels = e.get("da")
        target = e.get("to")
        if not labels or not target:
            raise ConfigurationError(f"{where} edge {i}: needs 'da' labels and 'to' target")
        edges.append(
            FlowEdge(
                da_labels=frozenset(DALabel.parse(l) for l in labels),
                target=target,
            )
        )
    cap = int(raw.get("visit_cap", default_cap))
    if cap < 1:
        raise ConfigurationError(f"{where}: visit_cap must be >= 1")
    exit_raw = raw.get("exit")
    exit_segments = []
    exit_to = None
    if exit_raw:
        exit_segments = [_parse_segment(s, where + " exit") for s in exit_raw.get("segments", [])]
        exit_to = exit_raw.get("to")
    is_leaf = bool(raw.get("leaf", False))
    if is_leaf and edges:
        raise ConfigurationError(f"{where}: leaf nodes must not define edges")
    if not is_leaf and not edges:
        raise ConfigurationError(f"{where}: non-leaf nodes need at least one edge")
    return FlowNode(
        node_id=node_id,
        segments=segments,
        edges=edges,
        visit_cap=cap,
        exit_segments=exit_segments,
        exit_to=exit_to,
        is_leaf=is_leaf,
        leaf_target=raw.get("leaf_target"),
        ending_ack=[str(t) for t in raw.get("ending_ack", [])],
        dialogue_act=DALabel.parse(raw["da"]) if raw.get("da") else None,
    )


def load_flow(path: str | Path, known_callbacks: Optional[Iterable[str]] = None) -> FlowGraph:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigurationError(f"flow file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"flow file {path} does not parse: {exc}") from exc
    return build_flow(doc, known_callbacks=known_callbacks, origin=str(path))


def build_flow(
    doc: dict,
    known_callbacks: Optional[Iterable[str]] = None,
    origin: str = "<inline>",
) -> FlowGraph:
    flow_id = doc.get("flow")
    if not flow_id:
        raise ConfigurationError(f"{origin}: missing 'flow' id")
    topic = doc.get("topic")
    if not topic:
        raise ConfigurationError(f"flow {flow_id!r}: missing 'topic'")
    ordering = doc.get("ordering", "sequential")
    if ordering not in ("sequential", "random"):
        raise ConfigurationError(f"flow {flow_id!r}: ordering must be sequential or random")
    default_cap = int(doc.get("default_visit_cap", DEFAULT_VISIT_CAP))

    miniflows = []
    nodes: dict[str, FlowNode] = {}
    for mf_raw in doc.get("miniflows", []):
        mf_id = mf_raw.get("id")
        if not mf_id:
            raise ConfigurationError(f"flow {flow_id!r}: miniflow without id")
        node_ids = []
        for node_raw in mf_raw.get("nodes", []):
            node = _parse_node(node_raw, default_cap, flow_id)
            if node.node_id in nodes:
                raise ConfigurationError(f"flow {flow_id!r}: duplicate node id {node.node_id!r}")
            nodes[node.node_id] = node
            node_ids.append(node.node_id)
        if not node_ids:
            raise ConfigurationError(f"flow {flow_id!r} miniflow {mf_id!r}: no nodes")
        entry = mf_raw.get("entry", node_ids[0])
        if entry not in node_ids:
            raise ConfigurationError(
                f"flow {flow_id!r} miniflow {mf_id!r}: entry {entry!r} is not one of its nodes"
            )
        miniflows.append(Miniflow(miniflow_id=mf_id, entry=entry, node_ids=node_ids))
    if not miniflows:
        raise ConfigurationError(f"flow {flow_id!r}: needs at least one miniflow")

    roots: dict[tuple[str, bool], str] = {}
    for key, node_id in (doc.get("roots") or {}).items():
        if key not in _ROOT_KEYS:
            raise ConfigurationError(f"flow {flow_id!r}: unknown root key {key!r}")
        roots[_ROOT_KEYS[key]] = node_id
    if ("system", False) not in roots:
        raise ConfigurationError(f"flow {flow_id!r}: missing required root 'system_unvisited'")

    graph = FlowGraph(
        flow_id=flow_id,
        topic=topic,
        ordering=ordering,
        miniflows=miniflows,
        nodes=nodes,
        roots=roots,
    )
    _validate(graph, known_callbacks)
    return graph


def _validate(graph: FlowGraph, known_callbacks: Optional[Iterable[str]]) -> None:
    fid = graph.flow_id
    for node in graph.nodes.values():
        for i, edge in enumerate(node.edges):
            if edge.target not in graph.nodes:
                raise ConfigurationError(
                    f"flow {fid!r} node {node.node_id!r} edge {i}: target {edge.target!r} does not exist"
                )
        if node.exit_to is not None and node.exit_to not in graph.nodes:
            raise ConfigurationError(
                f"flow {fid!r} node {node.node_id!r}: exit target {node.exit_to!r} does not exist"
            )
        if node.leaf_target is not None and graph.miniflow(node.leaf_target) is None:
            raise ConfigurationError(
                f"flow {fid!r} node {node.node_id!r}: leaf_target miniflow {node.leaf_target!r} does not exist"
            )
    for root_node in graph.roots.values():
        if root_node not in graph.nodes:
            raise ConfigurationError(f"flow {fid!r}: root node {root_node!r} does not exist")
    if known_callbacks is not None:
        known = set(known_callbacks)
        for node in graph.nodes.values():
            for seg in node.segments + node.exit_segments:
                if seg.kind == "callback" and seg.callback not in known:
                    raise ConfigurationError(
                        f"flow {fid!r} node {node.node_id!r}: unregistered callback {seg.callback!r}"
                    )
