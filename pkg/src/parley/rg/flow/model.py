"""Data model for declarative, dialogue-act-driven flow graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ...types import DALabel

DEFAULT_VISIT_CAP = 2

PART_NAMES = ("opener", "body", "handoff")


@dataclass
class SegmentSpec:
    """One response segment: a template set or a named callback that
    returns a template set at composition time."""

    kind: str  # template_set | callback
    templates: list[str] = field(default_factory=list)
    callback: Optional[str] = None
    part: str = "body"


@dataclass
class FlowEdge:
    da_labels: frozenset[DALabel]
    target: str
    is_default: bool = False


@dataclass
class FlowNode:
    node_id: str
    segments: list[SegmentSpec] = field(default_factory=list)
    edges: list[FlowEdge] = field(default_factory=list)
    visit_cap: int = DEFAULT_VISIT_CAP
    exit_segments: list[SegmentSpec] = field(default_factory=list)
    exit_to: Optional[str] = None
    is_leaf: bool = False
    leaf_target: Optional[str] = None
    ending_ack: list[str] = field(default_factory=list)
    dialogue_act: Optional[DALabel] = None


@dataclass
class Miniflow:
    miniflow_id: str
    entry: str
    node_ids: list[str] = field(default_factory=list)


@dataclass
class FlowGraph:
    flow_id: str
    topic: str
    ordering: str = "sequential"  # sequential | random
    miniflows: list[Miniflow] = field(default_factory=list)
    nodes: dict[str, FlowNode] = field(default_factory=dict)
    roots: dict[tuple[str, bool], str] = field(default_factory=dict)

    def node(self, node_id: str) -> FlowNode:
        return self.nodes[node_id]

    def miniflow_of(self, node_id: str) -> Optional[str]:
        for mf in self.miniflows:
            if node_id in mf.node_ids:
                return mf.miniflow_id
        return None

    def miniflow(self, miniflow_id: str) -> Optional[Miniflow]:
        for mf in self.miniflows:
            if mf.miniflow_id == miniflow_id:
                return mf
        return None

    def root_for(self, initiative: str, visited: bool) -> str:
        node = self.roots.get((initiative, visited))
        if node is None:
            node = self.roots[("system", False)]
        return node


@dataclass
class FlowState:
    """Per-conversation execution state; fully JSON-serializable so it
    can ride in an opaque RG state blob."""

    flow_id: str
    current_node: Optional[str] = None
    visits: dict[str, int] = field(default_factory=dict)
    visited_miniflows: list[str] = field(default_factory=list)
    suspension: Optional[dict] = None  # {"node": str, "foreign_turns": int}
    pending_opener: Optional[str] = None
    exhausted: bool = False
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "flow_id": self.flow_id,
            "current_node": self.current_node,
            "visits": dict(self.visits),
            "visited_miniflows": list(self.visited_miniflows),
            "suspension": dict(self.suspension) if self.suspension else None,
            "pending_opener": self.pending_opener,
            "exhausted": self.exhausted,
            "data": dict(self.data),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FlowState":
        return cls(
            flow_id=d["flow_id"],
            current_node=d.get("current_node"),
            visits={k: int(v) for k, v in d.get("visits", {}).items()},
            visited_miniflows=list(d.get("visited_miniflows", [])),
            suspension=dict(d["suspension"]) if d.get("suspension") else None,
            pending_opener=d.get("pending_opener"),
            exhausted=d.get("exhausted", False),
            data=dict(d.get("data", {})),
        )

    def copy(self) -> "FlowState":
        return FlowState.from_dict(self.to_dict())
