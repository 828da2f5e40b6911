"""Flow graph execution.

Movement rules: an edge matching the user's DA labels is followed (a
random pick among equally labelled edges); a missing match takes the
default edge or signals exhaustion for the turn. Entering a node counts
one visit; an edge into a node already at its visit cap instead speaks
that node's exit response as the opener of wherever the exit leads
(its exit target, or the next unvisited miniflow). Reaching a leaf
switches miniflows automatically, exporting the leaf's ending
acknowledgement as the opener of the successor's intro.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .model import FlowGraph, FlowNode, FlowState, Miniflow, SegmentSpec

logger = logging.getLogger(__name__)

MAX_CANDIDATES = 5
MAX_ENUMERATION = 64
MAX_SAMPLE_ATTEMPTS = 24
MAX_FOREIGN_TURNS = 2

CallbackFn = Callable[["CallbackContext"], list[str]]


@dataclass
class CallbackContext:
    """What a segment callback may consult while producing templates."""

    rng: random.Random
    slots: dict = field(default_factory=dict)
    flow_data: dict = field(default_factory=dict)
    resources: Optional[object] = None
    state: Optional[object] = None
    nlu: Optional[object] = None
    constraints: Optional[object] = None


@dataclass
class AdvanceResult:
    kind: str  # node | switch | exhausted
    node_id: Optional[str]
    opener_ack: Optional[str]
    state: FlowState


def init_flow(
    graph: FlowGraph,
    initiative: str,
    previously_visited: bool,
    persisted: Optional[FlowState] = None,
    rng: Optional[random.Random] = None,
) -> Optional[FlowState]:
    """Position a fresh or revisiting execution at the matching root.

    Returns None when the flow refuses: every miniflow was already
    visited and the initiative is not the user's.
    """
    rng = rng or random.Random(0)
    fs = persisted.copy() if persisted is not None else FlowState(flow_id=graph.flow_id)
    fs.flow_id = graph.flow_id
    fs.suspension = None
    fs.exhausted = False
    unvisited = [mf for mf in graph.miniflows if mf.miniflow_id not in fs.visited_miniflows]
    if not unvisited:
        if initiative != "user":
            return None
        # explicit user invocation may revisit from scratch
        fs.visited_miniflows = []
    root_id = graph.root_for(initiative, previously_visited)
    root = graph.node(root_id)
    mf_id = graph.miniflow_of(root_id)
    root_revisit = mf_id is not None and mf_id in fs.visited_miniflows
    if fs.visits.get(root_id, 0) >= root.visit_cap or (root_revisit and initiative != "user"):
        # the root's own miniflow was consumed: continue with an unvisited one
        switched = _switch_miniflow(graph, fs, rng, explicit_target=None)
        if switched.kind == "exhausted":
            return None
        return switched.state
    if mf_id is not None and not root_revisit:
        fs.visited_miniflows.append(mf_id)
    fs.visits[root_id] = fs.visits.get(root_id, 0) + 1
    fs.current_node = root_id
    return fs


def _unvisited(graph: FlowGraph, fs: FlowState) -> list[Miniflow]:
    return [mf for mf in graph.miniflows if mf.miniflow_id not in fs.visited_miniflows]


def _switch_miniflow(
    graph: FlowGraph,
    fs: FlowState,
    rng: random.Random,
    explicit_target: Optional[str],
    opener_ack: Optional[str] = None,
) -> AdvanceResult:
    fs = fs.copy()
    target: Optional[Miniflow] = None
    if explicit_target is not None:
        mf = graph.miniflow(explicit_target)
        if mf is not None and mf.miniflow_id not in fs.visited_miniflows:
            target = mf
    if target is None:
        remaining = _unvisited(graph, fs)
        if not remaining:
            fs.current_node = None
            fs.exhausted = True
            fs.suspension = None
            fs.pending_opener = opener_ack or fs.pending_opener
            return AdvanceResult("exhausted", None, opener_ack, fs)
        target = remaining[0] if graph.ordering == "sequential" else rng.choice(remaining)
    fs.visited_miniflows.append(target.miniflow_id)
    fs.visits[target.entry] = fs.visits.get(target.entry, 0) + 1
    fs.current_node = target.entry
    fs.suspension = None
    return AdvanceResult("switch", target.entry, opener_ack, fs)


def _sample_text(
    specs: list[SegmentSpec],
    callbacks: dict[str, CallbackFn],
    cb_ctx: CallbackContext,
    rng: random.Random,
) -> Optional[str]:
    texts = []
    for spec in specs:
        options = _segment_options(spec, callbacks, cb_ctx)
        if not options:
            return None
        texts.append(rng.choice(options))
    return " ".join(texts) if texts else None


def advance(
    graph: FlowGraph,
    fs: FlowState,
    da_labels: list,
    rng: random.Random,
    callbacks: Optional[dict[str, CallbackFn]] = None,
    cb_ctx: Optional[CallbackContext] = None,
) -> AdvanceResult:
    """One movement step driven by the user's DA labels."""
    if fs.current_node is None:
        return _switch_miniflow(graph, fs, rng, explicit_target=None)
    node = graph.node(fs.current_node)
    if node.is_leaf:
        ack = rng.choice(node.ending_ack) if node.ending_ack else None
        return _switch_miniflow(graph, fs, rng, node.leaf_target, opener_ack=ack)

    label_set = set(da_labels)
    matching = [e for e in node.edges if not e.is_default and e.da_labels & label_set]
    if not matching:
        matching = [e for e in node.edges if e.is_default]
    if not matching:
        return AdvanceResult("exhausted", None, None, fs.copy())
    edge = matching[0] if len(matching) == 1 else rng.choice(matching)

    target = graph.node(edge.target)
    if fs.visits.get(edge.target, 0) >= target.visit_cap:
        ack = None
        if target.exit_segments and callbacks is not None and cb_ctx is not None:
            ack = _sample_text(target.exit_segments, callbacks, cb_ctx, rng)
        elif target.exit_segments:
            flat = [t for s in target.exit_segments for t in s.templates]
            ack = rng.choice(flat) if flat else None
        exit_to = target.exit_to
        if exit_to is not None:
            exit_node = graph.node(exit_to)
            if fs.visits.get(exit_to, 0) < exit_node.visit_cap:
                out = fs.copy()
                out.visits[exit_to] = out.visits.get(exit_to, 0) + 1
                out.current_node = exit_to
                return AdvanceResult("node", exit_to, ack, out)
        return _switch_miniflow(graph, fs, rng, None, opener_ack=ack)

    out = fs.copy()
    out.visits[edge.target] = out.visits.get(edge.target, 0) + 1
    out.current_node = edge.target
    return AdvanceResult("node", edge.target, None, out)


def _fill_slots(text: str, slots: dict) -> Optional[str]:
    for key, value in slots.items():
        text = text.replace("{" + key + "}", str(value))
    if "{" in text:
        return None
    return text


def _segment_options(
    spec: SegmentSpec,
    callbacks: dict[str, CallbackFn],
    cb_ctx: CallbackContext,
) -> list[str]:
    if spec.kind == "callback":
        fn = callbacks.get(spec.callback or "")
        if fn is None:
            logger.warning("unregistered callback %r", spec.callback)
            return []
        try:
            raw = list(fn(cb_ctx))
        except Exception:
            logger.exception("callback %r failed", spec.callback)
            return []
    else:
        raw = list(spec.templates)
    filled = []
    for text in raw:
        done = _fill_slots(text, cb_ctx.slots)
        if done is not None and done.strip():
            filled.append(done)
    return filled


def compose(
    graph: FlowGraph,
    node_id: str,
    callbacks: dict[str, CallbackFn],
    cb_ctx: CallbackContext,
    rng: random.Random,
    opener_override: Optional[str] = None,
) -> list[dict]:
    """Up to five distinct part-dicts {opener, body, handoff} for a node.

    When the option space is small it is enumerated exhaustively (then
    shuffled and capped); large or callback-heavy spaces are sampled.
    """
    node = graph.node(node_id)
    per_segment: list[tuple[str, list[str]]] = []
    for spec in node.segments:
        options = _segment_options(spec, callbacks, cb_ctx)
        if not options:
            return []
        per_segment.append((spec.part, options))
    if not per_segment:
        return []

    total = 1
    for _part, options in per_segment:
        total *= len(options)

    combos: list[tuple[str, ...]] = []
    if total <= MAX_ENUMERATION:
        indices = [0] * len(per_segment)
        while True:
            combos.append(tuple(per_segment[i][1][indices[i]] for i in range(len(per_segment))))
            for i in range(len(per_segment) - 1, -1, -1):
                indices[i] += 1
                if indices[i] < len(per_segment[i][1]):
                    break
                indices[i] = 0
            else:
                break
        rng.shuffle(combos)
    else:
        seen: set[tuple[str, ...]] = set()
        for _ in range(MAX_SAMPLE_ATTEMPTS):
            pick = tuple(rng.choice(options) for _part, options in per_segment)
            if pick not in seen:
                seen.add(pick)
                combos.append(pick)

    results: list[dict] = []
    seen_text: set[str] = set()
    for combo in combos:
        parts = {"opener": [], "body": [], "handoff": []}
        for (part, _options), text in zip(per_segment, combo):
            parts[part].append(text)
        opener = " ".join(parts["opener"]) or None
        if opener_override:
            opener = f"{opener_override} {opener}" if opener else opener_override
        body = " ".join(parts["body"])
        handoff = " ".join(parts["handoff"]) or None
        if not body:
            # a node must contribute new content; promote handoff if needed
            if handoff:
                body, handoff = handoff, None
            elif opener:
                body, opener = opener, None
            else:
                continue
        full = " ".join(p for p in (opener, body, handoff) if p)
        if full in seen_text:
            continue
        seen_text.add(full)
        results.append({"opener": opener, "body": body, "handoff": handoff})
        if len(results) >= MAX_CANDIDATES:
            break
    return results


def suspend(fs: FlowState, graph: FlowGraph) -> FlowState:
    """Mark a mid-miniflow pause so another RG can take over briefly.
    Suspending at a leaf records nothing: resumption then always starts
    a new miniflow."""
    out = fs.copy()
    if out.current_node is None:
        return out
    if graph.node(out.current_node).is_leaf:
        out.current_node = None
        out.suspension = None
        return out
    if out.suspension is None:
        out.suspension = {"node": out.current_node, "foreign_turns": 0}
    return out


def note_foreign_turn(fs: FlowState) -> FlowState:
    out = fs.copy()
    if out.suspension is None:
        return out
    out.suspension["foreign_turns"] = int(out.suspension.get("foreign_turns", 0)) + 1
    if out.suspension["foreign_turns"] > MAX_FOREIGN_TURNS:
        # too long away: the spot is stale, resume must pick a new miniflow
        out.suspension = None
        out.current_node = None
    return out


def resume(
    graph: FlowGraph, fs: FlowState, rng: random.Random
) -> tuple[FlowState, Optional[str], Optional[str]]:
    """Return (state, node to speak, opener ack).

    Within the foreign-turn budget the suspended node is restored;
    otherwise a new unvisited miniflow begins (None when exhausted).
    """
    out = fs.copy()
    if out.suspension is not None and int(out.suspension.get("foreign_turns", 0)) <= MAX_FOREIGN_TURNS:
        node_id = out.suspension["node"]
        out.current_node = node_id
        out.suspension = None
        return out, node_id, None
    result = _switch_miniflow(graph, out, rng, explicit_target=None)
    if result.kind == "exhausted":
        return result.state, None, result.opener_ack
    return result.state, result.node_id, result.opener_ack


def end_transition(fs: FlowState) -> str:
    """The ending miniflow's acknowledgement, exported as the opener for
    whatever speaks next (successor miniflow, another RG or fallback)."""
    return fs.pending_opener or ""
