"""Flow-graph response generator: adapts flow execution to the RG
contract interface."""

from __future__ import annotations

import logging
from typing import Optional

from ...types import ResponseCandidate, SystemAction
from ..base import ResponseGenerator, RGContext
from .engine import (
    AdvanceResult,
    CallbackContext,
    advance,
    compose,
    init_flow,
    note_foreign_turn,
    resume,
    suspend,
)
from .model import FlowGraph, FlowState

logger = logging.getLogger(__name__)

STATE_KEY = "flow"


class FlowRG(ResponseGenerator):
    def __init__(
        self,
        graph: FlowGraph,
        callbacks: Optional[dict] = None,
        extra_actions: tuple[SystemAction, ...] = (),
    ) -> None:
        self.graph = graph
        self.callbacks = callbacks or {}
        self.rg_id = f"flow:{graph.flow_id}"
        self.actions = frozenset({SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE, *extra_actions})
        self.topics = frozenset({graph.topic})

    def _load(self, ctx: RGContext) -> Optional[FlowState]:
        if ctx.rg_state and STATE_KEY in ctx.rg_state:
            try:
                return FlowState.from_dict(ctx.rg_state[STATE_KEY])
            except (KeyError, TypeError, ValueError):
                logger.warning("%s: corrupt flow state ignored", self.rg_id)
        return None

    def _cb_ctx(self, ctx: RGContext, fs: FlowState) -> CallbackContext:
        slots = {"topic": self.graph.topic.replace("_", " ")}
        if ctx.nlu.entities:
            slots["entity"] = ctx.nlu.entities[0].surface
        return CallbackContext(
            rng=ctx.rng,
            slots=slots,
            flow_data=fs.data,
            resources=ctx.resources,
            state=ctx.state,
            nlu=ctx.nlu,
            constraints=ctx.constraints,
        )

    def _candidates(
        self, ctx: RGContext, fs: FlowState, node_id: str, opener_ack: Optional[str]
    ) -> list[ResponseCandidate]:
        node = self.graph.node(node_id)
        parts_list = compose(
            self.graph, node_id, self.callbacks, self._cb_ctx(ctx, fs), ctx.rng,
            opener_override=opener_ack,
        )
        candidates = []
        for i, parts in enumerate(parts_list):
            candidates.append(
                ResponseCandidate(
                    body=parts["body"],
                    opener=parts["opener"],
                    handoff=parts["handoff"],
                    source_rg=self.rg_id,
                    topic=self.graph.topic,
                    dialogue_act=node.dialogue_act,
                    preference=i,
                    state_update={STATE_KEY: fs.to_dict()},
                )
            )
        return candidates

    def _record_after(self, ctx: RGContext, fs: FlowState) -> None:
        ctx.scratch["flow_after"] = fs.to_dict()
        if fs.pending_opener:
            ctx.scratch["pending_opener"] = fs.pending_opener

    def _advance_and_compose(self, ctx: RGContext, fs: FlowState) -> list[ResponseCandidate]:
        result: AdvanceResult = advance(
            self.graph, fs, ctx.nlu.da_labels(), ctx.rng,
            callbacks=self.callbacks, cb_ctx=self._cb_ctx(ctx, fs),
        )
        if result.kind == "exhausted":
            if result.state.exhausted:
                self._record_after(ctx, result.state)
            return []
        return self._candidates(ctx, result.state, result.node_id, result.opener_ack)

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        if ctx.constraints.topic != self.graph.topic:
            return []
        fs = self._load(ctx)
        signal = ctx.nlu.topic_signal
        user_invoked = signal is not None and signal.topic == self.graph.topic
        initiative = "user" if user_invoked else "system"

        if fs is not None and fs.current_node is None and not fs.exhausted and fs.visited_miniflows:
            # a suspension went stale: resumption begins a new miniflow
            resumed, node_id, ack = resume(self.graph, fs, ctx.rng)
            if node_id is None:
                self._record_after(ctx, resumed)
                return []
            return self._candidates(ctx, resumed, node_id, ack)

        if fs is None or fs.current_node is None:
            previously = fs is not None and bool(fs.visited_miniflows)
            started = init_flow(self.graph, initiative, previously, persisted=fs, rng=ctx.rng)
            if started is None:
                # nothing unvisited left: let the DM pick another RG
                if fs is not None:
                    self._record_after(ctx, fs)
                return []
            started.pending_opener = None
            return self._candidates(ctx, started, started.current_node, None)

        if fs.suspension is not None:
            resumed, node_id, ack = resume(self.graph, fs, ctx.rng)
            if node_id is None:
                self._record_after(ctx, resumed)
                return []
            if node_id == fs.suspension.get("node"):
                # picked up where we left off: read this turn's DAs from there
                return self._advance_and_compose(ctx, resumed)
            return self._candidates(ctx, resumed, node_id, ack)

        return self._advance_and_compose(ctx, fs)

    def commit(self, ctx: RGContext, chosen: Optional[ResponseCandidate]) -> Optional[dict]:
        if chosen is not None and chosen.source_rg == self.rg_id:
            update = dict(chosen.state_update or {})
            if update.get(STATE_KEY):
                # opener was delivered with this response; drop any pending ack
                update[STATE_KEY] = {**update[STATE_KEY], "pending_opener": None}
            return update

        after = ctx.scratch.get("flow_after")
        if after is not None:
            fs = FlowState.from_dict(after)
            if fs.pending_opener and chosen is not None:
                fs.pending_opener = None  # consumed by the DM this turn
            return {STATE_KEY: fs.to_dict()}

        fs = self._load(ctx)
        if fs is None or (fs.current_node is None and fs.suspension is None):
            return None
        if fs.suspension is None:
            fs = suspend(fs, self.graph)
        fs = note_foreign_turn(fs)
        return {STATE_KEY: fs.to_dict()}
