"""The dialogue-manager pipeline.

Per turn: NLU, action decision, topic resolution, constraint
generation, RG dispatch, response pool building and filtering, back-off
ranking, fallback when nothing survives, grounding and response
assembly. Every stage failure degrades toward the fallback path; a turn
is always answered. A TurnTrace records what happened for debugging and
for the acceptance harness.
"""

from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field
from time import perf_counter
from typing import Optional

from ..nlu.pipeline import NLUPipeline
from ..rg.base import RGContext, RGRegistry, decode_rg_state, encode_rg_state
from ..topics import TopicRegistry, update_topic_state
from ..types import (
    DialogueState,
    EntityType,
    InvocationType,
    LinkedEntity,
    NLUBundle,
    ResponseCandidate,
    SystemAction,
    SystemResponse,
    TopicSignal,
    TurnTrace,
    Turn,
    UtteranceSegment,
)
from .actions import decide_action
from .builder import MarkupConfig, assemble
from .constraints import generate_constraints
from .fallback import FALLBACK_RG_ID, FallbackTemplates, fallback
from .grounding import GroundingTemplates, ground
from .initiative import DEFAULT_INITIATIVE_LIMIT, InitiativeDecision, choose_initiative
from .pool import PoolConfig, ResponsePool, build_pool
from .ranker import EmptyPoolError, rank

logger = logging.getLogger(__name__)

DM_STATE_KEY = "__dm__"


@dataclass
class DMConfig:
    seed: int = 0
    initiative_limit: int = DEFAULT_INITIATIVE_LIMIT
    rg_preference: list[str] = field(default_factory=list)
    discussable_topics: list[str] = field(default_factory=list)
    pool: PoolConfig = field(default_factory=PoolConfig)
    markup: MarkupConfig = field(default_factory=MarkupConfig)


def _default_dm_state() -> dict:
    return {"da_cycle": 0, "initiative_streak": 0, "last_fallback": None}


class DialogueManager:
    def __init__(
        self,
        nlu: NLUPipeline,
        topic_registry: TopicRegistry,
        rg_registry: RGRegistry,
        grounding_templates: GroundingTemplates,
        fallback_templates: FallbackTemplates,
        config: DMConfig,
        resources: Optional[object] = None,
    ) -> None:
        self.nlu = nlu
        self.topic_registry = topic_registry
        self.rg_registry = rg_registry
        self.grounding_templates = grounding_templates
        self.fallback_templates = fallback_templates
        self.config = config
        self.resources = resources

    # deterministic per-turn rng streams, independent of thread timing
    def _rng(self, turn: Turn, name: str) -> random.Random:
        digest = hashlib.sha256(
            f"{self.config.seed}:{turn.conversation_id}:{turn.turn_index}:{name}".encode()
        ).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))

    def take_turn(
        self,
        turn: Turn,
        state: DialogueState,
        on_ground=None,
    ) -> tuple[SystemResponse, DialogueState, TurnTrace]:
        """``on_ground`` is invoked with the ground string as soon as it
        is computed so transports can emit it as a progressive partial."""
        started = perf_counter()
        trace = TurnTrace(turn_index=turn.turn_index, action=SystemAction.CONVERSE)
        try:
            return self._take_turn(turn, state, trace, started, on_ground)
        except Exception:
            logger.exception("turn pipeline failed; emitting emergency fallback")
            trace.notes.append("pipeline exception; emergency fallback")
            trace.used_fallback = True
            trace.fallback_reason = "pipeline_exception"
            trace.chosen_rg = FALLBACK_RG_ID
            response = SystemResponse(
                body="I got a little lost there. What would you like to talk about?",
                source_rg=FALLBACK_RG_ID,
            )
            new_state = DialogueState(
                conversation_id=state.conversation_id,
                topic_state=update_topic_state(state.topic_state, None, SystemAction.CONVERSE),
                history=state.history + [(turn, response)],
                rg_state=dict(state.rg_state),
                action_history=state.action_history + [SystemAction.CONVERSE],
                constraint_history=list(state.constraint_history),
            )
            trace.latency_ms = (perf_counter() - started) * 1000
            trace.response_parts = {"ground": None, "opener": None, "body": response.body, "handoff": None}
            return response, new_state, trace

    def _take_turn(
        self,
        turn: Turn,
        state: DialogueState,
        trace: TurnTrace,
        started: float,
        on_ground=None,
    ) -> tuple[SystemResponse, DialogueState, TurnTrace]:
        nlu = self.nlu.run(turn, state)
        if not nlu.segments:
            nlu.segments = [UtteranceSegment(text="", span=(0, 0))]

        try:
            action = decide_action(nlu, state)
        except Exception:
            logger.exception("action manager failed; defaulting to converse")
            action = SystemAction.CONVERSE

        dm_state = _default_dm_state()
        stored_dm = decode_rg_state(state.rg_state.get(DM_STATE_KEY))
        if stored_dm:
            dm_state.update(stored_dm)

        # --- topic resolution -------------------------------------------------
        current_topic = state.topic_state.current_topic
        signal = nlu.topic_signal
        working_topic = current_topic
        user_switched = False
        initiative_decision: Optional[InitiativeDecision] = None
        prompt_user = False

        if action in (SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE):
            if signal is not None and signal.invocation_type != InvocationType.NONE:
                working_topic = signal.topic
                user_switched = working_topic != current_topic
                if action is SystemAction.TOPIC_CHANGE:
                    # the user both asked to move on and named a target
                    action = SystemAction.CONVERSE
            elif action is SystemAction.CONVERSE and current_topic not in self.topic_registry.topics:
                trace.notes.append(f"lost track of topic {current_topic!r}; initiating change")
                action = SystemAction.TOPIC_CHANGE
            if action is SystemAction.TOPIC_CHANGE:
                initiative_decision = choose_initiative(
                    state,
                    self.config.discussable_topics,
                    dm_state["initiative_streak"],
                    self._rng(turn, "initiative"),
                    limit=self.config.initiative_limit,
                )
                if initiative_decision.kind == "system_topic":
                    working_topic = initiative_decision.topic
                    dm_state["initiative_streak"] += 1
                else:
                    prompt_user = True

        constraints = generate_constraints(action, nlu, working_topic, dm_state["da_cycle"])
        if action is SystemAction.CONVERSE:
            dm_state["da_cycle"] += 1
        if user_switched:
            dm_state["initiative_streak"] = 0

        # ground first: it only needs stage-1 NLU, so transports can send
        # it as a progressive partial while the pool is being built
        ground_text = None
        if action in (SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE):
            try:
                ground_text = ground(nlu, self.grounding_templates, self._rng(turn, "ground"))
            except Exception:
                logger.exception("grounding failed")
        if on_ground is not None and ground_text:
            try:
                on_ground(ground_text)
            except Exception:
                logger.exception("on_ground hook failed")

        # --- dispatch and pool ------------------------------------------------
        dispatched = [] if prompt_user else self.rg_registry.dispatch(action, working_topic)
        contexts: dict[str, RGContext] = {}
        for entry in self.rg_registry.entries:
            rg_id = entry.rg.rg_id
            contexts[rg_id] = RGContext(
                turn=turn,
                nlu=nlu,
                state=state,
                action=action,
                constraints=constraints,
                rng=self._rng(turn, f"rg:{rg_id}"),
                rg_state=decode_rg_state(state.rg_state.get(rg_id)),
                resources=self.resources,
            )
        pool = build_pool(
            [(self.rg_registry.get(rg_id), contexts[rg_id]) for rg_id in dispatched],
            state,
            self.config.pool,
            # a requested repeat is supposed to repeat
            apply_repetition_filter=action is not SystemAction.PERFORM_REPEAT,
        )

        chosen: Optional[ResponseCandidate] = None
        tier = 0
        if not prompt_user:
            try:
                chosen, tier = rank(
                    pool, constraints, self.config.rg_preference, self._rng(turn, "rank")
                )
            except EmptyPoolError:
                chosen = None

        # an ending miniflow can export an opener for whoever speaks next
        pending_opener = None
        for rg_id in dispatched:
            opener = contexts[rg_id].scratch.get("pending_opener")
            if opener and (chosen is None or chosen.source_rg != rg_id):
                pending_opener = opener
                break

        used_fallback = False
        fallback_reason = None
        if chosen is None:
            used_fallback = True
            fallback_reason = "user_prompt" if prompt_user else (
                "empty_pool" if pool.raw_count == 0 else "all_filtered"
            )
            if initiative_decision is None or (
                initiative_decision.kind == "system_topic" and action is not SystemAction.TOPIC_CHANGE
            ):
                initiative_decision = choose_initiative(
                    state,
                    self.config.discussable_topics,
                    dm_state["initiative_streak"],
                    self._rng(turn, "initiative"),
                    limit=self.config.initiative_limit,
                )
            chosen, fb_key = fallback(
                initiative_decision,
                self.fallback_templates,
                dm_state.get("last_fallback"),
                self._rng(turn, "fallback"),
                opener=pending_opener,
            )
            dm_state["last_fallback"] = fb_key
            if initiative_decision.kind == "system_topic":
                if action is not SystemAction.TOPIC_CHANGE:
                    dm_state["initiative_streak"] += 1
                action = SystemAction.TOPIC_CHANGE
                working_topic = initiative_decision.topic
            else:
                dm_state["initiative_streak"] = 0
        elif pending_opener and not chosen.opener:
            chosen.opener = pending_opener

        try:
            response = assemble(ground_text, chosen, self.config.markup)
        except Exception:
            logger.exception("assembly failed; using raw body")
            response = SystemResponse(body=chosen.body, source_rg=chosen.source_rg)

        # --- state fold -------------------------------------------------------
        final_topic = working_topic
        signal_for_update: Optional[TopicSignal] = None
        if user_switched and signal is not None:
            signal_for_update = signal
        elif final_topic != current_topic:
            signal_for_update = TopicSignal(topic=final_topic, invocation_type=InvocationType.NONE)
        new_topic_state = update_topic_state(state.topic_state, signal_for_update, action)
        new_topic_state.user_entities = new_topic_state.user_entities + nlu.entities
        new_topic_state.system_entities = new_topic_state.system_entities + [
            LinkedEntity(span=(0, 0), surface=uri.replace("_", " "), uri=uri,
                         entity_type=EntityType.OTHER, source="system")
            for uri in chosen.entities
        ]

        rg_states = dict(state.rg_state)
        committed_candidate = None if used_fallback else chosen
        for entry in self.rg_registry.entries:
            rg_id = entry.rg.rg_id
            try:
                update = entry.rg.commit(contexts[rg_id], committed_candidate)
            except Exception:
                logger.exception("commit failed for %s", rg_id)
                continue
            if update is not None:
                encoded = encode_rg_state(update)
                if encoded is not None:
                    rg_states[rg_id] = encoded
        dm_blob = encode_rg_state(dm_state)
        if dm_blob is not None:
            rg_states[DM_STATE_KEY] = dm_blob

        new_state = DialogueState(
            conversation_id=state.conversation_id,
            topic_state=new_topic_state,
            history=state.history + [(turn, response)],
            rg_state=rg_states,
            action_history=state.action_history + [action],
            constraint_history=state.constraint_history + [constraints],
        )
        problems = validate_topic_state(new_state)
        for problem in problems:
            logger.error("post-turn invariant violation: %s", problem)
            trace.notes.append(f"invariant: {problem}")

        trace.action = action
        trace.constraints = constraints
        trace.dispatched_rgs = dispatched
        trace.pool_size = pool.raw_count
        trace.pool_after_filters = len(pool.candidates)
        trace.removals = [
            {"rg": c.source_rg, "reason": reason.value, "text": c.text[:80]}
            for c, reason in pool.removed
        ]
        trace.chosen_rg = chosen.source_rg
        trace.used_fallback = used_fallback
        trace.fallback_reason = fallback_reason
        trace.topic = final_topic
        trace.ground = response.ground
        trace.response_parts = {
            "ground": response.ground,
            "opener": response.opener,
            "body": response.body,
            "handoff": response.handoff,
        }
        trace.notes.append(f"tier={tier}")
        if pool.timed_out:
            trace.notes.append(f"timed_out={','.join(pool.timed_out)}")
        trace.latency_ms = (perf_counter() - started) * 1000
        return response, new_state, trace


def validate_topic_state(state: DialogueState) -> list[str]:
    """Post-turn assertion hook for the TopicState invariants."""
    problems = []
    ts = state.topic_state
    if sum(ts.turn_distribution.values()) != state.turn_count:
        problems.append(
            f"turn distribution sums to {sum(ts.turn_distribution.values())}, "
            f"expected {state.turn_count}"
        )
    if ts.topic_history and ts.current_topic != ts.topic_history[-1]:
        problems.append("current_topic is not the last history entry")
    return problems
