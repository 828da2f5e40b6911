"""Knowledge-graph RG: policy over the three KG response types.

On-topic responses run while unused relations remain; once two on-topic
turns have landed, a shift to a linked entity is offered; a declined
shift (or a lost focus) falls through to the favorite-entity path. All
per-conversation memory (focus, used relation instances, pending
consent) rides in the RG's opaque state blob.
"""

from __future__ import annotations

from typing import Optional

from ...types import DALabel, ResponseCandidate, SystemAction
from ..base import ResponseGenerator, RGContext
from .generator import (
    KGPack,
    Realization,
    favorite_entity_response,
    on_topic_response,
    resolve_focus,
    shift_topic_response,
)

STATE_KEY = "kg"
SHIFT_AFTER_ON_TOPIC_TURNS = 2


def _default_state() -> dict:
    return {
        "focus": None,
        "used": [],
        "on_topic_turns": 0,
        "pending_shift": None,
        "visited_favorites": [],
    }


class KGRG(ResponseGenerator):
    def __init__(self, pack: KGPack, topics: dict[str, set], rg_id: str = "kg") -> None:
        """``topics`` maps topic id to the expected entity types there."""
        self.pack = pack
        self.expected_types = topics
        self.rg_id = rg_id
        self.actions = frozenset({SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE})
        self.topics = frozenset(topics.keys())

    def _load(self, ctx: RGContext) -> dict:
        if ctx.rg_state and STATE_KEY in ctx.rg_state:
            merged = _default_state()
            merged.update(ctx.rg_state[STATE_KEY])
            return merged
        return _default_state()

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        topic = ctx.constraints.topic
        if topic not in self.expected_types:
            return []
        st = self._load(ctx)
        used = set(st["used"])
        visited_favorites = set(st["visited_favorites"])
        das = set(ctx.nlu.da_labels())
        rng = ctx.rng

        declined = False
        focus: Optional[str] = None
        pending = st.get("pending_shift")
        if pending:
            if DALabel.YES_ANSWER in das:
                focus = pending
                st["on_topic_turns"] = 0
            else:
                declined = True
        mention, _status = resolve_focus(
            ctx.nlu.entities, self.expected_types[topic], self.pack.popularity
        )
        if mention is not None:
            focus = mention.uri
            declined = False
            if focus != st.get("focus"):
                st["on_topic_turns"] = 0
        if focus is None and not declined:
            focus = st.get("focus")

        realization: Optional[Realization] = None
        new_pending: Optional[str] = None
        new_focus = focus

        if focus is not None and not declined:
            if st["on_topic_turns"] >= SHIFT_AFTER_ON_TOPIC_TURNS:
                shifted = shift_topic_response(focus, topic, self.pack, used, rng)
                if shifted is not None:
                    realization = shifted
                    new_pending = shifted.shift_target
            if realization is None:
                realization = on_topic_response(focus, topic, self.pack, used, rng)
                if realization is not None:
                    st["on_topic_turns"] += 1
            if realization is None and new_pending is None:
                shifted = shift_topic_response(focus, topic, self.pack, used, rng)
                if shifted is not None:
                    realization = shifted
                    new_pending = shifted.shift_target

        if realization is None:
            fav = favorite_entity_response(topic, self.pack, visited_favorites, used, rng)
            if fav is None:
                return []
            fav_uri, realization = fav
            visited_favorites.add(fav_uri)
            new_pending = fav_uri
            new_focus = st.get("focus")
            st["on_topic_turns"] = 0

        used.update(realization.used_keys)
        template = realization.template
        if template is not None and template.dialogue_act is not None:
            da = template.dialogue_act
        elif realization.question:
            da = DALabel.OPINION_QUESTION
        elif template is not None and template.kind == "threshold":
            da = DALabel.OPINION
        else:
            da = DALabel.STATEMENT_NON_OPINION

        state_update = {
            STATE_KEY: {
                "focus": new_focus,
                "used": sorted(used),
                "on_topic_turns": st["on_topic_turns"],
                "pending_shift": new_pending,
                "visited_favorites": sorted(visited_favorites),
            }
        }
        entity_uris = [u for u in (new_focus, new_pending) if u]
        return [
            ResponseCandidate(
                body=realization.text,
                handoff=realization.question,
                source_rg=self.rg_id,
                topic=topic,
                entities=entity_uris,
                dialogue_act=da,
                state_update=state_update,
            )
        ]
