"""Response-generator interface and the dispatch registry.

RGs register the action types and topics they can serve at instantiation
time; dispatch is a pure table lookup over (action, topic) plus the
always-run set. RG objects hold only immutable pack data: everything
per-conversation lives in the opaque state blobs owned by the engine.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional

from ..types import (
    ConfigurationError,
    DialogueState,
    NLUBundle,
    ResponseCandidate,
    ResponseConstraints,
    SystemAction,
    Turn,
)

ANY_TOPIC = "*"


@dataclass
class RGContext:
    turn: Turn
    nlu: NLUBundle
    state: DialogueState
    action: SystemAction
    constraints: ResponseConstraints
    rng: random.Random
    rg_state: Optional[dict] = None
    resources: Optional[object] = None
    # same-turn scratch shared between propose() and commit() of one RG
    scratch: dict = field(default_factory=dict)


class ResponseGenerator:
    rg_id: str = "base"
    actions: frozenset[SystemAction] = frozenset()
    topics: frozenset[str] = frozenset()
    always_run: bool = False

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        return []

    def commit(self, ctx: RGContext, chosen: Optional[ResponseCandidate]) -> Optional[dict]:
        """Post-selection hook; returns a replacement private-state dict
        or None to keep the stored one. Default: persist the winning
        candidate's state_update when the candidate is ours."""
        if chosen is not None and chosen.source_rg == self.rg_id and chosen.state_update is not None:
            return chosen.state_update
        return None


def decode_rg_state(blob: Optional[bytes]) -> Optional[dict]:
    if not blob:
        return None
    try:
        return json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        return None


def encode_rg_state(state: Optional[dict]) -> Optional[bytes]:
    if state is None:
        return None
    return json.dumps(state, sort_keys=True).encode("utf-8")


@dataclass
class RGRegistryEntry:
    rg: ResponseGenerator
    actions: frozenset[SystemAction]
    topics: frozenset[str]
    always_run: bool = False


class RGRegistry:
    def __init__(self) -> None:
        self.entries: list[RGRegistryEntry] = []

    def register(self, rg: ResponseGenerator) -> None:
        if not rg.always_run and (not rg.actions or not rg.topics):
            raise ConfigurationError(
                f"RG {rg.rg_id!r} must register actions and topics unless always_run"
            )
        if any(e.rg.rg_id == rg.rg_id for e in self.entries):
            raise ConfigurationError(f"duplicate RG id {rg.rg_id!r}")
        self.entries.append(
            RGRegistryEntry(rg=rg, actions=rg.actions, topics=rg.topics, always_run=rg.always_run)
        )

    def get(self, rg_id: str) -> Optional[ResponseGenerator]:
        for entry in self.entries:
            if entry.rg.rg_id == rg_id:
                return entry.rg
        return None

    def all_rgs(self) -> list[ResponseGenerator]:
        return [e.rg for e in self.entries]

    def dispatch(self, action: SystemAction, topic: str) -> list[str]:
        """All RG ids registered for (action, topic) plus the always-run
        set, in registration order."""
        out = []
        for entry in self.entries:
            if entry.always_run:
                out.append(entry.rg.rg_id)
            elif action in entry.actions and (ANY_TOPIC in entry.topics or topic in entry.topics):
                out.append(entry.rg.rg_id)
        return out

    def is_sound(self, rg_id: str, action: SystemAction, topic: str) -> bool:
        """Contract check: was this RG eligible for (action, topic)?"""
        for entry in self.entries:
            if entry.rg.rg_id != rg_id:
                continue
            if entry.always_run:
                return True
            return action in entry.actions and (ANY_TOPIC in entry.topics or topic in entry.topics)
        return False
