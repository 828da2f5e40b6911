"""Initiative manager: on a topic change, pick the new topic or hand
the initiative to the user.

Unvisited topics are preferred; once the system has initiated too many
times in a row the user gets prompted instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from ..types import DialogueState

DEFAULT_INITIATIVE_LIMIT = 3


@dataclass
class InitiativeDecision:
    kind: str  # system_topic | user_prompt
    topic: Optional[str] = None


def choose_initiative(
    state: DialogueState,
    discussable_topics: list[str],
    initiative_streak: int,
    rng: random.Random,
    limit: int = DEFAULT_INITIATIVE_LIMIT,
) -> InitiativeDecision:
    if initiative_streak >= limit:
        return InitiativeDecision(kind="user_prompt")
    visited = set(state.topic_state.turn_distribution.keys())
    visited.add(state.topic_state.current_topic)
    unvisited = [t for t in discussable_topics if t not in visited]
    if not unvisited:
        return InitiativeDecision(kind="user_prompt")
    return InitiativeDecision(kind="system_topic", topic=rng.choice(unvisited))
