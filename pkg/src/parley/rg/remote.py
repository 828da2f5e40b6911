"""HTTP client for response generators hosted out of process.

The remote service receives the constraint contract and minimal context
and replies with candidate parts. Failures and timeouts produce no
candidates and never block the pool.
"""

from __future__ import annotations

import logging
from typing import Optional

import httpx

from ..types import DALabel, ResponseCandidate, ResponseConstraints, SystemAction
from .base import ResponseGenerator, RGContext

logger = logging.getLogger(__name__)


def remote_rg_call(
    endpoint: str,
    constraints: ResponseConstraints,
    context: dict,
    timeout: float,
    rg_id: str = "remote",
) -> list[ResponseCandidate]:
    payload = {"constraints": constraints.to_dict(), "context": context}
    try:
        response = httpx.post(endpoint, json=payload, timeout=timeout)
        response.raise_for_status()
        doc = response.json()
    except Exception as exc:  # any transport or decode failure is non-fatal
        logger.warning("remote RG %s failed: %s", endpoint, exc)
        return []
    candidates = []
    try:
        for raw in doc.get("candidates", []):
            body = raw.get("body")
            if not body or not isinstance(body, str):
                continue
            da = raw.get("dialogue_act")
            candidates.append(
                ResponseCandidate(
                    body=body,
                    opener=raw.get("opener"),
                    handoff=raw.get("handoff"),
                    source_rg=rg_id,
                    topic=raw.get("topic") or constraints.topic,
                    entities=[str(u) for u in raw.get("entities", [])],
                    dialogue_act=DALabel.parse(da) if da else None,
                )
            )
    except (TypeError, AttributeError) as exc:
        logger.warning("remote RG %s returned a malformed reply: %s", endpoint, exc)
        return []
    return candidates


class RemoteRG(ResponseGenerator):
    def __init__(
        self,
        rg_id: str,
        endpoint: str,
        topics: set[str],
        timeout: float = 0.3,
        actions: Optional[set[SystemAction]] = None,
    ) -> None:
        self.rg_id = rg_id
        self.endpoint = endpoint
        self.timeout = timeout
        self.actions = frozenset(actions or {SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE})
        self.topics = frozenset(topics)

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        context = {
            "conversation_id": ctx.turn.conversation_id,
            "turn_index": ctx.turn.turn_index,
            "user_text": ctx.turn.user_text,
            "topic": ctx.constraints.topic,
        }
        return remote_rg_call(
            self.endpoint, ctx.constraints, context, self.timeout, rg_id=self.rg_id
        )
