"""Constraint manager: describe the next system utterance.

The general strategy is entity/topical coherence: talk about the same
entities and concepts as the user. The dialogue-act soft constraint
cycles through opinion statements, non-opinion statements and opinion
questions to keep variety.
"""

from __future__ import annotations

from ..types import DALabel, NLUBundle, ResponseConstraints, SystemAction

DA_CYCLE = (DALabel.OPINION, DALabel.STATEMENT_NON_OPINION, DALabel.OPINION_QUESTION)


def generate_constraints(
    action: SystemAction,
    nlu: NLUBundle,
    topic: str,
    da_cycle_index: int,
) -> ResponseConstraints:
    if action in (SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE):
        return ResponseConstraints(
            topic=topic,
            entity_mentions=[e.uri for e in nlu.entities],
            dialogue_act=DA_CYCLE[da_cycle_index % len(DA_CYCLE)],
            new_topic_flag=action is SystemAction.TOPIC_CHANGE,
        )
    # functional actions constrain only the (hard) topic
    return ResponseConstraints(topic=topic)
