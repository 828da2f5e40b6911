"""Action manager: pick exactly one functional action per turn.

Heuristic rules over NLU features: dialogue acts, keyword matches and a
few regex-grade patterns. Converse is the default when no functional
speech act is called for.
"""

from __future__ import annotations

import re

from ..text import tokenize
from ..types import DALabel, DialogueState, InvocationType, NLUBundle, SystemAction

_FILLERS = frozenset({"uh", "um", "umm", "uhh", "hmm", "er", "erm", "hm"})
_WAIT_RE = re.compile(r"\b(hold on|wait a (second|minute|moment)|give me a (second|minute|moment)|let me think)\b")
_USAGE_RE = re.compile(r"\b(what can you do|how do(es)? (i|you|this) work|how do i use|i need help|help me)\b")

# functional actions need conventionalized evidence: regex hits carry
# confidence 1.0 while the n-gram sigmoid practically never reaches this
_FUNCTIONAL_DA_CONFIDENCE = 0.999


def decide_action(nlu: NLUBundle, state: DialogueState) -> SystemAction:
    text = " ".join(seg.text for seg in nlu.segments if seg.text)
    tokens = tokenize(text)

    def confident(label: DALabel) -> bool:
        return nlu.da_confidence(label) >= _FUNCTIONAL_DA_CONFIDENCE

    if nlu.red_flag is not None:
        return SystemAction.RED_RESPONSE
    if not tokens:
        return SystemAction.GREET if state.turn_count == 0 else SystemAction.WAIT_PROMPTING
    if confident(DALabel.CONVERSATION_CLOSING):
        return SystemAction.CONV_CLOSING
    if state.turn_count == 0 and nlu.topic_signal is None and not nlu.entities:
        return SystemAction.GREET
    if confident(DALabel.SIGNAL_NON_UNDERSTANDING):
        return SystemAction.PERFORM_REPEAT
    if all(t in _FILLERS for t in tokens):
        return SystemAction.REPEAT_REQUEST
    if _WAIT_RE.search(text):
        return SystemAction.WAIT_PROMPTING
    if _USAGE_RE.search(text):
        return SystemAction.ADVISE_USAGE
    if confident(DALabel.REQUEST_OPTIONS):
        return SystemAction.LIST_OPTIONS
    if confident(DALabel.CHANGE_TOPIC) or confident(DALabel.AVOID_TOPIC):
        signal = nlu.topic_signal
        named_target = signal is not None and signal.invocation_type == InvocationType.EXPLICIT_NAME
        if not named_target:
            return SystemAction.TOPIC_CHANGE
    return SystemAction.CONVERSE
