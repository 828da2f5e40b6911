import pytest

from parley.dm.actions import decide_action
from parley.types import (
    DALabel,
    DialogueState,
    NLUBundle,
    RedCategory,
    RedCategoryKind,
    SystemAction,
    SystemResponse,
    TopicState,
    Turn,
    UtteranceSegment,
)


def bundle(text, das=(), red=None):
    seg = UtteranceSegment(text=text, span=(0, len(text.split())),
                           da_labels=[(d, 1.0) for d in das])
    return NLUBundle(segments=[seg], red_flag=red)


def state_with_history(n=1):
    state = DialogueState(conversation_id="t", topic_state=TopicState(current_topic="movies"))
    for i in range(n):
        state.history.append(
            (Turn("t", i, f"turn {i}"), SystemResponse(body=f"reply {i}", source_rg="social"))
        )
    return state


def fresh_state():
    return DialogueState(conversation_id="t", topic_state=TopicState(current_topic="introduction"))


def test_red_flag_wins_over_everything():
    red = RedCategory(category=RedCategoryKind.PROFANITY, matched_pattern="damn")
    nlu = bundle("damn this thing", das=[DALabel.CONVERSATION_CLOSING], red=red)
    assert decide_action(nlu, state_with_history()) is SystemAction.RED_RESPONSE


def test_repeat_request_cue_triggers_perform_repeat():
    nlu = bundle("can you repeat that", das=[DALabel.SIGNAL_NON_UNDERSTANDING])
    assert decide_action(nlu, state_with_history()) is SystemAction.PERFORM_REPEAT


def test_plain_statement_defaults_to_converse():
    nlu = bundle("i watched a movie", das=[DALabel.STATEMENT_NON_OPINION])
    assert decide_action(nlu, state_with_history()) is SystemAction.CONVERSE


def test_low_confidence_functional_da_does_not_fire():
    seg = UtteranceSegment(text="most likely spider man", span=(0, 4),
                           da_labels=[(DALabel.SIGNAL_NON_UNDERSTANDING, 0.7)])
    nlu = NLUBundle(segments=[seg])
    assert decide_action(nlu, state_with_history()) is SystemAction.CONVERSE


def test_empty_first_turn_greets_then_waits():
    assert decide_action(bundle(""), fresh_state()) is SystemAction.GREET
    assert decide_action(bundle(""), state_with_history()) is SystemAction.WAIT_PROMPTING


def test_closing_phrase_closes():
    nlu = bundle("goodbye", das=[DALabel.CONVERSATION_CLOSING])
    assert decide_action(nlu, state_with_history()) is SystemAction.CONV_CLOSING


def test_filler_only_utterance_requests_repeat():
    assert decide_action(bundle("um uh hmm"), state_with_history()) is SystemAction.REPEAT_REQUEST


def test_wait_phrase_waits():
    assert decide_action(bundle("hold on let me think"), state_with_history()) is SystemAction.WAIT_PROMPTING


def test_usage_phrase_advises():
    assert decide_action(bundle("what can you do"), state_with_history()) is SystemAction.ADVISE_USAGE


def test_request_options_lists():
    nlu = bundle("what can we talk about", das=[DALabel.REQUEST_OPTIONS])
    assert decide_action(nlu, state_with_history()) is SystemAction.LIST_OPTIONS


def test_change_topic_without_target_changes():
    nlu = bundle("let's talk about something else", das=[DALabel.CHANGE_TOPIC])
    assert decide_action(nlu, state_with_history()) is SystemAction.TOPIC_CHANGE


def test_every_turn_yields_exactly_one_action(default_engine):
    cid = "one-action"
    for text in ["hello", "let's talk about movies", "", "goodbye"]:
        _resp, trace = default_engine.take_turn(cid, text)
        assert isinstance(trace.action, SystemAction)
