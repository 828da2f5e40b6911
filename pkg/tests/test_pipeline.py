from hypothesis import given, settings
from hypothesis import strategies as st

from parley.types import DALabel, InvocationType, Turn


def run(engine, text, turn_index=0):
    turn = Turn(conversation_id="nlu-test", turn_index=turn_index, user_text=text)
    state = engine.new_conversation("nlu-test")
    return engine.nlu.run(turn, state)


def test_lets_talk_about_sports(default_engine):
    bundle = run(default_engine, "let's talk about sports")
    assert bundle.topic_signal is not None
    assert bundle.topic_signal.topic == "sports"
    assert bundle.topic_signal.invocation_type is InvocationType.EXPLICIT_NAME
    assert DALabel.DISCUSS_TOPIC in bundle.da_labels()


def test_empty_input_yields_one_empty_segment(default_engine):
    bundle = run(default_engine, "")
    assert len(bundle.segments) == 1
    assert bundle.segments[0].text == ""


def test_kobe_bryant_links_and_implies_sports(default_engine):
    bundle = run(default_engine, "what do you think about kobe bryant")
    uris = {e.uri for e in bundle.entities}
    assert "Kobe_Bryant" in uris
    entity = next(e for e in bundle.entities if e.uri == "Kobe_Bryant")
    assert entity.entity_type.value == "SportsPlayer"
    assert bundle.topic_signal is not None
    assert bundle.topic_signal.topic == "sports"
    assert bundle.topic_signal.invocation_type is InvocationType.ENTITY_IMPLIED


def test_red_flag_has_triggering_pattern(default_engine):
    bundle = run(default_engine, "should i invest all my savings")
    assert bundle.red_flag is not None
    assert bundle.red_flag.matched_pattern in "should i invest all my savings"


def test_stage_two_sees_stage_one_outputs(default_engine):
    bundle = run(default_engine, "yes i love taylor swift")
    # segmentation happened before DA tagging: the leading affirmation
    # segment is tagged on its own
    assert bundle.segments[0].text == "yes"
    assert bundle.segments[0].da_labels[0][0] is DALabel.YES_ANSWER
    assert any(e.uri == "Taylor_Swift" for e in bundle.entities)


@settings(max_examples=120, deadline=None)
@given(st.text(max_size=120))
def test_pipeline_never_raises_on_fuzzed_text(default_engine, text):
    bundle = run(default_engine, text)
    assert bundle.segments  # a bundle is always produced
    assert -1.0 <= bundle.sentiment <= 1.0
