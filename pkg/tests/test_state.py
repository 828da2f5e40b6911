import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parley.state import FileStateStore, MemoryStateStore, decode_state, encode_state
from parley.types import (
    DALabel,
    DialogueState,
    EntityType,
    LinkedEntity,
    ResponseConstraints,
    StateDecodeError,
    SystemAction,
    SystemResponse,
    TopicState,
    Turn,
    UtteranceSegment,
)

entities = st.builds(
    LinkedEntity,
    span=st.tuples(st.integers(0, 5), st.integers(6, 10)),
    surface=st.text(min_size=1, max_size=12),
    uri=st.text(min_size=1, max_size=12),
    entity_type=st.sampled_from(EntityType),
    score=st.floats(allow_nan=False, allow_infinity=False, width=32),
)

topic_states = st.builds(
    TopicState,
    current_topic=st.sampled_from(["movies", "sports", "music"]),
    topic_history=st.just([]),
    turn_distribution=st.dictionaries(st.sampled_from(["movies", "sports"]), st.integers(0, 9), max_size=2),
    user_entities=st.lists(entities, max_size=2),
)

responses = st.builds(
    SystemResponse,
    body=st.text(min_size=1, max_size=30),
    ground=st.one_of(st.none(), st.text(max_size=10)),
    opener=st.one_of(st.none(), st.text(max_size=10)),
    handoff=st.one_of(st.none(), st.text(max_size=10)),
    source_rg=st.sampled_from(["kg", "flow:introduction", "social"]),
)

turns = st.builds(
    Turn,
    conversation_id=st.just("conv"),
    turn_index=st.integers(0, 30),
    user_text=st.text(max_size=40),
    timestamp=st.integers(0, 2**40),
)


def states(conversation_id="conv"):
    return st.builds(
        DialogueState,
        conversation_id=st.just(conversation_id),
        topic_state=topic_states,
        history=st.lists(st.tuples(turns, responses), max_size=4),
        rg_state=st.dictionaries(st.sampled_from(["kg", "flow:x", "__dm__"]), st.binary(max_size=40), max_size=3),
        action_history=st.lists(st.sampled_from(SystemAction), max_size=4),
        constraint_history=st.lists(
            st.builds(
                ResponseConstraints,
                topic=st.sampled_from(["movies", "music"]),
                entity_mentions=st.lists(st.text(min_size=1, max_size=8), max_size=2),
                dialogue_act=st.one_of(st.none(), st.sampled_from(DALabel)),
                new_topic_flag=st.booleans(),
            ),
            max_size=3,
        ),
    )


@settings(max_examples=60, deadline=None)
@given(state=states())
def test_round_trip_is_identity_for_random_states(state):
    raw = encode_state(state)
    restored = decode_state(raw, state.conversation_id)
    assert encode_state(restored) == raw
    assert restored.to_dict() == state.to_dict()


def test_memory_store_round_trip():
    store = MemoryStateStore()
    state = DialogueState(conversation_id="a", topic_state=TopicState(current_topic="introduction"))
    store.save(state)
    loaded = store.load("a")
    assert loaded is not None
    assert loaded.to_dict() == state.to_dict()


def test_unknown_id_is_absent(tmp_path):
    assert MemoryStateStore().load("missing") is None
    assert FileStateStore(tmp_path).load("missing") is None


def test_file_store_round_trip_and_two_keys(tmp_path):
    store = FileStateStore(tmp_path)
    a = DialogueState(conversation_id="conv-a", topic_state=TopicState(current_topic="movies"))
    b = DialogueState(conversation_id="conv-b", topic_state=TopicState(current_topic="sports"))
    store.save(a)
    store.save(b)
    assert store.load("conv-a").topic_state.current_topic == "movies"
    assert store.load("conv-b").topic_state.current_topic == "sports"


def test_corrupt_record_raises_decode_error(tmp_path):
    store = FileStateStore(tmp_path)
    state = DialogueState(conversation_id="x", topic_state=TopicState(current_topic="movies"))
    store.save(state)
    path = store._path("x")
    path.write_text(path.read_text()[: len(path.read_text()) // 2])
    with pytest.raises(StateDecodeError) as err:
        store.load("x")
    assert "x" in str(err.value)


def test_wrong_schema_tag_raises(tmp_path):
    store = FileStateStore(tmp_path)
    store._path("y").write_text('{"schema": "other/9", "state": {}}')
    with pytest.raises(StateDecodeError):
        store.load("y")


def test_rg_state_blobs_survive_bytes_round_trip():
    state = DialogueState(
        conversation_id="blob",
        topic_state=TopicState(current_topic="music"),
        rg_state={"kg": b"\x00\xffopaque-bytes\x01"},
    )
    restored = decode_state(encode_state(state), "blob")
    assert restored.rg_state["kg"] == b"\x00\xffopaque-bytes\x01"


def test_saved_conversation_continues_with_next_turn_index(fresh_engine):
    cid = "persist-continue"
    for text in ["hello", "let's talk about superheroes", "yes i love superheroes"]:
        fresh_engine.take_turn(cid, text)
    loaded = fresh_engine.store.load(cid)
    assert loaded.turn_count == 3
    fresh_engine.take_turn(cid, "most likely spider-man")
    assert fresh_engine.store.load(cid).turn_count == 4
    assert fresh_engine.store.load(cid).history[-1][0].turn_index == 3
