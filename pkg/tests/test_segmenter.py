from hypothesis import given, settings
from hypothesis import strategies as st

from parley.nlu.segmenter import SegmenterModel, segment_utterance
from parley.text import tokenize

MODEL = SegmenterModel(
    affirmations=frozenset({"yes", "yeah", "no", "nope", "sure", "okay", "ok"}),
    coordinators=frozenset({"and", "but", "or", "so"}),
    discourse_markers=frozenset({"anyway", "besides"}),
    question_starters=frozenset({"what", "who", "do", "does", "are", "is", "can", "how", "why"}),
    max_segment_tokens=25,
)


def texts(segments):
    return [s.text for s in segments]


def test_leading_affirmation_splits():
    assert texts(segment_utterance("yes i love superheroes", MODEL)) == ["yes", "i love superheroes"]


def test_single_word_stays_whole():
    assert texts(segment_utterance("hello", MODEL)) == ["hello"]


def test_coordinator_before_question_splits_and_drops_joiner():
    segs = segment_utterance("i like movies and do you like music", MODEL)
    assert texts(segs) == ["i like movies", "do you like music"]


def test_spans_cover_all_tokens_even_with_dropped_joiner():
    text = "i like movies and do you like music"
    segs = segment_utterance(text, MODEL)
    n = len(tokenize(text))
    covered = []
    for seg in segs:
        covered.extend(range(*seg.span))
    assert covered == list(range(n))


def test_empty_input_yields_one_empty_segment():
    segs = segment_utterance("", MODEL)
    assert len(segs) == 1
    assert segs[0].text == ""
    assert segs[0].span == (0, 0)


def test_long_utterance_is_capped():
    text = " ".join(f"w{i}" for i in range(30))
    segs = segment_utterance(text, MODEL)
    assert [len(tokenize(s.text)) for s in segs] == [25, 5]


def test_repeated_affirmations_split_to_fixpoint():
    assert texts(segment_utterance("yes yes i love it", MODEL)) == ["yes", "yes", "i love it"]


@settings(max_examples=120, deadline=None)
@given(
    st.lists(
        st.sampled_from(
            "yes no i you like love movies music and but do what are dogs cats really fun it".split()
        ),
        min_size=0,
        max_size=40,
    )
)
def test_segmentation_total_covering_and_idempotent(tokens):
    text = " ".join(tokens)
    segs = segment_utterance(text, MODEL)
    # covering, ordered, non-overlapping
    expected = list(range(len(tokenize(text))))
    covered = []
    for seg in segs:
        covered.extend(range(*seg.span))
    assert covered == expected
    # idempotence: re-segmenting any returned segment yields itself
    for seg in segs:
        again = segment_utterance(seg.text, MODEL)
        assert texts(again) == [seg.text]
