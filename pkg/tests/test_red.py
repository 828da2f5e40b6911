import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parley.nlu.red import RedRule, RedTable, detect_red
from parley.nlu.segmenter import SegmenterModel, segment_utterance
from parley.types import ConfigurationError, RedCategoryKind

MODEL = SegmenterModel()

TABLE = RedTable(
    [
        RedRule("kill myself", "substring", RedCategoryKind.SELF_HARM, "self_harm_support"),
        RedRule("should i invest", "substring", RedCategoryKind.FINANCIAL_ADVICE, "fin"),
        RedRule("damn", "unigram", RedCategoryKind.PROFANITY, None),
        RedRule("abortion", "unigram", RedCategoryKind.CONTROVERSIAL, None),
    ]
)


def segs(text):
    return segment_utterance(text, MODEL)


def test_profanity_unigram_flags_category_only():
    flag = detect_red(segs("well damn that movie"), TABLE)
    assert flag is not None
    assert flag.category is RedCategoryKind.PROFANITY
    assert flag.specific_response_key is None


def test_substring_match_carries_specific_key():
    flag = detect_red(segs("sometimes i want to kill myself"), TABLE)
    assert flag is not None
    assert flag.category is RedCategoryKind.SELF_HARM
    assert flag.specific_response_key == "self_harm_support"


def test_clean_utterance_is_not_flagged():
    assert detect_red(segs("i like turtles"), TABLE) is None


def test_substring_wins_over_unigram_when_both_present():
    flag = detect_red(segs("damn should i invest in stocks"), TABLE)
    assert flag.category is RedCategoryKind.FINANCIAL_ADVICE
    assert flag.specific_response_key == "fin"


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.sampled_from("i like to watch movies with friends every day".split()), max_size=10),
    st.sampled_from(["damn", "abortion"]),
    st.integers(0, 10),
)
def test_adding_a_red_unigram_never_clears_a_flag(tokens, red_word, position):
    base = " ".join(tokens)
    base_flag = detect_red(segs(base), TABLE)
    spiked = tokens[:]
    spiked.insert(min(position, len(spiked)), red_word)
    spiked_flag = detect_red(segs(" ".join(spiked)), TABLE)
    assert spiked_flag is not None
    if base_flag is not None:
        assert spiked_flag is not None  # monotone: never cleared


def test_bad_match_type_rejected(tmp_path):
    path = tmp_path / "red.tsv"
    path.write_text("foo\tglob\tprofanity\t\n")
    with pytest.raises(ConfigurationError):
        RedTable.from_tsv(path)


def test_pack_red_table_loads(pack_dir):
    table = RedTable.from_tsv(pack_dir / "nlu" / "red_table.tsv")
    assert "fuck" in table.profanity_unigrams()
    assert any(r.pattern == "kill myself" for r in table.substring_rules)
