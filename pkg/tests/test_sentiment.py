import math

from parley.nlu.sentiment import NEGATION_WINDOW, NEGATIONS, SentimentLexicon, sentiment

LEX = SentimentLexicon({"love": 3.0, "hate": -3.0, "good": 1.9, "boring": -1.8, "great": 3.0})


def oracle_raw_sum(text: str) -> float:
    """Independent reimplementation: plain lexicon sum with negation
    flipping inside the window."""
    tokens = text.lower().split()
    total = 0.0
    for i, tok in enumerate(tokens):
        v = LEX.valences.get(tok)
        if v is None:
            continue
        if any(t in NEGATIONS for t in tokens[max(0, i - NEGATION_WINDOW):i]):
            v = -v
        total += v
    return total


def test_positive_example_crosses_threshold():
    # oracle: love -> +3.0 raw; squashed 3/sqrt(9+15) = 0.6124
    assert oracle_raw_sum("i love this") == 3.0
    score = sentiment("i love this", LEX)
    assert score > 0.3
    assert math.isclose(score, 3.0 / math.sqrt(9 + 15.0))


def test_negative_example_crosses_threshold():
    assert oracle_raw_sum("i hate this") == -3.0
    score = sentiment("i hate this", LEX)
    assert score < -0.3


def test_empty_text_scores_zero():
    assert sentiment("", LEX) == 0.0


def test_negation_flips_within_window():
    # oracle: "not ... good" flips +1.9 to -1.9
    assert oracle_raw_sum("not very good") == -1.9
    assert sentiment("not very good", LEX) < 0


def test_negation_outside_window_does_not_flip():
    text = "not sure about it but love it"  # 'love' is beyond the 3-token window of 'not'
    assert oracle_raw_sum(text) == 3.0
    assert sentiment(text, LEX) > 0


def test_score_is_always_in_range():
    big = "love " * 50
    assert -1.0 <= sentiment(big, LEX) <= 1.0
    assert -1.0 <= sentiment("hate " * 50, LEX) <= 1.0


def test_pack_lexicon_agrees_with_oracle_on_signs(pack_dir):
    lex = SentimentLexicon.from_tsv(pack_dir / "nlu" / "sentiment.tsv")
    assert sentiment("i love this movie", lex) > 0.3
    assert sentiment("that was terrible and boring", lex) < -0.3
    assert sentiment("the chair is in the room", lex) == 0.0
