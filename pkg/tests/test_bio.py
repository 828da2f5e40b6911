import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parley.el.bio import (
    NEG_INF,
    TAGS,
    BIOWeights,
    bio_decode,
    bio_train,
    sequence_accuracy,
    sequence_score,
    spans_from_tags,
    token_features,
    validate_tags,
)


def brute_force_best(feats, weights):
    """Exhaustive oracle: max score over every valid tag sequence."""
    best_score = NEG_INF
    best_tags = None
    for tags in itertools.product(TAGS, repeat=len(feats)):
        score = sequence_score(feats, tags, weights)
        if score > best_score:
            best_score = score
            best_tags = list(tags)
    return best_tags, best_score


def random_weights(rng, feature_pool):
    weights = BIOWeights()
    for feat in feature_pool:
        weights.emissions[feat] = {tag: rng.uniform(-3, 3) for tag in TAGS}
    for prev in ("<s>",) + TAGS:
        for cur in TAGS:
            weights.transitions[f"{prev}>{cur}"] = rng.uniform(-2, 2)
    return weights


def test_decode_matches_exhaustive_oracle_on_random_instances():
    rng = random.Random(1234)
    pool = [f"f{i}" for i in range(12)]
    for _ in range(200):
        length = rng.randint(1, 8)
        feats = [[rng.choice(pool) for _ in range(rng.randint(1, 3))] for _ in range(length)]
        weights = random_weights(rng, pool)
        decoded = bio_decode(feats, weights)
        decoded_score = sequence_score(feats, decoded, weights)
        _oracle_tags, oracle_score = brute_force_best(feats, weights)
        assert decoded_score == oracle_score  # exact, not approximate


def test_all_zero_weights_decode_all_O():
    weights = BIOWeights()
    feats = [["a"], ["b"], ["c"]]
    assert bio_decode(feats, weights) == ["O", "O", "O"]


def test_decoded_sequences_are_always_valid_bio():
    rng = random.Random(77)
    pool = [f"g{i}" for i in range(6)]
    for _ in range(100):
        length = rng.randint(1, 10)
        feats = [[rng.choice(pool)] for _ in range(length)]
        weights = random_weights(rng, pool)
        tags = bio_decode(feats, weights)
        validate_tags(tags)  # raises if I follows O or starts the sequence


def test_gazetteer_flag_boosts_mention():
    weights = BIOWeights(
        emissions={
            "gaz=Musician": {"B": 2.0, "I": 1.5, "O": -1.0},
            "w=taylor": {"B": 0.5},
        },
        transitions={"B>I": 1.0},
    )
    tokens = ["taylor", "swift"]
    feats = [
        token_features(tokens, 0, gazetteer_types=["Musician"]),
        token_features(tokens, 1, gazetteer_types=["Musician"]),
    ]
    assert bio_decode(feats, weights) == ["B", "I"]


def make_training_set():
    sentences = [
        (["i", "love", "taylor", "swift"], ["O", "O", "B", "I"]),
        (["kobe", "bryant", "played", "basketball"], ["B", "I", "O", "O"]),
        (["have", "you", "seen", "inception"], ["O", "O", "O", "B"]),
        (["the", "matrix", "is", "great"], ["B", "I", "O", "O"]),
        (["i", "like", "dune"], ["O", "O", "B"]),
        (["we", "watched", "titanic", "yesterday"], ["O", "O", "B", "O"]),
        (["tom", "hanks", "is", "kind"], ["B", "I", "O", "O"]),
        (["tell", "me", "about", "iron", "man"], ["O", "O", "O", "B", "I"]),
        (["lebron", "james", "scored"], ["B", "I", "O"]),
        (["hello", "there"], ["O", "O"]),
    ]
    return [
        ([token_features(toks, i) for i in range(len(toks))], tags)
        for toks, tags in sentences
    ]


def test_training_reaches_full_sequence_accuracy():
    annotated = make_training_set()
    weights = bio_train(annotated, epochs=50, seed=9)
    assert sequence_accuracy(annotated, weights) == 1.0


def test_length_mismatch_is_an_error():
    with pytest.raises(ValueError):
        bio_train([([["f"]], ["O", "B"])], epochs=1, seed=0)


def test_invalid_gold_sequence_is_an_error():
    with pytest.raises(ValueError):
        bio_train([([["a"], ["b"]], ["O", "I"])], epochs=1, seed=0)


def test_training_is_deterministic_per_seed():
    annotated = make_training_set()
    a = bio_train(annotated, epochs=10, seed=4)
    b = bio_train(annotated, epochs=10, seed=4)
    assert a.emissions == b.emissions
    assert a.transitions == b.transitions


def test_weights_save_load_round_trip(tmp_path):
    weights = bio_train(make_training_set(), epochs=10, seed=4)
    path = tmp_path / "bio.json"
    weights.save(path)
    loaded = BIOWeights.load(path)
    assert loaded.emissions == weights.emissions
    assert loaded.transitions == weights.transitions
    first = path.read_bytes()
    loaded.save(path)
    assert path.read_bytes() == first


def test_spans_from_tags():
    assert spans_from_tags(["O", "B", "I", "O", "B"]) == [(1, 3), (4, 5)]
    assert spans_from_tags(["B", "B", "I"]) == [(0, 1), (1, 3)]
    assert spans_from_tags([]) == []


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_viterbi_optimality_property(data):
    rng = random.Random(data.draw(st.integers(0, 2**32 - 1)))
    pool = [f"h{i}" for i in range(8)]
    length = data.draw(st.integers(1, 6))
    feats = [[rng.choice(pool)] for _ in range(length)]
    weights = random_weights(rng, pool)
    decoded_score = sequence_score(feats, bio_decode(feats, weights), weights)
    for tags in itertools.product(TAGS, repeat=length):
        assert decoded_score >= sequence_score(feats, tags, weights)
