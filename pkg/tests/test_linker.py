from pathlib import Path

import pytest

from parley.el.evaluate import evaluate_linking
from parley.nlu.nounphrase import noun_phrase_spans
from parley.types import EntityType, LinkedEntity


def load_desk_corpus(pack_dir):
    rows = []
    for line in (pack_dir / "el" / "desk_corpus.tsv").read_text().splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        golds = set()
        if len(fields) > 1 and fields[1]:
            for pair in fields[1].split(","):
                uri, _, etype = pair.partition(":")
                golds.add((uri, etype))
        rows.append((fields[0], golds))
    return rows


def test_kobe_bryant_links(default_engine):
    links = default_engine.linker.link(
        "what do you think about kobe bryant",
        noun_phrase_spans("what do you think about kobe bryant"),
    )
    assert [e.uri for e in links] == ["Kobe_Bryant"]
    assert links[0].entity_type is EntityType.SPORTS_PLAYER


def test_how_are_you_suppressed(default_engine):
    links = default_engine.linker.link("how are you", noun_phrase_spans("how are you"))
    assert links == []


def test_music_topic_restricts_types(default_engine):
    # with the music filter the Movie reading of an ambiguous surface is
    # out of reach
    links = default_engine.linker.link(
        "i like bad blood", noun_phrase_spans("i like bad blood"), topic_hint="music"
    )
    music_types = {EntityType.ALBUM, EntityType.MUSICAL_ACT, EntityType.MUSICIAN, EntityType.SONG}
    assert links
    assert all(e.entity_type in music_types for e in links)


def test_spans_are_deduplicated(default_engine):
    links = default_engine.linker.link(
        "i love taylor swift", noun_phrase_spans("i love taylor swift")
    )
    spans = [e.span for e in links]
    assert len(spans) == len(set(spans))


def test_desk_corpus_ensemble_meets_targets(default_engine, pack_dir):
    rows = load_desk_corpus(pack_dir)
    assert len(rows) == 50
    gold = [golds for _text, golds in rows]
    predicted = [
        default_engine.linker.link(text, noun_phrase_spans(text)) for text, _ in rows
    ]
    scores = evaluate_linking(gold, predicted)
    assert scores["entity"].recall >= 0.8, scores["entity"]
    assert scores["entity"].precision >= 0.6, scores["entity"]


def test_trained_path_agrees_with_ensemble_on_desk_corpus(pack_dir):
    from parley.config import EngineConfig
    from parley.engine import Engine

    engine = Engine(EngineConfig(seed=42, el_path="trained"))
    rows = load_desk_corpus(pack_dir)
    agree = 0
    total = 0
    for text, _golds in rows:
        nps = noun_phrase_spans(text)
        ens = {e.uri for e in engine.linker.link_ensemble(text, nps)}
        trained = {e.uri for e in engine.linker.link_trained(text)}
        total += 1
        if ens == trained or (ens & trained):
            agree += 1
        elif not ens and not trained:
            agree += 1
    assert agree / total >= 0.6  # configured desk-scale agreement rate


def test_evaluate_linking_definitions():
    gold = [{("A", "Movie"), ("B", "Actor")}, set()]
    predicted = [
        [
            LinkedEntity(span=(0, 1), surface="a", uri="A", entity_type=EntityType.MOVIE),
            LinkedEntity(span=(2, 3), surface="c", uri="C", entity_type=EntityType.MOVIE),
        ],
        [],
    ]
    scores = evaluate_linking(gold, predicted)
    assert scores["entity"].true_positives == 1
    assert scores["entity"].predicted == 2
    assert scores["entity"].gold == 2
    assert scores["entity"].precision == 0.5
    assert scores["entity"].recall == 0.5
    assert scores["entity+type"].true_positives == 1


def test_evaluate_length_mismatch():
    with pytest.raises(ValueError):
        evaluate_linking([set()], [])
