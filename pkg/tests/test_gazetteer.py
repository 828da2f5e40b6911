from hypothesis import given, settings
from hypothesis import strategies as st

from parley.el.gazetteer import (
    CommonPhraseList,
    GazetteerRecord,
    build_gazetteer_index,
    query_candidates,
    relevance_score,
    suppress_common,
)
from parley.types import EntityType, LinkedEntity

RECORDS = [
    GazetteerRecord("taylor swift", EntityType.MUSICIAN, "Taylor_Swift", 95),
    GazetteerRecord("taylor lautner", EntityType.ACTOR, "Taylor_Lautner", 60),
    GazetteerRecord("bad blood", EntityType.SONG, "Bad_Blood", 55),
    GazetteerRecord("bad", EntityType.ALBUM, "Bad_Album", 45),
]


def make_index():
    return build_gazetteer_index(RECORDS)


def test_exact_match_scores_highest():
    index = make_index()
    results = index.lookup("taylor swift")
    assert results[0][0].uri == "Taylor_Swift"
    assert results[0][1] == 2.0


def test_prefix_scores_between_exact_and_overlap():
    record = RECORDS[0]
    assert relevance_score(("taylor",), record) == 1.2
    assert relevance_score(("taylor", "swift"), record) == 2.0
    assert 0 < relevance_score(("swift", "songs"), record) < 1.2


def test_type_filter_excludes_other_types():
    index = make_index()
    results = index.lookup("bad", types={EntityType.SONG})
    assert all(r.entity_type is EntityType.SONG for r, _ in results)


def test_empty_index_returns_nothing():
    index = build_gazetteer_index([])
    assert index.lookup("anything") == []


def test_duplicate_rows_are_deduped():
    index = build_gazetteer_index(RECORDS + [RECORDS[0]])
    assert len(index) == len(RECORDS)


def test_exact_outranks_partial_for_bad_blood():
    index = make_index()
    mentions = query_candidates("i like bad blood", [(2, 4)], index)
    target = next(m for m in mentions if m.surface == "bad blood")
    assert target.candidates[0][0].uri == "Bad_Blood"
    assert target.candidates[0][1] == 2.0


def test_unknown_noun_phrase_has_no_candidates():
    index = make_index()
    mentions = query_candidates("pure gibberish here", [(0, 2)], index)
    assert all(m.candidates for m in mentions) or mentions == []


def test_topic_type_restriction_is_sound():
    index = make_index()
    music_types = {EntityType.ALBUM, EntityType.MUSICAL_ACT, EntityType.MUSICIAN, EntityType.SONG}
    mentions = query_candidates("taylor swift sang bad blood", [(0, 2)], index, types=music_types)
    for mention in mentions:
        for record, _score in mention.candidates:
            assert record.entity_type in music_types


CPL = CommonPhraseList(
    frequencies={"cool": 500, "star wars": 300, "edge": 60},
    cutoff=60,
    exceptions={"star wars"},
)


def ent(surface):
    return LinkedEntity(span=(0, 1), surface=surface, uri=surface, entity_type=EntityType.OTHER)


def test_frequent_phrase_suppressed():
    assert suppress_common([ent("cool")], CPL) == []


def test_curated_exception_kept():
    kept = suppress_common([ent("star wars")], CPL)
    assert len(kept) == 1


def test_cutoff_boundary_is_strict():
    # frequency exactly 60 is kept (strictly-greater-than rule)
    assert suppress_common([ent("edge")], CPL) != []


@settings(max_examples=50, deadline=None)
@given(
    st.sets(st.text(alphabet="abcdefgh ", min_size=1, max_size=8).map(str.strip).filter(bool), max_size=8),
    st.integers(0, 200),
)
def test_suppression_set_is_exactly_over_cutoff_minus_exceptions(phrases, freq):
    cpl = CommonPhraseList(
        frequencies={p: freq for p in phrases},
        cutoff=60,
        exceptions={p for p in phrases if len(p) % 2 == 0},
    )
    for p in phrases:
        expected = freq > 60 and p not in cpl.exceptions
        assert cpl.is_suppressed(p) == expected


def test_pack_common_phrase_example(default_engine):
    cpl = default_engine.linker.common_phrases
    assert cpl.is_suppressed("cool")
    assert not cpl.is_suppressed("star wars")
    assert not cpl.is_suppressed("taylor swift")
