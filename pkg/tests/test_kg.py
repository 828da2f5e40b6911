import random

from parley.rg.kg.generator import (
    KGPack,
    favorite_entity_response,
    on_topic_response,
    realize,
    resolve_focus,
    shift_topic_response,
    sparse_guard,
)
from parley.rg.kg.store import Triple, TripleStore, load_triples
from parley.rg.kg.templates import RelationSpec, RelationTemplate, KGTemplatePack, RelationInfo
from parley.types import EntityType, LinkedEntity


def ent(uri, etype):
    return LinkedEntity(span=(0, 1), surface=uri.lower(), uri=uri, entity_type=etype)


# --- store ----------------------------------------------------------------

def test_music_pack_has_114_taylor_songs(default_engine):
    store = default_engine.kg_pack.store
    assert len(store.outgoing("Taylor_Swift", "recordedSong")) == 114


def test_malformed_rows_skipped_with_count(tmp_path):
    path = tmp_path / "triples.tsv"
    path.write_text("A\trel\tB\turi\nbroken-row\nC\trel\t\turi\nD\trel\tE\tballoon\n")
    store = load_triples(path)
    assert len(store) == 1
    assert store.skipped == 3


def test_duplicate_triples_deduped(tmp_path):
    path = tmp_path / "triples.tsv"
    path.write_text("A\trel\tB\turi\nA\trel\tB\turi\n")
    assert len(load_triples(path)) == 1


def test_empty_file_empty_store(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("")
    assert len(load_triples(path)) == 0


# --- focus resolution -------------------------------------------------------

def test_expected_type_disambiguates_chris_evans():
    actor = ent("Chris_Evans_Actor", EntityType.ACTOR)
    politician = ent("Chris_Evans_Politician", EntityType.OTHER)
    focus, status = resolve_focus([politician, actor], {EntityType.ACTOR})
    assert status == "ok"
    assert focus.uri == "Chris_Evans_Actor"


def test_no_type_match_resolves_none():
    focus, status = resolve_focus([ent("X", EntityType.SONG)], {EntityType.ACTOR})
    assert focus is None
    assert status == "none"


def test_same_type_popularity_margin_rule():
    a, b = ent("Big", EntityType.ACTOR), ent("Small", EntityType.ACTOR)
    focus, status = resolve_focus([a, b], {EntityType.ACTOR}, {"Big": 80, "Small": 20})
    assert status == "ok" and focus.uri == "Big"  # 4x margin
    focus, status = resolve_focus([a, b], {EntityType.ACTOR}, {"Big": 30, "Small": 20})
    assert focus is None and status == "ambiguous"  # below the 2x margin


# --- realization -------------------------------------------------------------

def fixture_pack():
    store = TripleStore()
    store.add(Triple("Alex_Stone", "isMarriedTo", "Jamie_Stone"))
    store.add(Triple("Album_One", "isAStudioAlbumBy", "Sea_Band"))
    store.add(Triple("Song_Blue", "isAnAlbumTrackOn", "Album_One"))
    store.add(Triple("Actor_High", "actedIn", "Film_A"))
    store.add(Triple("Actor_High", "actedIn", "Film_B"))
    store.add(Triple("Film_A", "imdbScore", "6.6", "number"))
    store.add(Triple("Film_B", "imdbScore", "6.8", "number"))
    store.add(Triple("Actor_Edge", "actedIn", "Film_C"))
    store.add(Triple("Film_C", "imdbScore", "6.6", "number"))
    store.add(Triple("Winner", "won", "Small Trophy", "string"))
    store.add(Triple("Winner", "won", "Medium Trophy", "string"))
    store.add(Triple("Winner", "won", "Large Trophy", "string"))
    templates = KGTemplatePack(
        relations={
            "isMarriedTo": RelationInfo("isMarriedTo", complete=True),
            "isAChildOf": RelationInfo("isAChildOf", complete=False),
            "won": RelationInfo("won", complete=False),
            "actedIn": RelationInfo("actedIn", complete=True),
        },
        templates=[],
    )
    return KGPack(store=store, templates=templates)


def test_pair_realization_matches_married_no_children_pattern():
    pack = fixture_pack()
    template = RelationTemplate(
        template_id="pair",
        kind="pair",
        texts=["{entity} is married to {object} and has no children."],
        relation=RelationSpec("isMarriedTo"),
        requires_absent=RelationSpec("isAChildOf", "inverse"),
    )
    out = realize("Alex_Stone", template, pack, set(), random.Random(0))
    assert out.text == "Alex Stone is married to Jamie Stone and has no children."


def test_pair_blocked_when_required_absence_fails():
    pack = fixture_pack()
    pack.store.add(Triple("Kid", "isAChildOf", "Alex_Stone"))
    template = RelationTemplate(
        template_id="pair",
        kind="pair",
        texts=["{entity} is married to {object} and has no children."],
        relation=RelationSpec("isMarriedTo"),
        requires_absent=RelationSpec("isAChildOf", "inverse"),
    )
    assert realize("Alex_Stone", template, pack, set(), random.Random(0)) is None


def test_chain_realization_traverses_two_hops():
    pack = fixture_pack()
    template = RelationTemplate(
        template_id="chain",
        kind="chain",
        texts=["{hop1} has {entity}'s song, {hop2} on it."],
        hops=[RelationSpec("isAStudioAlbumBy", "inverse"), RelationSpec("isAnAlbumTrackOn", "inverse")],
    )
    out = realize("Sea_Band", template, pack, set(), random.Random(0))
    assert out.text == "Album One has Sea Band's song, Song Blue on it."


def threshold_template():
    return RelationTemplate(
        template_id="score",
        kind="threshold",
        texts=["I guess in general people must really like {entity}'s movies."],
        hops=[RelationSpec("actedIn"), RelationSpec("imdbScore")],
        aggregate="mean",
        comparator=">",
        bound=6.6,
    )


def test_threshold_fires_strictly_above_bound():
    pack = fixture_pack()
    out = realize("Actor_High", threshold_template(), pack, set(), random.Random(0))
    assert out is not None  # mean 6.7 > 6.6
    assert "really like" in out.text


def test_threshold_silent_at_exact_bound():
    pack = fixture_pack()
    assert realize("Actor_Edge", threshold_template(), pack, set(), random.Random(0)) is None


def test_sparse_guard_presentation_choice():
    instances = [Triple("W", "won", f"T{i}", "string") for i in range(3)]
    assert sparse_guard(instances, complete=False) == "single"
    assert sparse_guard(instances, complete=True) == "count"
    assert sparse_guard([], complete=True) == "skip"


def test_incomplete_relation_presents_single_award_not_count():
    pack = fixture_pack()
    count_template = RelationTemplate(
        template_id="award_count",
        kind="count",
        texts=["{entity} has won {count} trophies."],
        relation=RelationSpec("won"),
    )
    single_template = RelationTemplate(
        template_id="award_single",
        kind="single",
        texts=["{entity} won a {object}."],
        relation=RelationSpec("won"),
    )
    assert realize("Winner", count_template, pack, set(), random.Random(0)) is None
    out = realize("Winner", single_template, pack, set(), random.Random(0))
    assert out.text == "Winner won a Small Trophy."


def test_no_relation_instance_verbalized_twice(default_engine):
    pack = default_engine.kg_pack
    used: set[str] = set()
    seen_texts = []
    rng = random.Random(0)
    for _ in range(30):
        out = on_topic_response("Taylor_Swift", "music", pack, used, rng)
        if out is None:
            break
        used.update(out.used_keys)
        seen_texts.append(out.text)
    assert len(seen_texts) == len(set(seen_texts))
    assert len(used) == len(set(used))


def test_realized_sentences_have_no_dangling_slots(default_engine):
    pack = default_engine.kg_pack
    used: set[str] = set()
    rng = random.Random(1)
    for entity in ["Taylor_Swift", "Kendrick_Lamar", "P!nk", "Tom_Hanks", "Kobe_Bryant"]:
        for topic in ["music", "movies", "sports"]:
            out = on_topic_response(entity, topic, pack, used, rng)
            if out is not None:
                assert "{" not in out.text
                assert "{" not in (out.question or "")
                used.update(out.used_keys)


def test_shift_topic_offers_linked_entity(default_engine):
    pack = default_engine.kg_pack
    out = shift_topic_response("Taylor_Swift", "music", pack, set(), random.Random(0))
    assert out is not None
    assert out.shift_target == "Kendrick_Lamar"
    assert "Kendrick Lamar" in out.text


def test_shift_none_without_outbound_links(default_engine):
    pack = default_engine.kg_pack
    assert shift_topic_response("Beyonce", "music", pack, set(), random.Random(0)) is None


def test_favorites_skip_entities_missing_from_store(default_engine):
    pack = default_engine.kg_pack
    # a favorites list headed by an unknown entity falls through to the next
    pack_favorites = {"music": ["Ghost_Artist", "P!nk"]}
    patched = KGPack(
        store=pack.store,
        templates=pack.templates,
        labels=pack.labels,
        genders=pack.genders,
        popularity=pack.popularity,
        favorites=pack_favorites,
        favorite_intros={"music": "One of my favorite musicians is {entity}."},
    )
    hit = favorite_entity_response("music", patched, set(), set(), random.Random(0))
    assert hit is not None
    uri, realization = hit
    assert uri == "P!nk"
    assert "P!nk" in realization.text


def test_favorites_exhausted_returns_none(default_engine):
    pack = default_engine.kg_pack
    visited = set(pack.favorites.get("music", []))
    assert favorite_entity_response("music", pack, visited, set(), random.Random(0)) is None
