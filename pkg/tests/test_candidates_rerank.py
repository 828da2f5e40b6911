from parley.el.candidates import LookupEntry, LookupIndex, candidate_pool
from parley.el.rerank import (
    RerankContext,
    RerankerWeights,
    rerank,
    rerank_features,
    train_reranker,
)
from parley.types import EntityType


def entry(surface, uri, etype, pop):
    return LookupEntry(surface=surface, uri=uri, entity_type=etype, popularity=pop)


FIXTURE = [
    entry("spider man", "Spider_Man", EntityType.OTHER, 83),
    entry("spider man", "Spider_Man_Film", EntityType.MOVIE, 70),
    entry("spider man 2", "Spider_Man_2", EntityType.MOVIE, 50),
    entry("chris evans", "Chris_Evans_Actor", EntityType.ACTOR, 82),
    entry("chris evans", "Chris_Evans_Politician", EntityType.OTHER, 20),
]


def test_pool_contains_character_and_film():
    index = LookupIndex(FIXTURE)
    uris = {e.uri for e, _s in candidate_pool("spider-man", index)}
    assert "Spider_Man" in uris
    assert "Spider_Man_Film" in uris


def test_unknown_mention_gives_empty_pool():
    index = LookupIndex(FIXTURE)
    assert candidate_pool("zzzz", index) == []


def test_pool_cap_is_honored():
    big = [entry(f"common word {i}", f"E{i}", EntityType.OTHER, i) for i in range(1200)]
    index = LookupIndex(big)
    pool = candidate_pool("common word", index, max_size=1000)
    assert len(pool) == 1000
    # ranked: best score first, then popularity descending
    assert pool[0][1] >= pool[-1][1]


def test_movie_topic_weights_boost_movie_candidate():
    weights = RerankerWeights(weights={"topic_type": 5.0, "log_pop": 0.1})
    ctx = RerankContext(topic="movies", topic_types=frozenset({EntityType.MOVIE}))
    pool = [(FIXTURE[0], 2.0), (FIXTURE[1], 2.0)]
    ranked = rerank("spider man", pool, ctx, weights)
    assert ranked[0][0].uri == "Spider_Man_Film"


def test_identical_features_tie_break_by_popularity():
    weights = RerankerWeights(weights={})  # every candidate scores 0.0
    ctx = RerankContext()
    pool = [(FIXTURE[4], 2.0), (FIXTURE[3], 2.0)]
    ranked = rerank("chris evans", pool, ctx, weights)
    assert ranked[0][0].uri == "Chris_Evans_Actor"  # higher popularity first


def test_empty_pool_reranks_to_empty():
    assert rerank("x", [], RerankContext(), RerankerWeights()) == []


def test_margin_training_learns_expected_type():
    index = LookupIndex(FIXTURE)
    actor_ctx = RerankContext(expected_type=EntityType.ACTOR)
    examples = [
        ("chris evans", candidate_pool("chris evans", index), "Chris_Evans_Actor", actor_ctx),
        ("spider man", candidate_pool("spider man", index), "Spider_Man",
         RerankContext(expected_type=EntityType.OTHER)),
    ]
    weights = train_reranker(examples, margin=1.0, epochs=20, seed=0)
    ranked = rerank("chris evans", candidate_pool("chris evans", index), actor_ctx, weights)
    assert ranked[0][0].uri == "Chris_Evans_Actor"


def test_rerank_features_include_cosine_and_type():
    feats = rerank_features("spider man", FIXTURE[0], RerankContext())
    assert feats["cosine"] == 1.0  # identical strings
    assert feats["type=Other"] == 1.0
    assert feats["exact"] == 1.0
