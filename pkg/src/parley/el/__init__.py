from .gazetteer import (
    CommonPhraseList,
    GazetteerIndex,
    GazetteerRecord,
    Mention,
    build_gazetteer_index,
    query_candidates,
    suppress_common,
)
from .bio import BIOWeights, bio_decode, bio_train, sequence_score, token_features
from .candidates import LookupIndex, candidate_pool
from .rerank import RerankContext, rerank, rerank_features, train_reranker
from .linker import EntityLinker
from .evaluate import evaluate_linking

__all__ = [
    "CommonPhraseList",
    "GazetteerIndex",
    "GazetteerRecord",
    "Mention",
    "build_gazetteer_index",
    "query_candidates",
    "suppress_common",
    "BIOWeights",
    "bio_decode",
    "bio_train",
    "sequence_score",
    "token_features",
    "LookupIndex",
    "candidate_pool",
    "RerankContext",
    "rerank",
    "rerank_features",
    "train_reranker",
    "EntityLinker",
    "evaluate_linking",
]
