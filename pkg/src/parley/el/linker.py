"""End-to-end entity linking with two selectable paths.

The ensemble path is retrieval-based: gazetteer candidates, exact-match
acceptance, common-phrase suppression, optional topic restriction. The
trained path runs the BIO tagger to find mention spans, generates a
candidate pool per span and reranks it. Which path runs is a config
switch; outputs are deduplicated by span either way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from ..text import tokenize
from ..types import EntityType, LinkedEntity
from .bio import BIOWeights, bio_decode, spans_from_tags, token_features
from .candidates import LookupIndex, candidate_pool
from .gazetteer import (
    PREFIX_SCORE,
    CommonPhraseList,
    GazetteerIndex,
    query_candidates,
    suppress_common,
)
from .rerank import RerankContext, RerankerWeights, rerank

logger = logging.getLogger(__name__)


@dataclass
class LinkerConfig:
    path: str = "ensemble"  # ensemble | trained
    min_accept_score: float = PREFIX_SCORE
    # trained path: minimum retrieval score of the pool's best candidate
    # before reranking is trusted (filters bag-of-stopword matches)
    trained_min_pool_score: float = 0.5
    max_gazetteer_ngram: int = 6


class EntityLinker:
    def __init__(
        self,
        gazetteer: GazetteerIndex,
        common_phrases: Optional[CommonPhraseList] = None,
        lookup: Optional[LookupIndex] = None,
        bio_weights: Optional[BIOWeights] = None,
        reranker: Optional[RerankerWeights] = None,
        topic_types: Optional[dict[str, frozenset[EntityType]]] = None,
        config: Optional[LinkerConfig] = None,
    ) -> None:
        self.gazetteer = gazetteer
        self.common_phrases = common_phrases or CommonPhraseList()
        self.lookup = lookup
        self.bio_weights = bio_weights
        self.reranker = reranker
        self.topic_types = topic_types or {}
        self.config = config or LinkerConfig()

    def _types_for_topic(self, topic: Optional[str]) -> Optional[set[EntityType]]:
        if topic is None:
            return None
        types = self.topic_types.get(topic)
        return set(types) if types else None

    def link(
        self,
        utterance: str,
        noun_phrases: list[tuple[int, int]],
        topic_hint: Optional[str] = None,
        da: Optional[str] = None,
        path: Optional[str] = None,
    ) -> list[LinkedEntity]:
        path = path or self.config.path
        if path == "trained":
            return self.link_trained(utterance, topic_hint, da)
        return self.link_ensemble(utterance, noun_phrases, topic_hint)

    def link_ensemble(
        self,
        utterance: str,
        noun_phrases: list[tuple[int, int]],
        topic_hint: Optional[str] = None,
    ) -> list[LinkedEntity]:
        types = self._types_for_topic(topic_hint)
        mentions = query_candidates(utterance, noun_phrases, self.gazetteer, types)
        linked: list[LinkedEntity] = []
        for mention in mentions:
            if not mention.candidates:
                continue
            record, score = mention.candidates[0]
            if score < self.config.min_accept_score:
                continue
            linked.append(
                LinkedEntity(
                    span=mention.span,
                    surface=mention.surface,
                    uri=record.uri,
                    entity_type=record.entity_type,
                    score=score,
                    source="ensemble",
                )
            )
        return suppress_common(linked, self.common_phrases)

    def gazetteer_flags(self, tokens: list[str]) -> list[list[str]]:
        """Per-token entity-type flags for exact gazetteer n-gram hits."""
        flags: list[set[str]] = [set() for _ in tokens]
        max_n = min(self.config.max_gazetteer_ngram, len(tokens))
        for n in range(max_n, 0, -1):
            for start in range(0, len(tokens) - n + 1):
                gram = tuple(tokens[start : start + n])
                for record in self.gazetteer.exact_matches(gram):
                    for i in range(start, start + n):
                        flags[i].add(record.entity_type.value)
        return [sorted(s) for s in flags]

    def link_trained(
        self,
        utterance: str,
        topic_hint: Optional[str] = None,
        da: Optional[str] = None,
    ) -> list[LinkedEntity]:
        if self.bio_weights is None or self.lookup is None:
            logger.warning("trained path unavailable: missing weights or lookup index")
            return []
        tokens = tokenize(utterance)
        if not tokens:
            return []
        flags = self.gazetteer_flags(tokens)
        feats = [
            token_features(tokens, i, gazetteer_types=flags[i], topic=topic_hint, da=da)
            for i in range(len(tokens))
        ]
        tags = bio_decode(feats, self.bio_weights)
        ctx = RerankContext(
            topic=topic_hint,
            topic_types=self.topic_types.get(topic_hint, frozenset()) if topic_hint else frozenset(),
        )
        linked: list[LinkedEntity] = []
        for span in spans_from_tags(tags):
            surface = " ".join(tokens[span[0] : span[1]])
            pool = candidate_pool(surface, self.lookup)
            if not pool:
                continue
            if pool[0][1] < self.config.trained_min_pool_score:
                continue
            if self.reranker is not None:
                pool = rerank(surface, pool, ctx, self.reranker)
            entry, score = pool[0]
            linked.append(
                LinkedEntity(
                    span=span,
                    surface=surface,
                    uri=entry.uri,
                    entity_type=entry.entity_type,
                    score=score,
                    source="trained",
                )
            )
        return linked
