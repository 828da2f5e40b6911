"""Two-stage NLU pipeline.

Stage 1: segmentation, noun phrases, sentiment, red-question detection.
Stage 2 consumes stage-1 outputs: per-segment dialogue-act tagging,
entity linking and topic detection. A failing module degrades to its
neutral value and is logged; the pipeline itself never fails a turn.
"""

from __future__ import annotations

import logging
from typing import Optional

from ..da.ensemble import DAEnsemble
from ..el.linker import EntityLinker
from ..topics import TopicRegistry, detect_topic
from ..types import DALabel, DialogueState, NLUBundle, Turn, UtteranceSegment
from .nounphrase import noun_phrase_spans
from .red import RedTable, detect_red
from .segmenter import SegmenterModel, segment_utterance
from .sentiment import SentimentLexicon, sentiment

logger = logging.getLogger(__name__)


class NLUPipeline:
    def __init__(
        self,
        segmenter: SegmenterModel,
        red_table: RedTable,
        sentiment_lexicon: SentimentLexicon,
        da_ensemble: Optional[DAEnsemble] = None,
        entity_linker: Optional[EntityLinker] = None,
        topic_registry: Optional[TopicRegistry] = None,
    ) -> None:
        self.segmenter = segmenter
        self.red_table = red_table
        self.sentiment_lexicon = sentiment_lexicon
        self.da_ensemble = da_ensemble
        self.entity_linker = entity_linker
        self.topic_registry = topic_registry

    def run(self, turn: Turn, state: Optional[DialogueState] = None) -> NLUBundle:
        text = turn.user_text.lower() if isinstance(turn.user_text, str) else ""

        # stage 1
        try:
            segments = segment_utterance(text, self.segmenter)
        except Exception:
            logger.exception("segmenter failed; using a single whole-text segment")
            segments = [UtteranceSegment(text=text, span=(0, max(len(text.split()), 0)))]
        try:
            noun_phrases = noun_phrase_spans(text)
        except Exception:
            logger.exception("noun phrase extraction failed")
            noun_phrases = []
        try:
            senti = sentiment(text, self.sentiment_lexicon)
        except Exception:
            logger.exception("sentiment failed")
            senti = 0.0
        try:
            red = detect_red(segments, self.red_table)
        except Exception:
            logger.exception("red detection failed")
            red = None

        bundle = NLUBundle(
            segments=segments,
            sentiment=senti,
            red_flag=red,
            noun_phrases=noun_phrases,
        )

        # stage 2: sees stage-1 outputs
        topic_hint = None
        if self.topic_registry is not None:
            try:
                explicit = self.topic_registry.find_explicit(text)
                topic_hint = explicit[0] if explicit else None
            except Exception:
                logger.exception("topic hint failed")
        if self.entity_linker is not None:
            try:
                bundle.entities = self.entity_linker.link(text, noun_phrases, topic_hint=topic_hint)
            except Exception:
                logger.exception("entity linking failed")
                bundle.entities = []
        if self.da_ensemble is not None:
            for seg in bundle.segments:
                try:
                    seg.da_labels = self.da_ensemble.tag_segment(seg.text)
                except Exception:
                    logger.exception("DA tagging failed for %r", seg.text)
                    seg.da_labels = [(DALabel.STATEMENT_NON_OPINION, 0.5)]
        if self.topic_registry is not None:
            try:
                bundle.topic_signal = detect_topic(bundle, self.topic_registry)
            except Exception:
                logger.exception("topic detection failed")
                bundle.topic_signal = None
        return bundle
