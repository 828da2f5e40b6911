from .segmenter import SegmenterModel, segment_utterance
from .red import RedTable, detect_red
from .sentiment import SentimentLexicon, sentiment
from .nounphrase import noun_phrase_spans
from .pipeline import NLUPipeline

__all__ = [
    "SegmenterModel",
    "segment_utterance",
    "RedTable",
    "detect_red",
    "SentimentLexicon",
    "sentiment",
    "noun_phrase_spans",
    "NLUPipeline",
]
