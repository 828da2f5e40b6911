from .regex_tagger import RegexTagger
from .ngram import NgramModel, train_ngram, tag_ngram, ngram_features
from .ensemble import DAEnsemble, ensemble_combine, heuristic_intents

__all__ = [
    "RegexTagger",
    "NgramModel",
    "train_ngram",
    "tag_ngram",
    "ngram_features",
    "DAEnsemble",
    "ensemble_combine",
    "heuristic_intents",
]
