from .bank import BankedResponse, MentionSnapshot, ResponseBank, centering_retrieve, centering_score
from .funfacts import FUNFACT_PREFIX, FunFactIndex, funfact_retrieve
from .backstory import PERSONA_DENY_LEXICON, BackstoryTable, backstory_match
from .news import (
    Article,
    ArticleStore,
    ingest_feed_file,
    ingest_news,
    news_flow,
    parse_rss,
    summarize,
)
from .rgs import BackstoryRG, CenteringRG, FunFactRG, NewsRG

__all__ = [
    "BankedResponse",
    "MentionSnapshot",
    "ResponseBank",
    "centering_retrieve",
    "centering_score",
    "FUNFACT_PREFIX",
    "FunFactIndex",
    "funfact_retrieve",
    "PERSONA_DENY_LEXICON",
    "BackstoryTable",
    "backstory_match",
    "Article",
    "ArticleStore",
    "ingest_feed_file",
    "ingest_news",
    "news_flow",
    "parse_rss",
    "summarize",
    "BackstoryRG",
    "CenteringRG",
    "FunFactRG",
    "NewsRG",
]
