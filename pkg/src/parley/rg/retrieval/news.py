"""News ingestion and the three-turn news exchange.

Feeds arrive as RSS 2.0 documents (file or URL). Ingestion applies the
topical filters, builds a short extractive summary and keeps the
hundred most recent articles. The conversation flow per article is
fixed: headline tease with consent question, then the summary, then an
opinion question.
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from email.utils import parsedate_to_datetime
from pathlib import Path
from typing import Iterable, Optional

from ...text import tokenize

logger = logging.getLogger(__name__)

MAX_ARTICLES = 100
MAX_SUMMARY_SENTENCES = 3

_SENTENCE_RE = re.compile(r"[^.!?]+[.!?]?")


@dataclass(frozen=True)
class Article:
    article_id: str
    title: str
    source: str
    published: int  # epoch milliseconds
    summary: str
    topics: tuple[str, ...] = ()


class ArticleStore:
    def __init__(self, articles: Optional[list[Article]] = None) -> None:
        self.articles: list[Article] = []
        if articles:
            for a in articles:
                self.add(a)

    def add(self, article: Article) -> None:
        self.articles = [a for a in self.articles if a.article_id != article.article_id]
        self.articles.append(article)
        self.articles.sort(key=lambda a: (-a.published, a.article_id))
        del self.articles[MAX_ARTICLES:]

    def __len__(self) -> int:
        return len(self.articles)

    def get(self, article_id: str) -> Optional[Article]:
        for a in self.articles:
            if a.article_id == article_id:
                return a
        return None


def split_sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENTENCE_RE.findall(text) if s.strip()]


def summarize(text: str, title: str, max_sentences: int = MAX_SUMMARY_SENTENCES) -> str:
    """Extractive summary: sentences scored by position and overlap with
    the title keywords, re-emitted in original order."""
    sentences = split_sentences(text)
    if len(sentences) <= max_sentences:
        return " ".join(sentences)
    title_tokens = set(tokenize(title))
    scored = []
    for i, sentence in enumerate(sentences):
        overlap = len(title_tokens & set(tokenize(sentence))) / max(len(title_tokens), 1)
        scored.append((1.0 / (1 + i) + overlap, -i, i, sentence))
    top = sorted(scored, reverse=True)[:max_sentences]
    return " ".join(s for _score, _neg, _i, s in sorted(top, key=lambda t: t[2]))


def parse_rss(xml_text: str) -> list[dict]:
    """Raw document dicts from an RSS 2.0 feed; bad items are skipped."""
    docs = []
    root = ET.fromstring(xml_text)
    for item in root.iter("item"):
        try:
            title = (item.findtext("title") or "").strip()
            if not title:
                raise ValueError("missing title")
            guid = (item.findtext("guid") or title).strip()
            pub = item.findtext("pubDate")
            published = int(parsedate_to_datetime(pub).timestamp() * 1000) if pub else 0
            docs.append(
                {
                    "id": guid,
                    "title": title,
                    "source": (item.findtext("source") or "feed").strip(),
                    "published": published,
                    "text": (item.findtext("description") or "").strip(),
                    "topics": [c.text.strip().lower() for c in item.findall("category") if c.text],
                }
            )
        except (ValueError, TypeError) as exc:
            logger.warning("skipping malformed feed item: %s", exc)
    return docs


def ingest_news(docs: Iterable[dict], blocked_topics: Optional[set[str]] = None) -> ArticleStore:
    """Build the article store from raw feed documents."""
    blocked = blocked_topics or set()
    store = ArticleStore()
    skipped = 0
    for doc in docs:
        try:
            topics = tuple(t.lower() for t in doc.get("topics", ()))
            if any(t in blocked for t in topics):
                continue
            store.add(
                Article(
                    article_id=str(doc["id"]),
                    title=str(doc["title"]),
                    source=str(doc.get("source", "feed")),
                    published=int(doc.get("published", 0)),
                    summary=summarize(str(doc.get("text", "")), str(doc["title"])),
                    topics=topics,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            skipped += 1
            logger.warning("skipping document: %s", exc)
    if skipped:
        logger.warning("ingest skipped %d documents", skipped)
    return store


def ingest_feed_file(path: str | Path, blocked_topics: Optional[set[str]] = None) -> ArticleStore:
    return ingest_news(parse_rss(Path(path).read_text(encoding="utf-8")), blocked_topics)


def news_flow(article: Article, step: int) -> Optional[dict]:
    """Response parts for one step of the three-turn article exchange;
    None once the exchange is over."""
    if step == 1:
        return {
            "body": f"I read something interesting from {article.source}. {article.title}.",
            "handoff": "Want to hear more about it?",
        }
    if step == 2:
        return {"body": article.summary or article.title, "handoff": None}
    if step == 3:
        return {"body": "That's the gist of it.", "handoff": "What do you think about that?"}
    return None
