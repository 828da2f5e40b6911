"""RG adapters for the retrieval family."""

from __future__ import annotations

from typing import Optional

from ...text import content_tokens
from ...types import DALabel, ResponseCandidate, SystemAction
from ..base import ResponseGenerator, RGContext
from .backstory import BackstoryTable, backstory_match
from .bank import MentionSnapshot, ResponseBank, centering_retrieve
from .funfacts import FunFactIndex, funfact_retrieve
from .news import ArticleStore, news_flow

_STYLE_DA = {
    "fact+opinion": DALabel.OPINION,
    "opinion": DALabel.OPINION,
    "fact": DALabel.STATEMENT_NON_OPINION,
}

RECENT_MENTION_TURNS = 3


def _mention_snapshots(ctx: RGContext) -> list[MentionSnapshot]:
    snapshots = [
        MentionSnapshot(
            entity_uris={e.uri for e in ctx.nlu.entities},
            tokens=content_tokens(ctx.turn.user_text),
        )
    ]
    for turn, _resp in reversed(ctx.state.history[-(RECENT_MENTION_TURNS - 1):]):
        snapshots.append(MentionSnapshot(entity_uris=set(), tokens=content_tokens(turn.user_text)))
    return snapshots


class CenteringRG(ResponseGenerator):
    rg_id = "centering"

    def __init__(self, bank: ResponseBank) -> None:
        self.bank = bank
        self.actions = frozenset({SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE})
        self.topics = frozenset(bank.topics())

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        used = set((ctx.rg_state or {}).get("used", []))
        hit = centering_retrieve(self.bank, ctx.constraints.topic, _mention_snapshots(ctx), used)
        if hit is None:
            return []
        index, response, score = hit
        return [
            ResponseCandidate(
                body=response.text,
                source_rg=self.rg_id,
                topic=response.topic,
                entities=list(response.entities),
                dialogue_act=_STYLE_DA.get(response.style, DALabel.STATEMENT_NON_OPINION),
                state_update={"used": sorted(used | {index})},
            )
        ]


class FunFactRG(ResponseGenerator):
    rg_id = "funfact"

    def __init__(self, index: FunFactIndex, topics: Optional[set[str]] = None) -> None:
        self.index = index
        self.actions = frozenset({SystemAction.CONVERSE})
        self.topics = frozenset(topics) if topics else frozenset({"*"})

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        used = set((ctx.rg_state or {}).get("used", []))
        uris = [e.uri for e in ctx.nlu.entities]
        hit = funfact_retrieve(self.index, uris, used)
        if hit is None:
            return []
        text, key = hit
        entity_uri = key.split("|")[0]
        return [
            ResponseCandidate(
                body=text,
                source_rg=self.rg_id,
                topic=ctx.constraints.topic,
                entities=[entity_uri],
                dialogue_act=DALabel.STATEMENT_NON_OPINION,
                state_update={"used": sorted(used | {key})},
            )
        ]


class BackstoryRG(ResponseGenerator):
    rg_id = "backstory"
    always_run = True

    def __init__(self, table: BackstoryTable) -> None:
        self.table = table
        self.actions = frozenset({SystemAction.CONVERSE})
        self.topics = frozenset({"*"})

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        answer = backstory_match(ctx.turn.user_text.lower(), self.table)
        if answer is None:
            return []
        return [
            ResponseCandidate(
                body=answer,
                source_rg=self.rg_id,
                topic=None,
                topic_agnostic=True,
                dialogue_act=DALabel.OPINION,
            )
        ]


class NewsRG(ResponseGenerator):
    rg_id = "news"

    def __init__(self, store: ArticleStore) -> None:
        self.store = store
        self.actions = frozenset({SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE})
        self.topics = frozenset({"news"})

    def _select_article(self, ctx: RGContext, read: set[str]) -> Optional[str]:
        user_tokens = content_tokens(ctx.turn.user_text)
        best = None
        for article in self.store.articles:
            if article.article_id in read:
                continue
            overlap = len(user_tokens & content_tokens(article.title + " " + article.summary))
            key = (overlap, article.published)
            if best is None or key > best[0]:
                best = (key, article.article_id)
        return best[1] if best else None

    def propose(self, ctx: RGContext) -> list[ResponseCandidate]:
        st = dict(ctx.rg_state or {})
        read = set(st.get("read", []))
        article_id = st.get("article")
        step = int(st.get("step", 0))
        das = set(ctx.nlu.da_labels())

        if article_id is not None and step >= 1:
            if step == 1 and DALabel.NO_ANSWER in das:
                article_id = None  # consent declined: drop this article
            elif step >= 3:
                article_id = None
            else:
                step += 1
        if article_id is None:
            article_id = self._select_article(ctx, read)
            step = 1
        if article_id is None:
            return []
        article = self.store.get(article_id)
        if article is None:
            return []
        parts = news_flow(article, step)
        if parts is None:
            return []
        read.add(article_id)
        return [
            ResponseCandidate(
                body=parts["body"],
                handoff=parts.get("handoff"),
                source_rg=self.rg_id,
                topic="news",
                dialogue_act=DALabel.OPINION_QUESTION if step != 2 else DALabel.STATEMENT_NON_OPINION,
                state_update={
                    "article": article_id if step < 3 else None,
                    "step": step if step < 3 else 0,
                    "read": sorted(read),
                },
            )
        ]
