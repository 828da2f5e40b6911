"""Engine assembly: load content packs, build the NLU stack and the RG
registry, and serve turns against a state store.

Distinct conversations may run in parallel; turns within one
conversation are serialized by a keyed lock.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .config import EngineConfig
from .da.ensemble import DAEnsemble
from .da.ngram import train_ngram
from .da.regex_tagger import RegexTagger
from .dm.builder import MarkupConfig
from .dm.fallback import FallbackTemplates
from .dm.grounding import GroundingTemplates
from .dm.manager import DMConfig, DialogueManager
from .dm.pool import PoolConfig
from .el.bio import bio_train, token_features
from .el.candidates import LookupIndex
from .el.gazetteer import CommonPhraseList, build_gazetteer_index, load_gazetteer
from .el.linker import EntityLinker, LinkerConfig
from .nlu.pipeline import NLUPipeline
from .nlu.red import RedTable
from .nlu.segmenter import SegmenterModel
from .nlu.sentiment import SentimentLexicon
from .rg.base import RGRegistry
from .rg.flow import DEFAULT_CALLBACKS, FlowRG, load_flow
from .rg.kg import KGPack, KGRG, load_favorites, load_kg_templates, load_labels, load_triples
from .rg.red_rg import RedQuestionRG, load_red_responses
from .rg.remote import RemoteRG
from .rg.retrieval import (
    BackstoryRG,
    BackstoryTable,
    CenteringRG,
    FunFactIndex,
    FunFactRG,
    NewsRG,
    ResponseBank,
    ingest_feed_file,
)
from .rg.social import SocialRG, load_social_templates
from .state import FileStateStore, MemoryStateStore, StateStore
from .text import tokenize
from .topics import TopicRegistry
from .types import (
    ConfigurationError,
    DALabel,
    DialogueState,
    SystemAction,
    SystemResponse,
    TopicState,
    TurnTrace,
    Turn,
)

logger = logging.getLogger(__name__)

INITIAL_TOPIC = "introduction"
DA_TRAIN_EPOCHS = 15
BIO_TRAIN_EPOCHS = 15


@dataclass
class EngineResources:
    """Read-only pack-derived data exposed to RGs and flow callbacks."""

    topic_registry: TopicRegistry
    discussable_topics: list[str] = field(default_factory=list)
    topic_facts: dict[str, list[str]] = field(default_factory=dict)

    def topic_fact(self, topic: str, flow_data: dict) -> Optional[str]:
        facts = self.topic_facts.get(topic, [])
        used = set(flow_data.get("facts_used", []))
        for i, fact in enumerate(facts):
            key = f"{topic}:{i}"
            if key not in used:
                flow_data.setdefault("facts_used", []).append(key)
                return fact
        return None


def load_bio_corpus(path: Path) -> list[tuple[list[str], list[str]]]:
    """Sentences of (tokens, tags) from a token<TAB>tag file with blank
    lines between sentences."""
    sentences: list[tuple[list[str], list[str]]] = []
    tokens: list[str] = []
    tags: list[str] = []
    for line in path.read_text(encoding="utf-8").splitlines() + [""]:
        line = line.strip()
        if not line or line.startswith("#"):
            if tokens:
                sentences.append((tokens, tags))
                tokens, tags = [], []
            continue
        tok, tag = line.split("\t")[:2]
        tokens.append(tok)
        tags.append(tag)
    return sentences


class Engine:
    def __init__(self, config: Optional[EngineConfig] = None) -> None:
        self.config = config or EngineConfig()
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.traces: dict[str, list[dict]] = {}
        self._load()

    # --- pack loading ---------------------------------------------------

    def _load(self) -> None:
        cfg = self.config
        if not Path(cfg.pack_dir).exists():
            raise ConfigurationError(f"pack directory does not exist: {cfg.pack_dir}")

        engine_doc = yaml.safe_load(cfg.require_pack_file("engine.yaml").read_text(encoding="utf-8"))
        self.pack_meta = {"name": engine_doc.get("name", "default"), "version": engine_doc.get("version", "0")}
        discussable = list(engine_doc.get("discussable_topics", []))
        rg_preference = list(engine_doc.get("rg_preference", []))

        self.topic_registry = TopicRegistry.from_yaml(cfg.require_pack_file("topics/registry.yaml"))

        segmenter = SegmenterModel.from_cue_dir(cfg.require_pack_file("nlu/cues"))
        self.red_table = RedTable.from_tsv(cfg.require_pack_file("nlu/red_table.tsv"))
        lexicon = SentimentLexicon.from_tsv(cfg.require_pack_file("nlu/sentiment.tsv"))

        regex_tagger = RegexTagger.from_tsv(cfg.require_pack_file("da/patterns.tsv"))
        self.da_corpus = self._load_da_corpus(cfg.require_pack_file("da/train.tsv"))
        ngram_model = train_ngram(self.da_corpus, epochs=DA_TRAIN_EPOCHS, seed=cfg.seed)
        da_ensemble = DAEnsemble(regex_tagger, ngram_model)

        gazetteer_records = load_gazetteer(cfg.require_pack_file("el/gazetteer.tsv"))
        gazetteer = build_gazetteer_index(gazetteer_records)
        common_phrases = CommonPhraseList.from_files(
            cfg.require_pack_file("el/common_phrases.tsv"),
            cfg.optional_pack_file("el/exceptions.txt"),
        )
        lookup = LookupIndex.from_tsv(cfg.require_pack_file("el/lookup.tsv"))
        self.linker = EntityLinker(
            gazetteer=gazetteer,
            common_phrases=common_phrases,
            lookup=lookup,
            topic_types=self.topic_registry.owned_types_map(),
            config=LinkerConfig(path=cfg.el_path),
        )
        if cfg.el_path == "trained":
            self._train_bio()

        self.nlu = NLUPipeline(
            segmenter=segmenter,
            red_table=self.red_table,
            sentiment_lexicon=lexicon,
            da_ensemble=da_ensemble,
            entity_linker=self.linker,
            topic_registry=self.topic_registry,
        )

        # knowledge and retrieval packs
        triples = load_triples(cfg.require_pack_file("kg/triples.tsv"))
        kg_templates = load_kg_templates(cfg.require_pack_file("kg/templates.yaml"))
        labels, genders, popularity = load_labels(cfg.require_pack_file("kg/labels.tsv"))
        favorites, favorite_intros = load_favorites(cfg.require_pack_file("kg/favorites.yaml"))
        self.kg_pack = KGPack(
            store=triples,
            templates=kg_templates,
            labels=labels,
            genders=genders,
            popularity=popularity,
            favorites=favorites,
            favorite_intros=favorite_intros,
        )
        bank = ResponseBank.from_tsv(cfg.require_pack_file("retrieval/bank.tsv"))
        funfacts = FunFactIndex.from_tsv(cfg.require_pack_file("retrieval/funfacts.tsv"))
        backstory = BackstoryTable.from_tsv(cfg.require_pack_file("retrieval/backstory.tsv"))

        news_store = None
        feed_path = cfg.optional_pack_file("news/feed.xml")
        if feed_path is not None:
            blocked = {r.category.value for r in self.red_table.substring_rules}
            news_store = ingest_feed_file(feed_path, blocked_topics={"politics", "controversial"})

        topic_facts: dict[str, list[str]] = {}
        facts_path = cfg.optional_pack_file("retrieval/topic_facts.tsv")
        if facts_path is not None:
            for line in facts_path.read_text(encoding="utf-8").splitlines():
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                topic_id, fact = line.split("\t")[:2]
                topic_facts.setdefault(topic_id, []).append(fact)
        self.resources = EngineResources(
            topic_registry=self.topic_registry,
            discussable_topics=discussable,
            topic_facts=topic_facts,
        )

        # RG registry: registration order is the dispatch order
        registry = RGRegistry()
        flows_dir = cfg.require_pack_file("flows")
        callbacks = dict(DEFAULT_CALLBACKS)
        for flow_path in sorted(Path(flows_dir).glob("*.yaml")):
            graph = load_flow(flow_path, known_callbacks=callbacks.keys())
            extra = (SystemAction.GREET,) if graph.topic == INITIAL_TOPIC else ()
            registry.register(FlowRG(graph, callbacks, extra_actions=extra))
        kg_topics = {
            topic: set(types)
            for topic, types in self.topic_registry.owned_types_map().items()
            if topic in {t.topic or "" for t in kg_templates.templates} | set(favorites.keys())
        }
        if kg_topics:
            registry.register(KGRG(self.kg_pack, kg_topics))
        registry.register(CenteringRG(bank))
        registry.register(FunFactRG(funfacts, topics=set(discussable)))
        if news_store is not None:
            registry.register(NewsRG(news_store))
        registry.register(BackstoryRG(backstory))
        registry.register(RedQuestionRG(load_red_responses(cfg.require_pack_file("dm/red_responses.yaml"))))
        registry.register(SocialRG(load_social_templates(cfg.require_pack_file("dm/social.yaml")), discussable))
        for remote in cfg.remote_rgs:
            registry.register(
                RemoteRG(remote.rg_id, remote.endpoint, set(remote.topics), remote.timeout_ms / 1000)
            )
        self.registry = registry

        masked_terms = tuple(
            line.strip()
            for line in cfg.require_pack_file("dm/masked_terms.txt").read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        )
        profanity = frozenset(self.red_table.profanity_unigrams()) | frozenset(
            t.lower() for t in masked_terms
        )
        dm_config = DMConfig(
            seed=cfg.seed,
            initiative_limit=cfg.initiative_limit,
            rg_preference=rg_preference,
            discussable_topics=discussable,
            pool=PoolConfig(
                per_rg_timeout=cfg.per_rg_timeout_ms / 1000,
                pool_deadline=cfg.pool_deadline_ms / 1000,
                repetition_threshold=cfg.repetition_threshold,
                profanity_terms=profanity,
                masked_terms=masked_terms,
                parallel=cfg.parallel_rgs,
            ),
            markup=MarkupConfig(enabled=cfg.markup_enabled),
        )
        self.dm = DialogueManager(
            nlu=self.nlu,
            topic_registry=self.topic_registry,
            rg_registry=registry,
            grounding_templates=GroundingTemplates.from_yaml(cfg.require_pack_file("dm/grounding.yaml")),
            fallback_templates=FallbackTemplates.from_yaml(cfg.require_pack_file("dm/fallback.yaml")),
            config=dm_config,
            resources=self.resources,
        )
        self.store: StateStore = (
            FileStateStore(cfg.state_dir) if cfg.state_dir is not None else MemoryStateStore()
        )

    @staticmethod
    def _load_da_corpus(path: Path) -> list[tuple[str, DALabel]]:
        corpus = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            label, text = line.split("\t")[:2]
            corpus.append((text, DALabel.parse(label)))
        return corpus

    def _train_bio(self) -> None:
        path = self.config.require_pack_file("el/bio_train.txt")
        sentences = load_bio_corpus(path)
        annotated = []
        for tokens, tags in sentences:
            flags = self.linker.gazetteer_flags(tokens)
            feats = [token_features(tokens, i, gazetteer_types=flags[i]) for i in range(len(tokens))]
            annotated.append((feats, tags))
        self.linker.bio_weights = bio_train(annotated, epochs=BIO_TRAIN_EPOCHS, seed=self.config.seed)

    # --- conversation API -------------------------------------------------

    def _lock_for(self, conversation_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(conversation_id, threading.Lock())

    def new_conversation(self, conversation_id: str) -> DialogueState:
        return DialogueState(
            conversation_id=conversation_id,
            topic_state=TopicState(current_topic=INITIAL_TOPIC),
        )

    def take_turn(
        self, conversation_id: str, user_text: str, on_ground=None
    ) -> tuple[SystemResponse, TurnTrace]:
        """One full engine turn: load state, run the DM, persist."""
        with self._lock_for(conversation_id):
            state = self.store.load(conversation_id)
            if state is None:
                state = self.new_conversation(conversation_id)
            turn = Turn(
                conversation_id=conversation_id,
                turn_index=state.turn_count,
                user_text=(user_text or "").lower(),
                timestamp=int(time.time() * 1000),  # engine-assigned
            )
            response, new_state, trace = self.dm.take_turn(turn, state, on_ground=on_ground)
            self.store.save(new_state)
            self.traces.setdefault(conversation_id, []).append(trace.to_dict())
            return response, trace

    def reset_conversation(self, conversation_id: str) -> None:
        self.store.save(self.new_conversation(conversation_id))
        self.traces.pop(conversation_id, None)

    def conversation_trace(self, conversation_id: str) -> list[dict]:
        return self.traces.get(conversation_id, [])

    # --- background news ingestion ----------------------------------------

    def refresh_news(self) -> int:
        """Re-ingest the feed and atomically swap the article snapshot."""
        feed_path = self.config.optional_pack_file("news/feed.xml")
        news_rg = self.registry.get("news")
        if feed_path is None or news_rg is None:
            return 0
        store = ingest_feed_file(feed_path, blocked_topics={"politics", "controversial"})
        news_rg.store = store  # single reference assignment: readers see old or new
        return len(store)

    def start_news_polling(self, interval_seconds: Optional[float] = None) -> threading.Event:
        """Periodic feed refresh on a daemon thread; set the returned
        event to stop."""
        interval = interval_seconds if interval_seconds is not None else self.config.news_poll_seconds
        stop = threading.Event()
        if interval <= 0:
            stop.set()
            return stop

        def poll() -> None:
            while not stop.wait(interval):
                try:
                    self.refresh_news()
                except Exception:
                    logger.exception("news refresh failed; keeping previous snapshot")

        threading.Thread(target=poll, daemon=True, name="news-poller").start()
        return stop
