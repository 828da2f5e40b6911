import random

import pytest

from parley.dm.fallback import FallbackTemplates, fallback
from parley.dm.grounding import GroundingTemplates, ground
from parley.dm.initiative import InitiativeDecision, choose_initiative
from parley.types import (
    DALabel,
    DialogueState,
    EntityType,
    LinkedEntity,
    NLUBundle,
    TopicState,
    UtteranceSegment,
)

TEMPLATES = FallbackTemplates(
    initiate=["How about {topic}?", "Let's try {topic}.", "Fancy {topic}?"],
    prompt=["You pick a topic.", "What shall we talk about?"],
)


def state(visited=("introduction",)):
    ts = TopicState(current_topic=visited[-1])
    ts.turn_distribution = {t: 1 for t in visited}
    return DialogueState(conversation_id="f", topic_state=ts)


def test_unvisited_topic_is_initiated():
    decision = choose_initiative(state(), ["movies"], 0, random.Random(0), limit=3)
    assert decision.kind == "system_topic"
    assert decision.topic == "movies"


def test_exhausted_topics_prompt_user():
    decision = choose_initiative(
        state(visited=("introduction", "movies")), ["movies"], 0, random.Random(0), limit=3
    )
    assert decision.kind == "user_prompt"


def test_streak_limit_prompts_user():
    decision = choose_initiative(state(), ["movies", "sports"], 3, random.Random(0), limit=3)
    assert decision.kind == "user_prompt"


def test_fallback_template_names_topic():
    candidate, key = fallback(
        InitiativeDecision(kind="system_topic", topic="board_games"),
        TEMPLATES, None, random.Random(0),
    )
    assert "board games" in candidate.body
    assert key.startswith("initiate:")


def test_fallback_prompt_variant():
    candidate, key = fallback(
        InitiativeDecision(kind="user_prompt"), TEMPLATES, None, random.Random(0)
    )
    assert key.startswith("prompt:")
    assert "{topic}" not in candidate.body


def test_fallback_never_repeats_template_consecutively():
    last = None
    rng = random.Random(3)
    for _ in range(50):
        _cand, key = fallback(
            InitiativeDecision(kind="system_topic", topic="movies"), TEMPLATES, last, rng
        )
        assert key != last
        last = key


def test_fallback_attaches_pending_opener():
    candidate, _ = fallback(
        InitiativeDecision(kind="system_topic", topic="movies"),
        TEMPLATES, None, random.Random(0), opener="Good chat.",
    )
    assert candidate.opener == "Good chat."


GROUND_TEMPLATES = GroundingTemplates()


def bundle(text, das=(), entities=(), sentiment=0.0):
    seg = UtteranceSegment(text=text, span=(0, max(len(text.split()), 1)),
                           da_labels=[(d, 1.0) for d in das])
    return NLUBundle(segments=[seg], entities=list(entities), sentiment=sentiment)


def ent(surface):
    return LinkedEntity(span=(0, 1), surface=surface, uri=surface, entity_type=EntityType.OTHER)


def test_entity_with_opinion_echoes_entity():
    nlu = bundle("black widow was great", das=[DALabel.OPINION], entities=[ent("black widow")],
                 sentiment=0.8)
    text = ground(nlu, GROUND_TEMPLATES, random.Random(0))
    assert "black widow" in text


def test_command_gets_plain_acknowledgement():
    nlu = bundle("stop", das=[DALabel.COMMAND], entities=[ent("x")])
    text = ground(nlu, GROUND_TEMPLATES, random.Random(0))
    assert "x" not in text
    assert text in GROUND_TEMPLATES.templates["command_ack"]


def test_empty_utterance_grounds_nothing():
    assert ground(bundle(""), GROUND_TEMPLATES, random.Random(0)) is None


def test_sentiment_steers_opinion_grounds():
    positive = ground(bundle("i love it", das=[DALabel.OPINION], sentiment=0.8),
                      GROUND_TEMPLATES, random.Random(1))
    negative = ground(bundle("i hate it", das=[DALabel.OPINION], sentiment=-0.8),
                      GROUND_TEMPLATES, random.Random(1))
    assert positive in GROUND_TEMPLATES.templates["opinion_positive"]
    assert negative in GROUND_TEMPLATES.templates["opinion_negative"]


def test_ground_depends_only_on_da_entities_sentiment():
    # permuting everything else (here: the raw text) leaves the ground alone
    a = bundle("one phrasing", das=[DALabel.OPINION], sentiment=0.5)
    b = bundle("a completely different phrasing", das=[DALabel.OPINION], sentiment=0.5)
    assert ground(a, GROUND_TEMPLATES, random.Random(5)) == ground(b, GROUND_TEMPLATES, random.Random(5))


def test_ground_is_topic_independent_in_engine(default_engine):
    """Same DA/entities/sentiment under different conversation topics must
    ground identically."""
    from parley.types import Turn

    nlu = bundle("that was fun", das=[DALabel.OPINION], sentiment=0.6)
    rng_a, rng_b = random.Random(11), random.Random(11)
    assert ground(nlu, GROUND_TEMPLATES, rng_a) == ground(nlu, GROUND_TEMPLATES, rng_b)
