import pytest

from parley.rg.base import ANY_TOPIC, ResponseGenerator, RGRegistry
from parley.types import ConfigurationError, SystemAction


class FakeRG(ResponseGenerator):
    def __init__(self, rg_id, actions=(), topics=(), always_run=False):
        self.rg_id = rg_id
        self.actions = frozenset(actions)
        self.topics = frozenset(topics)
        self.always_run = always_run


def make_registry():
    registry = RGRegistry()
    registry.register(FakeRG("movie_flow", {SystemAction.CONVERSE, SystemAction.TOPIC_CHANGE}, {"movies"}))
    registry.register(FakeRG("kg", {SystemAction.CONVERSE}, {"movies", "music"}))
    registry.register(FakeRG("red", {SystemAction.RED_RESPONSE}, {ANY_TOPIC}, always_run=True))
    registry.register(FakeRG("persona", {SystemAction.CONVERSE}, {ANY_TOPIC}, always_run=True))
    registry.register(FakeRG("social", {SystemAction.GREET, SystemAction.LIST_OPTIONS}, {ANY_TOPIC}))
    return registry


def test_converse_movies_selects_movie_rgs_plus_always_run():
    registry = make_registry()
    assert registry.dispatch(SystemAction.CONVERSE, "movies") == ["movie_flow", "kg", "red", "persona"]


def test_red_response_selects_only_always_run():
    registry = make_registry()
    assert registry.dispatch(SystemAction.RED_RESPONSE, "movies") == ["red", "persona"]


def test_unknown_topic_selects_always_run_only():
    registry = make_registry()
    assert registry.dispatch(SystemAction.CONVERSE, "zz_unknown") == ["red", "persona"]


def test_registration_requires_actions_and_topics():
    registry = RGRegistry()
    with pytest.raises(ConfigurationError):
        registry.register(FakeRG("empty"))


def test_duplicate_ids_rejected():
    registry = make_registry()
    with pytest.raises(ConfigurationError):
        registry.register(FakeRG("kg", {SystemAction.CONVERSE}, {"movies"}))


def test_soundness_check_matches_dispatch():
    registry = make_registry()
    assert registry.is_sound("movie_flow", SystemAction.CONVERSE, "movies")
    assert not registry.is_sound("movie_flow", SystemAction.CONVERSE, "music")
    assert registry.is_sound("persona", SystemAction.CONVERSE, "anything")
    assert not registry.is_sound("ghost", SystemAction.CONVERSE, "movies")


def test_engine_unknown_topic_dispatch(default_engine):
    dispatched = default_engine.registry.dispatch(SystemAction.CONVERSE, "zz_nowhere")
    entries = {e.rg.rg_id: e for e in default_engine.registry.entries}
    assert all(entries[rg_id].always_run for rg_id in dispatched)
