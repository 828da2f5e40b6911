"""Engine-level callback registry for flow segments.

Packs reference callbacks by name, keeping flow files declarative. The
generic set shipped here covers slot filling from the loaded knowledge
sources and topic suggestions; engines may register more.
"""

from __future__ import annotations

from typing import Callable

from .engine import CallbackContext

CallbackFn = Callable[[CallbackContext], list[str]]


def unvisited_topic_options(ctx: CallbackContext) -> list[str]:
    resources = ctx.resources
    topics = list(getattr(resources, "discussable_topics", []) or [])
    visited = set()
    if ctx.state is not None:
        visited = set(ctx.state.topic_state.turn_distribution.keys())
    options = [t for t in topics if t not in visited] or topics
    if not options:
        return ["By the way, I'm happy to chat about all sorts of things."]
    display = [t.replace("_", " ") for t in options[:3]]
    if len(display) == 1:
        listing = display[0]
    else:
        listing = ", ".join(display[:-1]) + " or " + display[-1]
    return [
        f"By the way, I love talking about {listing}. Any of those sound fun?",
        f"We could also chat about {listing} sometime. Just say the word.",
    ]


def topic_fun_fact(ctx: CallbackContext) -> list[str]:
    """Fill a knowledge slot: one unused fun-fact line for the current
    topic's favorite entity, if the packs provide one."""
    resources = ctx.resources
    fact_fn = getattr(resources, "topic_fact", None)
    if fact_fn is None or ctx.constraints is None:
        return []
    fact = fact_fn(ctx.constraints.topic, ctx.flow_data)
    return [fact] if fact else []


def user_entity_echo(ctx: CallbackContext) -> list[str]:
    if ctx.nlu is None or not ctx.nlu.entities:
        return []
    surface = ctx.nlu.entities[0].surface
    return [surface + ", that's cool.", surface + ", ok."]


DEFAULT_CALLBACKS: dict[str, CallbackFn] = {
    "unvisited_topic_options": unvisited_topic_options,
    "topic_fun_fact": topic_fun_fact,
    "user_entity_echo": user_entity_echo,
}
