from .actions import decide_action
from .constraints import DA_CYCLE, generate_constraints
from .initiative import DEFAULT_INITIATIVE_LIMIT, InitiativeDecision, choose_initiative
from .pool import PoolConfig, RemovalReason, ResponsePool, build_pool
from .ranker import EmptyPoolError, rank
from .fallback import FALLBACK_RG_ID, FallbackTemplates, fallback
from .grounding import GroundingTemplates, ground
from .ssml import INTERJECTION_WHITELIST, SSMLParamError, inject_ssml, strip_tags, wrap_speak
from .builder import MarkupConfig, assemble, clean_text
from .manager import DMConfig, DialogueManager, validate_topic_state

__all__ = [
    "decide_action",
    "DA_CYCLE",
    "generate_constraints",
    "DEFAULT_INITIATIVE_LIMIT",
    "InitiativeDecision",
    "choose_initiative",
    "PoolConfig",
    "RemovalReason",
    "ResponsePool",
    "build_pool",
    "EmptyPoolError",
    "rank",
    "FALLBACK_RG_ID",
    "FallbackTemplates",
    "fallback",
    "GroundingTemplates",
    "ground",
    "INTERJECTION_WHITELIST",
    "SSMLParamError",
    "inject_ssml",
    "strip_tags",
    "wrap_speak",
    "MarkupConfig",
    "assemble",
    "clean_text",
    "DMConfig",
    "DialogueManager",
    "validate_topic_state",
]
