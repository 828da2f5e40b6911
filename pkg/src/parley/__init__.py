"""parley: a contract-based open-domain dialogue engine."""

from .config import EngineConfig
from .engine import Engine
from .types import (
    DALabel,
    DialogueState,
    EntityType,
    LinkedEntity,
    NLUBundle,
    ResponseCandidate,
    ResponseConstraints,
    SystemAction,
    SystemResponse,
    TopicSignal,
    TopicState,
    Turn,
    TurnTrace,
)

__version__ = "0.1.0"

__all__ = [
    "EngineConfig",
    "Engine",
    "DALabel",
    "DialogueState",
    "EntityType",
    "LinkedEntity",
    "NLUBundle",
    "ResponseCandidate",
    "ResponseConstraints",
    "SystemAction",
    "SystemResponse",
    "TopicSignal",
    "TopicState",
    "Turn",
    "TurnTrace",
    "__version__",
]
