from .base import (
    ANY_TOPIC,
    ResponseGenerator,
    RGContext,
    RGRegistry,
    RGRegistryEntry,
    decode_rg_state,
    encode_rg_state,
)
from .social import SocialRG, load_social_templates
from .red_rg import RedQuestionRG, load_red_responses
from .remote import RemoteRG, remote_rg_call

__all__ = [
    "ANY_TOPIC",
    "ResponseGenerator",
    "RGContext",
    "RGRegistry",
    "RGRegistryEntry",
    "decode_rg_state",
    "encode_rg_state",
    "SocialRG",
    "load_social_templates",
    "RedQuestionRG",
    "load_red_responses",
    "RemoteRG",
    "remote_rg_call",
]
