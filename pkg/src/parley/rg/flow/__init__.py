from .model import FlowEdge, FlowGraph, FlowNode, FlowState, Miniflow, SegmentSpec
from .loader import build_flow, load_flow
from .engine import (
    AdvanceResult,
    CallbackContext,
    advance,
    compose,
    end_transition,
    init_flow,
    note_foreign_turn,
    resume,
    suspend,
)
from .callbacks import DEFAULT_CALLBACKS
from .rg import FlowRG

__all__ = [
    "FlowEdge",
    "FlowGraph",
    "FlowNode",
    "FlowState",
    "Miniflow",
    "SegmentSpec",
    "build_flow",
    "load_flow",
    "AdvanceResult",
    "CallbackContext",
    "advance",
    "compose",
    "end_transition",
    "init_flow",
    "note_foreign_turn",
    "resume",
    "suspend",
    "DEFAULT_CALLBACKS",
    "FlowRG",
]
