"""Conversation state persistence.

One versioned, schema-tagged JSON document per conversation id. The
file-backed store keeps a single file per conversation under a state
directory; the in-memory store backs tests and the REPL.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional, Protocol

from .types import DialogueState, StateDecodeError, StorageError

logger = logging.getLogger(__name__)

SCHEMA_TAG = "parley-state/1"


class StateStore(Protocol):
    def save(self, state: DialogueState) -> None: ...

    def load(self, conversation_id: str) -> Optional[DialogueState]: ...


def encode_state(state: DialogueState) -> str:
    doc = {"schema": SCHEMA_TAG, "state": state.to_dict()}
    return json.dumps(doc, sort_keys=True)


def decode_state(raw: str, conversation_id: str) -> DialogueState:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise StateDecodeError(conversation_id, f"invalid json: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_TAG:
        raise StateDecodeError(conversation_id, f"unexpected schema tag {doc.get('schema')!r}"
                               if isinstance(doc, dict) else "not an object")
    try:
        return DialogueState.from_dict(doc["state"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise StateDecodeError(conversation_id, f"malformed record: {exc}") from exc


class MemoryStateStore:
    """Dict-backed store; state survives only for the process lifetime."""

    def __init__(self) -> None:
        self._records: dict[str, str] = {}

    def save(self, state: DialogueState) -> None:
        self._records[state.conversation_id] = encode_state(state)

    def load(self, conversation_id: str) -> Optional[DialogueState]:
        raw = self._records.get(conversation_id)
        if raw is None:
            return None
        return decode_state(raw, conversation_id)


def _record_filename(conversation_id: str) -> str:
    # ids are opaque and may not be path-safe
    digest = hashlib.sha1(conversation_id.encode("utf-8")).hexdigest()
    return f"{digest}.json"


class FileStateStore:
    """One JSON file per conversation id under ``root``."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create state directory {self.root}: {exc}") from exc

    def _path(self, conversation_id: str) -> Path:
        return self.root / _record_filename(conversation_id)

    def save(self, state: DialogueState) -> None:
        payload = encode_state(state)
        path = self._path(state.conversation_id)
        try:
            fd, tmp = tempfile.mkstemp(dir=str(self.root), suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageError(f"cannot write state for {state.conversation_id!r}: {exc}") from exc

    def load(self, conversation_id: str) -> Optional[DialogueState]:
        path = self._path(conversation_id)
        if not path.exists():
            return None
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read state for {conversation_id!r}: {exc}") from exc
        return decode_state(raw, conversation_id)


def save_state(state: DialogueState, store: StateStore) -> None:
    store.save(state)


def load_state(conversation_id: str, store: StateStore) -> Optional[DialogueState]:
    return store.load(conversation_id)
