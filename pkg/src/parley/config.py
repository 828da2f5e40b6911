"""Engine configuration.

Everything tunable lives here: pack directory, seed, timeouts, the
initiative limit, ranker preferences and transport settings. Values
load from a YAML file over the defaults; all referenced paths must
exist at startup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .types import ConfigurationError

DEFAULT_PACK_DIR = Path(__file__).parent / "packs" / "default"


@dataclass
class RemoteRGConfig:
    rg_id: str
    endpoint: str
    topics: list[str]
    timeout_ms: int = 300


@dataclass
class EngineConfig:
    pack_dir: Path = DEFAULT_PACK_DIR
    seed: int = 0
    state_dir: Optional[Path] = None  # None: in-memory store
    per_rg_timeout_ms: int = 300
    pool_deadline_ms: int = 1000
    initiative_limit: int = 3
    repetition_threshold: float = 0.8
    el_path: str = "ensemble"  # ensemble | trained
    parallel_rgs: bool = True
    markup_enabled: bool = True
    news_poll_seconds: float = 0.0  # 0 disables background polling
    host: str = "127.0.0.1"
    port: int = 8400
    remote_rgs: list[RemoteRGConfig] = field(default_factory=list)

    @classmethod
    def from_yaml(cls, path: str | Path) -> "EngineConfig":
        try:
            doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except FileNotFoundError as exc:
            raise ConfigurationError(f"config file not found: {path}") from exc
        config = cls()
        if "pack_dir" in doc:
            config.pack_dir = Path(doc["pack_dir"])
        if "state_dir" in doc and doc["state_dir"]:
            config.state_dir = Path(doc["state_dir"])
        for key in (
            "seed",
            "per_rg_timeout_ms",
            "pool_deadline_ms",
            "initiative_limit",
            "repetition_threshold",
            "el_path",
            "parallel_rgs",
            "markup_enabled",
            "news_poll_seconds",
            "host",
            "port",
        ):
            if key in doc:
                setattr(config, key, doc[key])
        for raw in doc.get("remote_rgs", []):
            config.remote_rgs.append(
                RemoteRGConfig(
                    rg_id=raw["rg_id"],
                    endpoint=raw["endpoint"],
                    topics=list(raw.get("topics", [])),
                    timeout_ms=int(raw.get("timeout_ms", 300)),
                )
            )
        return config

    def require_pack_file(self, relative: str) -> Path:
        path = self.pack_dir / relative
        if not path.exists():
            raise ConfigurationError(f"missing content pack file: {path}")
        return path

    def optional_pack_file(self, relative: str) -> Optional[Path]:
        path = self.pack_dir / relative
        return path if path.exists() else None
