"""Configuration: one YAML file, overridable via ATREYA_* environment keys."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

import yaml

from .chembl import endpoints

ENV_PREFIX = "ATREYA_"
MODES = ("live", "replay", "record")


class ConfigError(Exception):
    pass


@dataclass
class AtreyaConfig:
    mode: str = "replay"
    fixture_dir: str = "fixtures/chembl"
    base_url: str = endpoints.BASE_URL
    host: str = "127.0.0.1"
    port: int = 8000
    rate_limit: float = 5.0
    raster_size: int = 500
    pattern_book: str = ""  # empty -> packaged default book
    log_level: str = "INFO"
    credential_token: str = "atreya-local-dev-token"
    page_size: int = 20
    max_records: int = 200
    similarity_threshold: int = 70
    history_cap: int = 200
    max_sessions: int = 1000
    cache: bool = True
    downloads_dir: str = "downloads"
    frontend_dir: str = ""  # empty -> no static assets mounted

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.raster_size < 64 or self.raster_size > 2048:
            raise ConfigError("raster_size must lie in [64, 2048]")


def _coerce(name: str, value: str, target_type) -> object:
    try:
        if target_type is bool:
            lowered = value.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        return target_type(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {value!r}") from exc


def load_config(path: str | Path | None = None, env: dict | None = None) -> AtreyaConfig:
    """Defaults, then the YAML file, then ATREYA_* environment overrides."""
    env = os.environ if env is None else env
    values: dict = {}
    fields = {f.name: f.type for f in dataclasses.fields(AtreyaConfig)}
    types = {f.name: type(f.default) for f in dataclasses.fields(AtreyaConfig)}

    if path is not None:
        try:
            with open(path, encoding="utf-8") as handle:
                loaded = yaml.safe_load(handle) or {}
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"bad YAML in {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config root must be a mapping, got {type(loaded).__name__}")
        for key, value in loaded.items():
            if key not in fields:
                raise ConfigError(f"unknown config key: {key}")
            values[key] = value

    for name in fields:
        env_key = ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = _coerce(name, env[env_key], types[name])

    try:
        return AtreyaConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
