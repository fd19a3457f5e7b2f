"""Runtime configuration: flags override environment (ZK_*), which overrides
an optional JSON config file, which overrides the defaults."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Mapping, Optional

from .groebner import TermOrder
from .polyfield.field import FieldError, field_from_spec

ENV_PREFIX = "ZK_"
FORMATS = ("json", "text")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class Config:
    field: str = "Q"
    order: str = "grevlex"
    cap: int = 10**6
    sat_bound: int = 20
    margin: int = 0
    jobs: int = 1
    format: str = "json"

    def validate(self) -> "Config":
        try:
            field_from_spec(self.field)
        except FieldError as e:
            raise ConfigError("field", str(e)) from None
        try:
            TermOrder.parse(self.order)
        except ValueError as e:
            raise ConfigError("order", str(e)) from None
        for key in ("cap", "sat_bound", "jobs"):
            if getattr(self, key) <= 0:
                raise ConfigError(key, "must be positive")
        if self.margin < 0:
            raise ConfigError("margin", "must be non-negative")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")
        return self

    @property
    def field_obj(self):
        return field_from_spec(self.field)

    @property
    def term_order(self) -> TermOrder:
        return TermOrder.parse(self.order)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce(key: str, value: Any) -> Any:
    typ = {f.name: f.type for f in fields(Config)}[key]
    if typ in ("int", int):
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected an integer, got {value!r}") from None
    return str(value)


def _overlay(cfg: Config, values: Mapping[str, Any]) -> Config:
    known = {f.name for f in fields(Config)}
    updates = {}
    for key, value in values.items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError(key, "unknown configuration key")
        updates[key] = _coerce(key, value)
    return replace(cfg, **updates)


def from_env(environ: Optional[Mapping[str, str]] = None) -> dict:
    environ = os.environ if environ is None else environ
    out = {}
    for f in fields(Config):
        var = ENV_PREFIX + f.name.upper()
        if var in environ:
            out[f.name] = environ[var]
    return out


def load_config(
    flags: Optional[Mapping[str, Any]] = None,
    path: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Config:
    cfg = Config()
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("config", f"cannot read {path}: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "config file must hold a JSON object")
        cfg = _overlay(cfg, data)
    cfg = _overlay(cfg, from_env(environ))
    cfg = _overlay(cfg, flags or {})
    return cfg.validate()
