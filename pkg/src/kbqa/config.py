"""Configuration objects and their JSON parsing.

Everything here is declarative: dataset descriptors (what to load and which
NE/RE services answer for it), pipeline defaults, and the optional fallback
language-model endpoint. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from .errors import ConfigError
from .terms import Iri

TRANSPORT_IN_PROCESS = "in_process"
TRANSPORT_REMOTE = "remote"

_DATASET_ID = re.compile(r"^[a-z0-9_-]+$")

DEFAULT_TYPE_PREDICATE = "type"


@dataclass(frozen=True)
class ServiceBinding:
    transport: str = TRANSPORT_IN_PROCESS
    url: Optional[str] = None

    def __post_init__(self) -> None:
        if self.transport not in (TRANSPORT_IN_PROCESS, TRANSPORT_REMOTE):
            raise ConfigError(f"unknown service transport {self.transport!r}")
        if self.transport == TRANSPORT_REMOTE:
            if not self.url or not self.url.startswith(("http://", "https://")):
                raise ConfigError("remote service binding needs an absolute "
                                  "http(s) url")
        elif self.url is not None:
            raise ConfigError("in-process service binding takes no url")


@dataclass(frozen=True)
class DatasetDescriptor:
    dataset_id: str
    name: str
    kb_path: str
    kb_format: str = "tsv"  # "tsv" | "ntriples"
    language: str = "en"
    type_predicate: str = DEFAULT_TYPE_PREDICATE
    ne_service: ServiceBinding = field(default_factory=ServiceBinding)
    re_service: ServiceBinding = field(default_factory=ServiceBinding)
    ne_threshold: Optional[float] = None
    top_k: Optional[int] = None
    top_m: Optional[int] = None
    entity_alias_path: Optional[str] = None
    predicate_alias_path: Optional[str] = None

    def __post_init__(self) -> None:
        if not _DATASET_ID.match(self.dataset_id):
            raise ConfigError(
                f"dataset id {self.dataset_id!r} must match [a-z0-9_-]+")
        if self.kb_format not in ("tsv", "ntriples"):
            raise ConfigError(f"unknown kb format {self.kb_format!r}")
        if self.ne_threshold is not None and not 0.0 < self.ne_threshold <= 1.0:
            raise ConfigError("ne_threshold must be in (0, 1]")
        Iri(self.type_predicate)  # validates non-empty / no whitespace


@dataclass(frozen=True)
class PipelineDefaults:
    ne_threshold: float = 0.6
    top_k: int = 5
    top_m: int = 5
    stage2_rematch: bool = False
    stage2_threshold_factor: float = 0.75
    remote_timeout_s: float = 5.0


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str
    model: str
    api_key: Optional[str] = None
    timeout_s: float = 10.0
    retries: int = 1
    max_concurrency: int = 4
    template: Optional[str] = None


@dataclass(frozen=True)
class AppConfig:
    datasets: Tuple[DatasetDescriptor, ...] = ()
    defaults: PipelineDefaults = field(default_factory=PipelineDefaults)
    llm: Optional[LlmConfig] = None
    host: str = "127.0.0.1"
    port: int = 8000
    static_dir: Optional[str] = None


def resolve_settings(descriptor: DatasetDescriptor,
                     defaults: PipelineDefaults) -> Tuple[float, int, int]:
    """Effective (ne_threshold, top_k, top_m) for one dataset."""
    threshold = descriptor.ne_threshold
    if threshold is None:
        threshold = defaults.ne_threshold
    top_k = descriptor.top_k if descriptor.top_k is not None else defaults.top_k
    top_m = descriptor.top_m if descriptor.top_m is not None else defaults.top_m
    return threshold, top_k, top_m


def _check_keys(raw: Dict, allowed: set, context: str) -> None:
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(
            f"unknown {context} keys: {', '.join(sorted(unknown))}")


def _resolve_path(path: Optional[str], base_dir: Optional[Path]) -> Optional[str]:
    if path is None:
        return None
    p = Path(path)
    if not p.is_absolute() and base_dir is not None:
        p = base_dir / p
    return str(p)


def parse_service_binding(raw) -> ServiceBinding:
    if raw is None:
        return ServiceBinding()
    if isinstance(raw, str):
        # Shorthand: "in_process" or a remote url.
        if raw == TRANSPORT_IN_PROCESS:
            return ServiceBinding()
        return ServiceBinding(TRANSPORT_REMOTE, raw)
    if not isinstance(raw, dict):
        raise ConfigError("service binding must be a string or an object")
    _check_keys(raw, {"transport", "url"}, "service binding")
    return ServiceBinding(raw.get("transport", TRANSPORT_IN_PROCESS),
                          raw.get("url"))


def parse_descriptor(raw: Dict, base_dir: Optional[Path] = None) -> DatasetDescriptor:
    if not isinstance(raw, dict):
        raise ConfigError("dataset descriptor must be an object")
    allowed = {
        "dataset_id", "name", "kb_path", "kb_format", "language",
        "type_predicate", "ne_service", "re_service", "ne_threshold",
        "top_k", "top_m", "entity_alias_path", "predicate_alias_path",
    }
    _check_keys(raw, allowed, "dataset descriptor")
    for required in ("dataset_id", "name", "kb_path"):
        if required not in raw:
            raise ConfigError(f"dataset descriptor is missing {required!r}")
    return DatasetDescriptor(
        dataset_id=raw["dataset_id"],
        name=raw["name"],
        kb_path=_resolve_path(raw["kb_path"], base_dir),
        kb_format=raw.get("kb_format", "tsv"),
        language=raw.get("language", "en"),
        type_predicate=raw.get("type_predicate", DEFAULT_TYPE_PREDICATE),
        ne_service=parse_service_binding(raw.get("ne_service")),
        re_service=parse_service_binding(raw.get("re_service")),
        ne_threshold=raw.get("ne_threshold"),
        top_k=raw.get("top_k"),
        top_m=raw.get("top_m"),
        entity_alias_path=_resolve_path(raw.get("entity_alias_path"), base_dir),
        predicate_alias_path=_resolve_path(raw.get("predicate_alias_path"),
                                           base_dir),
    )


def descriptor_to_wire(descriptor: DatasetDescriptor) -> Dict:
    """JSON shape accepted by POST /datasets (paths must make sense to the
    server, so they are sent as-is)."""

    def binding(b: ServiceBinding):
        if b.transport == TRANSPORT_IN_PROCESS:
            return {"transport": b.transport}
        return {"transport": b.transport, "url": b.url}

    out = {
        "dataset_id": descriptor.dataset_id,
        "name": descriptor.name,
        "kb_path": descriptor.kb_path,
        "kb_format": descriptor.kb_format,
        "language": descriptor.language,
        "type_predicate": descriptor.type_predicate,
        "ne_service": binding(descriptor.ne_service),
        "re_service": binding(descriptor.re_service),
    }
    for key in ("ne_threshold", "top_k", "top_m", "entity_alias_path",
                "predicate_alias_path"):
        value = getattr(descriptor, key)
        if value is not None:
            out[key] = value
    return out


def parse_defaults(raw: Optional[Dict]) -> PipelineDefaults:
    if raw is None:
        return PipelineDefaults()
    _check_keys(raw, {"ne_threshold", "top_k", "top_m", "stage2_rematch",
                      "stage2_threshold_factor", "remote_timeout_s"},
                "defaults")
    base = PipelineDefaults()
    return PipelineDefaults(
        ne_threshold=raw.get("ne_threshold", base.ne_threshold),
        top_k=raw.get("top_k", base.top_k),
        top_m=raw.get("top_m", base.top_m),
        stage2_rematch=raw.get("stage2_rematch", base.stage2_rematch),
        stage2_threshold_factor=raw.get("stage2_threshold_factor",
                                        base.stage2_threshold_factor),
        remote_timeout_s=raw.get("remote_timeout_s", base.remote_timeout_s),
    )


def parse_llm(raw: Optional[Dict]) -> Optional[LlmConfig]:
    if raw is None:
        return None
    _check_keys(raw, {"endpoint", "model", "api_key", "timeout_s", "retries",
                      "max_concurrency", "template"}, "llm")
    for required in ("endpoint", "model"):
        if required not in raw:
            raise ConfigError(f"llm config is missing {required!r}")
    base = LlmConfig(endpoint=raw["endpoint"], model=raw["model"])
    return LlmConfig(
        endpoint=raw["endpoint"],
        model=raw["model"],
        api_key=raw.get("api_key"),
        timeout_s=raw.get("timeout_s", base.timeout_s),
        retries=raw.get("retries", base.retries),
        max_concurrency=raw.get("max_concurrency", base.max_concurrency),
        template=raw.get("template"),
    )


def parse_config(raw: Dict, base_dir: Optional[Path] = None) -> AppConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be an object")
    _check_keys(raw, {"datasets", "defaults", "llm", "host", "port",
                      "static_dir"}, "config")
    datasets = tuple(
        parse_descriptor(d, base_dir) for d in raw.get("datasets", [])
    )
    seen = set()
    for d in datasets:
        if d.dataset_id in seen:
            raise ConfigError(f"duplicate dataset id {d.dataset_id!r} in config")
        seen.add(d.dataset_id)
    return AppConfig(
        datasets=datasets,
        defaults=parse_defaults(raw.get("defaults")),
        llm=parse_llm(raw.get("llm")),
        host=raw.get("host", "127.0.0.1"),
        port=raw.get("port", 8000),
        static_dir=_resolve_path(raw.get("static_dir"), base_dir),
    )


def load_config(path) -> AppConfig:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
    return parse_config(raw, p.parent)


def load_descriptor(path) -> DatasetDescriptor:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
    return parse_descriptor(raw, p.parent)
