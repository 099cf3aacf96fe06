"""Multi-tenant registry and the public HTTP API.

Each dataset registers a descriptor; the registry loads its KB and builds
the in-process lexicon/predicate dictionary, then answers /ask requests by
routing NE/RE through the dataset's configured bindings. The registry is a
copy-on-write snapshot: readers never observe a half-built dataset, and
registering one dataset can never change answers for another.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Dict, Optional

from .answering import DatasetRuntime, LlmClient, answer, answer_payload
from .config import (AppConfig, DatasetDescriptor, load_config,
                     parse_descriptor)
from .errors import (DatasetNotFound, DuplicateId, KbqaError, ParseError)
from .nodes import build_lexicon, read_alias_tsv
from .relations import build_predicate_dictionary, read_predicate_aliases
from .store import load_triples, stats

STATUS_BY_CODE = {
    "PARSE_ERROR": 400,
    "DATASET_NOT_FOUND": 404,
    "DUPLICATE_ID": 409,
    "NO_MATCH": 422,
    "LLM_UNAVAILABLE": 502,
    "REMOTE_SERVICE_UNAVAILABLE": 502,
    "INTERNAL": 500,
}


def build_runtime(descriptor: DatasetDescriptor) -> DatasetRuntime:
    """Load the KB and build the dataset's in-process components."""
    kb_path = Path(descriptor.kb_path)
    try:
        data = kb_path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read kb file {kb_path}: {exc}") from exc
    store = load_triples(data, descriptor.kb_format, descriptor.dataset_id,
                         descriptor.type_predicate)
    entity_aliases = None
    if descriptor.entity_alias_path:
        entity_aliases = read_alias_tsv(
            Path(descriptor.entity_alias_path).read_bytes())
    lexicon = build_lexicon(store, entity_aliases, descriptor.language)
    predicate_aliases = None
    if descriptor.predicate_alias_path:
        predicate_aliases = read_predicate_aliases(
            Path(descriptor.predicate_alias_path).read_bytes())
    pdict = build_predicate_dictionary(store, predicate_aliases)
    return DatasetRuntime(descriptor, store, lexicon, pdict, stats(store))


class Registry:
    """dataset_id -> DatasetRuntime with atomic snapshot swaps."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._snapshot: Dict[str, DatasetRuntime] = {}

    def snapshot(self) -> Dict[str, DatasetRuntime]:
        return self._snapshot

    def get(self, dataset_id: str) -> DatasetRuntime:
        runtime = self._snapshot.get(dataset_id)
        if runtime is None:
            raise DatasetNotFound(f"dataset {dataset_id!r} is not registered")
        return runtime

    def register(self, descriptor: DatasetDescriptor) -> str:
        # Build outside the lock so a slow KB load never blocks readers,
        # then swap in a fresh dict (readers hold the old snapshot).
        runtime = build_runtime(descriptor)
        with self._lock:
            if descriptor.dataset_id in self._snapshot:
                raise DuplicateId(
                    f"dataset {descriptor.dataset_id!r} is already registered")
            snapshot = dict(self._snapshot)
            snapshot[descriptor.dataset_id] = runtime
            self._snapshot = snapshot
        return descriptor.dataset_id

    def deregister(self, dataset_id: str) -> None:
        with self._lock:
            if dataset_id not in self._snapshot:
                raise DatasetNotFound(
                    f"dataset {dataset_id!r} is not registered")
            snapshot = dict(self._snapshot)
            del snapshot[dataset_id]
            self._snapshot = snapshot


def dataset_summary(runtime: DatasetRuntime) -> dict:
    return {
        "dataset_id": runtime.descriptor.dataset_id,
        "name": runtime.descriptor.name,
        "language": runtime.descriptor.language,
        "stats": {
            "triples": runtime.stats.triples,
            "entities": runtime.stats.entities,
            "predicates": runtime.stats.predicates,
        },
    }


def build_app(registry: Registry, config: Optional[AppConfig] = None):
    """The public FastAPI app over a registry."""
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse

    config = config or AppConfig()
    llm = LlmClient(config.llm) if config.llm else None
    app = FastAPI(title="kbqa gateway")

    def error_response(exc: KbqaError) -> JSONResponse:
        status = STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code,
                                               "message": str(exc)}})

    @app.exception_handler(KbqaError)
    async def _kbqa_error(request: Request, exc: KbqaError):
        return error_response(exc)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/datasets")
    def list_datasets():
        snapshot = registry.snapshot()
        return [dataset_summary(snapshot[k]) for k in sorted(snapshot)]

    @app.post("/datasets", status_code=201)
    def register_dataset(body: dict):
        descriptor = parse_descriptor(body)
        return {"dataset_id": registry.register(descriptor)}

    @app.delete("/datasets/{dataset_id}")
    def deregister_dataset(dataset_id: str):
        registry.deregister(dataset_id)
        return {"dataset_id": dataset_id, "deleted": True}

    @app.post("/ask")
    def ask(body: dict):
        dataset_id = body.get("dataset")
        question = body.get("question")
        if not isinstance(dataset_id, str) or not isinstance(question, str):
            raise ParseError("/ask body needs string fields "
                             "'dataset' and 'question'")
        want_trace = bool(body.get("trace", False))
        runtime = registry.get(dataset_id)
        result, trace = answer(question, runtime, defaults=config.defaults,
                               llm=llm)
        return answer_payload(result, trace if want_trace else None)

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="console")

    return app


def app_from_config(config: AppConfig):
    """Registry pre-seeded from config plus the app over it."""
    registry = Registry()
    for descriptor in config.datasets:
        registry.register(descriptor)
    return registry, build_app(registry, config)


def serve(config: AppConfig) -> None:
    import uvicorn

    _, app = app_from_config(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


def load_app(config_path) -> tuple:
    config = load_config(config_path)
    return app_from_config(config)
