"""Remote NE/RE service protocol.

A dataset may delegate node extraction or relation extraction to an external
HTTP service. Both directions of the protocol live here: thin clients used
by the answering pipeline, and a FastAPI app factory that wraps the
in-process implementations so any dataset can be served out-of-process.
"""

from __future__ import annotations

from typing import List

import httpx

from .errors import RemoteServiceUnavailable
from .graph import (QueryGraph, graph_from_wire, graph_to_wire,
                    mention_from_wire, mention_to_wire)
from .nodes import MentionCandidate
from .relations import apply_relation_wire, extract_relations, relation_wire
from .structure import ROOT, SemanticStructure, Token


def structure_to_wire(s: SemanticStructure) -> dict:
    return {
        "text": s.text,
        "tokens": [
            {"index": t.index, "text": t.text, "head": t.head,
             "span": [t.span[0], t.span[1]]}
            for t in s.tokens
        ],
    }


def structure_from_wire(d: dict) -> SemanticStructure:
    tokens = []
    cursor = 0
    for td in d["tokens"]:
        if "span" in td:
            span = (int(td["span"][0]), int(td["span"][1]))
        else:
            span = (cursor, cursor + len(td["text"]))
        cursor = span[1] + 1
        tokens.append(Token(int(td["index"]), td["text"],
                            int(td.get("head", ROOT)), span))
    text = d.get("text")
    if text is None:
        text = " ".join(t.text for t in tokens)
    return SemanticStructure(text, tuple(tokens))


def _post(url: str, payload: dict, timeout: float) -> dict:
    try:
        response = httpx.post(url, json=payload, timeout=timeout)
    except Exception as exc:
        raise RemoteServiceUnavailable(
            f"remote service at {url} unreachable: {exc}") from exc
    if response.status_code // 100 != 2:
        raise RemoteServiceUnavailable(
            f"remote service at {url} returned status {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise RemoteServiceUnavailable(
            f"remote service at {url} returned a non-JSON body") from exc


def call_ne(url: str, question: str, language: str, threshold: float,
            timeout: float = 5.0) -> List[MentionCandidate]:
    payload = {"question": question, "language": language,
               "threshold": threshold}
    data = _post(url, payload, timeout)
    try:
        return [mention_from_wire(m) for m in data["mentions"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteServiceUnavailable(
            f"remote NE service at {url} returned a malformed payload: {exc}"
        ) from exc


def call_re(url: str, question: str, graph: QueryGraph,
            structure: SemanticStructure, top_m: int,
            timeout: float = 5.0) -> QueryGraph:
    payload = {
        "question": question,
        "graph": graph_to_wire(graph),
        "structure": structure_to_wire(structure),
        "top_m": top_m,
    }
    data = _post(url, payload, timeout)
    try:
        return apply_relation_wire(graph, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteServiceUnavailable(
            f"remote RE service at {url} returned a malformed payload: {exc}"
        ) from exc


def build_service_app(runtime, default_threshold: float = 0.6,
                      default_top_m: int = 5):
    """FastAPI app exposing one dataset's NE and RE over the wire protocol.

    `runtime` carries the dataset's store, lexicon, and predicate dictionary
    (see answering.DatasetRuntime); the endpoints simply wrap the in-process
    extractors, which is also how the remote/in-process equivalence property
    is tested.
    """
    from fastapi import FastAPI

    from .nodes import extract_nodes
    from .structure import parse

    app = FastAPI(title=f"kbqa services: {runtime.descriptor.dataset_id}")

    @app.post("/ne")
    def ne(body: dict):
        question = body["question"]
        language = body.get("language", runtime.descriptor.language)
        threshold = float(body.get("threshold", default_threshold))
        structure = parse(question, language)
        mentions = extract_nodes(question, structure, runtime.lexicon,
                                 threshold)
        return {"mentions": [mention_to_wire(m) for m in mentions]}

    @app.post("/re")
    def re_(body: dict):
        graph = graph_from_wire(body["graph"])
        structure = structure_from_wire(body["structure"])
        top_m = int(body.get("top_m", default_top_m))
        enriched = extract_relations(structure, graph, runtime.pdict,
                                     runtime.store, top_m)
        return relation_wire(enriched)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    return app


def binding_urls(base_url: str) -> tuple:
    """(NE url, RE url) for a service app mounted at base_url."""
    base = base_url.rstrip("/")
    return f"{base}/ne", f"{base}/re"


def is_remote(binding) -> bool:
    return getattr(binding, "transport", None) == "remote"


def mentions_payload(mentions: List[MentionCandidate]) -> List[dict]:
    return [mention_to_wire(m) for m in mentions]


__all__ = [
    "call_ne", "call_re", "build_service_app", "binding_urls",
    "structure_to_wire", "structure_from_wire", "mentions_payload",
    "is_remote",
]
