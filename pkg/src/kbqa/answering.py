"""Progressive three-stage answering.

Stage 1 executes the ranked candidate queries and returns the first
non-empty result (Exact). Stage 2 relaxes each candidate with containment
filters and retries in the same order (Approximate). Stage 3 hands the
question, the recognized mentions, and the attempted queries to a
configured language model (Llm) — always labeled unverified.

Every run produces a PipelineTrace documenting each intermediate product,
which is also the payload behind the HTTP trace flag.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import httpx

from . import remote
from .config import (DatasetDescriptor, LlmConfig, PipelineDefaults,
                     resolve_settings)
from .errors import LlmUnavailable, NoMatch, NoNodes, UnknownPlaceholder
from .graph import QueryGraph, build, graph_to_wire, mention_to_wire
from .matcher import CandidateQuery, build_query, match, match_all
from .nodes import Lexicon, MentionCandidate, extract_nodes, normalize
from .relations import PredicateDictionary, extract_relations
from .sparql import OrEquals, SparqlQuery, render
from .store import KbStats, ResultSet, TripleStore, execute
from .structure import SemanticStructure, parse
from .terms import Iri, Literal, Term, Variable

STAGE_EXACT = "exact"
STAGE_APPROXIMATE = "approximate"
STAGE_LLM = "llm"

PROMPT_PLACEHOLDERS = {"question", "dataset_name", "entities",
                       "attempted_queries"}

DEFAULT_PROMPT_TEMPLATE = """\
The knowledge base "{dataset_name}" could not answer the following question
with a verified query.

Question: {question}
Recognized mentions: {entities}
Queries that were attempted and returned nothing:
{attempted_queries}

Please answer from general knowledge in one short paragraph. State clearly
that this answer comes from a language model rather than the knowledge base
and may be unreliable."""


@dataclass
class DatasetRuntime:
    """Everything needed to answer questions for one registered dataset."""

    descriptor: DatasetDescriptor
    store: TripleStore
    lexicon: Lexicon
    pdict: PredicateDictionary
    stats: KbStats


@dataclass
class Answer:
    stage: str
    rows: Optional[ResultSet] = None
    llm_text: Optional[str] = None
    chosen_query: Optional[CandidateQuery] = None
    verified: bool = False


@dataclass
class PipelineTrace:
    question: str
    dataset_id: str
    structure: Optional[dict] = None
    mentions: List[dict] = field(default_factory=list)
    graph: Optional[dict] = None
    graph_with_candidates: Optional[dict] = None
    candidates: List[dict] = field(default_factory=list)
    stages: List[dict] = field(default_factory=list)
    llm: Optional[dict] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_payload(self) -> dict:
        out: dict = {
            "question": self.question,
            "dataset_id": self.dataset_id,
            "mentions": self.mentions,
            "candidates": self.candidates,
            "stages": self.stages,
            "timings": self.timings,
        }
        if self.structure is not None:
            out["structure"] = self.structure
        if self.graph is not None:
            out["graph"] = self.graph
        if self.graph_with_candidates is not None:
            out["graph_with_candidates"] = self.graph_with_candidates
        if self.llm is not None:
            out["llm"] = self.llm
        return out


# ---------------------------------------------------------------------------
# Serialization shared by the HTTP API and the CLI


def term_payload(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"kind": "iri", "text": term.text}
    if isinstance(term, Literal):
        return {"kind": "literal", "text": term.lexical}
    return {"kind": "variable", "text": term.name}


def rows_payload(rs: ResultSet) -> List[List[dict]]:
    return [[term_payload(t) for t in row] for row in rs.rows]


def answer_payload(answer: Answer,
                   trace: Optional[PipelineTrace] = None) -> dict:
    out: dict = {"stage": answer.stage, "verified": answer.verified}
    if answer.rows is not None:
        out["columns"] = list(answer.rows.columns)
        out["rows"] = rows_payload(answer.rows)
        if answer.rows.truth is not None and not answer.rows.columns:
            out["truth"] = answer.rows.truth
    if answer.llm_text is not None:
        out["llm_text"] = answer.llm_text
    if answer.chosen_query is not None:
        out["sparql"] = answer.chosen_query.text
        out["score"] = answer.chosen_query.score
    if trace is not None:
        out["trace"] = trace.to_payload()
    return out


# ---------------------------------------------------------------------------
# Approximate rewriting (stage 2)


def rewrite_approximate(candidate: CandidateQuery) -> SparqlQuery:
    """Relax fuzzy-linked and literal terms with OrEquals/contains filters.

    Each relaxed node's term is replaced by a fresh variable everywhere it
    occurs, tied back by FILTER(?r = term || CONTAINS(STR(?r), needle)) where
    the needle is the normalized surface mention (the literal value for
    Literal nodes). The equality disjunct makes the rewritten query's rows a
    superset of the original's. Nothing to relax returns the query unchanged.
    """
    grounded = candidate.grounded
    overrides: Dict[str, Variable] = {}
    filters: List[OrEquals] = []
    taken = set(grounded.var_names.values())
    for pattern in candidate.query.patterns:
        for term in pattern:
            if isinstance(term, Variable):
                taken.add(term.name)

    index = 0
    for node in grounded.graph.nodes:
        g = grounded.nodes[node.id]
        if g.term is None:
            continue
        relax = g.mode == "literal" or g.link_score < 1.0
        if not relax:
            continue
        while f"r{index}" in taken:
            index += 1
        var = Variable(f"r{index}")
        taken.add(var.name)
        overrides[node.id] = var
        if isinstance(g.term, Literal):
            needle = normalize(g.term.lexical)
        else:
            needle = normalize(node.mention.surface)
        filters.append(OrEquals(var.name, g.term, needle))

    if not overrides:
        return candidate.query
    return build_query(grounded, grounded.type_predicate, overrides, filters)


# ---------------------------------------------------------------------------
# LLM client (stage 3)


def build_llm_prompt(question: str, trace: PipelineTrace,
                     template: Optional[str] = None) -> str:
    """Deterministic placeholder substitution; unknown names are an error."""
    import re as _re

    text = template if template is not None else DEFAULT_PROMPT_TEMPLATE
    names = set(_re.findall(r"\{([A-Za-z_][A-Za-z0-9_]*)\}", text))
    unknown = names - PROMPT_PLACEHOLDERS
    if unknown:
        raise UnknownPlaceholder(
            f"unknown prompt placeholder(s): {', '.join(sorted(unknown))}")

    entities = ", ".join(
        f"{m['surface']} ({m['kind']})" for m in trace.mentions
    ) or "none"
    attempted: List[str] = []
    for stage in trace.stages:
        for attempt in stage.get("attempts", []):
            sparql = attempt.get("sparql")
            if sparql and sparql not in attempted:
                attempted.append(sparql)
    attempted_queries = "\n".join(attempted) or "none"

    values = {
        "question": question,
        "dataset_name": trace.dataset_id,
        "entities": entities,
        "attempted_queries": attempted_queries,
    }
    for name in PROMPT_PLACEHOLDERS:
        text = text.replace("{" + name + "}", values[name])
    return text


class LlmClient:
    """Minimal chat-completion client with retries and bounded concurrency."""

    def __init__(self, config: LlmConfig):
        self.config = config
        self._semaphore = threading.Semaphore(config.max_concurrency)

    def complete(self, prompt: str) -> str:
        cfg = self.config
        body = {"model": cfg.model,
                "messages": [{"role": "user", "content": prompt}]}
        headers = {}
        if cfg.api_key:
            headers["Authorization"] = f"Bearer {cfg.api_key}"
        last_error: Optional[LlmUnavailable] = None
        for _ in range(max(1, cfg.retries + 1)):
            try:
                with self._semaphore:
                    response = httpx.post(cfg.endpoint, json=body,
                                          headers=headers,
                                          timeout=cfg.timeout_s)
                if response.status_code // 100 != 2:
                    raise LlmUnavailable(
                        f"language model endpoint returned status "
                        f"{response.status_code}")
                data = response.json()
                content = data["choices"][0]["message"]["content"]
                if not isinstance(content, str):
                    raise LlmUnavailable(
                        "language model response content is not text")
                return content
            except LlmUnavailable as exc:
                last_error = exc
            except Exception as exc:
                last_error = LlmUnavailable(
                    f"language model request failed: {exc}")
        assert last_error is not None
        raise last_error


# ---------------------------------------------------------------------------
# The pipeline


def _route_ne(question: str, structure: SemanticStructure,
              runtime: DatasetRuntime, threshold: float,
              timeout: float) -> List[MentionCandidate]:
    binding = runtime.descriptor.ne_service
    if binding.transport == "remote":
        return remote.call_ne(binding.url, question,
                              runtime.descriptor.language, threshold, timeout)
    return extract_nodes(question, structure, runtime.lexicon, threshold)


def _route_re(question: str, structure: SemanticStructure, graph: QueryGraph,
              runtime: DatasetRuntime, top_m: int,
              timeout: float) -> QueryGraph:
    binding = runtime.descriptor.re_service
    if binding.transport == "remote":
        return remote.call_re(binding.url, question, graph, structure, top_m,
                              timeout)
    return extract_relations(structure, graph, runtime.pdict, runtime.store,
                             top_m)


def _candidate_entries(candidates: List[CandidateQuery]) -> List[dict]:
    return [{"sparql": c.text, "score": c.score, "verified": c.verified}
            for c in candidates]


def _attempt_entry(text: str, rs: ResultSet) -> dict:
    entry = {"sparql": text, "empty": not rs.truth}
    if rs.columns:
        entry["rows"] = rows_payload(rs)
    elif rs.truth is not None:
        entry["truth"] = rs.truth
    return entry


def _enumerate_candidates(graph: QueryGraph, store: TripleStore,
                          top_k: int) -> List[CandidateQuery]:
    """Verified top-k; when nothing verifies, the ranked unverified top-k
    (still useful for stages 1–2 and the trace); empty when even the raw
    enumeration is impossible."""
    try:
        return match(graph, store, top_k)
    except NoMatch:
        pass
    try:
        return match_all(graph, store, verify=False)[:top_k]
    except NoMatch:
        return []


def answer(question: str, runtime: DatasetRuntime,
           defaults: Optional[PipelineDefaults] = None,
           llm: Optional[LlmClient] = None,
           structure: Optional[SemanticStructure] = None
           ) -> Tuple[Answer, PipelineTrace]:
    """Run the full pipeline for one question against one dataset.

    A pre-parsed `structure` (e.g. ingested CoNLL-U) bypasses the heuristic
    parser. Raises LlmUnavailable (with .trace attached) when stages 1–2
    fail and the fallback model is missing or unreachable.
    """
    defaults = defaults or PipelineDefaults()
    threshold, top_k, top_m = resolve_settings(runtime.descriptor, defaults)
    trace = PipelineTrace(question=question,
                          dataset_id=runtime.descriptor.dataset_id)
    timings = trace.timings
    started = time.perf_counter()

    def mark(key: str, t0: float) -> float:
        t1 = time.perf_counter()
        timings[key] = (t1 - t0) * 1000.0
        return t1

    t = started
    if structure is None:
        structure = parse(question, runtime.descriptor.language)
    t = mark("parse_ms", t)
    trace.structure = remote.structure_to_wire(structure)

    mentions = _route_ne(question, structure, runtime, threshold,
                         defaults.remote_timeout_s)
    t = mark("ne_ms", t)
    trace.mentions = [mention_to_wire(m) for m in mentions]

    candidates: List[CandidateQuery] = []
    graph: Optional[QueryGraph] = None
    try:
        graph = build(structure, mentions)
        t = mark("graph_ms", t)
        trace.graph = graph_to_wire(graph)
        graph = _route_re(question, structure, graph, runtime, top_m,
                          defaults.remote_timeout_s)
        t = mark("re_ms", t)
        trace.graph_with_candidates = graph_to_wire(graph)
        candidates = _enumerate_candidates(graph, runtime.store, top_k)
    except (NoNodes, NoMatch):
        candidates = []
    t = mark("match_ms", t)
    trace.candidates = _candidate_entries(candidates)

    # Stage 1: exact.
    if candidates:
        attempts: List[dict] = []
        chosen: Optional[Answer] = None
        for candidate in candidates:
            rs = execute(runtime.store, candidate.query)
            attempts.append(_attempt_entry(candidate.text, rs))
            if rs.truth:
                chosen = Answer(STAGE_EXACT, rows=rs, chosen_query=candidate,
                                verified=True)
                break
        trace.stages.append({"stage": STAGE_EXACT, "attempts": attempts})
        t = mark("stage1_ms", t)
        if chosen is not None:
            timings["total_ms"] = (time.perf_counter() - started) * 1000.0
            return chosen, trace

        # Stage 2: approximate.
        if defaults.stage2_rematch and graph is not None:
            lowered = max(1e-9, threshold * defaults.stage2_threshold_factor)
            try:
                retry_mentions = _route_ne(question, structure, runtime,
                                           lowered, defaults.remote_timeout_s)
                retry_graph = build(structure, retry_mentions)
                retry_graph = _route_re(question, structure, retry_graph,
                                        runtime, top_m,
                                        defaults.remote_timeout_s)
                extra = _enumerate_candidates(retry_graph, runtime.store,
                                              top_k)
                known = {c.text for c in candidates}
                candidates = candidates + [c for c in extra
                                           if c.text not in known]
                trace.candidates = _candidate_entries(candidates)
            except (NoNodes, NoMatch):
                pass
        attempts = []
        chosen = None
        for candidate in candidates:
            rewritten = rewrite_approximate(candidate)
            text = render(rewritten)
            rs = execute(runtime.store, rewritten)
            attempts.append(_attempt_entry(text, rs))
            if rs.truth:
                relaxed = CandidateQuery(candidate.grounded, rewritten, text,
                                         candidate.score,
                                         candidate.verified)
                chosen = Answer(STAGE_APPROXIMATE, rows=rs,
                                chosen_query=relaxed, verified=True)
                break
        trace.stages.append({"stage": STAGE_APPROXIMATE, "attempts": attempts})
        t = mark("stage2_ms", t)
        if chosen is not None:
            timings["total_ms"] = (time.perf_counter() - started) * 1000.0
            return chosen, trace

    # Stage 3: language-model fallback.
    trace.llm = {"attempted": True}
    if llm is None:
        timings["total_ms"] = (time.perf_counter() - started) * 1000.0
        error = LlmUnavailable(
            "the knowledge base produced no answer and no fallback language "
            "model is configured")
        error.trace = trace
        raise error
    prompt = build_llm_prompt(question, trace, llm.config.template)
    trace.llm["endpoint"] = llm.config.endpoint
    trace.llm["prompt"] = prompt
    try:
        text = llm.complete(prompt)
    except LlmUnavailable as exc:
        timings["llm_ms"] = (time.perf_counter() - t) * 1000.0
        timings["total_ms"] = (time.perf_counter() - started) * 1000.0
        exc.trace = trace
        raise
    t = mark("llm_ms", t)
    trace.stages.append({"stage": STAGE_LLM, "attempts": []})
    timings["total_ms"] = (time.perf_counter() - started) * 1000.0
    return Answer(STAGE_LLM, llm_text=text, verified=False), trace
