"""Edge-to-predicate mapping.

Each query-graph edge gets a ranked candidate list of KB predicates from
three strategies, tried in order of how much syntactic evidence they use:

A. the lowest common ancestor of the two anchors (and the LCA joined with
   its phrase-token dependents) looked up in the predicate dictionary;
B. individual phrase tokens, their immediate tree neighbours, and short
   consecutive n-grams of the phrase, looked up at a 0.9 discount;
C. when A and B produce nothing: every predicate that actually connects the
   two endpoints' plausible groundings in the store, at a flat 0.5.

Scores from multiple hits on the same predicate keep the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graph import QueryGraph, QueryNode, with_candidates
from .nodes import Kind, normalize
from .store import TripleStore
from .structure import SemanticStructure, lowest_common_ancestor
from .terms import Iri, Literal, Term, local_name

NEIGHBOR_DISCOUNT = 0.9
FALLBACK_SCORE = 0.5
MAX_PHRASE_NGRAM = 3


@dataclass
class PredicateDictionary:
    """Normalized phrase -> weighted predicate IRIs.

    Built from the store's predicate local names (weight 1.0) plus optional
    alias rows (phrase <tab> iri [<tab> weight], default weight 0.9).
    """

    entries: Dict[str, Tuple[Tuple[Iri, float], ...]] = field(default_factory=dict)

    def lookup(self, phrase: str) -> Tuple[Tuple[Iri, float], ...]:
        return self.entries.get(normalize(phrase), ())

    def add(self, phrase: str, iri: Iri, weight: float) -> None:
        key = normalize(phrase)
        if not key:
            return
        current = dict(self.entries.get(key, ()))
        if weight > current.get(iri, 0.0):
            current[iri] = weight
        self.entries[key] = tuple(
            sorted(current.items(), key=lambda kv: (-kv[1], kv[0].text))
        )


def read_predicate_aliases(source) -> List[Tuple[str, Iri, float]]:
    """Parse alias rows: phrase <tab> predicate-iri [<tab> weight]."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows: List[Tuple[str, Iri, float]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 2:
            phrase, iri = parts
            weight = 0.9
        elif len(parts) == 3:
            phrase, iri, weight_text = parts
            weight = float(weight_text)
        else:
            continue
        rows.append((phrase, Iri(iri), weight))
    return rows


def build_predicate_dictionary(
    store: TripleStore,
    aliases: Optional[Iterable[Tuple[str, Iri, float]]] = None,
) -> PredicateDictionary:
    pdict = PredicateDictionary()
    for predicate in sorted(store.predicates, key=lambda i: i.text):
        pdict.add(local_name(predicate), predicate, 1.0)
    for phrase, iri, weight in aliases or ():
        pdict.add(phrase, iri, weight)
    return pdict


def _merge(into: Dict[Iri, float], hits: Iterable[Tuple[Iri, float]],
           factor: float = 1.0) -> None:
    for iri, weight in hits:
        score = weight * factor
        if score > into.get(iri, 0.0):
            into[iri] = score


def _strategy_a(s: SemanticStructure, edge_phrase: Sequence[int],
                anchor_a: int, anchor_b: int,
                pdict: PredicateDictionary) -> Dict[Iri, float]:
    found: Dict[Iri, float] = {}
    lca = lowest_common_ancestor(s, anchor_a, anchor_b)
    _merge(found, pdict.lookup(s.tokens[lca].text))
    phrase_set = set(edge_phrase)
    dependents = [i for i in s.children(lca) if i in phrase_set]
    for dep in dependents:
        joined = " ".join(s.tokens[i].text for i in sorted((lca, dep)))
        _merge(found, pdict.lookup(joined))
    return found


def _strategy_b(s: SemanticStructure, edge_phrase: Sequence[int],
                pdict: PredicateDictionary) -> Dict[Iri, float]:
    found: Dict[Iri, float] = {}
    token_pool = set(edge_phrase)
    for i in edge_phrase:
        token_pool.update(s.neighbors(i))
    for i in sorted(token_pool):
        _merge(found, pdict.lookup(s.tokens[i].text), NEIGHBOR_DISCOUNT)
    phrase = sorted(edge_phrase)
    for n in range(2, MAX_PHRASE_NGRAM + 1):
        for start in range(len(phrase) - n + 1):
            window = phrase[start:start + n]
            if window != list(range(window[0], window[0] + n)):
                continue  # only consecutive token runs
            text = " ".join(s.tokens[i].text for i in window)
            _merge(found, pdict.lookup(text), NEIGHBOR_DISCOUNT)
    return found


def _grounding_terms(node: QueryNode, store: TripleStore) -> List[Term]:
    """Plausible KB terms a node could stand for, used by strategy C."""
    terms: List[Term] = []
    if node.kind == Kind.ENTITY:
        terms.extend(iri for iri, _ in node.mention.links)
    elif node.kind == Kind.TYPE:
        for class_iri, _ in node.mention.links:
            terms.append(class_iri)
            terms.extend(store.instances_of(class_iri))
    elif node.kind == Kind.LITERAL:
        value = node.mention.literal_value
        if value is None:
            value = node.mention.surface
        terms.append(Literal(value))
    return terms  # Variable nodes ground to anything: empty == wildcard


def _strategy_c(node_a: QueryNode, node_b: QueryNode,
                store: TripleStore) -> Dict[Iri, float]:
    found: Dict[Iri, float] = {}
    terms_a = _grounding_terms(node_a, store)
    terms_b = _grounding_terms(node_b, store)

    def connecting(subjects: List[Term], objects: List[Term]) -> Iterable[Iri]:
        sub_opts: List[Optional[Term]] = list(subjects) or [None]
        obj_opts: List[Optional[Term]] = list(objects) or [None]
        for sub in sub_opts:
            if isinstance(sub, Literal):
                continue  # literals never appear in subject position
            for obj in obj_opts:
                for triple in store.match(sub, None, obj):
                    yield triple.predicate

    _merge(found, ((p, FALLBACK_SCORE)
                   for p in connecting(terms_a, terms_b)))
    _merge(found, ((p, FALLBACK_SCORE)
                   for p in connecting(terms_b, terms_a)))
    return found


def candidates_for_edge(s: SemanticStructure, g: QueryGraph, edge_id: str,
                        pdict: PredicateDictionary, store: TripleStore,
                        top_m: int = 5) -> Tuple[Tuple[Iri, float], ...]:
    edge = next(e for e in g.edges if e.id == edge_id)
    node_a, node_b = g.node(edge.a), g.node(edge.b)
    found = _strategy_a(s, edge.phrase_tokens, node_a.anchor, node_b.anchor,
                        pdict)
    _merge(found, _strategy_b(s, edge.phrase_tokens, pdict).items())
    if not found:
        found = _strategy_c(node_a, node_b, store)
    ranked = sorted(found.items(), key=lambda kv: (-kv[1], kv[0].text))
    return tuple(ranked[:top_m])


def extract_relations(s: SemanticStructure, g: QueryGraph,
                      pdict: PredicateDictionary, store: TripleStore,
                      top_m: int = 5) -> QueryGraph:
    """Return a copy of the graph with every edge's candidate list filled."""
    by_edge: Dict[str, Tuple[Tuple[Iri, float], ...]] = {}
    for edge in g.edges:
        by_edge[edge.id] = candidates_for_edge(s, g, edge.id, pdict, store,
                                               top_m)
    return with_candidates(g, by_edge)


def relation_wire(g: QueryGraph) -> dict:
    """The {edges: [{id, candidates}]} payload of the RE wire protocol."""
    return {
        "edges": [
            {
                "id": e.id,
                "candidates": [
                    {"predicate": p.text, "score": score}
                    for p, score in e.candidates
                ],
            }
            for e in g.edges
        ]
    }


def apply_relation_wire(g: QueryGraph, payload: Mapping) -> QueryGraph:
    by_edge = {
        ed["id"]: tuple(
            (Iri(c["predicate"]), float(c["score"]))
            for c in ed.get("candidates", [])
        )
        for ed in payload.get("edges", [])
    }
    return with_candidates(g, by_edge)
