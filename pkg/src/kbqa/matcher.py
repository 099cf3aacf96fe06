"""Grounding query graphs against a triple store.

Every combination of per-node groundings (entity links; classes both as a
class constraint and as individual instances; literals; variables) and
per-edge groundings (predicate candidates in both directions) becomes one
candidate query. Candidates are verified against the store, scored by the
sum of log link/predicate scores, and ranked.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .errors import NoMatch
from .graph import QueryGraph
from .nodes import Kind, normalize
from .sparql import Ask, Pattern, Select, SparqlQuery, render, with_limit
from .store import TripleStore, execute
from .terms import Iri, Literal, Term, Variable

MODE_ENTITY = "entity"
MODE_CLASS = "class"
MODE_INSTANCE = "instance"
MODE_LITERAL = "literal"
MODE_VARIABLE = "variable"

# A class used in instance mode carries less evidence than its direct
# class-constraint reading, so the link score is discounted.
INSTANCE_DISCOUNT = 0.9

DEFAULT_TOP_K = 5

_NAME_OK = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class NodeGrounding:
    mode: str
    link_score: float
    term: Optional[Term] = None  # None only for variable mode
    class_iri: Optional[Iri] = None  # instance mode: the class it came from


@dataclass(frozen=True)
class EdgeGrounding:
    predicate: Iri
    flipped: bool  # true: edge.b is the subject, edge.a the object
    score: float


@dataclass
class GroundedGraph:
    graph: QueryGraph
    nodes: Dict[str, NodeGrounding]
    edges: Dict[str, EdgeGrounding]
    var_names: Dict[str, str]
    type_predicate: Iri


@dataclass
class CandidateQuery:
    grounded: GroundedGraph
    query: SparqlQuery
    text: str
    score: float
    verified: bool = False


def _sanitize(surface: str) -> str:
    name = normalize(surface)
    name = "".join(ch if ch.isalnum() or ch == " " else " " for ch in name)
    name = "_".join(name.split())
    if not name:
        return "x"
    if name[0].isdigit():
        name = "v" + name
    if not _NAME_OK.match(name):
        return "x"
    return name


def _variable_names(graph: QueryGraph,
                    groundings: Dict[str, NodeGrounding]) -> Dict[str, str]:
    """Deterministic SPARQL variable names for variable and class nodes."""
    names: Dict[str, str] = {}
    used: set = set()
    for node in graph.nodes:
        grounding = groundings[node.id]
        if node.kind != Kind.VARIABLE and grounding.mode != MODE_CLASS:
            continue
        base = "x" if node.mention.synthetic else _sanitize(node.mention.surface)
        name, counter = base, 1
        while name in used:
            counter += 1
            name = f"{base}_{counter}"
        used.add(name)
        names[node.id] = name
    return names


def fresh_variable(prefix: str, taken: set) -> Variable:
    """`prefix` itself if free, else prefix0, prefix1, ..."""
    name = prefix
    counter = 0
    while name in taken:
        name = f"{prefix}{counter}"
        counter += 1
    taken.add(name)
    return Variable(name)


def build_query(grounded: GroundedGraph, type_predicate: Iri,
                overrides: Optional[Dict[str, Variable]] = None,
                extra_filters: Sequence = ()) -> SparqlQuery:
    """Render a grounded graph as a query.

    `overrides` replaces a node's grounded term everywhere it would appear
    (including the object slot of collapsed class constraints) with the given
    variable; the caller pairs each override with a filter.
    """
    graph = grounded.graph
    groundings = grounded.nodes
    names = grounded.var_names
    overrides = overrides or {}

    def node_term(node_id: str, position: str, predicate: Iri) -> Term:
        g = groundings[node_id]
        if g.mode == MODE_VARIABLE:
            return Variable(names[node_id])
        if g.mode == MODE_CLASS:
            collapse = predicate == type_predicate and position == "object"
            if collapse:
                return overrides.get(node_id, g.term)
            return Variable(names[node_id])
        return overrides.get(node_id, g.term)

    patterns: List[Pattern] = []
    for edge in graph.edges:
        eg = grounded.edges[edge.id]
        sub_id, obj_id = (edge.b, edge.a) if eg.flipped else (edge.a, edge.b)
        patterns.append((
            node_term(sub_id, "subject", eg.predicate),
            eg.predicate,
            node_term(obj_id, "object", eg.predicate),
        ))

    # Class membership constraints for class-mode nodes whose structural
    # variable actually appears somewhere.
    used_vars = {t.name for p in patterns for t in p if isinstance(t, Variable)}
    for node in graph.nodes:
        g = groundings[node.id]
        if g.mode == MODE_CLASS and names.get(node.id) in used_vars:
            patterns.append((
                Variable(names[node.id]),
                type_predicate,
                overrides.get(node.id, g.term),
            ))

    target = graph.target
    target_var = Variable(names[target.id])

    if not patterns:
        # Degenerate single-node graph: keep the query well-formed with a
        # wildcard guard so the projected variable occurs.
        taken = set(names.values()) | {target_var.name}
        patterns.append((target_var, fresh_variable("p", taken),
                         fresh_variable("o", taken)))

    ask = target.mention.synthetic and all(
        n.kind != Kind.VARIABLE for n in graph.nodes if n.id != target.id
    )
    form = Ask() if ask else Select((target_var.name,), distinct=True)
    return SparqlQuery(form=form, patterns=tuple(patterns),
                       filters=tuple(extra_filters))


def _node_options(node, store: TripleStore) -> List[NodeGrounding]:
    kind = node.kind
    if kind == Kind.ENTITY:
        return [NodeGrounding(MODE_ENTITY, score, iri)
                for iri, score in node.mention.links]
    if kind == Kind.TYPE:
        options: List[NodeGrounding] = []
        for class_iri, score in node.mention.links:
            options.append(NodeGrounding(MODE_CLASS, score, class_iri,
                                         class_iri))
            options.extend(
                NodeGrounding(MODE_INSTANCE, score, instance, class_iri)
                for instance in store.instances_of(class_iri)
            )
        return options
    if kind == Kind.LITERAL:
        value = node.mention.literal_value
        if value is None:
            value = node.mention.surface
        return [NodeGrounding(MODE_LITERAL, 1.0, Literal(value))]
    return [NodeGrounding(MODE_VARIABLE, 1.0)]


def _score(grounded: GroundedGraph) -> float:
    total = 0.0
    for g in grounded.nodes.values():
        if g.mode in (MODE_ENTITY, MODE_CLASS):
            total += math.log(g.link_score)
        elif g.mode == MODE_INSTANCE:
            total += math.log(INSTANCE_DISCOUNT * g.link_score)
    for eg in grounded.edges.values():
        total += math.log(eg.score)
    return total


def prune(graph: QueryGraph) -> QueryGraph:
    """Drop edges without candidates, then everything outside the target's
    connected component. Raises NoMatch when only unconstrained variables
    remain."""
    kept = [e for e in graph.edges if e.candidates]
    adjacency: Dict[str, List] = {}
    for e in kept:
        adjacency.setdefault(e.a, []).append(e)
        adjacency.setdefault(e.b, []).append(e)
    component = {graph.target_id}
    frontier = [graph.target_id]
    edge_ids = set()
    while frontier:
        node_id = frontier.pop()
        for e in adjacency.get(node_id, []):
            edge_ids.add(e.id)
            other = e.b if e.a == node_id else e.a
            if other not in component:
                component.add(other)
                frontier.append(other)
    nodes = tuple(n for n in graph.nodes if n.id in component)
    edges = tuple(e for e in kept if e.id in edge_ids)
    if all(n.kind == Kind.VARIABLE for n in nodes):
        raise NoMatch(
            "no query-graph node could be grounded in the knowledge base")
    return QueryGraph(nodes, edges, graph.target_id)


def _ground_edges_hold(store: TripleStore, query: SparqlQuery) -> bool:
    for s, p, o in query.patterns:
        if isinstance(s, Variable) or isinstance(p, Variable) \
                or isinstance(o, Variable):
            continue
        if not store.contains(s, p, o):
            return False
    return True


def _dedupe_key(grounded: GroundedGraph) -> tuple:
    node_part = tuple(
        (node_id, g.mode,
         g.term.text if isinstance(g.term, Iri) else
         g.term.lexical if isinstance(g.term, Literal) else "",
         g.class_iri.text if g.class_iri else "")
        for node_id, g in sorted(grounded.nodes.items())
    )
    edge_part = tuple(
        (edge_id, eg.predicate.text, eg.flipped)
        for edge_id, eg in sorted(grounded.edges.items())
    )
    return node_part + edge_part


def match_all(graph: QueryGraph, store: TripleStore,
              verify: bool = True) -> List[CandidateQuery]:
    """Enumerate, optionally verify, score, and rank all candidate queries.

    With verify=True only candidates whose ground edges exist and whose
    query returns at least one result survive. With verify=False the raw
    enumeration is ranked without touching the store.
    """
    pruned = prune(graph)
    node_ids = [n.id for n in pruned.nodes]
    edge_ids = [e.id for e in pruned.edges]
    node_opts = [_node_options(n, store) for n in pruned.nodes]
    edge_opts = [
        [EdgeGrounding(pred, flipped, score)
         for pred, score in e.candidates for flipped in (False, True)]
        for e in pruned.edges
    ]
    if any(not opts for opts in node_opts) or any(not opts for opts in edge_opts):
        return []

    out: List[CandidateQuery] = []
    seen: set = set()
    for combo in itertools.product(*(node_opts + edge_opts)):
        node_g = dict(zip(node_ids, combo[:len(node_ids)]))
        edge_g = dict(zip(edge_ids, combo[len(node_ids):]))
        grounded = GroundedGraph(pruned, node_g, edge_g,
                                 _variable_names(pruned, node_g),
                                 store.type_predicate)
        key = _dedupe_key(grounded)
        if key in seen:
            continue
        seen.add(key)
        query = build_query(grounded, store.type_predicate)
        verified = False
        if verify:
            if not _ground_edges_hold(store, query):
                continue
            probe = execute(store, with_limit(query, 1))
            if not probe.truth:
                continue
            verified = True
        out.append(CandidateQuery(grounded, query, render(query),
                                  _score(grounded), verified))
    out.sort(key=lambda c: (-c.score, c.text))
    return out


def match(graph: QueryGraph, store: TripleStore,
          k: int = DEFAULT_TOP_K) -> List[CandidateQuery]:
    """Top-k verified candidates; raises NoMatch when none verify."""
    candidates = match_all(graph, store, verify=True)
    if not candidates:
        raise NoMatch("no candidate query is satisfiable in the knowledge base")
    return candidates[:k]
