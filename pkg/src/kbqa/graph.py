"""Query graph construction over the mention set and the head tree.

Nodes are mentions (plus a synthesized target variable when the question has
no wh-word); edges come from walking the undirected head tree outward from
each discovered node without crossing another node's anchor. The tokens
strictly between two anchors become the edge's phrase, later consumed by
relation extraction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from .errors import NoNodes
from .nodes import Kind, MentionCandidate
from .structure import SemanticStructure, tree_path
from .terms import Iri


@dataclass(frozen=True)
class QueryNode:
    id: str
    mention: MentionCandidate
    anchor: int  # token index
    is_target: bool = False

    @property
    def kind(self) -> Kind:
        return self.mention.kind


@dataclass(frozen=True)
class QueryEdge:
    id: str
    a: str  # node id
    b: str  # node id
    phrase_tokens: Tuple[int, ...]
    candidates: Tuple[Tuple[Iri, float], ...] = ()


@dataclass(frozen=True)
class QueryGraph:
    nodes: Tuple[QueryNode, ...]
    edges: Tuple[QueryEdge, ...]
    target_id: str

    def node(self, node_id: str) -> QueryNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    @property
    def target(self) -> QueryNode:
        return self.node(self.target_id)

    def edges_of(self, node_id: str) -> List[QueryEdge]:
        return [e for e in self.edges if node_id in (e.a, e.b)]


def _anchor_token(s: SemanticStructure, mention: MentionCandidate) -> int:
    """Head-most token whose span intersects the mention span (leftmost on
    depth ties)."""
    start, end = mention.span
    covered = [t.index for t in s.tokens
               if t.span[0] < end and start < t.span[1]]
    if not covered:
        # Fall back to the token containing (or nearest after) the start.
        best = min(s.tokens, key=lambda t: (abs(t.span[0] - start), t.index))
        return best.index
    return min(covered, key=lambda i: (s.depth(i), i))


def select_target(mentions: List[MentionCandidate],
                  s: SemanticStructure) -> MentionCandidate:
    """The leftmost Variable mention; if none, a synthesized Variable
    anchored at the root token."""
    for m in sorted(mentions, key=lambda m: m.span):
        if m.kind == Kind.VARIABLE:
            return m
    root = s.tokens[s.root()]
    return MentionCandidate(span=root.span, surface=root.text,
                            kind=Kind.VARIABLE, synthetic=True)


def _discover(s: SemanticStructure, start: int, anchors: Dict[int, List[str]],
              own_id: str) -> List[str]:
    """Node ids whose anchors are first reached walking the undirected tree
    from `start`, never crossing an anchor. Ascending token order."""
    found: List[str] = []
    for other in anchors.get(start, []):
        if other != own_id:
            found.append(other)
    seen = {start}
    stack = [start]
    while stack:
        current = stack.pop()
        for nb in sorted(s.neighbors(current), reverse=True):
            if nb in seen:
                continue
            seen.add(nb)
            owners = [v for v in anchors.get(nb, []) if v != own_id]
            if owners:
                found.extend(owners)
                continue  # an anchor blocks further traversal
            stack.append(nb)
    return found


def build(s: SemanticStructure, mentions: List[MentionCandidate]) -> QueryGraph:
    """Connect mentions into a query graph (see module docstring).

    Raises NoNodes when the mention list is empty and no target was
    synthesized upstream.
    """
    if not mentions:
        raise NoNodes("cannot build a query graph without mentions")

    ordered = sorted(mentions, key=lambda m: (m.span, m.kind.value))
    target_mention = select_target(list(ordered), s)
    if target_mention.synthetic:
        ordered = list(ordered) + [target_mention]

    nodes: List[QueryNode] = []
    anchors: Dict[int, List[str]] = {}
    target_id: Optional[str] = None
    for i, mention in enumerate(ordered):
        node_id = f"n{i}"
        is_target = mention == target_mention and target_id is None
        anchor = _anchor_token(s, mention)
        nodes.append(QueryNode(node_id, mention, anchor, is_target))
        anchors.setdefault(anchor, []).append(node_id)
        if is_target:
            target_id = node_id
    assert target_id is not None

    by_id = {n.id: n for n in nodes}
    edges: List[QueryEdge] = []
    edge_pairs = set()
    enqueued = {target_id}
    queue = deque([target_id])
    while queue:
        u = queue.popleft()
        for v in _discover(s, by_id[u].anchor, anchors, u):
            pair = frozenset((u, v))
            if pair not in edge_pairs:
                edge_pairs.add(pair)
                path = tree_path(s, by_id[u].anchor, by_id[v].anchor)
                interior = tuple(path[1:-1]) if len(path) > 2 else ()
                edges.append(QueryEdge(f"e{len(edges)}", u, v, interior))
            if v not in enqueued:
                enqueued.add(v)
                queue.append(v)

    return QueryGraph(tuple(nodes), tuple(edges), target_id)


# ---------------------------------------------------------------------------
# Wire serialization (shared by the remote RE protocol and traces)


def mention_to_wire(m: MentionCandidate) -> dict:
    out = {
        "span": [m.span[0], m.span[1]],
        "surface": m.surface,
        "kind": m.kind.value,
        "links": [{"iri": iri.text, "score": score} for iri, score in m.links],
    }
    if m.literal_value is not None:
        out["literal_value"] = m.literal_value
    if m.synthetic:
        out["synthetic"] = True
    return out


def mention_from_wire(d: dict) -> MentionCandidate:
    return MentionCandidate(
        span=(int(d["span"][0]), int(d["span"][1])),
        surface=d["surface"],
        kind=Kind(d["kind"]),
        links=tuple((Iri(link["iri"]), float(link["score"]))
                    for link in d.get("links", [])),
        literal_value=d.get("literal_value"),
        synthetic=bool(d.get("synthetic", False)),
    )


def graph_to_wire(g: QueryGraph) -> dict:
    return {
        "nodes": [
            {
                "id": n.id,
                "anchor": n.anchor,
                "is_target": n.is_target,
                **mention_to_wire(n.mention),
            }
            for n in g.nodes
        ],
        "edges": [
            {
                "id": e.id,
                "nodes": [e.a, e.b],
                "phrase_tokens": list(e.phrase_tokens),
                "candidates": [
                    {"predicate": p.text, "score": score}
                    for p, score in e.candidates
                ],
            }
            for e in g.edges
        ],
        "target": g.target_id,
    }


def graph_from_wire(d: dict) -> QueryGraph:
    nodes = tuple(
        QueryNode(
            id=nd["id"],
            mention=mention_from_wire(nd),
            anchor=int(nd["anchor"]),
            is_target=bool(nd.get("is_target", False)),
        )
        for nd in d["nodes"]
    )
    edges = tuple(
        QueryEdge(
            id=ed["id"],
            a=ed["nodes"][0],
            b=ed["nodes"][1],
            phrase_tokens=tuple(int(i) for i in ed.get("phrase_tokens", [])),
            candidates=tuple(
                (Iri(c["predicate"]), float(c["score"]))
                for c in ed.get("candidates", [])
            ),
        )
        for ed in d["edges"]
    )
    return QueryGraph(nodes, edges, d["target"])


def with_candidates(g: QueryGraph,
                    by_edge: Dict[str, Tuple[Tuple[Iri, float], ...]]) -> QueryGraph:
    edges = tuple(
        replace(e, candidates=by_edge.get(e.id, e.candidates)) for e in g.edges
    )
    return QueryGraph(g.nodes, edges, g.target_id)
