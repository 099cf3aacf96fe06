"""In-memory triple store: loading, label index, stats, and query evaluation.

A store is built once from a byte stream (N-Triples subset or 3-column TSV)
and never mutated afterwards. Triples are kept in a sorted tuple plus three
permutation indexes (spo, pos, osp) so any pattern shape resolves without a
full scan. Evaluation order is deterministic across runs.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, Optional, Tuple, Union

from .errors import EmptyDataset, ParseError
from .sparql import Ask, OrEquals, Pattern, SparqlQuery
from .terms import Iri, Literal, Term, Triple, Variable, local_name, plain_text

NTRIPLES = "ntriples"
TSV = "tsv"

_NT_LINE_RE = re.compile(
    r'^<(?P<s>[^<>\s]+)>\s+<(?P<p>[^<>\s]+)>\s+'
    r'(?:<(?P<o_iri>[^<>\s]+)>|"(?P<o_lit>(?:[^"\\]|\\.)*)")\s*\.\s*$'
)


def _unescape_nt(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"n": "\n", "t": "\t", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _sort_key(term: Term) -> tuple:
    # Iris before literals, then lexicographic; keeps store iteration stable.
    if isinstance(term, Iri):
        return (0, term.text)
    return (1, plain_text(term))


def _triple_key(t: Triple) -> tuple:
    return (_sort_key(t.subject), _sort_key(t.predicate), _sort_key(t.object))


class TripleStore:
    """Immutable set of triples with lookup indexes and a label index."""

    def __init__(self, dataset_id: str, triples: Iterable[Triple],
                 type_predicate: Iri):
        self.dataset_id = dataset_id
        self.type_predicate = type_predicate
        self.triples: Tuple[Triple, ...] = tuple(
            sorted(set(triples), key=_triple_key)
        )
        self._triple_set = frozenset(self.triples)
        self._spo: dict = {}
        self._pos: dict = {}
        self._osp: dict = {}
        for t in self.triples:
            self._spo.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)
            self._pos.setdefault(t.predicate, {}).setdefault(t.object, []).append(t.subject)
            self._osp.setdefault(t.object, {}).setdefault(t.subject, []).append(t.predicate)
        self.predicates = frozenset(t.predicate for t in self.triples)
        subjects = {t.subject for t in self.triples}
        iri_objects = {t.object for t in self.triples if isinstance(t.object, Iri)}
        self.node_iris = frozenset(subjects | iri_objects)
        self.classes = frozenset(
            t.object for t in self.triples
            if t.predicate == type_predicate and isinstance(t.object, Iri)
        )
        self.entities = frozenset(
            self.node_iris - self.predicates - self.classes
        )
        self.label_index = self._build_label_index()

    def _build_label_index(self) -> dict:
        from .nodes import normalize  # local import to avoid a cycle

        label_predicates = {
            p for p in self.predicates if normalize(local_name(p)) == "label"
        }
        index: dict = {}
        for iri in sorted(self.node_iris, key=_sort_key):
            names = {normalize(local_name(iri))}
            for lp in label_predicates:
                for obj in self._spo.get(iri, {}).get(lp, []):
                    if isinstance(obj, Literal):
                        names.add(normalize(obj.lexical))
            for name in names:
                if name:
                    index.setdefault(name, set()).add(iri)
        return {k: frozenset(v) for k, v in index.items()}

    # -- lookups ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.triples)

    def contains(self, s: Iri, p: Iri, o: Union[Iri, Literal]) -> bool:
        return Triple(s, p, o) in self._triple_set

    def match(self, s: Optional[Term], p: Optional[Term],
              o: Optional[Term]) -> Iterator[Triple]:
        """All triples matching the given constants (None = wildcard)."""
        if s is not None and p is not None and o is not None:
            if self.contains(s, p, o):
                yield Triple(s, p, o)
            return
        if s is not None and p is not None:
            for obj in self._spo.get(s, {}).get(p, []):
                yield Triple(s, p, obj)
            return
        if p is not None and o is not None:
            for subj in self._pos.get(p, {}).get(o, []):
                yield Triple(subj, p, o)
            return
        if s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, []):
                yield Triple(s, pred, o)
            return
        if s is not None:
            for pred, objs in self._spo.get(s, {}).items():
                for obj in objs:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            for obj, subjs in self._pos.get(p, {}).items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        yield from self.triples

    def instances_of(self, class_iri: Iri) -> Tuple[Iri, ...]:
        subs = self._pos.get(self.type_predicate, {}).get(class_iri, [])
        return tuple(sorted(set(subs), key=_sort_key))


@dataclass(frozen=True)
class KbStats:
    triples: int
    entities: int
    predicates: int


def stats(store: TripleStore) -> KbStats:
    return KbStats(
        triples=len(store.triples),
        entities=len(store.entities),
        predicates=len(store.predicates),
    )


# ---------------------------------------------------------------------------
# Loading


def _parse_ntriples(lines: Iterable[str]) -> Iterator[Triple]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _NT_LINE_RE.match(line)
        if not m:
            raise ParseError("not a valid triple line", line=lineno)
        try:
            s = Iri(m.group("s"))
            p = Iri(m.group("p"))
            o: Union[Iri, Literal]
            if m.group("o_iri") is not None:
                o = Iri(m.group("o_iri"))
            else:
                o = Literal(_unescape_nt(m.group("o_lit")))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno)
        yield Triple(s, p, o)


def _parse_tsv(lines: Iterable[str]) -> Iterator[Triple]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 tab-separated columns, got {len(cols)}",
                             line=lineno)
        s_text, p_text, o_text = (c.strip() for c in cols)
        if not s_text or not p_text or not o_text:
            raise ParseError("empty column", line=lineno)
        try:
            s = Iri(s_text)
            p = Iri(p_text)
            o: Union[Iri, Literal]
            if o_text.startswith('"') and o_text.endswith('"') and len(o_text) >= 2:
                o = Literal(o_text[1:-1])
            else:
                o = Iri(o_text)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno)
        yield Triple(s, p, o)


def load_triples(source: Union[bytes, BinaryIO], fmt: str, dataset_id: str,
                 type_predicate: Union[Iri, str]) -> TripleStore:
    """Build a store from a byte stream.

    fmt is "ntriples" or "tsv". Duplicate triples collapse (set semantics).
    Raises ParseError with a line number on malformed input and EmptyDataset
    when no triples survive.
    """
    if isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    text = data.decode("utf-8")
    lines = io.StringIO(text)
    if fmt == NTRIPLES:
        triples = list(_parse_ntriples(lines))
    elif fmt == TSV:
        triples = list(_parse_tsv(lines))
    else:
        raise ParseError(f"unknown triples format {fmt!r}")
    if not triples:
        raise EmptyDataset(f"no triples in source for dataset {dataset_id!r}")
    if isinstance(type_predicate, str):
        type_predicate = Iri(type_predicate)
    return TripleStore(dataset_id, triples, type_predicate)


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True)
class ResultSet:
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[Term, ...], ...]
    truth: bool

    def row_texts(self) -> list:
        return [[plain_text(t) for t in row] for row in self.rows]


def _pattern_constants(pattern: Pattern, bindings: dict):
    out = []
    for term in pattern:
        if isinstance(term, Variable):
            out.append(bindings.get(term.name))
        else:
            out.append(term)
    return out


def _filter_ok(f, bindings: dict) -> bool:
    from .nodes import normalize

    bound = bindings.get(f.var)
    if bound is None:
        return False
    if isinstance(f, OrEquals):
        if bound == f.term:
            return True
    return normalize(f.needle) in normalize(plain_text(bound))


def _solutions(store: TripleStore, patterns: Tuple[Pattern, ...],
               bindings: dict) -> Iterator[dict]:
    if not patterns:
        yield bindings
        return
    head, rest = patterns[0], patterns[1:]
    s, p, o = _pattern_constants(head, bindings)
    for triple in store.match(s, p, o):
        new = dict(bindings)
        ok = True
        for term, value in zip(head, (triple.subject, triple.predicate, triple.object)):
            if isinstance(term, Variable):
                seen = new.get(term.name)
                if seen is None:
                    new[term.name] = value
                elif seen != value:
                    ok = False
                    break
        if ok:
            yield from _solutions(store, rest, new)


def execute(store: TripleStore, query: SparqlQuery) -> ResultSet:
    """Evaluate a subset query against the store.

    SELECT returns bound rows for the projected variables (DISTINCT dedupes,
    LIMIT truncates after DISTINCT); ASK reports whether any solution exists.
    """
    from .sparql import validate_query

    validate_query(query)
    if isinstance(query.form, Ask):
        for bindings in _solutions(store, query.patterns, {}):
            if all(_filter_ok(f, bindings) for f in query.filters):
                return ResultSet((), (), True)
        return ResultSet((), (), False)

    columns = query.form.variables
    rows = []
    seen = set()
    for bindings in _solutions(store, query.patterns, {}):
        if not all(_filter_ok(f, bindings) for f in query.filters):
            continue
        row = tuple(bindings.get(v) for v in columns)
        if any(t is None for t in row):
            continue
        if query.form.distinct:
            if row in seen:
                continue
            seen.add(row)
        rows.append(row)
        if query.limit is not None and query.form.distinct and len(rows) >= query.limit:
            break
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultSet(columns, tuple(rows), bool(rows))
