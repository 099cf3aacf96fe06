"""SPARQL-subset query objects, canonical rendering, and parsing.

The supported dialect is deliberately small: SELECT (optionally DISTINCT) or
ASK over a basic graph pattern, plus two filter shapes and LIMIT.

    SELECT DISTINCT ?what WHERE {
    ?film <length> ?what .
    ?film <starring> <Keanu_Reeves> .
    ?film <type> <film> .
    }

Filters render as
    FILTER(CONTAINS(STR(?x), "needle"))
    FILTER(?x = <iri> || CONTAINS(STR(?x), "needle"))
and rendered text re-parses to an equal query object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Tuple, Union

from .errors import ParseError, UnsupportedFeature
from .terms import Iri, Literal, Term, Variable, term_text

Pattern = Tuple[Term, Term, Term]


@dataclass(frozen=True)
class Select:
    variables: Tuple[str, ...]
    distinct: bool = True


@dataclass(frozen=True)
class Ask:
    pass


@dataclass(frozen=True)
class Contains:
    """Relaxed string match: normalize(binding) must contain normalize(needle)."""

    var: str
    needle: str


@dataclass(frozen=True)
class OrEquals:
    """binding == term, or the Contains check on the same variable."""

    var: str
    term: Term
    needle: str


Filter = Union[Contains, OrEquals]


@dataclass(frozen=True)
class SparqlQuery:
    form: Union[Select, Ask]
    patterns: Tuple[Pattern, ...]
    filters: Tuple[Filter, ...] = ()
    limit: Optional[int] = None

    def variables_in_patterns(self) -> set:
        out = set()
        for pat in self.patterns:
            for t in pat:
                if isinstance(t, Variable):
                    out.add(t.name)
        return out


def validate_query(query: SparqlQuery) -> None:
    """Raise ParseError if projected variables never occur in a pattern."""
    if isinstance(query.form, Select):
        used = query.variables_in_patterns()
        for name in query.form.variables:
            if name not in used:
                raise ParseError(f"projected variable ?{name} not used in any pattern")
    if query.limit is not None and query.limit < 0:
        raise ParseError("negative LIMIT")


def _render_filter(f: Filter) -> str:
    if isinstance(f, Contains):
        needle = f.needle.replace("\\", "\\\\").replace('"', '\\"')
        return f'FILTER(CONTAINS(STR(?{f.var}), "{needle}"))'
    needle = f.needle.replace("\\", "\\\\").replace('"', '\\"')
    return (
        f"FILTER(?{f.var} = {term_text(f.term)} || "
        f'CONTAINS(STR(?{f.var}), "{needle}"))'
    )


def render(query: SparqlQuery) -> str:
    """Canonical text: sorted patterns, one per line, filters after patterns."""
    if isinstance(query.form, Select):
        head = "SELECT "
        if query.form.distinct:
            head += "DISTINCT "
        head += " ".join(f"?{v}" for v in query.form.variables)
        head += " WHERE {"
    else:
        head = "ASK WHERE {"
    lines = [head]
    rendered = sorted(
        " ".join(term_text(t) for t in pat) for pat in query.patterns
    )
    lines.extend(f"{pat} ." for pat in rendered)
    lines.extend(sorted(_render_filter(f) for f in query.filters))
    lines.append("}")
    if query.limit is not None:
        lines.append(f"LIMIT {query.limit}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iri><[^<>\s]*>)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<lit>"(?:[^"\\]|\\.)*")
  | (?P<num>\d+)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*)
  | (?P<sym>\|\||[{}().=,])
    """,
    re.VERBOSE,
)

_UNSUPPORTED_KEYWORDS = {
    "OPTIONAL", "UNION", "GRAPH", "ORDER", "GROUP", "HAVING", "MINUS",
    "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "OFFSET", "VALUES",
    "SERVICE", "BIND", "PREFIX", "BASE", "REGEX", "LCASE", "UCASE",
    "EXISTS", "NOT",
}


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Tokens:
    def __init__(self, text: str):
        self.items = list(self._lex(text))
        self.pos = 0

    @staticmethod
    def _lex(text: str) -> Iterator[tuple[str, str]]:
        idx = 0
        while idx < len(text):
            m = _TOKEN_RE.match(text, idx)
            if not m:
                raise ParseError(f"unexpected character {text[idx]!r} at offset {idx}")
            idx = m.end()
            kind = m.lastgroup
            if kind == "ws":
                continue
            yield kind, m.group()

    def peek(self) -> tuple[str, str] | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of query")
        self.pos += 1
        return tok

    def expect_word(self, *words: str) -> str:
        kind, value = self.next()
        if kind != "word" or value.upper() not in words:
            raise ParseError(f"expected {'/'.join(words)}, got {value!r}")
        return value.upper()

    def expect_sym(self, sym: str) -> None:
        kind, value = self.next()
        if kind != "sym" or value != sym:
            raise ParseError(f"expected {sym!r}, got {value!r}")


def _parse_term(tokens: _Tokens) -> Term:
    kind, value = tokens.next()
    if kind == "iri":
        inner = value[1:-1]
        if not inner:
            raise ParseError("empty IRI")
        return Iri(inner)
    if kind == "var":
        return Variable(value[1:])
    if kind == "lit":
        return Literal(_unescape(value[1:-1]))
    if kind == "num":
        return Literal(value)
    raise ParseError(f"expected a term, got {value!r}")


def _parse_contains(tokens: _Tokens) -> tuple[str, str]:
    tokens.expect_sym("(")
    kind, value = tokens.next()
    if kind == "word" and value.upper() == "STR":
        tokens.expect_sym("(")
        kind, value = tokens.next()
        if kind != "var":
            raise ParseError("CONTAINS(STR(...)) expects a variable")
        var = value[1:]
        tokens.expect_sym(")")
    elif kind == "var":
        var = value[1:]
    else:
        raise ParseError("CONTAINS expects a variable")
    tokens.expect_sym(",")
    kind, value = tokens.next()
    if kind != "lit":
        raise ParseError("CONTAINS needle must be a string literal")
    tokens.expect_sym(")")
    return var, _unescape(value[1:-1])


def _parse_filter(tokens: _Tokens):
    tokens.expect_sym("(")
    kind, value = tokens.peek() or (None, None)
    if kind == "word":
        word = value.upper()
        if word == "CONTAINS":
            tokens.next()
            var, needle = _parse_contains(tokens)
            tokens.expect_sym(")")
            return Contains(var, needle)
        if word in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(f"unsupported filter function {value}")
        raise ParseError(f"unsupported filter {value!r}")
    if kind == "var":
        _, value = tokens.next()
        var = value[1:]
        tokens.expect_sym("=")
        term = _parse_term(tokens)
        tokens.expect_sym("||")
        tokens.expect_word("CONTAINS")
        var2, needle = _parse_contains(tokens)
        if var2 != var:
            raise ParseError("OrEquals branches must test the same variable")
        tokens.expect_sym(")")
        return OrEquals(var, term, needle)
    raise ParseError("malformed FILTER")


def parse(text: str) -> SparqlQuery:
    """Parse the canonical dialect back into a SparqlQuery.

    Raises ParseError on malformed text and UnsupportedFeature on recognized
    SPARQL constructs that fall outside the subset.
    """
    tokens = _Tokens(text)
    kind, value = tokens.next()
    if kind != "word":
        raise ParseError(f"expected SELECT or ASK, got {value!r}")
    word = value.upper()
    if word in _UNSUPPORTED_KEYWORDS:
        raise UnsupportedFeature(f"unsupported query form {value}")
    if word == "SELECT":
        distinct = False
        variables = []
        while True:
            kind, value = tokens.next()
            if kind == "word" and value.upper() == "DISTINCT":
                distinct = True
            elif kind == "word" and value.upper() == "REDUCED":
                raise UnsupportedFeature("REDUCED is not supported")
            elif kind == "var":
                variables.append(value[1:])
            elif kind == "word" and value.upper() == "WHERE":
                break
            elif kind == "sym" and value == "{":
                tokens.pos -= 1
                break
            else:
                raise ParseError(f"unexpected token {value!r} in SELECT clause")
        if not variables:
            raise ParseError("SELECT needs at least one variable")
        form: Union[Select, Ask] = Select(tuple(variables), distinct)
    elif word == "ASK":
        nxt = tokens.peek()
        if nxt and nxt[0] == "word" and nxt[1].upper() == "WHERE":
            tokens.next()
        form = Ask()
    else:
        raise ParseError(f"expected SELECT or ASK, got {value!r}")

    tokens.expect_sym("{")
    patterns = []
    filters = []
    while True:
        nxt = tokens.peek()
        if nxt is None:
            raise ParseError("unterminated group pattern")
        if nxt == ("sym", "}"):
            tokens.next()
            break
        if nxt[0] == "word":
            w = nxt[1].upper()
            if w == "FILTER":
                tokens.next()
                filters.append(_parse_filter(tokens))
                nxt = tokens.peek()
                if nxt == ("sym", "."):
                    tokens.next()
                continue
            if w in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(f"unsupported construct {nxt[1]}")
            raise ParseError(f"unexpected keyword {nxt[1]!r} in group pattern")
        s = _parse_term(tokens)
        p = _parse_term(tokens)
        o = _parse_term(tokens)
        patterns.append((s, p, o))
        nxt = tokens.peek()
        if nxt == ("sym", "."):
            tokens.next()
        elif nxt != ("sym", "}"):
            raise ParseError("expected '.' or '}' after pattern")

    limit = None
    nxt = tokens.peek()
    if nxt and nxt[0] == "word":
        w = tokens.next()[1].upper()
        if w == "LIMIT":
            kind, value = tokens.next()
            if kind != "num":
                raise ParseError("LIMIT expects an integer")
            limit = int(value)
        elif w in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(f"unsupported solution modifier {w}")
        else:
            raise ParseError(f"unexpected trailing token {w!r}")
    if tokens.peek() is not None:
        raise ParseError(f"unexpected trailing token {tokens.peek()[1]!r}")

    query = SparqlQuery(form, tuple(patterns), tuple(filters), limit)
    validate_query(query)
    return query


def with_limit(query: SparqlQuery, limit: int) -> SparqlQuery:
    return replace(query, limit=limit)
