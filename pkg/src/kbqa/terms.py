"""RDF-ish term and triple types.

Terms are frozen dataclasses so they hash and compare structurally; a triple
is (Iri, Iri, Iri | Literal). Variables only ever appear inside query
patterns, never in stored triples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

VARIABLE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_WS_RE = re.compile(r"\s")


@dataclass(frozen=True)
class Iri:
    text: str

    def __post_init__(self):
        if not self.text or _WS_RE.search(self.text):
            raise ValueError(f"invalid IRI: {self.text!r}")


@dataclass(frozen=True)
class Literal:
    lexical: str


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not VARIABLE_NAME_RE.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")


Term = Union[Iri, Literal, Variable]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Union[Iri, Literal]


def local_name(iri: Iri) -> str:
    """Final path segment of an IRI: text after the last '#' or '/'."""
    text = iri.text
    for sep in ("#", "/"):
        if sep in text:
            text = text.rsplit(sep, 1)[1]
    return text


def term_text(term: Term) -> str:
    """Canonical query-syntax rendering of a single term."""
    if isinstance(term, Iri):
        return f"<{term.text}>"
    if isinstance(term, Variable):
        return f"?{term.name}"
    escaped = term.lexical.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def plain_text(term: Term) -> str:
    """Undecorated string form used for normalization and display."""
    if isinstance(term, Iri):
        return term.text
    if isinstance(term, Variable):
        return term.name
    return term.lexical
