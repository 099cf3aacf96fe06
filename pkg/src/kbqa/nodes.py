"""Mention detection: dictionary + fuzzy linking of question spans.

Surfaces and lexicon keys are compared after normalize(); similarity is exact
match, then containment ratio, then normalized edit distance. Extraction
scans token n-grams longest-first and keeps a non-overlapping set of
mentions (Entity / Type / Literal / Variable).
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import ParseError
from .structure import WH_WORDS, SemanticStructure
from .terms import Iri

MAX_NGRAM = 6

_PUNCT = string.punctuation + "“”‘’«»¿¡？！。、，；：…"

_NUMBER_RE = re.compile(r"^\d+(?:[.,]\d+)?$")
_QUOTED_RE = re.compile(r'["“]([^"”]*)["”]')


def normalize(text: str) -> str:
    """Lowercase, underscores to spaces, collapse whitespace, strip
    surrounding punctuation. Idempotent."""
    text = text.lower().replace("_", " ")
    text = " ".join(text.split())
    prev = None
    while prev != text:
        prev = text
        text = text.strip(_PUNCT).strip()
    return text


def _edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1,
                               current[j - 1] + 1,
                               previous[j - 1] + cost))
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """Surface similarity in [0, 1]; 1.0 exactly when the normalized forms
    are equal."""
    na, nb = normalize(a), normalize(b)
    if na == nb:
        return 1.0
    if not na or not nb:
        return 0.0
    shorter, longer = (na, nb) if len(na) <= len(nb) else (nb, na)
    if shorter in longer:
        return len(shorter) / len(longer)
    dist = _edit_distance(na, nb)
    return max(0.0, 1.0 - dist / max(len(na), len(nb)))


class Kind(str, Enum):
    ENTITY = "Entity"
    TYPE = "Type"
    LITERAL = "Literal"
    VARIABLE = "Variable"


@dataclass(frozen=True)
class MentionCandidate:
    span: Tuple[int, int]  # character offsets into the question
    surface: str
    kind: Kind
    links: Tuple[Tuple[Iri, float], ...] = ()
    literal_value: Optional[str] = None
    synthetic: bool = False


@dataclass(frozen=True)
class Lexicon:
    dataset_id: str
    entity_names: Dict[str, FrozenSet[Iri]]
    type_names: Dict[str, FrozenSet[Iri]]
    wh_words: FrozenSet[str]


def read_alias_tsv(source) -> List[Tuple[str, str]]:
    """Rows of `surface<TAB>iri`."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    rows = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ParseError(f"expected 2 columns, got {len(cols)}", line=lineno)
        surface, iri = cols[0].strip(), cols[1].strip()
        if not surface or not iri:
            raise ParseError("empty column", line=lineno)
        rows.append((surface, iri))
    return rows


def build_lexicon(store, entity_aliases: Optional[Iterable[Tuple[str, str]]] = None,
                  language: str = "en") -> Lexicon:
    """Name tables for a store: entity labels, class labels, wh-words.

    Entity names come from the store's label index restricted to entity Iris;
    type names from the labels of `type_predicate` objects. Alias rows add
    extra entity surfaces.
    """
    entity_names: Dict[str, set] = {}
    type_names: Dict[str, set] = {}
    for name, iris in store.label_index.items():
        ents = iris & store.entities
        if ents:
            entity_names.setdefault(name, set()).update(ents)
        classes = iris & store.classes
        if classes:
            type_names.setdefault(name, set()).update(classes)
    for surface, iri_text in entity_aliases or []:
        key = normalize(surface)
        if key:
            entity_names.setdefault(key, set()).add(Iri(iri_text))
    wh = WH_WORDS.get(language, WH_WORDS["en"])
    return Lexicon(
        dataset_id=store.dataset_id,
        entity_names={k: frozenset(v) for k, v in entity_names.items()},
        type_names={k: frozenset(v) for k, v in type_names.items()},
        wh_words=frozenset(wh),
    )


def _best_links(surface: str, names: Dict[str, FrozenSet[Iri]],
                threshold: float) -> Tuple[Tuple[Iri, float], ...]:
    scores: Dict[Iri, float] = {}
    for key, iris in names.items():
        s = similarity(surface, key)
        if s >= threshold:
            for iri in iris:
                if s > scores.get(iri, -1.0):
                    scores[iri] = s
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0].text))
    return tuple(ranked)


# Same-span precedence when spans tie on length and start.
_PRIORITY = {Kind.VARIABLE: 0, Kind.LITERAL: 1, Kind.TYPE: 2, Kind.ENTITY: 3}


def extract_nodes(question: str, s: SemanticStructure, lexicon: Lexicon,
                  threshold: float = 0.6) -> List[MentionCandidate]:
    """Non-overlapping mentions over the question, sorted by start offset.

    Longest-match-first: a longer span always beats any shorter overlapping
    span, then leftmost wins; on identical spans Type beats Entity.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")

    candidates: List[Tuple[tuple, MentionCandidate]] = []

    def add(mention: MentionCandidate, best: float) -> None:
        start, end = mention.span
        key = (-(end - start), start, _PRIORITY[mention.kind], -best)
        candidates.append((key, mention))

    for m in _QUOTED_RE.finditer(question):
        mention = MentionCandidate(
            span=(m.start(), m.end()), surface=m.group(0),
            kind=Kind.LITERAL, literal_value=m.group(1))
        add(mention, 2.0)

    tokens = s.tokens
    for n in range(min(MAX_NGRAM, len(tokens)), 0, -1):
        for i in range(0, len(tokens) - n + 1):
            span = (tokens[i].span[0], tokens[i + n - 1].span[1])
            surface = question[span[0]:span[1]]
            norm = normalize(surface)
            if not norm:
                continue
            if norm in lexicon.wh_words:
                add(MentionCandidate(span=span, surface=surface,
                                     kind=Kind.VARIABLE), 1.0)
                continue
            if n == 1 and _NUMBER_RE.match(norm):
                add(MentionCandidate(span=span, surface=surface,
                                     kind=Kind.LITERAL, literal_value=norm), 1.0)
                continue
            entity_links = _best_links(surface, lexicon.entity_names, threshold)
            type_links = _best_links(surface, lexicon.type_names, threshold)
            best_entity = entity_links[0][1] if entity_links else 0.0
            best_type = type_links[0][1] if type_links else 0.0
            if best_type >= threshold and best_type >= best_entity:
                add(MentionCandidate(span=span, surface=surface,
                                     kind=Kind.TYPE, links=type_links), best_type)
            elif best_entity >= threshold:
                add(MentionCandidate(span=span, surface=surface,
                                     kind=Kind.ENTITY, links=entity_links),
                    best_entity)

    accepted: List[MentionCandidate] = []
    for _, mention in sorted(candidates, key=lambda kv: kv[0]):
        start, end = mention.span
        if any(start < a.span[1] and a.span[0] < end for a in accepted):
            continue
        accepted.append(mention)
    return sorted(accepted, key=lambda m: m.span)
