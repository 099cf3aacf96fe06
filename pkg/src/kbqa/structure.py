"""Dependency-style semantic structure over question tokens.

The structure is a single-rooted head tree. It comes from either the built-in
heuristic parser (good enough for dictionary-anchored questions) or an
ingested CoNLL-U parse produced by a real parser offline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import BinaryIO, List, Optional, Tuple, Union

from .errors import EmptyQuestion, ParseError

ROOT = -1

WH_WORDS = {
    "en": {"what", "who", "whom", "whose", "which", "where", "when", "why", "how"},
    "zh": {"什么", "谁", "哪", "哪里", "哪儿", "几", "多少", "怎么", "何时"},
}

# Small closed-class verb list for root picking; first hit wins, auxiliaries
# included on purpose (see parser notes in the repo docs).
VERB_LEXICON = {
    "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "has", "have", "had",
    "can", "could", "will", "would", "shall", "should", "may", "might",
    "star", "stars", "starring", "starred",
    "direct", "directs", "directed", "directing",
    "play", "plays", "played", "playing",
    "write", "writes", "wrote", "written",
    "win", "wins", "won", "make", "makes", "made",
    "release", "releases", "released",
    "eat", "eats", "ate", "live", "lives", "lived",
}

STOP_WORDS = {
    "the", "a", "an", "of", "to", "in", "on", "at", "by", "for", "with",
    "and", "or", "is", "are", "was", "were", "am", "be", "been", "do",
    "does", "did",
}

NO_SPACE_LANGUAGES = {"zh", "ja", "th"}


@dataclass(frozen=True)
class Token:
    index: int
    text: str
    head: int  # index of the head token, ROOT for the root
    span: Tuple[int, int]  # character offsets into the question


@dataclass(frozen=True)
class SemanticStructure:
    text: str
    tokens: Tuple[Token, ...]

    def children(self, index: int) -> List[int]:
        return [t.index for t in self.tokens if t.head == index]

    def neighbors(self, index: int) -> List[int]:
        out = [t.index for t in self.tokens if t.head == index]
        head = self.tokens[index].head
        if head != ROOT:
            out.append(head)
        return sorted(out)

    def root(self) -> int:
        for t in self.tokens:
            if t.head == ROOT:
                return t.index
        raise ParseError("structure has no root")

    def depth(self, index: int) -> int:
        d = 0
        while self.tokens[index].head != ROOT:
            index = self.tokens[index].head
            d += 1
        return d

    def ancestors(self, index: int) -> List[int]:
        """index itself, then the head chain up to and including the root."""
        chain = [index]
        while self.tokens[index].head != ROOT:
            index = self.tokens[index].head
            chain.append(index)
        return chain


def _validate(tokens: List[Token]) -> None:
    roots = [t for t in tokens if t.head == ROOT]
    if len(roots) != 1:
        raise ParseError(f"expected exactly one root, found {len(roots)}")
    n = len(tokens)
    for t in tokens:
        if t.head != ROOT and not (0 <= t.head < n):
            raise ParseError(f"token {t.index} has out-of-range head {t.head}")
        if t.head == t.index:
            raise ParseError(f"token {t.index} is its own head")
    for t in tokens:
        seen = set()
        idx = t.index
        while idx != ROOT:
            if idx in seen:
                raise ParseError("head relation contains a cycle")
            seen.add(idx)
            idx = tokens[idx].head


def _tokenize(question: str, language: str) -> List[Tuple[str, Tuple[int, int]]]:
    chunks: List[Tuple[str, Tuple[int, int]]] = []
    if language in NO_SPACE_LANGUAGES:
        for i, ch in enumerate(question):
            if not ch.isspace():
                chunks.append((ch, (i, i + 1)))
        return chunks
    start = None
    for i, ch in enumerate(question):
        if ch.isspace():
            if start is not None:
                chunks.append((question[start:i], (start, i)))
                start = None
        elif start is None:
            start = i
    if start is not None:
        chunks.append((question[start:], (start, len(question))))
    return chunks


def parse(question: str, language: str = "en") -> SemanticStructure:
    """Heuristic single-rooted head tree over the question tokens.

    Root: first verb-lexicon hit, else first wh-word, else token 0. Every
    other token attaches to the nearest preceding content token (fallback:
    the root).
    """
    from .nodes import normalize

    chunks = _tokenize(question, language)
    if not chunks:
        raise EmptyQuestion("question has no tokens")

    norm = [normalize(text) for text, _ in chunks]
    wh = WH_WORDS.get(language, WH_WORDS["en"])

    root = None
    for i, text in enumerate(norm):
        if text in VERB_LEXICON:
            root = i
            break
    if root is None:
        for i, text in enumerate(norm):
            if text in wh:
                root = i
                break
    if root is None:
        root = 0

    def is_content(i: int) -> bool:
        return bool(norm[i]) and norm[i] not in STOP_WORDS

    tokens = []
    for i, (text, span) in enumerate(chunks):
        if i == root:
            head = ROOT
        else:
            # Nearest preceding content token; tokens with none (including
            # anything left of the first content word) hang off the root.
            head = root
            for j in range(i - 1, -1, -1):
                if is_content(j):
                    head = j
                    break
        tokens.append(Token(i, text, head, span))
    _validate(tokens)
    return SemanticStructure(question, tuple(tokens))


def ingest_conllu(source: Union[str, bytes, BinaryIO],
                  question: Optional[str] = None) -> SemanticStructure:
    """Build a structure from a single-sentence CoNLL-U document.

    Only plain word lines are accepted (multiword ranges and empty nodes raise
    ParseError). When `question` is given, token forms are aligned to it
    left-to-right to recover character spans; otherwise the text is the forms
    joined with single spaces.
    """
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    forms: List[str] = []
    heads: List[int] = []
    sentence_done = False
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            if forms:
                sentence_done = True
            continue
        if line.startswith("#"):
            continue
        if sentence_done:
            raise ParseError("more than one sentence in CoNLL-U source",
                             line=lineno)
        cols = raw.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 columns, got {len(cols)}",
                             line=lineno)
        token_id = cols[0]
        if "-" in token_id or "." in token_id:
            raise ParseError(f"unsupported token id {token_id!r}", line=lineno)
        try:
            idx = int(token_id)
            head = int(cols[6])
        except ValueError:
            raise ParseError("non-integer ID or HEAD column", line=lineno)
        if idx != len(forms) + 1:
            raise ParseError(f"token ids must be sequential, got {token_id}",
                             line=lineno)
        forms.append(cols[1])
        heads.append(head - 1 if head > 0 else ROOT)

    if not forms:
        raise ParseError("no token lines in CoNLL-U source")

    if question is not None:
        text = question
        spans = []
        cursor = 0
        for form in forms:
            pos = text.find(form, cursor)
            if pos < 0 or text[cursor:pos].strip():
                raise ParseError(
                    f"token {form!r} does not align with the question text")
            spans.append((pos, pos + len(form)))
            cursor = pos + len(form)
        if text[cursor:].strip():
            raise ParseError("question text has trailing content not covered "
                             "by CoNLL-U tokens")
    else:
        text = " ".join(forms)
        spans = []
        cursor = 0
        for form in forms:
            spans.append((cursor, cursor + len(form)))
            cursor += len(form) + 1

    tokens = [Token(i, form, heads[i], spans[i]) for i, form in enumerate(forms)]
    _validate(tokens)
    return SemanticStructure(text, tuple(tokens))


def tree_path(s: SemanticStructure, a: int, b: int) -> List[int]:
    """Unique undirected path from token a to token b, inclusive."""
    up_a = s.ancestors(a)
    up_b = s.ancestors(b)
    in_a = {idx: pos for pos, idx in enumerate(up_a)}
    meet = None
    for idx in up_b:
        if idx in in_a:
            meet = idx
            break
    if meet is None:
        raise ParseError("tokens are not connected")
    head_part = up_a[: in_a[meet] + 1]
    tail_part = []
    for idx in up_b:
        if idx == meet:
            break
        tail_part.append(idx)
    return head_part + list(reversed(tail_part))


def lowest_common_ancestor(s: SemanticStructure, a: int, b: int) -> int:
    """Deepest token that is an ancestor-or-self of both a and b."""
    in_a = set(s.ancestors(a))
    for idx in s.ancestors(b):
        if idx in in_a:
            return idx
    raise ParseError("tokens are not connected")
