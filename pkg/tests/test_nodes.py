import io

import pytest
from hypothesis import given, strategies as st

from kbqa.errors import ParseError
from kbqa.nodes import (Kind, build_lexicon, extract_nodes, normalize,
                        read_alias_tsv, similarity, _edit_distance)
from kbqa.store import load_triples
from kbqa.structure import parse
from kbqa.terms import Iri

from conftest import LENGTH_QUESTION
from oracles import edit_distance_matrix, normalize_text

FILM_TSV = b"""\
The_Matrix\ttype\tfilm
The_Matrix\tstarring\tKeanu_Reeves
The_Matrix\tlength\t"136"
John_Wick\ttype\tfilm
John_Wick\tstarring\tKeanu_Reeves
John_Wick\tlength\t"101"
Speed\ttype\tfilm
Speed\tlength\t"116"
"""


def film_lexicon(aliases=None):
    store = load_triples(FILM_TSV, "tsv", "films", "type")
    return build_lexicon(store, entity_aliases=aliases)


def test_normalize_cases():
    assert normalize("Keanu_Reeves") == "keanu reeves"
    assert normalize("  The   Matrix  ") == "the matrix"
    assert normalize("“quoted”") == "quoted"
    assert normalize("end?") == "end"
    assert normalize("___") == ""


@given(st.text(max_size=30))
def test_normalize_is_idempotent_and_matches_reference(text):
    once = normalize(text)
    assert normalize(once) == once
    assert once == normalize_text(text)


@given(st.text(alphabet="abcd e", max_size=12),
       st.text(alphabet="abcd e", max_size=12))
def test_edit_distance_matches_full_matrix(a, b):
    assert _edit_distance(a, b) == edit_distance_matrix(a, b)


def test_similarity_exact_after_normalization():
    assert similarity("Keanu Reeves", "keanu_reeves") == 1.0
    assert similarity("The Matrix", "the   matrix") == 1.0


def test_similarity_containment_ratio():
    # "keanu" is contained in "keanu reeves": 5 / 12
    assert similarity("Keanu", "Keanu_Reeves") == pytest.approx(5 / 12)
    assert similarity("keanu reeve", "keanu reeves") == pytest.approx(11 / 12)


def test_similarity_edit_distance_fallback():
    # "keanu reevs" vs "keanu reeves": one edit over twelve characters.
    assert similarity("keanu reevs", "keanu reeves") == pytest.approx(1 - 1 / 12)


@given(st.text(max_size=15), st.text(max_size=15))
def test_similarity_bounds_and_symmetry(a, b):
    s = similarity(a, b)
    assert 0.0 <= s <= 1.0
    assert s == similarity(b, a)
    if s == 1.0:
        assert normalize(a) == normalize(b)


def test_read_alias_tsv_parses_and_validates():
    rows = read_alias_tsv("Neo actor\tKeanu_Reeves\n# comment\n\n")
    assert rows == [("Neo actor", "Keanu_Reeves")]
    assert read_alias_tsv(io.BytesIO(b"a\tb\n")) == [("a", "b")]
    with pytest.raises(ParseError):
        read_alias_tsv("only-one-column\n")
    with pytest.raises(ParseError):
        read_alias_tsv("\tmissing-surface\n")


def test_build_lexicon_tables():
    lex = film_lexicon(aliases=[("Neo actor", "Keanu_Reeves")])
    assert lex.entity_names["keanu reeves"] == frozenset({Iri("Keanu_Reeves")})
    assert lex.entity_names["neo actor"] == frozenset({Iri("Keanu_Reeves")})
    assert lex.type_names["film"] == frozenset({Iri("film")})
    assert "film" not in lex.entity_names  # classes are not entities
    assert "what" in lex.wh_words


def test_extract_nodes_film_question():
    lex = film_lexicon()
    s = parse(LENGTH_QUESTION)
    mentions = extract_nodes(LENGTH_QUESTION, s, lex)
    by_surface = {m.surface: m for m in mentions}
    assert by_surface["What"].kind == Kind.VARIABLE
    assert by_surface["film"].kind == Kind.TYPE
    assert by_surface["film"].links == ((Iri("film"), 1.0),)
    assert by_surface["Keanu Reeves"].kind == Kind.ENTITY
    assert by_surface["Keanu Reeves"].links == ((Iri("Keanu_Reeves"), 1.0),)
    assert len(mentions) == 3
    assert [m.span for m in mentions] == sorted(m.span for m in mentions)


def test_extract_longest_span_wins():
    lex = film_lexicon()
    question = "Keanu Reeves"
    mentions = extract_nodes(question, parse(question), lex)
    assert len(mentions) == 1
    assert mentions[0].surface == "Keanu Reeves"
    assert mentions[0].span == (0, 12)


def test_extract_number_and_quoted_literals():
    lex = film_lexicon()
    q1 = 'films longer than 120'
    mentions = extract_nodes(q1, parse(q1), lex)
    literal = [m for m in mentions if m.kind == Kind.LITERAL]
    assert len(literal) == 1
    assert literal[0].literal_value == "120"

    q2 = 'which film is called "The Matrix"'
    mentions = extract_nodes(q2, parse(q2), lex)
    quoted = [m for m in mentions if m.kind == Kind.LITERAL]
    assert len(quoted) == 1
    assert quoted[0].literal_value == "The Matrix"


def test_extract_threshold_validation():
    lex = film_lexicon()
    s = parse("anything")
    with pytest.raises(ValueError):
        extract_nodes("anything", s, lex, threshold=0.0)
    with pytest.raises(ValueError):
        extract_nodes("anything", s, lex, threshold=1.5)


def test_extract_high_threshold_drops_fuzzy_links():
    lex = film_lexicon()
    question = "Keanu Reevs movie"
    s = parse(question)
    loose = extract_nodes(question, s, lex, threshold=0.6)
    strict = extract_nodes(question, s, lex, threshold=0.99)
    assert any(m.kind == Kind.ENTITY for m in loose)
    assert not any(m.kind == Kind.ENTITY for m in strict)


def test_extract_decoy_link_on_mutated_kb():
    mutated = FILM_TSV.replace(b"Keanu_Reeves", b"Keanu_Reeves_Jr") + \
        b"Keanu_Reeve\ttype\tperson\n"
    store = load_triples(mutated, "tsv", "films-mutated", "type")
    lex = build_lexicon(store)
    s = parse(LENGTH_QUESTION)
    mentions = extract_nodes(LENGTH_QUESTION, s, lex, threshold=0.85)
    entity = [m for m in mentions if m.kind == Kind.ENTITY]
    assert len(entity) == 1
    # At 0.85 only the shorter decoy name clears the bar: containment gives
    # 11/12 for Keanu_Reeve but 12/15 for Keanu_Reeves_Jr.
    assert [iri for iri, _ in entity[0].links] == [Iri("Keanu_Reeve")]
    assert entity[0].links[0][1] == pytest.approx(11 / 12)


@given(st.text(alphabet="KeanuReevs filmthgo", min_size=1, max_size=30))
def test_extract_mentions_never_overlap(question):
    lex = film_lexicon()
    try:
        s = parse(question)
    except Exception:
        return
    mentions = extract_nodes(question, s, lex)
    for i, m in enumerate(mentions):
        for other in mentions[i + 1:]:
            assert m.span[1] <= other.span[0] or other.span[1] <= m.span[0]
