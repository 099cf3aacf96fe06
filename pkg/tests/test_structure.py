import pytest
from hypothesis import given, strategies as st

from kbqa.errors import EmptyQuestion, ParseError
from kbqa.structure import (ROOT, SemanticStructure, Token, ingest_conllu,
                            lowest_common_ancestor, parse, tree_path)

from conftest import FIXTURES, LENGTH_QUESTION
from oracles import lca_by_ancestors, path_between


def test_heuristic_parse_film_question():
    s = parse(LENGTH_QUESTION)
    texts = [t.text for t in s.tokens]
    assert texts == ["What", "is", "the", "length", "of", "the", "film",
                     "starring", "Keanu", "Reeves"]
    # "is" is the first verb-lexicon hit, so it roots the tree.
    assert s.root() == 1
    assert [t.head for t in s.tokens] == [1, ROOT, 0, 0, 3, 3, 3, 6, 7, 8]


def test_heuristic_spans_cover_question_text():
    s = parse("  Which films   are  starring Keanu Reeves ")
    for token in s.tokens:
        start, end = token.span
        assert s.text[start:end] == token.text


def test_heuristic_root_fallbacks():
    # No verb: first wh-word roots the tree.
    assert parse("Which films").root() == 0
    # No verb, no wh-word: first token roots the tree.
    assert parse("films from 1999").root() == 0


def test_heuristic_rejects_empty_question():
    with pytest.raises(EmptyQuestion):
        parse("   ")
    with pytest.raises(EmptyQuestion):
        parse("")


def test_heuristic_charwise_tokenization():
    s = parse("谁是主演", language="zh")
    assert [t.text for t in s.tokens] == ["谁", "是", "主", "演"]
    assert [t.span for t in s.tokens] == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_ingest_conllu_fixture_heads():
    s = ingest_conllu((FIXTURES / "question-length.conllu").read_bytes(),
                      LENGTH_QUESTION)
    assert [t.text for t in s.tokens][:4] == ["What", "is", "the", "length"]
    assert s.root() == 3  # "length" is the root in the checked-in parse
    assert [t.head for t in s.tokens] == [3, 3, 3, ROOT, 6, 6, 3, 6, 7, 8]
    for token in s.tokens:
        start, end = token.span
        assert s.text[start:end] == token.text


def test_ingest_conllu_without_question_joins_forms():
    data = (FIXTURES / "question-starring.conllu").read_bytes()
    s = ingest_conllu(data)
    assert s.text == "Which films are starring Keanu Reeves"
    assert s.root() == 3


def test_ingest_conllu_rejects_misaligned_question():
    data = (FIXTURES / "question-length.conllu").read_bytes()
    with pytest.raises(ParseError):
        ingest_conllu(data, "A completely different question")


def test_ingest_conllu_rejects_multiword_and_empty_ids():
    bad_range = "1-2\tcannot\t_\t_\t_\t_\t_\t_\t_\t_\n"
    with pytest.raises(ParseError):
        ingest_conllu(bad_range)
    bad_empty = "1.1\tghost\t_\t_\t_\t_\t0\troot\t_\t_\n"
    with pytest.raises(ParseError):
        ingest_conllu(bad_empty)


def test_ingest_conllu_rejects_second_sentence():
    data = ("1\tHi\thi\tX\t_\t_\t0\troot\t_\t_\n"
            "\n"
            "1\tBye\tbye\tX\t_\t_\t0\troot\t_\t_\n")
    with pytest.raises(ParseError):
        ingest_conllu(data)


def test_validation_rejects_broken_trees():
    # two roots
    with pytest.raises(ParseError):
        ingest_conllu("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n"
                      "2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n")
    # cycle
    with pytest.raises(ParseError):
        ingest_conllu("1\ta\t_\t_\t_\t_\t2\tdep\t_\t_\n"
                      "2\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n")


def test_tree_path_endpoints_inclusive():
    s = ingest_conllu((FIXTURES / "question-length.conllu").read_bytes(),
                      LENGTH_QUESTION)
    assert tree_path(s, 0, 6) == [0, 3, 6]
    assert tree_path(s, 6, 0) == [6, 3, 0]
    assert tree_path(s, 3, 3) == [3]
    assert tree_path(s, 8, 6) == [8, 7, 6]


def test_lowest_common_ancestor_fixture():
    s = ingest_conllu((FIXTURES / "question-length.conllu").read_bytes(),
                      LENGTH_QUESTION)
    assert lowest_common_ancestor(s, 0, 6) == 3
    assert lowest_common_ancestor(s, 8, 9) == 8
    assert lowest_common_ancestor(s, 4, 9) == 6


@st.composite
def random_trees(draw):
    n = draw(st.integers(1, 12))
    heads = [ROOT]
    for i in range(1, n):
        heads.append(draw(st.integers(0, i - 1)))
    order = draw(st.permutations(list(range(n))))
    remap = {old: new for new, old in enumerate(order)}
    shuffled = [ROOT] * n
    for old_index, old_head in enumerate(heads):
        new_index = remap[old_index]
        shuffled[new_index] = ROOT if old_head == ROOT else remap[old_head]
    tokens = tuple(
        Token(i, f"t{i}", shuffled[i], (2 * i, 2 * i + 1)) for i in range(n))
    return SemanticStructure(" ".join(f"t{i}" for i in range(n)), tokens)


@given(random_trees(), st.data())
def test_tree_path_matches_bfs_oracle(s, data):
    n = len(s.tokens)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    heads = [t.head for t in s.tokens]
    assert tree_path(s, a, b) == path_between(heads, a, b)


@given(random_trees(), st.data())
def test_lca_matches_ancestor_oracle(s, data):
    n = len(s.tokens)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    heads = [t.head for t in s.tokens]
    assert lowest_common_ancestor(s, a, b) == lca_by_ancestors(heads, a, b)


@given(st.text(alphabet=st.characters(blacklist_categories=("Cc", "Cs")),
               min_size=1, max_size=40))
def test_heuristic_parse_always_single_rooted(question):
    try:
        s = parse(question)
    except EmptyQuestion:
        assert not question.split()
        return
    roots = [t for t in s.tokens if t.head == ROOT]
    assert len(roots) == 1
    for token in s.tokens:
        start, end = token.span
        assert s.text[start:end] == token.text
