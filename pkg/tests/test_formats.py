import json

import pytest

from mols_forge.errors import ParseError
from mols_forge.formats import dash, dumps, format_squares, parse_edge_list, parse_squares, undash

from conftest import DATA, load


def test_letters_and_digits_agree():
    assert parse_squares("2\na b\nb a\n") == parse_squares("2\n0 1\n1 0\n") == [[[0, 1], [1, 0]]]


def test_two_squares_one_blank_line():
    text = "2\n0 1\n1 0\n\n2\n1 0\n0 1\n"
    assert len(parse_squares(text)) == 2


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("x\n0 1\n1 0\n", 1, "order"),
        ("3\n0 1 2\n1 2 0\n", 4, "only 2 rows"),
        ("2\n0 1 1\n1 0\n", 2, "expected 2 entries"),
        ("2\n0 1\n1 ?\n", 3, "unrecognised"),
        ("2\n0 1\n1 7\n", 3, "outside"),
        ("2\n0 1\n1 0\n2\n0 1\n1 0\n", 4, "one blank line"),
        ("2\n0 1\n1 0\n\n\n2\n0 1\n1 0\n", 5, "more than one blank"),
        ("\n\n", 1, "no squares"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_squares(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}: ")
    assert fragment in str(err.value)


def test_format_round_trip():
    pol = load("ex45_pol")
    for letters in (False, True):
        text = format_squares(pol.squares, letters=letters)
        assert parse_squares(text) == [[list(r) for r in sq.cells] for sq in pol.squares]
    assert format_squares(pol.squares, letters=True).splitlines()[1].split()[0] in "abcdefgh"


def test_fixture_file_is_letter_form():
    first = (DATA / "ex43_pol.txt").read_text().splitlines()
    assert first[0] == "5" and first[1].split() == ["a", "d", "b", "e", "c"]


def test_dash_notation():
    assert dash((1, 7, 13)) == "1-7-13"
    assert undash("1-7-13") == (1, 7, 13)
    assert undash("1--14--20") == (1, 14, 20)


def test_edge_list_comments_and_blanks():
    text = "# a triangle\n1 2\n\n2 3  # trailing\n1 3\n"
    assert sorted(parse_edge_list(text)) == [(1, 2), (1, 3), (2, 3)]


def test_dumps_is_deterministic():
    out = dumps({"b": 1, "a": [1, 2]})
    assert out.endswith("\n") and out.index('"a"') < out.index('"b"')
    assert json.loads(out) == {"a": [1, 2], "b": 1}
