import numpy as np
import pytest

from mols_forge.errors import DimensionError, MalformedInputError, NotLatinError, OrthogonalityError
from mols_forge.latin import (
    LatinSquare,
    PolSet,
    TreatmentGrid,
    are_orthogonal,
    column_constant,
    is_latin,
    row_constant,
    symbol_class,
    validate_pol,
)

from conftest import load

Z3 = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
Z3b = [[0, 1, 2], [2, 0, 1], [1, 2, 0]]


def test_treatment_numbering_round_trips():
    g = TreatmentGrid(4)
    assert g.treatment(0, 0) == 1
    assert g.treatment(1, 2) == 7
    assert g.treatment(3, 3) == 16
    assert all(g.treatment(*g.cell(t)) == t for t in g.treatments)
    assert g.as_array()[2, 1] == 10


@pytest.mark.parametrize("t", [0, 17, -1])
def test_treatment_out_of_range(t):
    with pytest.raises(DimensionError):
        TreatmentGrid(4).cell(t)


def test_constant_matrices():
    assert (row_constant(3) == np.array([[0, 0, 0], [1, 1, 1], [2, 2, 2]])).all()
    assert (column_constant(3) == row_constant(3).T).all()


def test_is_latin_basic():
    assert is_latin(Z3)
    assert not is_latin([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    assert not is_latin([[0, 0], [1, 1]])
    assert is_latin([[0]])


def test_latin_square_is_immutable():
    sq = LatinSquare(Z3)
    with pytest.raises(AttributeError):
        sq.cells = ()
    with pytest.raises(ValueError):
        sq.array[0, 0] = 2
    assert sq[1, 2] == 0 and sq.order == 3
    assert sq == LatinSquare(np.array(Z3)) and hash(sq) == hash(LatinSquare(Z3))


def test_latin_square_rejects_bad_input():
    with pytest.raises(NotLatinError):
        LatinSquare([[0, 1], [0, 1]])
    with pytest.raises(MalformedInputError):
        LatinSquare([[0, 1, 2], [1, 2, 0]])
    with pytest.raises(MalformedInputError):
        LatinSquare([[0, 5], [5, 0]])


def test_symbol_classes_partition_the_grid():
    sq = LatinSquare(Z3)
    cls = sq.symbol_classes()
    assert cls[0] == frozenset({1, 6, 8}) == symbol_class(sq, 0)
    assert sorted(t for c in cls for t in c) == list(range(1, 10))
    with pytest.raises(MalformedInputError):
        symbol_class(sq, 3)


def test_orthogonality():
    a, b = LatinSquare(Z3), LatinSquare(Z3b)
    assert are_orthogonal(a, b) and are_orthogonal(b, a)
    assert not are_orthogonal(a, a)
    with pytest.raises(DimensionError):
        are_orthogonal(a, LatinSquare([[0, 1], [1, 0]]))


def test_validate_pol_names_the_offending_pair():
    with pytest.raises(OrthogonalityError) as err:
        validate_pol([Z3, Z3b, Z3])
    assert err.value.pair == (0, 2)
    assert "squares 0 and 2" in str(err.value)
    assert err.value.witness is not None


def test_validate_pol_reports_non_latin_index():
    with pytest.raises(NotLatinError) as err:
        validate_pol([Z3, [[0, 1, 2], [0, 1, 2], [0, 1, 2]]])
    assert err.value.index == 1


def test_validate_pol_order_mismatch():
    with pytest.raises(DimensionError):
        validate_pol([Z3, [[0, 1], [1, 0]]])
    with pytest.raises(DimensionError):
        validate_pol([Z3], order=4)
    with pytest.raises(MalformedInputError):
        validate_pol([])
    assert validate_pol([], order=5).w == 0


def test_polset_slicing_and_extension():
    pol = load("ex46_pol")
    assert (pol.order, pol.w) == (9, 5)
    head = pol[:2]
    assert isinstance(head, PolSet) and head.w == 2
    assert head.with_square(pol[2]) == pol[:3]
    with pytest.raises(OrthogonalityError):
        head.with_square(pol[0])
    assert PolSet.empty(4).w == 0


def test_reference_examples_are_valid():
    for name, (s, w) in {
        "ex41_pol": (3, 1),
        "ex42_pol": (4, 1),
        "ex43_pol": (5, 1),
        "ex44_pol": (7, 3),
        "ex45_pol": (8, 4),
        "ex46_pol": (9, 5),
    }.items():
        pol = load(name)
        assert (pol.order, pol.w) == (s, w)
