"""Latin squares, the treatment grid and validated sets of orthogonal squares."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError, MalformedInputError, NotLatinError, OrthogonalityError


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, LatinSquare):
        return m.array
    try:
        arr = np.asarray(m)
    except (TypeError, ValueError) as exc:  # ragged nested lists
        raise MalformedInputError(f"not a matrix: {exc}") from None
    if arr.dtype == object or arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise MalformedInputError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise MalformedInputError("entries must be integers")
        arr = arr.astype(np.int64)
    s = arr.shape[0]
    if arr.min() < 0 or arr.max() >= s:
        bad = np.argwhere((arr < 0) | (arr >= s))[0]
        raise MalformedInputError(
            f"entry {int(arr[tuple(bad)])} at row {bad[0]}, column {bad[1]} is outside [0, {s - 1}]"
        )
    return arr.astype(np.int64, copy=False)


def _first_repeat(a: np.ndarray, b: np.ndarray):
    """Scan the s*s ordered pairs (a[c], b[c]); return the first repeat or None.

    The return value is ``(pair, first_cell, second_cell)`` with 0-based flat
    cell indices.
    """
    s = a.shape[0]
    seen = [-1] * (s * s)
    flat_a = a.ravel().tolist()
    flat_b = b.ravel().tolist()
    for cell, (x, y) in enumerate(zip(flat_a, flat_b)):
        slot = x * s + y
        if seen[slot] >= 0:
            return (x, y), seen[slot], cell
        seen[slot] = cell
    return None


def row_constant(s: int) -> np.ndarray:
    """Matrix whose row i is all i."""
    return np.repeat(np.arange(s), s).reshape(s, s)


def column_constant(s: int) -> np.ndarray:
    return np.tile(np.arange(s), (s, 1))


def is_latin(m) -> bool:
    """True iff ``m`` is orthogonal to both the row-constant and column-constant matrices.

    Pairing with the row-constant matrix repeats a pair exactly when some
    row repeats a symbol; the column-constant one does the same for columns.
    """
    arr = _as_matrix(m)
    s = arr.shape[0]
    return _first_repeat(row_constant(s), arr) is None and _first_repeat(column_constant(s), arr) is None


@dataclass(frozen=True)
class TreatmentGrid:
    """The s x s array of treatments numbered ``i*s + j + 1``."""

    order: int

    def __post_init__(self):
        if self.order < 1:
            raise DimensionError("grid order must be positive")

    def treatment(self, i: int, j: int) -> int:
        s = self.order
        if not (0 <= i < s and 0 <= j < s):
            raise DimensionError(f"cell ({i}, {j}) outside a {s}x{s} grid")
        return i * s + j + 1

    def cell(self, t: int) -> tuple[int, int]:
        s = self.order
        if not 1 <= t <= s * s:
            raise DimensionError(f"treatment {t} outside 1..{s * s}")
        return divmod(t - 1, s)

    @property
    def treatments(self) -> range:
        return range(1, self.order**2 + 1)

    def as_array(self) -> np.ndarray:
        return np.arange(1, self.order**2 + 1).reshape(self.order, self.order)


class LatinSquare:
    """Immutable Latin square over symbols ``0..s-1``."""

    __slots__ = ("cells", "_array")

    def __init__(self, cells):
        arr = _as_matrix(cells)
        if not is_latin(arr):
            raise NotLatinError("matrix is not a Latin square")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "cells", tuple(tuple(int(x) for x in row) for row in arr))
        object.__setattr__(self, "_array", arr)

    @property
    def order(self) -> int:
        return len(self.cells)

    @property
    def array(self) -> np.ndarray:
        return self._array

    def __getitem__(self, ij):
        i, j = ij
        return self.cells[i][j]

    def __setattr__(self, name, value):
        raise AttributeError("LatinSquare is immutable")

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"LatinSquare(order={self.order})"

    def symbol_classes(self) -> list[frozenset[int]]:
        s = self.order
        out: list[set[int]] = [set() for _ in range(s)]
        for i, row in enumerate(self.cells):
            for j, x in enumerate(row):
                out[x].add(i * s + j + 1)
        return [frozenset(c) for c in out]


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    aa, bb = _as_matrix(a), _as_matrix(b)
    if aa.shape != bb.shape:
        raise DimensionError(f"order mismatch: {aa.shape[0]} vs {bb.shape[0]}")
    return _first_repeat(aa, bb) is None


def symbol_class(square: LatinSquare, symbol: int) -> frozenset[int]:
    """Treatments whose cell in ``square`` holds ``symbol``."""
    s = square.order
    if not 0 <= symbol < s:
        raise MalformedInputError(f"symbol {symbol} outside [0, {s - 1}]")
    return frozenset(
        i * s + j + 1 for i, row in enumerate(square.cells) for j, x in enumerate(row) if x == symbol
    )


@dataclass(frozen=True)
class PolSet:
    """Ordered, validated collection of pairwise orthogonal Latin squares.

    Build through :func:`validate_pol`; ``PolSet.empty(s)`` gives the w = 0 set
    that the grid alone represents.
    """

    order: int
    squares: tuple[LatinSquare, ...]

    @property
    def w(self) -> int:
        return len(self.squares)

    def __len__(self):
        return len(self.squares)

    def __iter__(self):
        return iter(self.squares)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return PolSet(self.order, self.squares[k])
        return self.squares[k]

    @property
    def grid(self) -> TreatmentGrid:
        return TreatmentGrid(self.order)

    @classmethod
    def empty(cls, s: int) -> "PolSet":
        return cls(s, ())

    def with_square(self, square: LatinSquare) -> "PolSet":
        return validate_pol(list(self.squares) + [square], order=self.order)


def validate_pol(squares: Sequence, order: int | None = None) -> PolSet:
    """Check every square is Latin and every pair orthogonal.

    Raw matrices are accepted and converted.  Failures name the first bad
    square index, or the first bad pair with its repeated symbol pair.
    """
    squares = list(squares)
    if not squares:
        if order is None:
            raise MalformedInputError("empty square list")
        return PolSet.empty(order)
    built: list[LatinSquare] = []
    for k, sq in enumerate(squares):
        if isinstance(sq, LatinSquare):
            built.append(sq)
            continue
        arr = _as_matrix(sq)
        if not is_latin(arr):
            raise NotLatinError(f"square {k} is not a Latin square", index=k)
        built.append(LatinSquare(arr))
    s = built[0].order
    if order is not None and order != s:
        raise DimensionError(f"expected order {order}, got {s}")
    for k, sq in enumerate(built):
        if sq.order != s:
            raise DimensionError(f"square {k} has order {sq.order}, expected {s}")
    for a, b in combinations(range(len(built)), 2):
        rep = _first_repeat(built[a].array, built[b].array)
        if rep is not None:
            pair, c1, c2 = rep
            raise OrthogonalityError(
                f"squares {a} and {b} are not orthogonal: symbol pair {pair} occurs at "
                f"treatments {c1 + 1} and {c2 + 1}",
                pair=(a, b),
                witness=pair,
                cells=(c1 + 1, c2 + 1),
            )
    return PolSet(s, tuple(built))
