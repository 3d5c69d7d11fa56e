"""Nets on the treatment grid and their complements.

Points are treatment numbers throughout, so nets, schemes and transversals
can be compared without re-indexing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError, IncompatibilityError, StructuralError
from .latin import PolSet, TreatmentGrid
from .scheme import AssociationScheme


def _normalise(classes) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(tuple(tuple(sorted(int(p) for p in line)) for line in cls) for cls in classes)


@dataclass(frozen=True)
class Net:
    """``k`` parallel classes of ``n`` lines partitioning ``n*n`` points.

    Construction validates the net axioms: every class partitions the points
    and lines of different classes meet in exactly one point.
    """

    order: int
    classes: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", _normalise(self.classes))
        n = self.order
        pts = set(range(1, n * n + 1))
        for c, cls in enumerate(self.classes):
            if len(cls) != n or any(len(line) != n for line in cls):
                raise StructuralError(f"class {c + 1} must have {n} lines of {n} points")
            covered = [p for line in cls for p in line]
            if set(covered) != pts or len(covered) != n * n:
                raise StructuralError(f"class {c + 1} does not partition the {n * n} points")
        masks = self._masks
        for (ci, a), (cj, b) in combinations(enumerate(masks), 2):
            for x, ma in enumerate(a):
                for y, mb in enumerate(b):
                    if (ma & mb).bit_count() != 1:
                        raise IncompatibilityError(
                            f"line {x + 1} of class {ci + 1} and line {y + 1} of class {cj + 1} "
                            f"meet in {(ma & mb).bit_count()} points",
                            witness=(self.classes[ci][x], self.classes[cj][y]),
                        )

    @property
    def degree(self) -> int:
        return len(self.classes)

    @cached_property
    def _masks(self) -> list[list[int]]:
        return [[sum(1 << (p - 1) for p in line) for line in cls] for cls in self.classes]

    @cached_property
    def _line_of(self) -> np.ndarray:
        """``_line_of[c, p-1]`` is the index of the class-c line through p."""
        out = np.empty((self.degree, self.order**2), dtype=np.int64)
        for c, cls in enumerate(self.classes):
            for x, line in enumerate(cls):
                out[c, [p - 1 for p in line]] = x
        return out

    def lines(self):
        for cls in self.classes:
            yield from cls

    def to_payload(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "classes": [[list(line) for line in cls] for cls in self.classes],
        }


def net_from_pol(grid: TreatmentGrid, pol: PolSet) -> Net:
    """Rows, then columns, then the symbol classes of each square in order."""
    s = grid.order
    if pol.order != s:
        raise DimensionError(f"grid order {s} but squares of order {pol.order}")
    arr = grid.as_array()
    classes = [[tuple(row) for row in arr.tolist()], [tuple(col) for col in arr.T.tolist()]]
    for sq in pol.squares:
        classes.append([tuple(sorted(c)) for c in sq.symbol_classes()])
    return Net(s, classes)


def joined(net: Net, p: int, q: int) -> bool:
    if p == q:
        raise DimensionError("joined() needs two distinct points")
    lo = net._line_of
    return bool(np.any(lo[:, p - 1] == lo[:, q - 1]))


def joined_matrix(net: Net) -> np.ndarray:
    lo = net._line_of
    adj = np.zeros((net.order**2,) * 2, dtype=bool)
    for row in lo:
        adj |= row[:, None] == row[None, :]
    np.fill_diagonal(adj, False)
    return adj


def scheme_from_net(net: Net) -> AssociationScheme:
    return AssociationScheme(joined_matrix(net))


@dataclass(frozen=True)
class PseudoNet:
    """Points of ``base`` with the complementary joined relation."""

    base: Net

    def joined(self, p: int, q: int) -> bool:
        return not joined(self.base, p, q)

    def relation(self) -> np.ndarray:
        adj = ~joined_matrix(self.base)
        np.fill_diagonal(adj, False)
        return adj


def complementary_net(net: Net, resolution) -> Net:
    """Net whose lines are the transversals of ``resolution``.

    ``resolution`` is a :class:`~mols_forge.resolution.Resolution` or a raw
    list of classes of point lists.  Each new line must meet every line of
    ``net`` exactly once; the new classes must themselves form a net.
    """
    classes: Sequence = getattr(resolution, "classes", resolution)
    raw = [[tuple(getattr(b, "treatments", b)) for b in cls] for cls in classes]
    if getattr(resolution, "order", net.order) != net.order:
        raise DimensionError("resolution order differs from the net order")
    n = net.order
    for c, cls in enumerate(raw):
        for line in cls:
            m = sum(1 << (p - 1) for p in line)
            for oc, omasks in enumerate(net._masks):
                for ox, om in enumerate(omasks):
                    if (m & om).bit_count() != 1:
                        raise IncompatibilityError(
                            f"{'-'.join(map(str, sorted(line)))} meets line {ox + 1} of class {oc + 1} "
                            f"in {(m & om).bit_count()} points",
                            witness=(tuple(sorted(line)), net.classes[oc][ox]),
                        )
    return Net(n, raw)
