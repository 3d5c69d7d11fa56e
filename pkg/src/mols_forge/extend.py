"""Turning parallel classes of common transversals into new Latin squares."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotLatinError, OrthogonalityError, StructuralError
from .latin import LatinSquare, PolSet, TreatmentGrid, are_orthogonal, validate_pol
from .resolution import Resolution, find_resolution
from .transversals import Transversal, common_transversals


class Status(str, enum.Enum):
    COMPLETED = "completed"
    NO_RESOLUTION = "no_resolution"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class ExtensionResult:
    input: PolSet
    status: Status
    added: tuple[LatinSquare, ...] = ()
    certificate: Resolution | None = None
    transversal_count: int | None = None
    reason: str = field(default="", compare=False)

    @property
    def pol(self) -> PolSet:
        """Input squares followed by the added ones (input only if nothing was added)."""
        if not self.added:
            return self.input
        return PolSet(self.input.order, self.input.squares + self.added)

    def certificate_payload(self) -> dict:
        if self.certificate is None:
            return {"status": self.status.value, "resolution": None, "provenance": []}
        w = self.input.w
        return {
            "status": self.status.value,
            "resolution": self.certificate.to_payload(),
            "provenance": [
                {"square": w + 1 + k, "class": k + 1, "symbols": {str(m): str(t) for m, t in enumerate(cls)}}
                for k, cls in enumerate(self.certificate.classes)
            ],
        }


def _blocks(parallel_class) -> list[tuple[int, ...]]:
    return sorted(tuple(sorted(getattr(b, "treatments", b))) for b in parallel_class)


def square_from_class(grid: TreatmentGrid, parallel_class: Sequence, pol: PolSet | None = None) -> LatinSquare:
    """Cell of treatment t gets symbol m-1 when t lies on the m-th block (sorted order).

    When ``pol`` is given, the new square must also be orthogonal to each of
    its squares.
    """
    s = grid.order
    blocks = _blocks(parallel_class)
    pts = [p for b in blocks for p in b]
    if len(blocks) != s or sorted(pts) != list(range(1, s * s + 1)):
        raise StructuralError(f"expected {s} blocks partitioning treatments 1..{s * s}")
    arr = np.empty(s * s, dtype=np.int64)
    for m, b in enumerate(blocks):
        arr[[p - 1 for p in b]] = m
    try:
        square = LatinSquare(arr.reshape(s, s))
    except NotLatinError:
        raise NotLatinError("blocks are not transversals of the grid, so the result is not Latin") from None
    if pol is not None:
        for k, other in enumerate(pol.squares):
            if not are_orthogonal(square, other):
                raise OrthogonalityError(f"new square is not orthogonal to L{k + 1}", pair=(k, pol.w))
    return square


def extend_by_one(pol: PolSet, parallel_class: Sequence) -> PolSet:
    square = square_from_class(pol.grid, parallel_class)
    try:
        return validate_pol(list(pol.squares) + [square])
    except OrthogonalityError as exc:
        raise OrthogonalityError(
            f"class does not consist of common transversals: {exc}", pair=exc.pair, witness=exc.witness
        ) from None


def complete_pol(pol: PolSet, threads: int = 1, transversals: Sequence[Transversal] | None = None) -> ExtensionResult:
    """Extend ``pol`` to ``s-1`` squares through a resolution of its common transversals.

    Only attempted when ``s >= w + 4``; smaller gaps give ``not_applicable``.
    """
    s, w = pol.order, pol.w
    if w < 1 or s < w + 4:
        return ExtensionResult(pol, Status.NOT_APPLICABLE, reason=f"needs w >= 1 and s >= w + 4 (s={s}, w={w})")
    ts = transversals if transversals is not None else common_transversals(pol, threads=threads)
    res = find_resolution(pol, s - 1 - w, threads=threads, transversals=ts)
    if res is None:
        return ExtensionResult(pol, Status.NO_RESOLUTION, transversal_count=len(ts), reason="search exhausted")
    added = [square_from_class(pol.grid, cls) for cls in res.classes]
    full = validate_pol(list(pol.squares) + added)
    return ExtensionResult(pol, Status.COMPLETED, tuple(full.squares[w:]), res, len(ts))
