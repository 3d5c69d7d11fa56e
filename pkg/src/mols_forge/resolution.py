"""Exact search for resolutions: ``d`` parallel classes of blocks in which
blocks of different classes meet in exactly one point.

The engine works on arbitrary size-``s`` blocks over the points ``1..s*s``,
so it serves both common transversals of a square set and cliques of a
scheme graph.  Classes are built one at a time; inside a class the smallest
uncovered point is covered next, trying candidate blocks in lexicographic
order.  Compatibility ("disjoint", "meets in one") is precomputed as bit rows
over block indices so the inner loop is integer AND.

Every class contains exactly one block through point 1 and that block is its
lexicographically smallest member.  Requiring those blocks to increase from
class to class picks one canonical ordering per set-family, which is what
makes counts match "distinct as set-families".
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError, StructuralError
from .formats import dash
from .latin import PolSet
from .transversals import Transversal, common_transversals


@dataclass(frozen=True)
class Resolution:
    order: int
    classes: tuple[tuple[Transversal, ...], ...]

    @property
    def degree(self) -> int:
        return len(self.classes)

    @property
    def transversals(self) -> list[Transversal]:
        return [t for cls in self.classes for t in cls]

    def canonical(self) -> "Resolution":
        classes = sorted(tuple(sorted(cls)) for cls in self.classes)
        return Resolution(self.order, tuple(classes))

    def to_payload(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "classes": [[str(t) for t in cls] for cls in self.classes],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Resolution":
        s = int(payload["order"])
        classes = tuple(tuple(Transversal.parse(t, s) for t in c) for c in payload["classes"])
        return cls(s, classes)

    def problems(self) -> list[str]:
        """Empty when both resolution invariants hold, else human-readable failures."""
        s = self.order
        everything = set(range(1, s * s + 1))
        out = []
        for c, cls in enumerate(self.classes):
            pts = [p for t in cls for p in t.treatments]
            if len(cls) != s or len(pts) != s * s or set(pts) != everything:
                out.append(f"class {c + 1} is not a partition of the {s * s} treatments")
        for c1 in range(len(self.classes)):
            for c2 in range(c1 + 1, len(self.classes)):
                for a in self.classes[c1]:
                    for b in self.classes[c2]:
                        k = len(set(a.treatments) & set(b.treatments))
                        if k != 1:
                            out.append(f"{a} (class {c1 + 1}) and {b} (class {c2 + 1}) share {k} treatments")
        return out


class BlockIndex:
    """Lexicographically sorted blocks with precomputed compatibility rows."""

    def __init__(self, blocks: Sequence[Sequence[int]], order: int):
        s = order
        uniq = sorted({tuple(sorted(int(p) for p in b)) for b in blocks})
        for b in uniq:
            if len(b) != s or b[0] < 1 or b[-1] > s * s:
                raise StructuralError(f"block {dash(b)} is not a set of {s} points from 1..{s * s}")
        self.order = s
        self.blocks = uniq
        n = len(uniq)
        # float32 routes the product through BLAS; entries stay small exact integers
        inc = np.zeros((n, s * s), dtype=np.float32)
        for k, b in enumerate(uniq):
            inc[k, [p - 1 for p in b]] = 1
        self.masks = [sum(1 << (p - 1) for p in b) for b in uniq]
        meet = (inc @ inc.T).astype(np.int64) if n else np.zeros((0, 0), dtype=np.int64)
        self.disjoint = _bit_rows(meet == 0)
        self.meets_one = _bit_rows(meet == 1)
        self.through = [np.flatnonzero(inc[:, p]).tolist() for p in range(s * s)]

    def __len__(self):
        return len(self.blocks)


def _bit_rows(flags: np.ndarray) -> list[int]:
    """Row k of a boolean matrix as an int with bit j set when ``flags[k, j]``."""
    packed = np.packbits(flags, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class _Stop(Exception):
    pass


def _search(idx: BlockIndex, d: int, emit: Callable[[list[list[int]]], None], first: int | None = None):
    """Enumerate canonical resolutions with ``d`` classes.

    ``first`` pins the block through point 1 of the first class, which is
    how the tree is split between workers.
    """
    s = idx.order
    full = (1 << (s * s)) - 1
    n = len(idx)
    classes: list[list[int]] = [[] for _ in range(d)]
    masks, disjoint, meets_one, through = idx.masks, idx.disjoint, idx.meets_one, idx.through

    def rec(c, cov, allowed, cross, prev_first):
        if cov == full:
            if c + 1 == d:
                emit([list(x) for x in classes])
                return
            rec(c + 1, 0, cross, cross, classes[c][0])
            return
        free = ~cov & full
        p = (free & -free).bit_length() - 1
        for k in through[p]:
            if not allowed >> k & 1:
                continue
            if cov == 0:
                if k <= prev_first or (c == 0 and first is not None and k != first):
                    continue
            classes[c].append(k)
            rec(c, cov | masks[k], allowed & disjoint[k], cross & meets_one[k], prev_first)
            classes[c].pop()

    if d == 0:
        emit([])
        return
    everything = (1 << n) - 1
    rec(0, 0, everything, everything, -1)


def _to_resolution(idx: BlockIndex, classes: list[list[int]]) -> Resolution:
    s = idx.order
    return Resolution(s, tuple(tuple(Transversal(s, idx.blocks[k]) for k in sorted(c)) for c in classes))


def _branch_firsts(idx: BlockIndex) -> list[int]:
    return list(idx.through[0]) if len(idx) else []


def count_block_resolutions(
    blocks: Sequence[Sequence[int]] | BlockIndex, order: int, d: int, limit: int | None = None, threads: int = 1
) -> int:
    """Number of distinct ``d``-class resolutions formed from ``blocks``, capped at ``limit``."""
    idx = blocks if isinstance(blocks, BlockIndex) else BlockIndex(blocks, order)
    if d == 0:
        return 1

    def work(first):
        box = [0]

        def emit(_):
            box[0] += 1
            if limit is not None and box[0] >= limit:
                raise _Stop

        try:
            _search(idx, d, emit, first)
        except _Stop:
            pass
        return box[0]

    firsts = _branch_firsts(idx)
    if threads > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, firsts))
    else:
        parts = []
        for f in firsts:
            parts.append(work(f))
            if limit is not None and sum(parts) >= limit:
                break
    total = sum(parts)
    return min(total, limit) if limit is not None else total


def find_block_resolution(
    blocks: Sequence[Sequence[int]] | BlockIndex, order: int, d: int, threads: int = 1
) -> Resolution | None:
    """First resolution in search order, or ``None`` when none exists."""
    idx = blocks if isinstance(blocks, BlockIndex) else BlockIndex(blocks, order)
    if d == 0:
        return Resolution(idx.order, ())

    def work(first):
        box = []

        def emit(classes):
            box.append(classes)
            raise _Stop

        try:
            _search(idx, d, emit, first)
        except _Stop:
            pass
        return box[0] if box else None

    firsts = _branch_firsts(idx)
    if threads > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, firsts))
    else:
        results = []
        for f in firsts:
            results.append(work(f))
            if results[-1] is not None:
                break
    for r in results:
        if r is not None:
            return _to_resolution(idx, r)
    return None


def all_block_resolutions(
    blocks: Sequence[Sequence[int]] | BlockIndex, order: int, d: int, limit: int | None = None
) -> list[Resolution]:
    idx = blocks if isinstance(blocks, BlockIndex) else BlockIndex(blocks, order)
    out: list[Resolution] = []

    def emit(classes):
        out.append(_to_resolution(idx, classes))
        if limit is not None and len(out) >= limit:
            raise _Stop

    try:
        _search(idx, d, emit)
    except _Stop:
        pass
    return out


def find_parallel_class(transversals: Sequence[Transversal]) -> list[tuple[Transversal, ...]]:
    """Every family of ``s`` pairwise disjoint transversals covering all treatments."""
    ts = list(transversals)
    if not ts:
        return []
    s = ts[0].order
    if len(ts) < s:
        return []
    idx = BlockIndex([t.treatments for t in ts], s)
    full = (1 << (s * s)) - 1
    out: list[tuple[Transversal, ...]] = []
    chosen: list[int] = []

    def rec(cov, allowed):
        if cov == full:
            out.append(tuple(Transversal(s, idx.blocks[k]) for k in chosen))
            return
        free = ~cov & full
        p = (free & -free).bit_length() - 1
        for k in idx.through[p]:
            if allowed >> k & 1:
                chosen.append(k)
                rec(cov | idx.masks[k], allowed & idx.disjoint[k])
                chosen.pop()

    rec(0, (1 << len(idx)) - 1)
    return out


def _degree_check(pol: PolSet, d: int):
    if d < 0 or d > pol.order - 1 - pol.w:
        raise PreconditionError(f"degree {d} outside 0..{pol.order - 1 - pol.w} for s={pol.order}, w={pol.w}")


def find_resolution(
    pol: PolSet, target_degree: int, threads: int = 1, transversals: Sequence[Transversal] | None = None
) -> Resolution | None:
    _degree_check(pol, target_degree)
    ts = transversals if transversals is not None else common_transversals(pol, threads=threads)
    return find_block_resolution([t.treatments for t in ts], pol.order, target_degree, threads)


def count_resolutions(pol: PolSet, d: int, limit: int | None = None, threads: int = 1) -> int:
    _degree_check(pol, d)
    ts = common_transversals(pol, threads=threads)
    return count_block_resolutions([t.treatments for t in ts], pol.order, d, limit, threads)
