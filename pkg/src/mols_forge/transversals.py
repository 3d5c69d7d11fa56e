"""Deletion views and exact enumeration of common transversals.

Every cell gets one integer ``key`` with a bit for its column and a bit for
its symbol in each square.  A partial transversal is a set of cells whose
keys are pairwise disjoint, so both the deletion operator and the depth-first
enumeration reduce to AND tests against an accumulated ``used`` mask.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidAnchorError
from .formats import dash
from .latin import PolSet


@dataclass(frozen=True, order=True)
class Transversal:
    order: int
    treatments: tuple[int, ...]

    def __str__(self):
        return dash(self.treatments)

    def __iter__(self):
        return iter(self.treatments)

    def __len__(self):
        return len(self.treatments)

    def __contains__(self, t):
        return t in self.treatments

    @cached_property
    def mask(self) -> int:
        m = 0
        for t in self.treatments:
            m |= 1 << (t - 1)
        return m

    @classmethod
    def parse(cls, text: str, order: int) -> "Transversal":
        from .formats import undash

        return cls(order, tuple(sorted(undash(text))))


def _cell_keys(pol: PolSet) -> list[list[int]]:
    s, w = pol.order, pol.w
    keys = []
    for i in range(s):
        row = []
        for j in range(s):
            key = 1 << (w * s + j)
            for k, sq in enumerate(pol.squares):
                key |= 1 << (k * s + sq.cells[i][j])
            row.append(key)
        keys.append(row)
    return keys


def _relation(pol: PolSet, a: int, b: int) -> str | None:
    s = pol.order
    (i, j), (k, l) = divmod(a - 1, s), divmod(b - 1, s)
    if i == k:
        return "same row"
    if j == l:
        return "same column"
    for idx, sq in enumerate(pol.squares):
        if sq.cells[i][j] == sq.cells[k][l]:
            return f"same symbol of L{idx + 1}"
    return None


def check_anchors(pol: PolSet, anchors: Sequence[int]) -> tuple[int, ...]:
    """Validate a partial transversal; returns the anchors sorted.

    The error names the first offending pair and the relation it breaks.
    """
    n = pol.order**2
    seen = []
    for t in anchors:
        if not isinstance(t, (int, np.integer)) or not 1 <= t <= n:
            raise InvalidAnchorError(f"treatment {t!r} outside 1..{n}")
        t = int(t)
        if t in seen:
            raise InvalidAnchorError(f"treatment {t} given twice", pair=(t, t), relation="duplicate")
        for u in seen:
            rel = _relation(pol, u, t)
            if rel is not None:
                raise InvalidAnchorError(f"anchors {u} and {t} lie in the {rel}", pair=(u, t), relation=rel)
        seen.append(t)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class DeletionView:
    pol: PolSet
    anchors: tuple[int, ...]
    surviving: frozenset[int]
    paused: bool

    @property
    def order(self) -> int:
        return self.pol.order

    def as_array(self) -> np.ndarray:
        """Grid with anchors and survivors kept and struck cells set to 0."""
        s = self.order
        arr = np.zeros((s, s), dtype=np.int64)
        for t in self.surviving | set(self.anchors):
            arr[divmod(t - 1, s)] = t
        return arr


def delete(pol: PolSet, anchors: Sequence[int]) -> DeletionView:
    """Strike every treatment sharing a row, column or symbol with an anchor.

    The view is paused when fewer than ``s`` anchors are given and some row
    or column without an anchor has no survivor left.
    """
    anchors = check_anchors(pol, anchors)
    s = pol.order
    keys = _cell_keys(pol)
    used = 0
    rows = set()
    for t in anchors:
        i, j = divmod(t - 1, s)
        used |= keys[i][j]
        rows.add(i)
    surviving = frozenset(
        i * s + j + 1 for i in range(s) if i not in rows for j in range(s) if not keys[i][j] & used
    )
    paused = False
    if len(anchors) < s:
        live_rows = {(t - 1) // s for t in surviving}
        live_cols = {(t - 1) % s for t in surviving}
        anchor_cols = {(t - 1) % s for t in anchors}
        paused = any(i not in live_rows for i in range(s) if i not in rows) or any(
            j not in live_cols for j in range(s) if j not in anchor_cols
        )
    return DeletionView(pol, anchors, surviving, paused)


def _search(keys, free_rows, used, fixed, emit, s):
    """Depth-first over ``free_rows``; ``emit`` receives each completed cell list."""
    depth_max = len(free_rows)
    chosen = list(fixed)

    def rec(depth, used):
        if depth == depth_max:
            emit(chosen)
            return
        i = free_rows[depth]
        row = keys[i]
        base = i * s + 1
        for j in range(s):
            key = row[j]
            if key & used:
                continue
            chosen.append(base + j)
            rec(depth + 1, used | key)
            chosen.pop()

    rec(0, used)


def _prepare(pol: PolSet, through: Sequence[int]):
    anchors = check_anchors(pol, through)
    s = pol.order
    keys = _cell_keys(pol)
    used = 0
    fixed_rows = set()
    for t in anchors:
        i, j = divmod(t - 1, s)
        used |= keys[i][j]
        fixed_rows.add(i)
    free = [i for i in range(s) if i not in fixed_rows]
    return anchors, keys, used, free


def _branches(keys, free, used, s):
    """Split the tree at the first free row; each branch is ``(cell, used)``."""
    if not free:
        return []
    i = free[0]
    return [(i * s + j + 1, used | keys[i][j]) for j in range(s) if not keys[i][j] & used]


def _run_branches(fn, branches, threads):
    if threads and threads > 1 and len(branches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, branches))
    return [fn(b) for b in branches]


def common_transversals(pol: PolSet, through: Sequence[int] = (), threads: int = 1) -> list[Transversal]:
    """All common transversals of ``pol`` containing every treatment in ``through``.

    An empty ``through`` enumerates everything.  Output is sorted
    lexicographically by treatment list and never depends on ``threads``.
    """
    anchors, keys, used, free = _prepare(pol, through)
    s = pol.order
    if not free:
        return [Transversal(s, anchors)]

    def work(branch):
        cell, u = branch
        found: list[tuple[int, ...]] = []
        _search(keys, free[1:], u, (*anchors, cell), lambda c: found.append(tuple(sorted(c))), s)
        return found

    parts = _run_branches(work, _branches(keys, free, used, s), threads)
    return sorted(Transversal(s, t) for part in parts for t in part)


def count_all_transversals(pol: PolSet, threads: int = 1) -> int:
    _, keys, used, free = _prepare(pol, ())
    s = pol.order

    def work(branch):
        _, u = branch
        box = [0]

        def bump(_c):
            box[0] += 1

        _search(keys, free[1:], u, (), bump, s)
        return box[0]

    return sum(_run_branches(work, _branches(keys, free, used, s), threads))


def is_common_transversal(pol: PolSet, treatments: Iterable[int]) -> bool:
    ts = list(treatments)
    if len(ts) != pol.order:
        return False
    try:
        check_anchors(pol, ts)
    except InvalidAnchorError:
        return False
    return True
