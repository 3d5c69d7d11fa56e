"""Two-class association schemes on treatment sets.

A scheme is stored as its first-associate relation (a dense symmetric
boolean matrix); second associates are everything else off the diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionError, MalformedRelationError
from .latin import PolSet, TreatmentGrid


class AssociationScheme:
    """Symmetric irreflexive first-associate relation on points ``1..v``."""

    __slots__ = ("_adj",)

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise MalformedRelationError(f"adjacency must be square, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            a, b = np.argwhere(adj != adj.T)[0]
            raise MalformedRelationError(f"relation is not symmetric at points {a + 1} and {b + 1}")
        if adj.diagonal().any():
            a = int(np.flatnonzero(adj.diagonal())[0])
            raise MalformedRelationError(f"point {a + 1} is related to itself")
        adj.setflags(write=False)
        self._adj = adj

    @classmethod
    def from_edges(cls, v: int, edges: Iterable[tuple[int, int]]) -> "AssociationScheme":
        """Build from 1-based pairs; the symmetric closure is applied."""
        adj = np.zeros((v, v), dtype=bool)
        for a, b in edges:
            if not (1 <= a <= v and 1 <= b <= v):
                raise MalformedRelationError(f"edge ({a}, {b}) outside points 1..{v}")
            if a == b:
                raise MalformedRelationError(f"self-loop at point {a}")
            adj[a - 1, b - 1] = adj[b - 1, a - 1] = True
        return cls(adj)

    @property
    def v(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def first(self, a: int, b: int) -> bool:
        return bool(self._adj[a - 1, b - 1])

    def first_associates(self, t: int) -> frozenset[int]:
        return frozenset(int(x) + 1 for x in np.flatnonzero(self._adj[t - 1]))

    def neighbour_masks(self) -> list[int]:
        """Bit ``b-1`` of entry ``a-1`` is set when a and b are first associates."""
        out = []
        for row in self._adj:
            m = 0
            for x in np.flatnonzero(row):
                m |= 1 << int(x)
            out.append(m)
        return out

    def edges(self) -> list[tuple[int, int]]:
        a, b = np.nonzero(np.triu(self._adj))
        return [(int(x) + 1, int(y) + 1) for x, y in zip(a, b)]

    def __eq__(self, other):
        return isinstance(other, AssociationScheme) and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash(self._adj.tobytes())

    def __repr__(self):
        return f"AssociationScheme(v={self.v}, edges={int(self._adj.sum()) // 2})"


@dataclass(frozen=True)
class SchemeParameters:
    v: int
    n1: int
    n2: int
    p11_1: int
    p12_1: int
    p22_1: int
    p11_2: int
    p12_2: int
    p22_2: int

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ParameterFailure:
    """First place where a count that should be constant is not.

    ``where`` is a point ``(a,)`` for valencies and a pair ``(a, b)`` for the
    intersection numbers; ``expected`` is the value seen at the first point
    or pair of that kind, ``found`` the disagreeing one.
    """

    quantity: str
    where: tuple[int, ...]
    expected: int
    found: int

    def __str__(self):
        pts = ", ".join(map(str, self.where))
        return f"{self.quantity} is {self.found} at ({pts}) but {self.expected} elsewhere"


def _constant(values: np.ndarray, mask: np.ndarray, name: str, pair: bool):
    idx = np.argwhere(mask) if pair else np.flatnonzero(mask)[:, None]
    if len(idx) == 0:
        return 0, None
    vals = values[tuple(idx.T)]
    first = int(vals[0])
    bad = np.flatnonzero(vals != first)
    if len(bad):
        where = tuple(int(x) + 1 for x in idx[bad[0]])
        return first, ParameterFailure(name, where, first, int(vals[bad[0]]))
    return first, None


def compute_parameters(scheme: AssociationScheme) -> SchemeParameters | ParameterFailure:
    a1 = scheme.adjacency.astype(np.int64)
    v = scheme.v
    a2 = 1 - a1 - np.eye(v, dtype=np.int64)
    deg1, deg2 = a1.sum(axis=1), a2.sum(axis=1)
    everyone = np.ones(v, dtype=bool)
    n1, err = _constant(deg1, everyone, "n1", False)
    if err:
        return err
    n2, err = _constant(deg2, everyone, "n2", False)
    if err:
        return err
    # both orientations of every pair: p_kj at (a, b) is p_jk at (b, a)
    rel = {1: a1 == 1, 2: a2 == 1}
    mats = {1: a1, 2: a2}
    vals = {}
    for i in (1, 2):
        for j, k in ((1, 1), (1, 2), (2, 2)):
            val, err = _constant(mats[j] @ mats[k], rel[i], f"p{j}{k}^{i}", True)
            if err:
                return err
            vals[(i, j, k)] = val
    return SchemeParameters(
        v=v,
        n1=n1,
        n2=n2,
        p11_1=vals[(1, 1, 1)],
        p12_1=vals[(1, 1, 2)],
        p22_1=vals[(1, 2, 2)],
        p11_2=vals[(2, 1, 1)],
        p12_2=vals[(2, 1, 2)],
        p22_2=vals[(2, 2, 2)],
    )


def build_Lg_scheme(grid: TreatmentGrid, pol: PolSet) -> AssociationScheme:
    """First associates share a row, a column or a symbol of some square."""
    s = grid.order
    if pol.order != s:
        raise DimensionError(f"grid order {s} but squares of order {pol.order}")
    rows, cols = np.divmod(np.arange(s * s), s)
    adj = (rows[:, None] == rows[None, :]) | (cols[:, None] == cols[None, :])
    for sq in pol.squares:
        flat = sq.array.ravel()
        adj |= flat[:, None] == flat[None, :]
    np.fill_diagonal(adj, False)
    return AssociationScheme(adj)


def induce_complement(scheme: AssociationScheme) -> AssociationScheme:
    adj = ~scheme.adjacency
    np.fill_diagonal(adj, False)
    return AssociationScheme(adj)


def pseudo_Lg_quadruple(g: int, s: int) -> dict[str, int]:
    return {"v": s * s, "n1": g * (s - 1), "p11_1": (s - 2) + (g - 1) * (g - 2), "p11_2": g * (g - 1)}


def complement_closed_forms(g: int, s: int) -> dict[str, int]:
    """Parameters of the complement of a pseudo-L_g(s) scheme, written in g' = s+1-g."""
    h = s + 1 - g
    return {"v": s * s, "n1": h * (s - 1), "p11_1": h * h - 3 * h + s, "p11_2": h * (s - g)}


class Verdict(str, enum.Enum):
    IS_PSEUDO_LG = "is_pseudo_Lg"
    NOT_SCHEME = "not_scheme"
    WRONG_PARAMETERS = "wrong_parameters"


@dataclass(frozen=True)
class PseudoLgWitness:
    g: int
    s: int
    verdict: Verdict
    counterexample: object = None
    parameters: SchemeParameters | None = None

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.IS_PSEUDO_LG


def classify_pseudo_Lg(scheme: AssociationScheme, g: int, s: int) -> PseudoLgWitness:
    if scheme.v != s * s:
        raise DimensionError(f"scheme has {scheme.v} points, expected {s * s}")
    params = compute_parameters(scheme)
    if isinstance(params, ParameterFailure):
        return PseudoLgWitness(g, s, Verdict.NOT_SCHEME, params)
    if params.n2 == 0 or params.n1 == 0:
        return PseudoLgWitness(g, s, Verdict.NOT_SCHEME, "only one associate class is present", params)
    want = pseudo_Lg_quadruple(g, s)
    got = {"v": params.v, "n1": params.n1, "p11_1": params.p11_1, "p11_2": params.p11_2}
    for key in ("v", "n1", "p11_1", "p11_2"):
        if got[key] != want[key]:
            return PseudoLgWitness(g, s, Verdict.WRONG_PARAMETERS, (key, want[key], got[key]), params)
    return PseudoLgWitness(g, s, Verdict.IS_PSEUDO_LG, None, params)


def bruck_polynomial(g: int) -> int:
    return g**4 - 2 * g**3 + 2 * g**2 + g


def bruck_bound_holds(g: int, s: int) -> bool:
    """Exact check of ``2s >= g^4 - 2g^3 + 2g^2 + g``."""
    return 2 * s >= bruck_polynomial(g)


def scheme_payload(scheme: AssociationScheme, adjacency: bool = False) -> dict:
    params = compute_parameters(scheme)
    out: dict = {"v": scheme.v}
    if isinstance(params, ParameterFailure):
        out["parameters"] = None
        out["failure"] = {
            "quantity": params.quantity,
            "where": list(params.where),
            "expected": params.expected,
            "found": params.found,
        }
    else:
        out["parameters"] = params.as_dict()
    if adjacency:
        out["adjacency"] = {str(t): sorted(scheme.first_associates(t)) for t in range(1, scheme.v + 1)}
    return out
