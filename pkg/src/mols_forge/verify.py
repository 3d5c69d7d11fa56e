"""Structural checks on pseudo schemes, evaluated on concrete clique data.

Naming: the six numbered *properties* (i)..(vi) hold in every genuine
L_g(s) scheme; the five *conditions* (I)..(V) each certify, when they are
established, that a pseudo scheme is not a genuine one.  A report stores a
witness only for what went wrong: a failed property or an established
condition.

All searches run over ``clique_index``, the size-``s`` cliques of the
first-associate graph, which :func:`cliques_of_size` enumerates exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import DimensionError, InvalidCliqueError, PreconditionError, StructuralError
from .formats import dash
from .latin import PolSet
from .resolution import count_block_resolutions
from .scheme import AssociationScheme, Verdict, build_Lg_scheme, classify_pseudo_Lg, induce_complement
from .transversals import common_transversals


@dataclass(frozen=True, order=True)
class CliqueSet:
    treatments: tuple[int, ...]

    def __init__(self, treatments: Iterable[int]):
        object.__setattr__(self, "treatments", tuple(sorted(int(t) for t in treatments)))

    def __iter__(self):
        return iter(self.treatments)

    def __len__(self):
        return len(self.treatments)

    def __contains__(self, t):
        return t in self.treatments

    def __str__(self):
        return dash(self.treatments)

    @property
    def points(self) -> frozenset[int]:
        return frozenset(self.treatments)

    def is_clique(self, scheme: AssociationScheme) -> bool:
        adj = scheme.adjacency
        return all(adj[a - 1, b - 1] for a, b in combinations(self.treatments, 2))


def _clique(c) -> CliqueSet:
    return c if isinstance(c, CliqueSet) else CliqueSet(getattr(c, "treatments", c))


def order_of(scheme: AssociationScheme) -> int:
    s = math.isqrt(scheme.v)
    if s * s != scheme.v:
        raise DimensionError(f"{scheme.v} points is not a perfect square")
    return s


def cliques_of_size(scheme: AssociationScheme, size: int, through: int | None = None) -> list[CliqueSet]:
    """Every clique with exactly ``size`` points, sorted, optionally through one point.

    Plain branch and bound on bit sets: a branch dies once its candidates
    cannot reach ``size``.
    """
    nbr = scheme.neighbour_masks()
    out: list[CliqueSet] = []
    chosen: list[int] = []

    def ext(cand: int):
        if len(chosen) == size:
            out.append(CliqueSet(x + 1 for x in chosen))
            return
        need = size - len(chosen)
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            chosen.append(x)
            ext(cand & nbr[x])
            chosen.pop()

    if through is None:
        ext((1 << scheme.v) - 1)
    else:
        chosen.append(through - 1)
        ext(nbr[through - 1])
    return sorted(out)


def count_formations(scheme: AssociationScheme, g: int, limit: int | None = None, threads: int = 1) -> int:
    """Distinct ways to arrange the size-s cliques into ``g`` classes forming an L_g(s) structure.

    Same engine as :func:`~mols_forge.resolution.count_resolutions`, fed with
    scheme cliques instead of common transversals.
    """
    s = order_of(scheme)
    blocks = [c.treatments for c in cliques_of_size(scheme, s)]
    return count_block_resolutions(blocks, s, g, limit=limit, threads=threads)


@dataclass(frozen=True)
class Classification:
    """Parallel classes of cliques; each class partitions every point."""

    order: int
    classes: tuple[tuple[CliqueSet, ...], ...]

    def __post_init__(self):
        s = self.order
        classes = tuple(tuple(sorted(_clique(b) for b in cls)) for cls in self.classes)
        object.__setattr__(self, "classes", classes)
        everything = list(range(1, s * s + 1))
        for c, cls in enumerate(classes):
            pts = sorted(p for b in cls for p in b)
            if len(cls) != s or any(len(b) != s for b in cls) or pts != everything:
                raise StructuralError(f"class {c + 1} is not {s} disjoint sets covering all {s * s} points")

    @classmethod
    def from_resolution(cls, resolution) -> "Classification":
        return cls(resolution.order, tuple(tuple(CliqueSet(t.treatments) for t in c) for c in resolution.classes))

    def blocks_through(self, t: int) -> list[tuple[int, CliqueSet]]:
        return [(c, b) for c, cls in enumerate(self.classes) for b in cls if t in b]


@dataclass(frozen=True)
class Check:
    label: str
    ok: bool
    witness: object = None
    note: str = ""


@dataclass(frozen=True)
class PropertyReport:
    kind: str
    checks: tuple[Check, ...]
    certified: bool | None = None
    notes: tuple[str, ...] = field(default=())

    def __getitem__(self, label: str) -> Check:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def verdict(self, label: str) -> str:
        c = self[label]
        if self.kind == "conditions":
            return "clear" if c.ok else "hit"
        return "satisfied" if c.ok else "failed"

    def to_payload(self) -> dict:
        out: dict = {"kind": self.kind}
        for c in self.checks:
            entry: dict = {"verdict": self.verdict(c.label)}
            if c.witness is not None:
                entry["witness"] = _plain(c.witness)
            if c.note:
                entry["note"] = c.note
            out[c.label] = entry
        if self.certified is not None:
            out["certified"] = self.certified
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _plain(x):
    if isinstance(x, CliqueSet):
        return dash(x.treatments)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    return x


# --------------------------------------------------------------- partitions


def _exact_parts(target: frozenset[int], parts: Sequence[frozenset[int]], g: int) -> list[tuple[int, ...]]:
    """Index tuples of ``g`` pairwise disjoint ``parts`` whose union is ``target``.

    Always covering the smallest uncovered point yields each split once.
    """
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(left: frozenset[int]):
        if not left:
            if len(chosen) == g:
                out.append(tuple(chosen))
            return
        if len(chosen) == g:
            return
        pivot = min(left)
        for k, p in enumerate(parts):
            if pivot in p and p <= left:
                chosen.append(k)
                rec(left - p)
                chosen.pop()

    rec(target)
    return out


def neighbor_partitions(
    scheme: AssociationScheme, t: int, g: int, cliques: Sequence | None = None
) -> list[tuple[CliqueSet, ...]]:
    """All ways to split the first associates of ``t`` into ``g`` clique parts.

    Each part plus ``t`` is one of ``cliques`` (all size-s cliques through
    ``t`` when omitted).  Partitions are returned as sorted clique tuples.
    """
    s = order_of(scheme)
    if cliques is None:
        cliques = cliques_of_size(scheme, s, through=t)
    cl = sorted({_clique(c) for c in cliques})
    for c in cl:
        if t not in c:
            raise InvalidCliqueError(f"{c} does not contain {t}")
        if len(c) != s or not c.is_clique(scheme):
            raise InvalidCliqueError(f"{c} is not a {s}-clique of the scheme")
    nbrs = scheme.first_associates(t)
    if len(nbrs) != g * (s - 1):
        return []
    parts = [c.points - {t} for c in cl]
    found = _exact_parts(frozenset(nbrs), parts, g)
    return sorted(tuple(sorted(cl[k] for k in combo)) for combo in found)


# ------------------------------------------------------------ six properties


def _first_pair_fault(classification: Classification):
    classes = classification.classes
    for i, j in combinations(range(len(classes)), 2):
        for m, a in enumerate(classes[i]):
            for n, b in enumerate(classes[j]):
                common = a.points & b.points
                if len(common) != 1:
                    return {
                        "classes": (i + 1, j + 1),
                        "blocks": (m + 1, n + 1),
                        "sets": (a, b),
                        "intersection": sorted(common),
                    }
    return None


def _pair_v_fault(scheme, t1, t2, through1, through2, g):
    """Return a description of the first clause of (v) that fails for (t1, t2)."""
    adj = scheme.adjacency
    with2 = [b for b in through1 if t2 in b]
    with1 = [b for b in through2 if t1 in b]
    if len(with2) != 1 or len(with1) != 1 or with2[0] != with1[0]:
        return {"clause": "a", "pair": (t1, t2), "sets": with2 + [b for b in with1 if b not in with2]}
    for clause, (u1, u2, here, there) in (("b", (t1, t2, through1, through2)), ("c", (t2, t1, through2, through1))):
        for p in here:
            if u2 in p:
                continue
            hits = [q for q in there if u1 not in q]
            empty = [q for q in hits if not (p.points & q.points)]
            if len(empty) != 1:
                return {"clause": clause, "pair": (t1, t2), "set": p, "disjoint_partners": empty}
            for q in hits:
                if q == empty[0]:
                    continue
                common = p.points & q.points
                if len(common) != 1:
                    return {"clause": clause, "pair": (t1, t2), "sets": (p, q), "intersection": sorted(common)}
                (x,) = common
                if not (adj[x - 1, t1 - 1] and adj[x - 1, t2 - 1]):
                    return {"clause": clause, "pair": (t1, t2), "sets": (p, q), "not_common_associate": x}
    return None


def check_six_properties(scheme: AssociationScheme, classification: Classification, g: int) -> PropertyReport:
    """Evaluate (i)..(vi) with the sets A_k read off the classification.

    For a point t the parts A_k are the classification's blocks through t
    with t removed; (iii) falls back to an exhaustive search when those
    blocks do not split the neighbourhood.
    """
    s = classification.order
    if scheme.v != s * s:
        raise DimensionError(f"scheme has {scheme.v} points, classification order {s}")
    for c, cls in enumerate(classification.classes):
        for b in cls:
            if not b.is_clique(scheme):
                raise StructuralError(f"{b} in class {c + 1} is not a clique of the scheme")
    checks: list[Check] = []
    classes = classification.classes

    # (i)
    dup = next(
        ((i + 1, j + 1) for i, j in combinations(range(len(classes)), 2) if set(classes[i]) == set(classes[j])), None
    )
    if len(classes) != g:
        checks.append(Check("(i)", False, {"classes": len(classes), "expected": g}))
    elif dup:
        checks.append(Check("(i)", False, {"identical_classes": dup}))
    else:
        checks.append(Check("(i)", True))

    # (ii)
    fault = _first_pair_fault(classification)
    checks.append(Check("(ii)", fault is None, fault))

    through = {t: [b for _, b in classification.blocks_through(t)] for t in range(1, s * s + 1)}
    nbrs = {t: scheme.first_associates(t) for t in through}

    def splits(t) -> bool:
        parts = [b.points - {t} for b in through[t]]
        if len(parts) != g:
            return False
        union = frozenset().union(*parts)
        return union == nbrs[t] and sum(map(len, parts)) == len(nbrs[t])

    # (iii) and (iv)
    bad3 = bad4 = None
    for t in range(1, s * s + 1):
        if splits(t):
            continue
        if bad4 is None:
            bad4 = {"t": t, "blocks": through[t]}
        if bad3 is None and not neighbor_partitions(scheme, t, g):
            bad3 = {"t": t}
        if bad3 is not None:
            break
    checks.append(Check("(iii)", bad3 is None, bad3))
    checks.append(Check("(iv)", bad4 is None, bad4))

    # (v)
    fault5 = None
    if bad4 is not None:
        fault5 = {"clause": "setup", "t": bad4["t"], "reason": "blocks through t do not split its first associates"}
    else:
        for t1, t2 in scheme.edges():
            fault5 = _pair_v_fault(scheme, t1, t2, through[t1], through[t2], g)
            if fault5:
                break
    checks.append(Check("(v)", fault5 is None, fault5))

    # (vi)
    adj = scheme.adjacency
    fault6 = None
    if bad4 is not None:
        fault6 = {"t": bad4["t"], "reason": "blocks through t do not split its first associates"}
    else:
        for t in range(1, s * s + 1):
            parts = [sorted(b.points - {t}) for b in through[t]]
            for i, j in permutations(range(len(parts)), 2):
                for a in parts[i]:
                    k = int(sum(adj[a - 1, x - 1] for x in parts[j]))
                    if k != g - 2:
                        fault6 = {"t": t, "a": a, "A_i": parts[i], "A_j": parts[j], "count": k, "expected": g - 2}
                        break
                if fault6:
                    break
            if fault6:
                break
    checks.append(Check("(vi)", fault6 is None, fault6))
    return PropertyReport("properties", tuple(checks))


# ------------------------------------------------------- violation conditions


class _Ambient:
    """Parallel classes that the clique index can form, computed on demand."""

    def __init__(self, cliques: Sequence[CliqueSet], s: int):
        self.cliques = list(cliques)
        self.s = s
        self.sets = [c.points for c in self.cliques]
        self._in_class: dict[int, bool] = {}

    def _cover(self, left: frozenset[int], first_only: bool, cap: int | None, seed=()):
        out: list[tuple[int, ...]] = []
        chosen = list(seed)

        def rec(left):
            if (first_only and out) or (cap is not None and len(out) >= cap):
                return
            if not left:
                out.append(tuple(sorted(chosen)))
                return
            pivot = min(left)
            for k, p in enumerate(self.sets):
                if pivot in p and p <= left:
                    chosen.append(k)
                    rec(left - p)
                    chosen.pop()

        rec(left)
        return out

    def classes(self, cap: int | None) -> list[tuple[int, ...]]:
        return self._cover(frozenset(range(1, self.s**2 + 1)), False, cap)

    def in_some_class(self, k: int) -> bool:
        if k not in self._in_class:
            rest = frozenset(range(1, self.s**2 + 1)) - self.sets[k]
            self._in_class[k] = bool(self._cover(rest, True, None, seed=(k,)))
        return self._in_class[k]


def detect_violations(
    scheme: AssociationScheme,
    g: int,
    clique_index: Sequence | None = None,
    classification: Classification | None = None,
) -> PropertyReport:
    """Evaluate (I)..(V); any established condition rules out a genuine L_g(s).

    (IV) needs a reference split of the neighbourhood: the classification's
    blocks when one is supplied, otherwise the first neighbour partition in
    sorted order.
    """
    s = order_of(scheme)
    cliques = sorted({_clique(c) for c in clique_index}) if clique_index is not None else cliques_of_size(scheme, s)
    amb = _Ambient(cliques, s)
    v = scheme.v
    checks: list[Check] = []

    # (I)
    pcs = amb.classes(cap=g + 1)
    hit1 = len(pcs) > g
    checks.append(
        Check("(I)", not hit1, {"classes": [[cliques[k] for k in pc] for pc in pcs]} if hit1 else None)
    )

    # (II)
    hit2 = None
    for a, b in combinations(range(len(cliques)), 2):
        k = len(amb.sets[a] & amb.sets[b])
        if 1 < k < s and amb.in_some_class(a) and amb.in_some_class(b):
            hit2 = {"sets": (cliques[a], cliques[b]), "intersection": sorted(amb.sets[a] & amb.sets[b])}
            break
    checks.append(Check("(II)", hit2 is None, hit2))

    # (III)
    through = {t: [c for c in cliques if t in c] for t in range(1, v + 1)}
    partitions: dict[int, list] = {}
    hit3 = None
    for t in range(1, v + 1):
        partitions[t] = neighbor_partitions(scheme, t, g, through[t])
        if hit3 is None and len(partitions[t]) > 1:
            hit3 = {"t": t, "partitions": partitions[t][:2]}
    checks.append(Check("(III)", hit3 is None, hit3))

    # (IV)
    hit4 = None
    note4 = "reference split from the classification under test" if classification else (
        "reference split is the first neighbour partition; the ambient family is every clique lying in some "
        "parallel class of the clique index"
    )
    for t in range(1, v + 1):
        if classification is not None:
            ref = [b for _, b in classification.blocks_through(t)]
        elif partitions[t]:
            ref = list(partitions[t][0])
        else:
            ref = []
        ref_set = set(ref)
        for c in through[t]:
            if c not in ref_set and amb.in_some_class(cliques.index(c)):
                hit4 = {"t": t, "set": c, "reference": ref}
                break
        if hit4:
            break
    checks.append(Check("(IV)", hit4 is None, hit4, note4))

    # (V)
    hit5 = _condition_v(scheme, through, s)
    checks.append(Check("(V)", hit5 is None, hit5))
    return PropertyReport("conditions", tuple(checks))


def _condition_v(scheme, through, s):
    """First pair (t1, t2) establishing (V), preferring non-unique containing sets."""

    def find(special: bool):
        for t1, t2 in scheme.edges():
            p_list, q_list = through[t1], through[t2]
            containing = [c for c in p_list if t2 in c]
            if special:
                if len(containing) < 2:
                    continue
                p2, q3 = containing[0], containing[1]
            else:
                pair = next(
                    ((p, q) for p in p_list for q in q_list if p != q and 1 < len(p.points & q.points) < s), None
                )
                if pair is None:
                    continue
                p2, q3 = pair
            for p1 in p_list:
                if t2 in p1 or p1 == p2:
                    continue
                away = [q for q in q_list if q != q3 and not (p1.points & q.points)]
                if len(away) >= 2:
                    return {
                        "pair": (t1, t2),
                        "containing": containing,
                        "P1": p1,
                        "Q1": away[0],
                        "Q2": away[1],
                        "P2": p2,
                        "Q3": q3,
                        "intersection": sorted(p2.points & q3.points),
                    }
        return None

    return find(True) or find(False)


# ---------------------------------------------------------------- g = 3 case


def check_g3_conditions(scheme: AssociationScheme, s: int) -> PropertyReport:
    """(I) every neighbourhood splits into three cliques Y, Z, W; (I') each member
    of one part has exactly one first associate in each other part.

    Certification additionally needs s > 4.
    """
    if classify_pseudo_Lg(scheme, 3, s).verdict is not Verdict.IS_PSEUDO_LG:
        raise PreconditionError("scheme is not a pseudo-L3(s) scheme")
    adj = scheme.adjacency
    bad1 = bad2 = None
    for x in range(1, s * s + 1):
        parts = neighbor_partitions(scheme, x, 3)
        if not parts:
            bad1 = bad1 or {"x": x}
            bad2 = bad2 or {"x": x, "reason": "no split exists"}
            continue
        good = None
        for part in parts:
            sets = [sorted(c.points - {x}) for c in part]
            if all(
                sum(adj[y - 1, z - 1] for z in sets[j]) == 1 for i, j in permutations(range(3), 2) for y in sets[i]
            ):
                good = part
                break
        if good is None and bad2 is None:
            bad2 = {"x": x, "splits": parts}
    checks = (Check("(I)", bad1 is None, bad1), Check("(I')", bad2 is None, bad2))
    both = bad1 is None and bad2 is None
    notes = () if s > 4 else (f"s={s} is not above 4, so the conditions do not certify an L3(s) scheme",)
    return PropertyReport("g3", checks, certified=both and s > 4, notes=notes)


# ------------------------------------------------------------- uniqueness


@dataclass(frozen=True)
class ContainingSets:
    unique: bool
    sets: tuple[CliqueSet, ...]


def unique_containing_set(scheme: AssociationScheme, a: int, b: int, clique_index: Sequence | None = None) -> ContainingSets:
    if a == b or not scheme.first(a, b):
        raise DimensionError(f"{a} and {b} are not first associates")
    s = order_of(scheme)
    if clique_index is None:
        sets = [c for c in cliques_of_size(scheme, s, through=a) if b in c]
    else:
        sets = sorted({_clique(c) for c in clique_index if a in _clique(c) and b in _clique(c)})
    return ContainingSets(len(sets) == 1, tuple(sets))


# ------------------------------------------------------------ count law


def check_cross_count_law(pol: PolSet, points: Iterable[int] | None = None) -> PropertyReport:
    """For transversals T_i, T_j meeting only at t, each a in T_i minus t has exactly
    (s-1-w)-2 first associates (in the induced scheme) inside T_j minus t.

    Every point and every such ordered pair is checked unless ``points``
    restricts the sweep.
    """
    s, w = pol.order, pol.w
    if w < 1 or s < w + 4:
        raise PreconditionError(f"needs w >= 1 and s >= w + 4 (s={s}, w={w})")
    star = induce_complement(build_Lg_scheme(pol.grid, pol)).adjacency
    want = (s - 1 - w) - 2
    trans = [frozenset(t.treatments) for t in common_transversals(pol)]
    lonely: list[int] = []
    checked = 0
    fault = None
    for t in points if points is not None else range(1, s * s + 1):
        mine = [x for x in trans if t in x]
        if not mine:
            lonely.append(t)
            continue
        for ti, tj in permutations(mine, 2):
            if ti & tj != {t}:
                continue
            rest = sorted(tj - {t})
            for a in sorted(ti - {t}):
                k = int(sum(star[a - 1, x - 1] for x in rest))
                checked += 1
                if k != want and fault is None:
                    fault = {"t": t, "T_i": sorted(ti), "T_j": sorted(tj), "a": a, "count": k, "expected": want}
    notes = [f"{checked} counts checked, each expected to be {want}"]
    if lonely:
        notes.append("no common transversal through: " + ", ".join(map(str, lonely)))
    return PropertyReport("count_law", (Check("count law", fault is None, fault),), notes=tuple(notes))
