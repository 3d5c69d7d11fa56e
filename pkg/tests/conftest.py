import json
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from mols_forge.formats import read_pol
from mols_forge.latin import PolSet

DATA = Path(__file__).parent / "data"

# the library itself never draws random numbers; keep the test runs repeatable too
settings.register_profile("repeatable", derandomize=True, print_blob=True)
settings.load_profile("repeatable")


def load(name: str) -> PolSet:
    return read_pol(DATA / f"{name}.txt")


def prefix(name: str, w: int) -> PolSet:
    return load(name)[:w]


@pytest.fixture(scope="session")
def deletions():
    return json.loads((DATA / "deletions.json").read_text())


def _abelian_types(s: int) -> list[tuple[int, ...]]:
    """Cyclic factor orders (each a prime power) of every abelian group of order s."""

    def parts(n, largest):
        if n == 1:
            yield ()
            return
        for d in range(min(n, largest), 1, -1):
            if n % d == 0:
                for rest in parts(n // d, d):
                    yield (d, *rest)

    def prime_power(d):
        p = next(q for q in range(2, d + 1) if d % q == 0)
        while d % p == 0:
            d //= p
        return d == 1

    return [t for t in parts(s, s) if all(prime_power(d) for d in t)] or [(s,)]


def group_table(moduli: tuple[int, ...]) -> np.ndarray:
    elems = list(np.ndindex(*moduli))
    index = {e: k for k, e in enumerate(elems)}
    return np.array(
        [[index[tuple((x + y) % m for x, y, m in zip(a, b, moduli))] for b in elems] for a in elems], dtype=np.int64
    )


def random_latin(s: int, rng: np.random.Generator) -> np.ndarray:
    """An abelian group table of order s with rows, columns and symbols independently permuted."""
    types = _abelian_types(s)
    base = group_table(types[rng.integers(len(types))])
    r, c, sym = rng.permutation(s), rng.permutation(s), rng.permutation(s)
    return sym[base[r][:, c]]


def brute_transversals(squares, s):
    """Every permutation of columns, kept when each square shows s distinct symbols."""
    out = []
    for perm in permutations(range(s)):
        if all(len({int(sq[i][perm[i]]) for i in range(s)}) == s for sq in squares):
            out.append(tuple(sorted(i * s + perm[i] + 1 for i in range(s))))
    return sorted(out)


def brute_parameters(adj) -> dict | None:
    """Triple loop over points; None as soon as some count varies."""
    v = len(adj)

    def rel(a, b):
        return 1 if adj[a][b] else 2

    found: dict = {}

    def put(key, val) -> bool:
        return found.setdefault(key, val) == val

    for a in range(v):
        n1 = sum(1 for x in range(v) if x != a and rel(a, x) == 1)
        if not (put("n1", n1) and put("n2", v - 1 - n1)):
            return None
        for b in range(v):
            if b == a:
                continue
            k = rel(a, b)
            for i in (1, 2):
                for j in (1, 2):
                    cnt = sum(1 for x in range(v) if x not in (a, b) and rel(a, x) == i and rel(x, b) == j)
                    if not put(f"p{i}{j}_{k}", cnt):
                        return None
    found["v"] = v
    found.pop("p21_1", None)
    found.pop("p21_2", None)
    return found


def exact_cover_count(columns, rows) -> int:
    """Algorithm X on dict-of-sets: ``columns`` maps item -> row ids, ``rows`` maps row id -> items."""
    X = {c: set(r) for c, r in columns.items()}
    total = 0

    def select(r):
        saved = []
        for j in rows[r]:
            for i in X[j]:
                for k in rows[i]:
                    if k != j:
                        X[k].remove(i)
            saved.append(X.pop(j))
        return saved

    def deselect(r, saved):
        for j in reversed(rows[r]):
            X[j] = saved.pop()
            for i in X[j]:
                for k in rows[i]:
                    if k != j:
                        X[k].add(i)

    def solve():
        nonlocal total
        if not X:
            total += 1
            return
        c = min(X, key=lambda c: len(X[c]))
        for r in list(X[c]):
            saved = select(r)
            solve()
            deselect(r, saved)

    solve()
    return total


def completions_by_pair_cover(pol) -> int:
    """Count sets of common transversals covering each pair the net leaves unjoined exactly once.

    Such a set completes the net to an affine plane, so its parallel classes
    are forced; the count therefore equals the number of full resolutions.
    """
    from itertools import combinations

    from mols_forge.scheme import build_Lg_scheme
    from mols_forge.transversals import common_transversals

    s = pol.order
    adj = build_Lg_scheme(pol.grid, pol).adjacency
    ts = [t.treatments for t in common_transversals(pol)]
    rows = {k: list(combinations(t, 2)) for k, t in enumerate(ts)}
    cols = {(a, b): set() for a in range(1, s * s + 1) for b in range(a + 1, s * s + 1) if not adj[a - 1, b - 1]}
    for k, ps in rows.items():
        for p in ps:
            cols[p].add(k)
    return exact_cover_count(cols, rows)
