"""Reading and writing squares, edge lists and JSON payloads.

Square files: first line ``s``, then ``s`` rows of ``s`` whitespace-separated
symbols; several squares are separated by a single blank line.  Symbols are
integers ``0..s-1`` or letters ``a..z`` (mapped alphabetically).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError
from .latin import LatinSquare, PolSet, validate_pol


def _symbol(tok: str, s: int, lineno: int) -> int:
    if tok.isdigit():
        val = int(tok)
    elif len(tok) == 1 and tok.isalpha():
        val = ord(tok.lower()) - ord("a")
    else:
        raise ParseError(f"unrecognised symbol {tok!r}", lineno)
    if not 0 <= val < s:
        raise ParseError(f"symbol {tok!r} outside the {s} allowed values", lineno)
    return val


def parse_squares(text: str) -> list[list[list[int]]]:
    """Parse square blocks into raw matrices, without any Latin checks.

    Line numbers in errors are 1-based and refer to ``text``.
    """
    lines = text.splitlines()
    out: list[list[list[int]]] = []
    k = 0
    n = len(lines)
    while k < n and not lines[k].strip():
        k += 1
    while k < n:
        head = lines[k].strip()
        if not head.isdigit() or int(head) < 1:
            raise ParseError(f"expected the square order, found {head!r}", k + 1)
        s = int(head)
        rows = []
        for r in range(s):
            idx = k + 1 + r
            if idx >= n or not lines[idx].strip():
                raise ParseError(f"square declared with order {s} has only {r} rows", idx + 1)
            toks = lines[idx].split()
            if len(toks) != s:
                raise ParseError(f"expected {s} entries, found {len(toks)}", idx + 1)
            rows.append([_symbol(t, s, idx + 1) for t in toks])
        out.append(rows)
        k += 1 + s
        if k < n and lines[k].strip():
            raise ParseError("squares must be separated by one blank line", k + 1)
        blanks = 0
        while k < n and not lines[k].strip():
            k += 1
            blanks += 1
        if blanks > 1 and k < n:
            raise ParseError("more than one blank line between squares", k + 1 - blanks + 1)
    if not out:
        raise ParseError("no squares found", 1)
    return out


def read_squares(path: str | Path) -> list[list[list[int]]]:
    return parse_squares(Path(path).read_text())


def read_pol(path: str | Path) -> PolSet:
    return validate_pol(read_squares(path))


def format_squares(squares: Iterable, letters: bool = False) -> str:
    blocks = []
    for sq in squares:
        cells = sq.cells if isinstance(sq, LatinSquare) else sq
        s = len(cells)
        if letters:
            body = "\n".join(" ".join(chr(ord("a") + int(x)) for x in row) for row in cells)
        else:
            body = "\n".join(" ".join(str(int(x)) for x in row) for row in cells)
        blocks.append(f"{s}\n{body}")
    return "\n\n".join(blocks) + "\n"


def parse_edge_list(text: str) -> list[tuple[int, int]]:
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise ParseError(f"expected two point numbers, found {line!r}", lineno)
        a, b = int(toks[0]), int(toks[1])
        if a < 1 or b < 1:
            raise ParseError("points are numbered from 1", lineno)
        edges.append((a, b))
    return edges


def dash(treatments: Sequence[int]) -> str:
    return "-".join(str(int(t)) for t in treatments)


def undash(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace("--", "-").split("-") if x)


def dumps(payload) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
