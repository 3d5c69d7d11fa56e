"""``mols-forge`` command line.

Exit codes: 0 success, 1 invalid input, 2 no resolution found,
3 completion not applicable (s < w + 4).
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from . import formats
from .errors import MolsError
from .extend import Status, complete_pol
from .formats import dumps
from .latin import LatinSquare, are_orthogonal, is_latin, validate_pol
from .net import net_from_pol
from .resolution import Resolution, count_resolutions, find_resolution
from .scheme import (
    AssociationScheme,
    build_Lg_scheme,
    classify_pseudo_Lg,
    induce_complement,
    scheme_payload,
)
from .transversals import common_transversals, count_all_transversals
from .verify import (
    Classification,
    check_cross_count_law,
    check_g3_conditions,
    check_six_properties,
    count_formations,
    detect_violations,
    unique_containing_set,
)

EXIT_OK, EXIT_INVALID, EXIT_NO_RESOLUTION, EXIT_NOT_APPLICABLE = 0, 1, 2, 3

log = logging.getLogger("mols_forge")

threads_option = click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    envvar="MOLS_FORGE_THREADS",
    help="Worker threads for enumeration and search (env MOLS_FORGE_THREADS).",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")


def _int_list(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def _fail(message: str, code: int = EXIT_INVALID):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path: str):
    try:
        return validate_pol(formats.read_squares(path))
    except MolsError as exc:
        _fail(str(exc))


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
@click.version_option(package_name="artifact")
def main(verbose: bool):
    """Verify, analyse and complete sets of orthogonal Latin squares."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@json_option
def check(file, as_json):
    """Check each square is Latin and each pair orthogonal."""
    try:
        raw = formats.read_squares(file)
    except MolsError as exc:
        _fail(str(exc))
    latin = [is_latin(m) for m in raw]
    squares = [LatinSquare(m) if ok else None for m, ok in zip(raw, latin)]
    w = len(raw)
    same_order = len({len(m) for m in raw}) == 1
    matrix = [[None] * w for _ in range(w)]
    for a in range(w):
        for b in range(w):
            if a != b and squares[a] is not None and squares[b] is not None and same_order:
                matrix[a][b] = are_orthogonal(squares[a], squares[b])
    error = None
    try:
        pol = validate_pol(raw)
    except MolsError as exc:
        pol, error = None, str(exc)
    if as_json:
        click.echo(
            dumps({"squares": w, "order": len(raw[0]), "latin": latin, "orthogonal": matrix, "valid": pol is not None,
                   "error": error}),
            nl=False,
        )
    else:
        for k, ok in enumerate(latin):
            click.echo(f"L{k + 1}: {'Latin' if ok else 'NOT Latin'}")
        for a in range(w):
            for b in range(a + 1, w):
                flag = matrix[a][b]
                state = "orthogonal" if flag else ("NOT orthogonal" if flag is False else "not checked")
                click.echo(f"L{a + 1} x L{b + 1}: {state}")
        if pol is not None:
            click.echo(f"valid POL({pol.order},{pol.w})")
        else:
            click.echo(f"invalid: {error}")
    sys.exit(EXIT_OK if pol is not None else EXIT_INVALID)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--through", default=None, help="Comma-separated anchor treatments, e.g. 1,13.")
@click.option("--count-only", is_flag=True, help="Print only the number of transversals.")
@json_option
@threads_option
def transversals(file, through, count_only, as_json, threads):
    """List the common transversals of every square in FILE."""
    pol = _load(file)
    anchors = _int_list(through)
    try:
        if count_only and not anchors:
            n = count_all_transversals(pol, threads=threads)
            found = None
        else:
            found = common_transversals(pol, anchors, threads=threads)
            n = len(found)
    except MolsError as exc:
        _fail(str(exc))
    if as_json:
        payload = {"order": pol.order, "w": pol.w, "through": list(anchors), "count": n}
        if not count_only:
            payload["transversals"] = [str(t) for t in found]
        click.echo(dumps(payload), nl=False)
    elif count_only:
        click.echo(n)
    else:
        for t in found:
            click.echo(str(t))


def _scheme_for(pol, induced: bool):
    sc = build_Lg_scheme(pol.grid, pol)
    g = pol.w + 2
    if induced:
        return induce_complement(sc), pol.order + 1 - g
    return sc, g


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--induced", is_flag=True, help="Use the complement of the L_{w+2}(s) scheme.")
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), help="Read a relation from an edge list instead.")
@click.option("--points", type=int, help="Point count for --edges (default: largest point seen).")
@click.option("-g", "g", type=int, help="Degree to classify against (default from the squares).")
@click.option("--adjacency", is_flag=True, help="Include first-associate lists in JSON output.")
@json_option
def scheme(file, induced, edges, points, g, adjacency, as_json):
    """Compute scheme parameters and classify as pseudo-L_g(s)."""
    try:
        if edges:
            pairs = formats.parse_edge_list(Path(edges).read_text())
            v = points or max((max(p) for p in pairs), default=0)
            sc = AssociationScheme.from_edges(v, pairs)
            default_g = None
        elif file:
            pol = _load(file)
            sc, default_g = _scheme_for(pol, induced)
        else:
            _fail("give a squares FILE or --edges")
    except MolsError as exc:
        _fail(str(exc))
    payload = scheme_payload(sc, adjacency=adjacency)
    g = g if g is not None else default_g
    s = int(round(sc.v**0.5))
    if g is not None and s * s == sc.v:
        wit = classify_pseudo_Lg(sc, g, s)
        payload["classification"] = {"g": g, "s": s, "verdict": wit.verdict.value,
                                     "counterexample": _jsonable(wit.counterexample)}
    if as_json:
        click.echo(dumps(payload), nl=False)
        return
    click.echo(f"v = {payload['v']}")
    if payload["parameters"] is None:
        f = payload["failure"]
        click.echo(f"not a scheme: {f['quantity']} is {f['found']} at {tuple(f['where'])}, {f['expected']} elsewhere")
    else:
        for k, val in payload["parameters"].items():
            if k != "v":
                click.echo(f"{k} = {val}")
    if "classification" in payload:
        c = payload["classification"]
        click.echo(f"pseudo-L{c['g']}({c['s']}): {c['verdict']}")


def _jsonable(x):
    if x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return str(x)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--mode",
    type=click.Choice(["properties", "violations", "g3", "count-law", "unique", "formations"]),
    default="violations",
    show_default=True,
)
@click.option("--induced", is_flag=True, help="Work on the complement of the L_{w+2}(s) scheme.")
@click.option("--classification", "class_file", type=click.Path(exists=True, dir_okay=False),
              help="Resolution JSON to test with --mode properties.")
@click.option("--pair", default=None, help="Two first associates for --mode unique, e.g. 1,13.")
@json_option
@threads_option
def verify(file, mode, induced, class_file, pair, as_json, threads):
    """Run the structural test battery on the scheme built from FILE."""
    import json

    pol = _load(file)
    try:
        if mode == "count-law":
            report = check_cross_count_law(pol)
        else:
            sc, g = _scheme_for(pol, induced)
            cliques = common_transversals(pol, threads=threads) if induced else None
            if mode == "violations":
                report = detect_violations(sc, g, cliques)
            elif mode == "formations":
                n = count_formations(sc, g, threads=threads)
                click.echo(dumps({"g": g, "order": pol.order, "formations": n}) if as_json else n, nl=not as_json)
                return
            elif mode == "g3":
                report = check_g3_conditions(sc, pol.order)
            elif mode == "unique":
                a, b = _int_list(pair) if pair else (None, None)
                if a is None:
                    _fail("--mode unique needs --pair a,b")
                res = unique_containing_set(sc, a, b, cliques)
                payload = {"pair": [a, b], "unique": res.unique, "sets": [str(c) for c in res.sets]}
                if as_json:
                    click.echo(dumps(payload), nl=False)
                else:
                    click.echo(f"{'unique' if res.unique else 'not unique'}: {len(res.sets)} set(s)")
                    for c in res.sets:
                        click.echo(str(c))
                return
            else:
                if class_file:
                    classification = Classification.from_resolution(
                        Resolution.from_payload(json.loads(Path(class_file).read_text()))
                    )
                elif induced:
                    res = find_resolution(pol, g, threads=threads)
                    if res is None:
                        _fail("no resolution to test", EXIT_NO_RESOLUTION)
                    classification = Classification.from_resolution(res)
                else:
                    classification = Classification(pol.order, net_from_pol(pol.grid, pol).classes)
                report = check_six_properties(sc, classification, g)
    except MolsError as exc:
        _fail(str(exc))
    payload = report.to_payload()
    if as_json:
        click.echo(dumps(payload), nl=False)
        return
    for c in report.checks:
        line = f"{c.label}: {report.verdict(c.label)}"
        if c.witness is not None:
            line += f"  witness={payload[c.label]['witness']}"
        click.echo(line)
    if report.certified is not None:
        click.echo(f"certified: {report.certified}")
    for n in report.notes:
        click.echo(f"note: {n}")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", "-d", type=int, help="Number of parallel classes (default s-1-w).")
@click.option("--count", is_flag=True, help="Count distinct resolutions instead of finding one.")
@click.option("--limit", type=click.IntRange(min=1), help="Stop counting at this many.")
@click.option("--emit", type=click.Path(dir_okay=False), help="Write the resolution JSON here.")
@json_option
@threads_option
def resolve(file, degree, count, limit, emit, as_json, threads):
    """Find (or count) resolutions of the common transversals into parallel classes."""
    pol = _load(file)
    d = degree if degree is not None else pol.order - 1 - pol.w
    try:
        if count:
            n = count_resolutions(pol, d, limit=limit, threads=threads)
            if as_json:
                click.echo(dumps({"order": pol.order, "degree": d, "count": n, "limit": limit}), nl=False)
            else:
                click.echo(n)
            sys.exit(EXIT_OK if n else EXIT_NO_RESOLUTION)
        res = find_resolution(pol, d, threads=threads)
    except MolsError as exc:
        _fail(str(exc))
    if res is None:
        _fail("no resolution exists", EXIT_NO_RESOLUTION)
    text = dumps(res.to_payload())
    if emit:
        Path(emit).write_text(text)
    if as_json:
        click.echo(text, nl=False)
    else:
        for k, cls in enumerate(res.classes, start=1):
            click.echo(f"class {k}: " + "  ".join(str(t) for t in cls))


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the squares here instead of stdout.")
@click.option("--emit", type=click.Path(dir_okay=False), help="Write the JSON certificate here.")
@click.option("--letters", is_flag=True, help="Write symbols as letters a, b, c, ...")
@threads_option
def complete(file, output, emit, letters, threads):
    """Extend FILE to s-1 orthogonal squares when a resolution exists."""
    pol = _load(file)
    try:
        result = complete_pol(pol, threads=threads)
    except MolsError as exc:
        _fail(str(exc))
    log.info("status %s after %s transversals", result.status.value, result.transversal_count)
    if emit:
        Path(emit).write_text(dumps(result.certificate_payload()))
    if result.status is Status.NOT_APPLICABLE:
        _fail(f"not applicable: {result.reason}", EXIT_NOT_APPLICABLE)
    if result.status is Status.NO_RESOLUTION:
        _fail("no resolution of the common transversals exists", EXIT_NO_RESOLUTION)
    _write(formats.format_squares(result.pol.squares, letters=letters), output)


if __name__ == "__main__":  # pragma: no cover
    main()
