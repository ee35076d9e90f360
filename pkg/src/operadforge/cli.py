"""Command-line surface: enumeration, dimension tables, presentation and
duality reports, Koszulity certification, and axiom checking.

Reports are JSON-first and byte-deterministic under a fixed config:
objects are keyed by their canonical encoding and every listing is
sorted by that key, so two runs with the same flags produce identical
bytes (golden files diff cleanly).  `--format table` renders the same
rows for humans.  Exit codes: 0 success, 1 a mathematical check failed
(the witness is in the report), 2 usage or parse errors.

If OPERADFORGE_CACHE_DIR is set, certification verdicts are memoized on
disk keyed by flavor and edge skeleton; cached and fresh runs emit the
same bytes.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
from importlib import resources
from pathlib import Path

import click

from . import axioms, cobar, freeop, graphs, opcat, per, presentations
from .linalg import RationalMatrix

FLAVORS = ("ggGrc", "Tr", "RTr", "Whe", "Per")
PRESENTATIONS = FLAVORS + ("prePermutad",)


# -- plumbing -------------------------------------------------------------------

def _bounds_options(fn):
    for option in reversed((
        click.option("--flavor", type=click.Choice(FLAVORS),
                     default="ggGrc", show_default=True),
        click.option("--max-edges", type=click.IntRange(min=0), default=2,
                     show_default=True),
        click.option("--max-legs", type=click.IntRange(min=0), default=2,
                     show_default=True),
        click.option("--max-genus", type=click.IntRange(min=0), default=1,
                     show_default=True),
        click.option("--jobs", type=click.IntRange(min=1), default=1,
                     show_default=True),
        click.option("--format", "fmt", type=click.Choice(("json", "table")),
                     default="json", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), default=None),
    )):
        fn = option(fn)
    return fn


def _decode(enc: tuple):
    """Rebuild an object from its encode() tuple (workers get these
    because the graph objects themselves do not pickle)."""
    if enc[0] == per.PER:
        return per.PerObject(enc[1])
    flavor, _n, vertices, involution, legs, genus, ori = enc
    return graphs.DecoratedGraph(flavor, vertices, involution, legs,
                                 genus or None, ori or None)


def _object_key(x) -> str:
    return repr(x.encode())


def _legs(x) -> int:
    if isinstance(x, per.PerObject):
        return x.n
    return len(x.legs)


def _objects(flavor, max_edges, max_legs, max_genus) -> list:
    objs = opcat.enumerate_objects(flavor, max_edges, max_legs, max_genus)
    return sorted(objs, key=_object_key)


def _render_rows(rows: list[dict], columns: tuple[str, ...]) -> str:
    present = [c for c in columns if any(c in r for r in rows)]
    table = [present] + [[str(r.get(c, "")) for c in present] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(present))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths))
                     for line in table)


def _emit(report: dict, fmt: str, out, row_columns=()):
    if fmt == "table" and row_columns:
        head = {k: v for k, v in report.items()
                if not isinstance(v, (list, dict))}
        lines = ["%s: %s" % kv for kv in sorted(head.items())]
        rows = report.get("objects") or report.get("shapes") or []
        if rows:
            lines.append(_render_rows(rows, row_columns))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Exact operadic computations over categories of decorated graphs."""


# -- enumerate -------------------------------------------------------------------

@main.command("enumerate")
@_bounds_options
def cmd_enumerate(flavor, max_edges, max_legs, max_genus, jobs, fmt, out):
    """List canonical objects within the bounds, one per class."""
    rows = [{"key": _object_key(x), "edges": opcat.grade(x),
             "legs": _legs(x), "genus": opcat.total_genus(x),
             "terminal": opcat.is_terminal(x)}
            for x in _objects(flavor, max_edges, max_legs, max_genus)]
    report = {"command": "enumerate", "flavor": flavor,
              "bounds": {"max_edges": max_edges, "max_legs": max_legs,
                         "max_genus": max_genus},
              "count": len(rows), "objects": rows}
    _emit(report, fmt, out,
          ("key", "edges", "legs", "genus", "terminal"))


# -- dims ------------------------------------------------------------------------

@main.command("dims")
@_bounds_options
def cmd_dims(flavor, max_edges, max_legs, max_genus, jobs, fmt, out):
    """Free, quotient, and dual-quotient dimensions per object."""
    q = presentations.builtin_presentation(flavor)
    dual = presentations.koszul_dual(q)
    rows = []
    for x in _objects(flavor, max_edges, max_legs, max_genus):
        free = freeop.total_dim(q.gens, x)
        rows.append({
            "key": _object_key(x), "edges": opcat.grade(x),
            "free": {str(k): v for k, v in sorted(free.items())},
            "quotient": {str(k): v for k, v in
                         sorted(presentations.quotient_dim(q, x).items())},
            "dual_quotient": {str(k): v for k, v in
                              sorted(presentations.quotient_dim(
                                  dual, x).items())},
        })
    report = {"command": "dims", "flavor": flavor,
              "presentation": q.name, "dual": dual.name,
              "bounds": {"max_edges": max_edges, "max_legs": max_legs,
                         "max_genus": max_genus},
              "objects": rows}
    _emit(report, fmt, out, ("key", "edges", "free", "quotient",
                             "dual_quotient"))


# -- present ---------------------------------------------------------------------

def _vectors_out(sub) -> list[dict]:
    return [{str(i): axioms._num_out(c) for i, c in sorted(v.items())}
            for v in sub.basis]


@main.command("present")
@click.argument("name", type=click.Choice(PRESENTATIONS))
@_bounds_options
def cmd_present(name, flavor, max_edges, max_legs, max_genus, jobs, fmt,
                out):
    """Relations, duality pairing, and dual relations per 2-edge shape."""
    if max_edges < 2:
        raise click.UsageError(
            "relations live in weight 2; raise --max-edges to at least 2")
    q = presentations.builtin_presentation(name)
    dual = presentations.koszul_dual(q)
    rows = []
    for x in _objects(q.flavor, max_edges, max_legs, max_genus):
        if opcat.grade(x) != 2:
            continue
        comp = freeop.component(q.gens, x, 2)
        pairing = presentations.pairing_matrix(q, x)
        rows.append({
            "key": _object_key(x),
            "weight2_dim": comp.dim,
            "basis": [repr(b) for b in comp.basis],
            "relations": _vectors_out(q.relations(x)),
            "pairing_is_identity":
                pairing == RationalMatrix.identity(comp.dim),
            "dual_relations": _vectors_out(dual.relations(x)),
        })
    report = {"command": "present", "presentation": q.name,
              "flavor": q.flavor, "dual": dual.name,
              "bounds": {"max_edges": max_edges, "max_legs": max_legs,
                         "max_genus": max_genus},
              "shapes": rows}
    _emit(report, fmt, out, ("key", "weight2_dim", "relations",
                             "dual_relations", "pairing_is_identity"))


# -- koszul ----------------------------------------------------------------------

def _cache_path(flavor: str, x) -> Path | None:
    root = os.environ.get("OPERADFORGE_CACHE_DIR")
    if not root:
        return None
    digest = hashlib.sha256(
        repr((flavor, opcat.math_key(x))).encode()).hexdigest()[:24]
    return Path(root) / ("certify-%s-%s.json" % (flavor, digest))


def _serializable_certify(flavor: str, x) -> dict:
    path = _cache_path(flavor, x)
    if path is not None and path.exists():
        return json.loads(path.read_text())
    got = cobar.certify(flavor, x)
    got = dict(got)
    if got["betti"] is not None:
        got["betti"] = {str(k): v for k, v in sorted(got["betti"].items())}
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.%d" % os.getpid())
        tmp.write_text(json.dumps(got, sort_keys=True))
        tmp.replace(path)
    return got


def _koszul_row(flavor: str, enc: tuple) -> dict:
    x = _decode(enc)
    if opcat.grade(x) == 0:
        row = {"key": repr(enc), "edges": 0, "layers": [],
               "d_squared": True, "betti": {"0": 1}, "euler": True,
               "canonical_map": True, "chi": True, "trivial": True}
    else:
        row = {"key": repr(enc), **_serializable_certify(flavor, x)}
    row["pass"] = row["d_squared"] and row["betti"] == {"0": 1}
    return row


def _koszul_worker(args):
    flavor, enc = args
    return _koszul_row(flavor, enc)


@main.command("koszul")
@_bounds_options
@click.option("--debug-flip-sign", is_flag=True, hidden=True,
              help="corrupt one differential entry as a failure control")
def cmd_koszul(flavor, max_edges, max_legs, max_genus, jobs, fmt, out,
               debug_flip_sign):
    """Certify Koszulity per object: layers, d², betti, map and χ flags."""
    objs = _objects(flavor, max_edges, max_legs, max_genus)
    encs = [x.encode() for x in objs]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            rows = pool.map(_koszul_worker,
                            [(flavor, enc) for enc in encs])
    else:
        rows = [_koszul_row(flavor, enc) for enc in encs]

    if debug_flip_sign:
        victim = next((x for x in objs if opcat.grade(x) >= 3), None)
        if victim is None:
            raise click.UsageError(
                "the sign-flip control needs an object with >= 3 edges; "
                "raise --max-edges")
        rows.append(_mutated_control_row(flavor, victim))

    rows.sort(key=lambda r: (r["key"], r.get("debug_mutation", False)))
    witness = next((r for r in rows if not r["pass"]), None)
    report = {"command": "koszul", "flavor": flavor,
              "bounds": {"max_edges": max_edges, "max_legs": max_legs,
                         "max_genus": max_genus},
              "objects": rows, "all_pass": witness is None,
              "witness": witness}
    _emit(report, fmt, out, ("key", "edges", "layers", "d_squared",
                             "betti", "canonical_map", "chi", "pass"))
    if witness is not None:
        raise SystemExit(1)


def _mutated_control_row(flavor: str, x) -> dict:
    """Flip one sign in the first differential and rerun the d² check.

    The flipped entry is chosen in a row the next differential sees, so
    the corruption is guaranteed to surface.
    """
    c = cobar.build_complex(flavor, x)
    d1, d2 = c.differential(1), c.differential(2)
    live_rows = {col for (_row, col) in d2.entries}
    candidates = [rc for rc in sorted(d1.entries) if rc[0] in live_rows]
    assert candidates, "degenerate complex: no entry feeds the next layer"
    rc = candidates[0]
    entries = dict(d1.entries)
    entries[rc] = -entries[rc]
    mutated = cobar.CobarComplex(
        obj=c.obj, flavor=c.flavor, sign_rule=c.sign_rule,
        layers=c.layers,
        diffs={**c.diffs, 1: RationalMatrix(d1.rows, d1.cols, entries)})
    still_zero = cobar.d_squared_check(mutated)
    return {"key": _object_key(x), "edges": opcat.grade(x),
            "layers": [c.layer(k).dim for k in range(1, c.top + 1)],
            "d_squared": still_zero, "betti": None, "euler": None,
            "canonical_map": None, "chi": None,
            "debug_mutation": True, "pass": still_zero}


# -- axioms ----------------------------------------------------------------------

def _axiom_entries(report: dict) -> dict:
    return {name: {"status": entry["status"],
                   "checked": entry["checked"],
                   "skipped": entry["skipped"],
                   "witness": repr(entry["witness"])
                   if entry["witness"] is not None else None}
            for name, entry in report.items()}


@main.command("axioms")
@click.argument("table_file", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_axioms(table_file, fmt, out):
    """Run the axiom checkers on a table file (default: shipped det
    fixture), reporting the declared parity and the opposite reading."""
    if table_file is None:
        source = "builtin:det_fixture"
        raw = (resources.files("operadforge") / "data"
               / "det_fixture.json").read_text()
    else:
        source = table_file
        raw = Path(table_file).read_text()
    try:
        t = axioms.table_from_dict(json.loads(raw))
    except (json.JSONDecodeError, KeyError, TypeError, AssertionError) as e:
        raise click.UsageError("cannot parse table file: %s" % e)

    if t.parity == axioms.MARKL:
        declared = axioms.check_markl(t)
        report = {"command": "axioms", "source": source, "parity": t.parity,
                  "declared_check": _axiom_entries(declared),
                  "opposite_reading": None}
    else:
        checker = (axioms.check_odd_modular if t.parity == axioms.ODD
                   else axioms.check_modular)
        other = (axioms.check_modular if t.parity == axioms.ODD
                 else axioms.check_odd_modular)
        declared = checker(t)
        flipped = axioms.FiniteOperadTable(
            t.module,
            axioms.EVEN if t.parity == axioms.ODD else axioms.ODD,
            t.comp, t.contr, t.comp_i)
        report = {"command": "axioms", "source": source, "parity": t.parity,
                  "declared_check": _axiom_entries(declared),
                  "opposite_reading": _axiom_entries(other(flipped))}
    failed = [name for name, entry in declared.items()
              if entry["status"] == "fail"]
    report["declared_pass"] = not failed
    _emit(report, fmt, out)
    if failed:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
