"""Command line front end: ``pnsurf <command> ...``.

Exit codes: 0 for a conclusive run, 1 for input errors, 2 when a single
classification ends Undetermined.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .cone_chow import (
    VertexConfig,
    admissible_keys,
    check_associativity,
    check_commutativity,
    chern_exclusion,
    cone_ring,
    enumerate_cone_classes,
)
from .curve_search import CurveQuery, annotate, enumerate_curves
from .invariants import (
    arithmetic_genus,
    canonical_degree_on_section,
    castelnuovo_bound,
    chi_line_bundle,
    degree,
    delta_genus,
    sectional_genus,
)
from .normality import (
    NormalityVerdict,
    ScrollSpec,
    Status,
    SurfaceProfile,
    classify,
    scroll_verdict,
)
from .surface_models import build_model, canonical_class, format_class, intersect, model_invariants

LIBRARY_ENV = "PNSURF_LIBRARY"

EXIT_OK, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    command: list[str]
    inputs: dict
    results: dict
    lines: list[str] = field(default_factory=list)
    exit_status: int = EXIT_OK

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "exit_status": self.exit_status,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_text(self) -> str:
        return "\n".join(self.lines)


# -- library --------------------------------------------------------------------

def load_library() -> dict:
    path = os.environ.get(LIBRARY_ENV)
    try:
        if path:
            return json.loads(Path(path).read_text())
        text = resources.files("pnsurf").joinpath("data/library.json").read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read the surface library: {exc}") from exc


def library_entry(lib: dict, key: str) -> dict:
    for e in lib["entries"]:
        if e["id"] == key:
            return e
    raise InputError(f"no library entry {key!r}")


def read_document(source: str) -> dict:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc


def _run_entry(doc: dict) -> NormalityVerdict:
    label = doc.get("label", "")
    if "scroll" in doc:
        return scroll_verdict(ScrollSpec(**doc["scroll"]), label)
    profile = doc.get("profile", doc)
    if label and "label" not in profile:
        profile = {**profile, "label": label}
    return classify(SurfaceProfile.from_json(profile))


# -- classification table -------------------------------------------------------

@dataclass
class TableRow:
    number: int
    N: int
    g: int
    S: str
    L: str
    ids: list[str]


@dataclass
class ClassificationTable:
    not_pn: list[TableRow]
    others: list[tuple[str, str, str, str]]  # id, group, status, deciding criterion
    removed: list[tuple[str, str]]
    unlisted: list[str]

    def to_json(self) -> dict:
        return {
            "not_projectively_normal": [r.__dict__ for r in self.not_pn],
            "others": [dict(zip(("id", "group", "status", "criterion"), o)) for o in self.others],
            "removed": [dict(zip(("id", "reason"), r)) for r in self.removed],
            "unlisted_not_pn": self.unlisted,
        }


def build_table(lib: dict) -> ClassificationTable:
    rows: dict[int, TableRow] = {}
    others, removed, unlisted = [], [], []
    for e in lib["entries"]:
        try:
            v = _run_entry(e)
        except ValueError as exc:
            removed.append((e["id"], str(exc)))
            continue
        if v.status is Status.NOT_PN:
            row = e.get("row")
            if row is None:
                unlisted.append(e["id"])
                continue
            key = row["number"]
            if key not in rows:
                rows[key] = TableRow(key, row["N"], row["g"], row["S"], row["L"], [])
            rows[key].ids.append(e["id"])
        else:
            dec = v.deciding
            others.append((e["id"], e["group"], v.status.value, dec.id if dec else "-"))
    return ClassificationTable([rows[k] for k in sorted(rows)], others, removed, unlisted)


def render_table(t: ClassificationTable) -> list[str]:
    out = ["Degree-9 surfaces (not scrolls) that are not projectively normal", ""]
    header = ("row", "P^N", "g", "S", "L")
    body = [(str(r.number), f"P^{r.N}", str(r.g), r.S, r.L) for r in t.not_pn]
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    fmt = lambda cells: " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    out += [fmt(header), "-+-".join("-" * w for w in widths)] + [fmt(b) for b in body]
    out += ["", "Other built-in profiles"]
    out += [f"  {i:<24} {grp:<8} {st:<24} {crit}" for i, grp, st, crit in t.others]
    out += ["", "Removed (no such surface)"]
    out += [f"  {i}: {reason}" for i, reason in t.removed]
    if t.unlisted:
        out += ["", "Not projectively normal but outside the table: " + ", ".join(t.unlisted)]
    return out


# -- commands -------------------------------------------------------------------

def _model_and_L(doc: dict):
    try:
        model = build_model(doc["surface"])
        return model, model.divisor(doc["L"])
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from exc


def cmd_invariants(args) -> RunReport:
    if args.row:
        doc = library_entry(load_library(), args.row).get("profile", {})
    else:
        doc = read_document(args.spec)
    model, L = _model_and_L(doc)
    chi, K2, c2 = model_invariants(model)
    d, g = degree(model, L), sectional_genus(model, L)
    res = {
        "model": str(model),
        "L": format_class(model, L),
        "d": d,
        "g": g,
        "L.K": intersect(model, L, canonical_class(model)),
        "chi(O)": chi,
        "K^2": K2,
        "c2": c2,
        "chi(L)": chi_line_bundle(model, L),
        "chi(2L)": chi_line_bundle(model, 2 * L),
    }
    assert res["L.K"] == canonical_degree_on_section(d, g)
    h0 = doc.get("h0_L")
    if h0 is None and "N" in doc:
        h0 = doc["N"] + 1
    if h0 is not None:
        res["Delta"] = delta_genus(d, h0)
    classes = []
    for c in doc.get("classes", []):
        D = model.divisor(c)
        classes.append({"class": format_class(model, D), "D^2": intersect(model, D, D),
                        "p_a": arithmetic_genus(model, D)})
    if classes:
        res["classes"] = classes
    lines = [f"{k}: {v}" for k, v in res.items() if k != "classes"]
    lines += [f"p_a({c['class']}) = {c['p_a']}, self-intersection {c['D^2']}" for c in classes]
    return RunReport(["invariants"], {"spec": doc}, res, lines)


def cmd_classify(args) -> RunReport:
    lib = load_library()
    if args.table:
        t = build_table(lib)
        return RunReport(["classify", "--table"], {"library": len(lib["entries"])}, t.to_json(),
                         render_table(t))
    if args.row:
        doc = library_entry(lib, args.row)
    elif args.profile:
        doc = read_document(args.profile)
    else:
        raise InputError("classify needs a profile, --row or --table")
    v = _run_entry(doc)
    status = EXIT_UNDETERMINED if v.status is Status.UNDETERMINED else EXIT_OK
    return RunReport(["classify"], {"profile": doc}, v.to_json(), v.render().splitlines(), status)


def cmd_curves(args) -> RunReport:
    if args.query:
        lib = load_library()
        doc = next((q for q in lib.get("curve_queries", []) if q["id"] == args.query), None)
        if doc is None:
            raise InputError(f"no curve query {args.query!r}")
    else:
        doc = read_document(args.spec)
    model, L = _model_and_L(doc)
    deg = args.degree if args.degree is not None else doc.get("degree")
    pa = args.pa if args.pa is not None else doc.get("pa")
    if deg is None or pa is None:
        raise InputError("curves needs --degree and --pa")
    min_self = args.min_self if args.min_self is not None else doc.get("min_self")
    q = CurveQuery(model, L, deg, pa, min_self=min_self, a_max=args.a_max)
    found = enumerate_curves(q)
    expected = doc.get("expected")
    exp = [model.divisor(c) for c in expected] if expected is not None else None
    records = annotate(model, found, exp)
    missing = [format_class(model, c) for c in exp or [] if c not in set(found)]
    res = {"curves": [r.to_json() for r in records], "missing": missing}
    lines = [f"{len(records)} classes of degree {deg}, p_a {pa} on {model}"]
    lines += [f"  {r.label}{'  [extra]' if r.extra else ''}" for r in records]
    if missing:
        lines.append("missing expected classes: " + ", ".join(missing))
    return RunReport(["curves"], {"degree": deg, "pa": pa, "min_self": min_self}, res, lines)


def cmd_cone_check(args) -> RunReport:
    ring = cone_ring(args.rank)
    comm, assoc = check_commutativity(ring), check_associativity(ring)
    kind = args.vertex.replace("-", "_")
    sols = enumerate_cone_classes(ring, args.degree, VertexConfig(kind, args.s))
    keys = admissible_keys(sols)
    res = {
        "commutativity_failures": [list(x) for x in comm],
        "associativity_failures": [list(x) for x in assoc],
        "ambiguous_entries": [list(x) for x in ring.ambiguous],
        "admissible": [list(k) for k in keys],
    }
    lines = [
        f"rank-{args.rank} table: commutative={not comm}, associative={not assoc}",
        f"admissible classes ({args.vertex}): " + ", ".join(str(k) for k in keys),
    ]
    if args.residuals:
        rows = chern_exclusion(args.rank, args.degree, args.lk, args.k2, args.c2)
        res["residuals"] = [r.to_json() for r in rows]
        lines += [f"  {r.solution.config:<13} {r.solution.coeffs} residual {r.residual}" for r in rows]
    return RunReport(["cone-check"], vars_json(args), res, lines)


def cmd_castelnuovo(args) -> RunReport:
    value = castelnuovo_bound(args.d, args.N)
    return RunReport(["castelnuovo"], {"d": args.d, "N": args.N}, {"bound": value}, [str(value)])


def vars_json(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json")}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pnsurf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="numerical invariants of a lattice-specified surface")
    s.add_argument("spec", nargs="?", default="-", help="JSON file with surface and L ('-' for stdin)")
    s.add_argument("--row", help="use a built-in library entry")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("classify", help="projective normality verdict")
    s.add_argument("profile", nargs="?", help="JSON profile file ('-' for stdin)")
    s.add_argument("--row", help="use a built-in library entry")
    s.add_argument("--table", action="store_true", help="classify every built-in profile")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("curves", help="enumerate curve classes of given degree and arithmetic genus")
    s.add_argument("spec", nargs="?", default="-")
    s.add_argument("--query", help="use a built-in curve query")
    s.add_argument("--degree", type=int)
    s.add_argument("--pa", type=int)
    s.add_argument("--min-self", type=int)
    s.add_argument("--a-max", type=int)
    s.set_defaults(func=cmd_curves)

    s = sub.add_parser("cone-check", help="quadric cone intersection tables")
    s.add_argument("--rank", type=int, choices=(4, 5), required=True)
    s.add_argument("--degree", type=int, default=9)
    s.add_argument("--vertex", choices=("contains-line", "meets", "disjoint"), default="meets")
    s.add_argument("--s", type=int, help="intersection number with the vertex")
    s.add_argument("--residuals", action="store_true", help="Chern residuals for the given surface data")
    s.add_argument("--lk", type=int, default=-3, help="L.K of the surface")
    s.add_argument("--k2", type=int, default=-3)
    s.add_argument("--c2", type=int, default=3)
    s.set_defaults(func=cmd_cone_check)

    s = sub.add_parser("castelnuovo", help="Castelnuovo bound on the sectional genus")
    s.add_argument("d", type=int)
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_castelnuovo)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.to_json() if args.json else report.to_text())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
