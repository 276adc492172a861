"""Command-line front end.

Exit status: 0 success, 1 report verification failed, 2 unreadable input,
3 invalid toric diagram, 4 the Reeb field could not be certified.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from reebscope import __version__
from reebscope.deformation import lattice_maximal_decompositions
from reebscope.figures import render_svg
from reebscope.polytope import LatticePolygon, parse_polygon, polygon_from_family, validate_toric_diagram
from reebscope.report import (
    SCHEMA,
    build_report,
    decomposition_section,
    hilbert_basis_section,
    hilbert_series_section,
    ideal_section,
    reeb_section,
    validation_section,
    verify_report,
    volume_section,
)
from reebscope.volume import CertificateError, ConvergenceError, reeb_field

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_CERTIFICATE = 4

FAMILY_PARAMS = {"dp": ("k",), "gmsw": ("p", "q"), "cfo": ("r", "s"), "qpq": ("p", "q", "variant")}


class InputError(Exception):
    pass


class InvalidDiagram(Exception):
    def __init__(self, validation: dict[str, Any]):
        super().__init__("; ".join(validation["reasons"]))
        self.validation = validation


# ---------------------------------------------------------------------------
# input


def _add_diagram_args(p: argparse.ArgumentParser, family_flag: bool = True) -> None:
    src = p.add_argument_group("diagram")
    src.add_argument("--vertices", help='polygon as "(x,y);(x,y);..." or a JSON array of pairs')
    src.add_argument("--json", dest="json_file", help="file holding the polygon in either accepted form")
    if family_flag:
        src.add_argument("--family", choices=sorted(FAMILY_PARAMS), help="named family shortcut")
    _add_family_params(src)


def _add_family_params(group) -> None:
    for name in ("k", "p", "q", "r", "s"):
        group.add_argument(f"--{name}", type=int)
    group.add_argument("--variant", default="q1-segment", help="qpq segment choice: q1-segment or odd-segment")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, help="accepted for uniformity; every computation is deterministic")


def _family_polygon(name: str, args: argparse.Namespace) -> LatticePolygon:
    params = {}
    for key in FAMILY_PARAMS[name]:
        value = getattr(args, key)
        if value is None:
            raise InputError(f"family {name} needs --{key}")
        params[key] = value
    try:
        return polygon_from_family(name, **params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def read_polygon(args: argparse.Namespace) -> LatticePolygon:
    given = [x for x in (args.vertices, args.json_file, getattr(args, "family", None)) if x]
    if len(given) != 1:
        raise InputError("give exactly one of --vertices, --json or --family")
    if getattr(args, "family", None):
        return _family_polygon(args.family, args)
    if args.json_file:
        try:
            text = Path(args.json_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(str(exc)) from exc
    else:
        text = args.vertices
    try:
        return parse_polygon(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def require_diagram(P: LatticePolygon) -> None:
    v = validation_section(P)
    if not v["valid"]:
        raise InvalidDiagram(v)


# ---------------------------------------------------------------------------
# output


def _render_text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and not _is_flat(value):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_flat(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _is_flat(value: Any) -> bool:
    if isinstance(value, dict):
        return not value
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _is_flat(x)) for x in value)


def _flat(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_flat(x) for x in value) + "]"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def emit(payload: dict[str, Any], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        body = {k: v for k, v in payload.items() if k != "schema"}
        out.write("\n".join(_render_text(body)) + "\n")


def _wrap(P: LatticePolygon, name: str, section: dict[str, Any]) -> dict[str, Any]:
    return {"schema": SCHEMA, "input": {"vertices": P.to_json(), "text": P.to_text()}, name: section}


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, out) -> int:
    P = read_polygon(args)
    section = validation_section(P)
    emit(_wrap(P, "validation", section), args.format, out)
    return EXIT_OK if section["valid"] else EXIT_INVALID


def _section_command(name: str, build):
    def run(args, out) -> int:
        P = read_polygon(args)
        require_diagram(P)
        emit(_wrap(P, name, build(P, args)), args.format, out)
        return EXIT_OK

    return run


cmd_hilbert_basis = _section_command("hilbert_basis", lambda P, a: hilbert_basis_section(P))
cmd_series = _section_command("hilbert_series", lambda P, a: hilbert_series_section(P))
cmd_ideal = _section_command("ideal", lambda P, a: ideal_section(P, a.max_degree))
cmd_volume = _section_command("volume", lambda P, a: volume_section(P))
cmd_reeb = _section_command("reeb", lambda P, a: reeb_section(reeb_field(P)))
cmd_decompose = _section_command("decomposition", lambda P, a: decomposition_section(P))


def cmd_versal(args, out) -> int:
    P = read_polygon(args)
    require_diagram(P)
    decs = lattice_maximal_decompositions(P)
    section = {
        "dimensions": sorted(d.size - 1 for d in decs if d.size > 1),
        "components": [
            {"dimension": d.size - 1, "summands": [s.to_json() for s in d.summands]} for d in decs if d.size > 1
        ],
    }
    emit(_wrap(P, "versal", section), args.format, out)
    return EXIT_OK


def cmd_report(args, out) -> int:
    P = read_polygon(args)
    report = build_report(P, ideal_degree=args.max_degree if args.max_degree > 0 else None)
    emit(report, args.format, out)
    return EXIT_OK if report["validation"]["valid"] else EXIT_INVALID


def cmd_svg(args, out) -> int:
    P = read_polygon(args)
    panels: list[LatticePolygon] = []
    if args.decomposition:
        require_diagram(P)
        decs = lattice_maximal_decompositions(P)
        if not 1 <= args.decomposition <= len(decs):
            raise InputError(f"decomposition index must be in 1..{len(decs)}")
        panels = list(decs[args.decomposition - 1].summands)
    svg = render_svg(P, panels, title=args.title)
    if args.output:
        Path(args.output).write_text(svg, encoding="utf-8")
    else:
        out.write(svg)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        text = Path(args.report).read_text(encoding="utf-8") if args.report != "-" else sys.stdin.read()
        report = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report: {exc}") from exc
    if not isinstance(report, dict):
        raise InputError("report must be a JSON object")
    problems = verify_report(report)
    emit({"schema": SCHEMA, "verify": {"consistent": not problems, "problems": problems}}, args.format, out)
    return EXIT_OK if not problems else EXIT_VERIFY


def _parse_sweep(text: str, family: str) -> list[dict[str, int]]:
    """``p=2..5,q=1..4`` -> all grid points, in lexicographic order."""
    axes = {}
    for part in text.split(","):
        key, _, rng = part.partition("=")
        key = key.strip()
        if key not in FAMILY_PARAMS[family] or key == "variant":
            raise InputError(f"sweep parameter {key!r} does not belong to family {family}")
        lo, sep, hi = rng.partition("..")
        try:
            values = range(int(lo), int(hi) + 1) if sep else [int(lo)]
        except ValueError as exc:
            raise InputError(f"bad sweep range {part!r}") from exc
        axes[key] = list(values)
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def family_member(family: str, params: dict[str, Any], with_reeb: bool) -> dict[str, Any]:
    entry: dict[str, Any] = {"family": family, "params": params}
    try:
        P = polygon_from_family(family, **params)
    except ValueError as exc:
        entry["skipped"] = str(exc)
        return entry
    entry["vertices"] = P.to_json()
    entry["valid"] = validate_toric_diagram(P).valid
    if not entry["valid"]:
        return entry
    hb = hilbert_basis_section(P)
    entry["hilbert_basis_size"] = hb["count"]
    entry["good"] = hb["good"]
    entry["volume"] = volume_section(P)["a0"]
    entry["versal_dimensions"] = decomposition_section(P)["versal_dimensions"]
    if with_reeb:
        try:
            r = reeb_section(reeb_field(P))
            entry["reeb"] = {k: r[k] for k in ("a", "b", "value", "regularity")}
        except (CertificateError, ConvergenceError) as exc:
            entry["reeb"] = {"error": str(exc)}
    return entry


def _member_job(job):
    return family_member(*job)


def cmd_family(args, out) -> int:
    base = {k: getattr(args, k) for k in FAMILY_PARAMS[args.name] if getattr(args, k) is not None}
    if args.sweep:
        grid = [{**base, **point} for point in _parse_sweep(args.sweep, args.name)]
    else:
        missing = [k for k in FAMILY_PARAMS[args.name] if k not in base]
        if missing:
            raise InputError(f"family {args.name} needs --{missing[0]} (or --sweep)")
        grid = [base]
    jobs = [(args.name, params, not args.no_reeb) for params in grid]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            members = list(pool.map(_member_job, jobs))
    else:
        members = [_member_job(j) for j in jobs]
    emit({"schema": SCHEMA, "family": args.name, "members": members}, args.format, out)
    if len(members) == 1 and "skipped" in members[0]:
        return EXIT_PARSE
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reebscope",
        description="Toric Calabi-Yau cones from lattice polygons: Hilbert bases, volumes, Reeb fields, deformations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def diagram_command(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text)
        _add_diagram_args(p)
        _add_output_args(p)
        p.set_defaults(func=func)
        return p

    diagram_command("validate", cmd_validate, "check the toric-diagram conditions")
    diagram_command("hilbert-basis", cmd_hilbert_basis, "Hilbert basis W of the moment cone")
    diagram_command("series", cmd_series, "Hilbert series and leading index-character coefficients")
    p = diagram_command("ideal", cmd_ideal, "degree-bounded binomial generators of the toric ideal")
    p.add_argument("--max-degree", type=int, default=2)
    diagram_command("volume", cmd_volume, "exact volume function a0(a, b, c)")
    diagram_command("reeb", cmd_reeb, "certified volume-minimising Reeb field")
    diagram_command("decompose", cmd_decompose, "Minkowski summand cone and decompositions")
    diagram_command("versal", cmd_versal, "dimensions of the reduced versal-base components")
    p = diagram_command("report", cmd_report, "every section at once")
    p.add_argument("--max-degree", type=int, default=2, help="toric ideal bound; 0 skips the ideal")
    p = diagram_command("svg", cmd_svg, "draw the diagram as SVG")
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.add_argument("--decomposition", type=int, help="also draw the summands of this 1-based lattice decomposition")
    p.add_argument("--title")

    p = sub.add_parser("family", help="summaries for a family member or a parameter sweep")
    p.add_argument("name", choices=("gmsw", "cfo", "qpq", "dp"))
    _add_family_params(p)
    p.add_argument("--sweep", help='grid such as "p=2..5,q=1..4"')
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    p.add_argument("--no-reeb", action="store_true", help="skip the Reeb field computation")
    _add_output_args(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="re-check a JSON report produced by the report command")
    p.add_argument("report", help="report file, or - for stdin")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidDiagram as exc:
        emit({"schema": SCHEMA, "validation": exc.validation}, getattr(args, "format", "text"), out)
        print(f"error: invalid toric diagram: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CertificateError, ConvergenceError) as exc:
        print(f"error: Reeb field not certified: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
