"""JSON-ready sections of the full analysis of a toric diagram, and a
consistency checker for previously emitted reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import mpmath

from reebscope.cone import hilbert_basis, is_good, moment_cone, cone_over_diagram, reeb_cone
from reebscope.deformation import (
    DecompositionReport,
    decomposition_report,
    lattice_maximal_decompositions,
)
from reebscope.exactmath import ABC, RationalFunction3, parse_poly
from reebscope.polytope import LatticePolygon, from_vertices, minkowski_sum_all, validate_toric_diagram
from reebscope.series import hilbert_series, index_character, toric_ideal_binomials
from reebscope.volume import ReebResult, SLICE_C, reeb_field, volume_function

SCHEMA = 1
DIGITS = 12
SECTIONS = ("validation", "hilbert_basis", "hilbert_series", "ideal", "volume", "reeb", "decomposition")


def rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text)


def dec(x) -> str:
    if isinstance(x, Fraction):
        with mpmath.workdps(40):
            x = mpmath.mpf(x.numerator) / x.denominator
    return mpmath.nstr(x, DIGITS)


def parse_rational_function(text: str) -> RationalFunction3:
    """Inverse of ``str(RationalFunction3)``."""
    if ") / (" in text:
        num, den = text.split(") / (", 1)
        return RationalFunction3(parse_poly(num[1:], ABC), parse_poly(den[:-1], ABC))
    return RationalFunction3(parse_poly(text, ABC))


# ---------------------------------------------------------------------------
# sections


def validation_section(P: LatticePolygon) -> dict[str, Any]:
    v = validate_toric_diagram(P)
    return {
        "valid": v.valid,
        "convex_simple": v.is_convex_simple,
        "edges_primitive": v.edges_primitive,
        "offending_edges": [[list(a), list(b)] for a, b in v.offending_edges],
        "reasons": list(v.reasons),
    }


def hilbert_basis_section(P: LatticePolygon) -> dict[str, Any]:
    C_star = moment_cone(P)
    W = hilbert_basis(C_star)
    good = is_good(C_star)
    gamma = cone_over_diagram(P).gorenstein().gamma
    return {
        "count": len(W),
        "W": [list(w) for w in W],
        "moment_cone_rays": [list(r) for r in C_star.rays],
        "good": good.good,
        "failing_face": [list(x) for x in good.failing_face] if good.failing_face else None,
        "gorenstein_covector": list(gamma) if gamma else None,
        "reeb_cone": reeb_cone(W).inequalities(),
    }


def hilbert_series_section(P: LatticePolygon) -> dict[str, Any]:
    C_star = moment_cone(P)
    ic = index_character(C_star)
    return {
        "latex": hilbert_series(C_star).to_latex(),
        "a0": str(ic.a0),
        "a1": str(ic.a1),
    }


def ideal_section(P: LatticePolygon, max_degree: int = 2) -> dict[str, Any]:
    W = hilbert_basis(moment_cone(P))
    binomials = toric_ideal_binomials(W, max_degree)
    return {
        "max_degree": max_degree,
        "variables": len(W),
        "count": len(binomials),
        "binomials": [str(b) for b in binomials],
        "exponents": [[list(b.lhs), list(b.rhs)] for b in binomials],
    }


def volume_section(P: LatticePolygon) -> dict[str, Any]:
    f = volume_function(P)
    return {"a0": str(f), "factored": f.factored_str()}


def reeb_section(result: ReebResult) -> dict[str, Any]:
    coords = {}
    for name, iv, approx in (("a", result.a_interval, result.a), ("b", result.b_interval, result.b)):
        reg = result.regularity[name]
        coords[name] = {
            "decimal": dec(reg.value) if reg.is_rational else dec(approx),
            "interval": [rat(iv[0]), rat(iv[1])],
            "regularity": "rational" if reg.is_rational else "irrational",
            "exact": rat(reg.value) if reg.is_rational else None,
        }
    cert = result.certificate
    value = {
        "decimal": dec(result.exact_value) if result.exact_value is not None else dec(result.value),
        "interval": [dec(result.value_interval[0]), dec(result.value_interval[1])],
        "exact": rat(result.exact_value) if result.exact_value is not None else None,
    }
    return {
        "c": SLICE_C,
        "a": coords["a"],
        "b": coords["b"],
        "value": value,
        "regularity": result.overall,
        "irregular": result.irregular,
        "certificate": {
            "eliminant_a": [str(c) for c in cert.eliminant_a],
            "eliminant_b": [str(c) for c in cert.eliminant_b],
            "spurious_roots_removed": {k: [rat(x) for x in v] for k, v in cert.spurious_factors_removed.items()},
            "rational_candidates_tested": {k: [rat(x) for x in v] for k, v in cert.rational_candidates_tested.items()},
            "common_factor": cert.common_factor,
        },
        "newton_steps": result.numeric.steps,
        "precision_bits": result.numeric.precision,
    }


def decomposition_section(P: LatticePolygon, report: DecompositionReport | None = None) -> dict[str, Any]:
    rep = report or decomposition_report(P)
    return {
        "edges": [list(e) for e in P.edges()],
        "summand_cone": [
            {"generator": [rat(x) for x in g], "summand": s.to_json() if s else None}
            for g, s in zip(rep.cone.generators, rep.cone.summands)
        ],
        "maximal_decompositions": [[rat(x) for x in c] for c in rep.maximal],
        "lattice_decompositions": [
            {"blocks": [[i + 1 for i in b] for b in dec.blocks], "summands": [s.to_json() for s in dec.summands]}
            for dec in rep.lattice
        ],
        "versal_dimensions": list(rep.versal_dimensions),
        "tautological_cones": [
            {"ambient_rank": t.ambient_rank, "generators": [list(g) for g in t.generators]} for t in rep.tautological
        ],
    }


@dataclass
class Timer:
    timings: dict[str, float] = field(default_factory=dict)

    def run(self, name: str, fn: Callable[[], Any]) -> Any:
        start = time.perf_counter()
        out = fn()
        self.timings[name] = round(time.perf_counter() - start, 6)
        return out


def build_report(P: LatticePolygon, *, ideal_degree: int | None = 2, sections=SECTIONS) -> dict[str, Any]:
    """All requested sections; a diagram that fails validation only gets its validation section."""
    timer = Timer()
    out: dict[str, Any] = {"schema": SCHEMA, "input": {"vertices": P.to_json(), "text": P.to_text()}}
    out["validation"] = timer.run("validation", lambda: validation_section(P))
    if out["validation"]["valid"]:
        builders = {
            "hilbert_basis": lambda: hilbert_basis_section(P),
            "hilbert_series": lambda: hilbert_series_section(P),
            "ideal": lambda: ideal_section(P, ideal_degree) if ideal_degree else None,
            "volume": lambda: volume_section(P),
            "reeb": lambda: reeb_section(reeb_field(P)),
            "decomposition": lambda: decomposition_section(P),
        }
        for name in SECTIONS[1:]:
            if name in sections:
                value = timer.run(name, builders[name])
                if value is not None:
                    out[name] = value
    out["timings"] = timer.timings
    return out


# ---------------------------------------------------------------------------
# verification


def verify_report(report: dict[str, Any]) -> list[str]:
    """Re-derive the report's invariants; returns a list of failures (empty means consistent)."""
    problems: list[str] = []
    try:
        _verify_into(report, problems)
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
        problems.append(f"malformed report: {type(exc).__name__}: {exc}")
    return problems


def _verify_into(report: dict[str, Any], problems: list[str]) -> None:

    def check(cond: bool, msg: str):
        if not cond:
            problems.append(msg)

    check(report.get("schema") == SCHEMA, f"unsupported schema {report.get('schema')!r}")
    try:
        P = from_vertices(report["input"]["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        problems.append(f"input vertices unreadable: {exc}")
        return
    check(P.to_json() == report["input"]["vertices"], "input vertices are not in canonical order")
    check(report.get("validation") == validation_section(P), "validation section disagrees with the input")
    if not report.get("validation", {}).get("valid"):
        return

    W = None
    if "hilbert_basis" in report:
        hb = report["hilbert_basis"]
        W = [tuple(w) for w in hb["W"]]
        check(hb["count"] == len(W), "Hilbert basis count mismatch")
        check(
            sorted(W) == sorted(hilbert_basis(moment_cone(P)).elements),
            "Hilbert basis differs from recomputation",
        )

    # later checks use the recomputed function so one bad string cannot mask others
    f = volume_function(P)
    if "volume" in report:
        reported = parse_rational_function(report["volume"]["a0"])
        check(reported == f, "volume function differs from recomputation")
        check(reported.is_homogeneous_of_degree(-3), "volume function is not homogeneous of degree -3")
    if "hilbert_series" in report:
        check(
            parse_rational_function(report["hilbert_series"]["a0"]) == f,
            "series leading coefficient differs from the volume function",
        )

    if "ideal" in report:
        ideal = report["ideal"]
        check(ideal["count"] == len(ideal["binomials"]) == len(ideal["exponents"]), "ideal count mismatch")
        if W is not None:
            check(ideal["variables"] == len(W), "ideal variable count differs from the Hilbert basis size")
            for lhs, rhs in ideal["exponents"]:
                wl = [sum(e * w[k] for e, w in zip(lhs, W)) for k in range(3)]
                wr = [sum(e * w[k] for e, w in zip(rhs, W)) for k in range(3)]
                check(len(lhs) == len(W) and wl == wr, f"binomial {lhs} - {rhs} is not homogeneous")

    if "reeb" in report:
        reeb = report["reeb"]
        pt = {}
        for name in "ab":
            lo, hi = (parse_rat(x) for x in reeb[name]["interval"])
            check(lo <= hi, f"empty interval for {name}")
            check(hi - lo <= Fraction(1, 10**12), f"interval for {name} wider than 1e-12")
            if reeb[name]["regularity"] == "rational":
                check(lo == hi == parse_rat(reeb[name]["exact"]), f"rational {name} with a non-degenerate interval")
            pt[name] = (lo + hi) / 2
        if W is not None:
            check(
                all(w[0] * pt["a"] + w[1] * pt["b"] + w[2] * SLICE_C > 0 for w in W),
                "minimiser lies outside the Reeb cone",
            )
        quasi = all(reeb[n]["regularity"] == "rational" for n in "ab")
        check(reeb["irregular"] == (not quasi), "regularity flag inconsistent with the coordinates")
        if quasi:
            exact = f.exact_value(pt["a"], pt["b"], SLICE_C)
            check(rat(exact) == reeb["value"]["exact"], "exact value disagrees with the volume function")
        else:
            with mpmath.workdps(30):
                v = f.evaluate(mpmath.mpf(pt["a"].numerator) / pt["a"].denominator,
                               mpmath.mpf(pt["b"].numerator) / pt["b"].denominator, SLICE_C)
                lo, hi = (mpmath.mpf(x) for x in reeb["value"]["interval"])
                check(abs(v - mpmath.mpf(reeb["value"]["decimal"])) < mpmath.mpf(10) ** -10,
                      "value decimal disagrees with the volume function")
                check(lo - mpmath.mpf(10) ** -11 <= v <= hi + mpmath.mpf(10) ** -11,
                      "value outside the reported enclosure")

    if "decomposition" in report:
        decomp = report["decomposition"]
        edges = [tuple(e) for e in decomp["edges"]]
        check(edges == P.edges(), "edge list differs from the input")
        for entry in decomp["summand_cone"]:
            t = [parse_rat(x) for x in entry["generator"]]
            check(all(x >= 0 for x in t), "negative summand-cone generator")
            check(
                sum(x * e[0] for x, e in zip(t, edges)) == 0 and sum(x * e[1] for x, e in zip(t, edges)) == 0,
                "summand-cone generator does not close up",
            )
        dims = []
        for d in decomp["lattice_decompositions"]:
            blocks = d["blocks"]
            check(sorted(i for b in blocks for i in b) == list(range(1, len(edges) + 1)), "blocks do not partition the edges")
            for b in blocks:
                check(
                    sum(edges[i - 1][0] for i in b) == 0 and sum(edges[i - 1][1] for i in b) == 0,
                    f"block {b} does not sum to zero",
                )
            summands = [from_vertices(s) for s in d["summands"]]
            total = minkowski_sum_all(summands)
            check(
                isinstance(total, LatticePolygon) and sorted(total.edges()) == sorted(P.edges()),
                "summands do not add up to the polygon",
            )
            check(sum(len(s) for s in summands) == len(P), "vertex count identity fails")
            if len(blocks) > 1:
                dims.append(len(blocks) - 1)
        check(sorted(dims) == decomp["versal_dimensions"], "versal dimensions inconsistent with the decompositions")
        check(
            len(lattice_maximal_decompositions(P)) == len(decomp["lattice_decompositions"]),
            "lattice decomposition count differs from recomputation",
        )
