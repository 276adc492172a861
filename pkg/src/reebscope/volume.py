"""The exact volume function, its constrained minimisation, and the
rationality certificate of the minimising Reeb field."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from reebscope.cone import cone_over_diagram, dual_cone
from reebscope.exactmath import (
    ABC,
    MultiPoly,
    RationalFunction3,
    cross,
    det3,
    integer_coeffs,
    isolate_real_roots,
    poly_gcd,
    rational_roots,
    resultant,
    squarefree_part,
    univariate_gcd,
)
from reebscope.polytope import LatticePolygon

Vec3 = tuple[int, int, int]
SLICE_C = 3
DEFAULT_PRECISION = 256


def working_precision() -> int:
    """Binary precision for the numeric stage; REEBSCOPE_PRECISION overrides it."""
    raw = os.environ.get("REEBSCOPE_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 64:
        raise ValueError("REEBSCOPE_PRECISION must be at least 64 bits")
    return bits


# ---------------------------------------------------------------------------
# localization


@dataclass(frozen=True)
class LocalizationDatum:
    """One fixed point of the triangulated dual polytope.

    ``u``, ``u1``, ``u2`` are the edge covectors at the vertex, scaled to
    integers; ``d`` is the orbifold index.  The contribution to the volume
    function is ``scale / (<u,xi> <u1,xi> <u2,xi>)`` with ``scale = d**2`` for
    these unreduced covectors, which equals ``1 / (d <u'> <u1'> <u2'>)`` after
    dividing each covector by ``d``.
    """

    u: Vec3
    u1: Vec3
    u2: Vec3
    d: int

    @property
    def scale(self) -> int:
        return self.d * self.d

    def term(self) -> tuple[int, tuple[Vec3, Vec3, Vec3]]:
        return self.scale, (self.u, self.u1, self.u2)


def triangulation_anchor(P: LatticePolygon) -> tuple[int, int] | None:
    """The origin if it lies in P, else the lowest interior lattice point; None means fan from a vertex."""
    if P.contains((0, 0)):
        return (0, 0)
    return P.lowest_interior_point()


def localization_data(P: LatticePolygon) -> list[LocalizationDatum]:
    cone_over_diagram(P)  # validates
    anchor = triangulation_anchor(P)
    verts = list(P.vertices)
    n = len(verts)
    if anchor is None:
        anchor = verts[0]
    wa: Vec3 = (anchor[0], anchor[1], 1)
    out = []
    for j in range(n):
        v, w = verts[j], verts[(j + 1) % n]
        wj: Vec3 = (v[0], v[1], 1)
        wk: Vec3 = (w[0], w[1], 1)
        d = det3([wa, wj, wk])
        if d == 0:
            continue  # anchor on this edge
        out.append(LocalizationDatum(cross(wj, wk), cross(wk, wa), cross(wa, wj), d))
    return out


def volume_function(P: LatticePolygon) -> RationalFunction3:
    """a0(xi) as an exact rational function of xi = (a, b, c)."""
    return RationalFunction3.from_linear_terms([d.term() for d in localization_data(P)])


# ---------------------------------------------------------------------------
# minimisation


@dataclass
class _SliceDerivatives:
    """Partial derivatives of numerator and denominator restricted to c = 3."""

    polys: dict[str, MultiPoly]

    @classmethod
    def build(cls, f: RationalFunction3) -> _SliceDerivatives:
        N, D = f.slice_c(SLICE_C)
        polys = {}
        for name, p in (("N", N), ("D", D)):
            polys[name] = p
            polys[name + "a"] = p.diff("a")
            polys[name + "b"] = p.diff("b")
            polys[name + "aa"] = p.diff("a").diff("a")
            polys[name + "ab"] = p.diff("a").diff("b")
            polys[name + "bb"] = p.diff("b").diff("b")
        return cls(polys)

    def evaluate(self, a, b) -> dict[str, object]:
        pt = {"a": a, "b": b}
        return {k: p.evaluate(pt) for k, p in self.polys.items()}

    def value_grad_hess(self, a, b):
        v = self.evaluate(a, b)
        D = v["D"]
        f = v["N"] / D
        fa = (v["Na"] - f * v["Da"]) / D
        fb = (v["Nb"] - f * v["Db"]) / D
        faa = (v["Naa"] - 2 * fa * v["Da"] - f * v["Daa"]) / D
        fbb = (v["Nbb"] - 2 * fb * v["Db"] - f * v["Dbb"]) / D
        fab = (v["Nab"] - fa * v["Db"] - fb * v["Da"] - f * v["Dab"]) / D
        return f, (fa, fb), ((faa, fab), (fab, fbb))


@dataclass(frozen=True)
class NumericMinimum:
    a: mpmath.mpf
    b: mpmath.mpf
    value: mpmath.mpf
    gradient_norm: mpmath.mpf
    hessian: tuple[tuple[mpmath.mpf, mpmath.mpf], tuple[mpmath.mpf, mpmath.mpf]]
    steps: int
    precision: int


class ConvergenceError(RuntimeError):
    pass


def _feasible(forms: Sequence[Vec3], a, b) -> bool:
    return all(h[0] * a + h[1] * b + h[2] * SLICE_C > 0 for h in forms)


def minimize_volume(
    f: RationalFunction3,
    P: LatticePolygon,
    precision: int | None = None,
    tolerance: float = 1e-20,
    max_steps: int = 200,
) -> NumericMinimum:
    """Damped Newton on (a, b) with c = 3, staying inside the open Reeb cone."""
    prec = precision or working_precision()
    forms = dual_cone(cone_over_diagram(P)).rays
    sd = _SliceDerivatives.build(f)
    with mpmath.workprec(prec):
        bx, by = P.barycenter()
        a = mpmath.mpf(3 * bx.numerator) / bx.denominator
        b = mpmath.mpf(3 * by.numerator) / by.denominator
        if not _feasible(forms, a, b):
            raise ConvergenceError("barycentric start is not strictly feasible")
        tol = mpmath.mpf(tolerance)
        fv, g, H = sd.value_grad_hess(a, b)
        gnorm = mpmath.sqrt(g[0] ** 2 + g[1] ** 2)
        steps = 0
        while gnorm > tol:
            if steps >= max_steps:
                raise ConvergenceError(f"no convergence after {max_steps} damped Newton steps")
            steps += 1
            det = H[0][0] * H[1][1] - H[0][1] * H[1][0]
            if H[0][0] > 0 and det > 0:
                da = -(H[1][1] * g[0] - H[0][1] * g[1]) / det
                db = -(-H[1][0] * g[0] + H[0][0] * g[1]) / det
            else:
                da, db = -g[0], -g[1]
            t = mpmath.mpf(1)
            while True:
                na, nb = a + t * da, b + t * db
                if _feasible(forms, na, nb):
                    nf, ng, nH = sd.value_grad_hess(na, nb)
                    nnorm = mpmath.sqrt(ng[0] ** 2 + ng[1] ** 2)
                    if nf < fv or nnorm < gnorm:
                        break
                t /= 2
                if t < mpmath.mpf(2) ** (-prec // 2):
                    raise ConvergenceError("line search stalled")
            a, b, fv, g, H, gnorm = na, nb, nf, ng, nH, nnorm
        return NumericMinimum(a, b, fv, gnorm, H, steps, prec)


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class Regularity:
    """Either ``rational`` with its exact value or ``irrational``."""

    kind: str
    value: Fraction | None = None

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def __str__(self) -> str:
        return f"rational({self.value})" if self.is_rational else "irrational"


@dataclass(frozen=True)
class EliminationCertificate:
    eliminant_a: list[int]
    eliminant_b: list[int]
    spurious_factors_removed: dict[str, list[Fraction]]
    isolating_interval: dict[str, tuple[Fraction, Fraction]]
    rational_candidates_tested: dict[str, list[Fraction]]
    common_factor: str = "1"


@dataclass(frozen=True)
class ReebResult:
    a_interval: tuple[Fraction, Fraction]
    b_interval: tuple[Fraction, Fraction]
    a: mpmath.mpf
    b: mpmath.mpf
    value: mpmath.mpf
    value_interval: tuple[mpmath.mpf, mpmath.mpf]
    exact_value: Fraction | None
    regularity: dict[str, Regularity]
    certificate: EliminationCertificate
    numeric: NumericMinimum = field(repr=False)

    @property
    def xi(self) -> tuple[mpmath.mpf, mpmath.mpf, int]:
        return (self.a, self.b, SLICE_C)

    @property
    def overall(self) -> str:
        return "quasi-regular" if all(r.is_rational for r in self.regularity.values()) else "irregular"

    @property
    def irregular(self) -> bool:
        return self.overall == "irregular"


class CertificateError(RuntimeError):
    """The exact stage could not confirm the numeric minimiser."""


def gradient_numerators(f: RationalFunction3) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Primitive numerators of df/da and df/db at c = 3, with their common factor removed.

    Returns ``(Ga, Gb, common)``.
    """
    N, D = f.slice_c(SLICE_C)
    Ga = (N.diff("a") * D - N * D.diff("a")).primitive_part()
    Gb = (N.diff("b") * D - N * D.diff("b")).primitive_part()
    g = poly_gcd(Ga, Gb)
    if not g.is_constant():
        Ga, Gb = Ga.exact_div(g).primitive_part(), Gb.exact_div(g).primitive_part()
    return Ga, Gb, g


def _strip_rational_roots(coeffs: list[int], keep: tuple[Fraction, Fraction] | None):
    """Divide out linear factors of rational roots outside ``keep``."""
    removed = []
    for r in rational_roots(coeffs):
        if keep is not None and keep[0] <= r <= keep[1]:
            continue
        lin = [Fraction(-r.numerator), Fraction(r.denominator)]
        coeffs = _divide_exact(coeffs, lin)
        removed.append(r)
    return coeffs, removed


def _divide_exact(coeffs: Sequence[int], divisor: Sequence[Fraction]) -> list[int]:
    num = [Fraction(c) for c in coeffs]
    out = [Fraction(0)] * (len(num) - len(divisor) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(divisor) - 1] / divisor[-1]
        out[i] = q
        for j, d in enumerate(divisor):
            num[i + j] -= q * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return integer_coeffs(out)


def _eliminant(Ga: MultiPoly, Gb: MultiPoly, keep_var: str) -> list[int]:
    other = "b" if keep_var == "a" else "a"
    R = resultant(Ga, Gb, other)
    if R.is_zero():
        raise CertificateError("gradient numerators share a factor after gcd removal")
    return squarefree_part(R.drop([other]).univariate_coeffs(keep_var))


def _locate(coeffs: list[int], x: mpmath.mpf) -> tuple[Fraction, Fraction]:
    """The isolating interval of the eliminant root closest to the numeric value."""
    centre = Fraction(mpmath.nstr(x, 40, strip_zeros=False)) if x != 0 else Fraction(0)
    delta = Fraction(1, 10**8)
    width = Fraction(1, 2**56)
    intervals = isolate_real_roots(coeffs, centre - delta, centre + delta, width)
    if not intervals:
        # the root may coincide with an endpoint of the search window
        intervals = isolate_real_roots(coeffs, centre - 2 * delta, centre + 3 * delta, width)
    if not intervals:
        raise CertificateError(f"no eliminant root near {mpmath.nstr(x, 15)}")
    best = min(intervals, key=lambda iv: abs((iv[0] + iv[1]) / 2 - centre))
    return best


def _univariate_in(p: MultiPoly, var: str, fixed: str, value: Fraction) -> list[Fraction]:
    return p.subs({fixed: value}).drop([fixed]).univariate_coeffs(var)


def _has_root_in(coeffs: Sequence[Fraction], interval: tuple[Fraction, Fraction]) -> bool:
    lo, hi = interval
    if not any(coeffs):
        return True
    if all(c == 0 for c in coeffs[1:]):
        return False
    ints = integer_coeffs(coeffs)
    if lo == hi:
        return sum(c * lo**i for i, c in enumerate(ints)) == 0
    return bool(isolate_real_roots(ints, lo, hi)) or any(
        sum(c * e**i for i, c in enumerate(ints)) == 0 for e in (lo, hi)
    )


def classify_regularity(f: RationalFunction3, P: LatticePolygon, minimum: NumericMinimum | None = None) -> ReebResult:
    """Decide exactly whether each coordinate of the minimiser is rational."""
    if minimum is None:
        minimum = minimize_volume(f, P)
    Ga, Gb, common = gradient_numerators(f)
    elim = {"a": _eliminant(Ga, Gb, "a"), "b": _eliminant(Ga, Gb, "b")}
    numeric = {"a": minimum.a, "b": minimum.b}
    interval = {v: _locate(elim[v], numeric[v]) for v in "ab"}
    removed: dict[str, list[Fraction]] = {}
    for v in "ab":
        elim[v], removed[v] = _strip_rational_roots(elim[v], interval[v])
    tested: dict[str, list[Fraction]] = {}
    candidates: dict[str, Fraction | None] = {}
    for v in "ab":
        lo, hi = interval[v]
        inside = [r for r in rational_roots(elim[v]) if lo <= r <= hi]
        tested[v] = inside
        candidates[v] = inside[0] if inside else None
    regularity: dict[str, Regularity] = {}
    ra, rb = candidates["a"], candidates["b"]
    if ra is not None and rb is not None:
        pt = {"a": ra, "b": rb}
        if Ga.evaluate(pt) == 0 and Gb.evaluate(pt) == 0:
            regularity = {"a": Regularity("rational", ra), "b": Regularity("rational", rb)}
        else:
            raise CertificateError("rational candidates do not solve the gradient system")
    else:
        for v, other in (("a", "b"), ("b", "a")):
            r = candidates[v]
            if r is None:
                regularity[v] = Regularity("irrational")
                continue
            ca = _univariate_in(Ga, other, v, r)
            cb = _univariate_in(Gb, other, v, r)
            g = univariate_gcd(ca, cb) if any(ca) and any(cb) else (ca if any(ca) else cb)
            if not any(g) and not any(ca) and not any(cb):
                regularity[v] = Regularity("rational", r)
            elif len(g) > 1 and _has_root_in(g, interval[other]):
                regularity[v] = Regularity("rational", r)
            else:
                regularity[v] = Regularity("irrational")
    cert = EliminationCertificate(
        eliminant_a=elim["a"],
        eliminant_b=elim["b"],
        spurious_factors_removed=removed,
        isolating_interval=interval,
        rational_candidates_tested=tested,
        common_factor=str(common),
    )
    exact_value = None
    if all(regularity[v].is_rational for v in "ab"):
        exact_value = f.exact_value(regularity["a"].value, regularity["b"].value, SLICE_C)
        a_iv = (regularity["a"].value, regularity["a"].value)
        b_iv = (regularity["b"].value, regularity["b"].value)
        value_iv = (_to_mpf(exact_value, minimum.precision, -1), _to_mpf(exact_value, minimum.precision, 1))
    else:
        a_iv = _interval_for(regularity["a"], interval["a"])
        b_iv = _interval_for(regularity["b"], interval["b"])
        value_iv = _value_enclosure(f, a_iv, b_iv, minimum.precision)
    return ReebResult(
        a_interval=a_iv,
        b_interval=b_iv,
        a=minimum.a,
        b=minimum.b,
        value=minimum.value,
        value_interval=value_iv,
        exact_value=exact_value,
        regularity=regularity,
        certificate=cert,
        numeric=minimum,
    )


def _interval_for(reg: Regularity, iv: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (reg.value, reg.value) if reg.is_rational else iv


def _value_enclosure(f: RationalFunction3, a_iv, b_iv, prec: int):
    with mpmath.workprec(prec):
        iv = mpmath.iv
        iv.prec = prec
        A = iv.mpf([_to_mpf(a_iv[0], prec, -1), _to_mpf(a_iv[1], prec, 1)])
        B = iv.mpf([_to_mpf(b_iv[0], prec, -1), _to_mpf(b_iv[1], prec, 1)])
        N, D = f.slice_c(SLICE_C)
        val = N.evaluate({"a": A, "b": B}) / D.evaluate({"a": A, "b": B})
        return (mpmath.mpf(val.a), mpmath.mpf(val.b))


def _to_mpf(x: Fraction, prec: int, direction: int) -> mpmath.mpf:
    rounding = "f" if direction < 0 else "c"
    num = mpmath.mpf(x.numerator)
    return mpmath.fdiv(num, x.denominator, prec=prec, rounding=rounding)


def reeb_field(P: LatticePolygon, precision: int | None = None) -> ReebResult:
    """Volume function, numeric minimiser and exact certificate in one call."""
    f = volume_function(P)
    prec = precision or working_precision()
    try:
        return classify_regularity(f, P, minimize_volume(f, P, prec))
    except CertificateError:
        if prec >= 512:
            raise
        return classify_regularity(f, P, minimize_volume(f, P, 512))


# ---------------------------------------------------------------------------
# the CFO eliminant


def cfo_irregularity_polynomial(s: int) -> MultiPoly:
    """Eliminant in a for the r = 1 CFO member with parameter s, free of rational roots.

    Returned as a primitive integer polynomial in ``a`` with positive
    leading coefficient.
    """
    from reebscope.polytope import family_cfo

    if not isinstance(s, int) or s < 2:
        raise ValueError("need an integer s >= 2")
    f = volume_function(family_cfo(1, s))
    Ga, Gb, _ = gradient_numerators(f)
    coeffs = _eliminant(Ga, Gb, "a")
    coeffs, _ = _strip_rational_roots(coeffs, None)
    return MultiPoly.from_univariate(coeffs, "a")
