from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import toric_diagrams
from reebscope.cone import cone_over_diagram
from reebscope.exactmath import RationalFunction3, evaluate_univariate, isolate_real_roots, parse_poly
from reebscope.polytope import del_pezzo, family_cfo
from reebscope.volume import (
    SLICE_C,
    cfo_irregularity_polynomial,
    localization_data,
    reeb_field,
    volume_function,
    working_precision,
)

from conftest import CORPUS

SQRT13 = mpmath.sqrt(13)
SQRT33 = mpmath.sqrt(33)


def mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def random_reeb_vectors(P, n, seed):
    """Interior points of C on the slice c = 3, as positive combinations of its rays."""
    rng = random.Random(seed)
    rays = cone_over_diagram(P).rays
    out = []
    for _ in range(n):
        lam = [Fraction(rng.randint(1, 20), 7) for _ in rays]
        xi = [sum(l * r[k] for l, r in zip(lam, rays)) for k in range(3)]
        t = Fraction(SLICE_C) / xi[2]
        out.append(tuple(t * x for x in xi))
    return out


def cfo_closed_form(s: int) -> RationalFunction3:
    num = parse_poly(f"-a^2 + 2*a*b - b^2 + {s**3 - s**2 + 2}*a*c - 2*b*c + {s**3 - 1}*c^2", ("a", "b", "c"))
    forms = [(1, -1, -1), (s + 1, -1, -1), (1, 0, 1), (1, -1, s - 1), (s, -1, s - 1)]
    return RationalFunction3.from_factored(num, forms)


def reference_p(s: int) -> list[Fraction]:
    """Reference coefficients of the degree-8 factor, lowest degree first."""
    return [
        11664 * s**2 * (s - 1) * (3 * s - 1),
        1944 * s * (-4 + 27 * s - 34 * s**2 - 26 * s**3 + 32 * s**4),
        1296 * (1 - 14 * s + 24 * s**2 + 79 * s**3 - 185 * s**4 + 80 * s**5),
        54 * (35 - 50 * s - 1433 * s**2 + 4956 * s**3 - 4872 * s**4 + 1280 * s**5),
        9 * (-53 + 2666 * s - 14205 * s**2 + 24552 * s**3 - 15088 * s**4 + 2560 * s**5),
        3 * (-829 + 8842 * s - 26685 * s**2 + 30096 * s**3 - 12272 * s**4 + 1280 * s**5),
        (s - 1) * (1879 - 10367 * s + 14528 * s**2 - 4784 * s**3 + 256 * s**4),
        (s - 1) ** 2 * (-599 + 1448 * s - 272 * s**2),
        72 * (s - 1) ** 3,
    ]


# -- exact volume function ----------------------------------------------------


@pytest.mark.parametrize("s", [2, 3, 4, 5, 6])
def test_cfo_volume_matches_closed_form(s):
    assert volume_function(family_cfo(1, s)) == cfo_closed_form(s)


def test_q3_and_q4_closed_forms():
    q3 = RationalFunction3.from_factored(
        parse_poly("4*a - 2*b + 8*c", ("a", "b", "c")),
        [(1, 0, 1), (1, 1, -1), (1, -1, 1), (1, -2, -1)],
    )
    assert volume_function(del_pezzo(3)) == q3
    # reference form uses the opposite sign of b
    q4 = RationalFunction3.from_factored(
        parse_poly("-a^2 - 2*a*b - b^2 + 2*a*c - 2*b*c + 7*c^2", ("a", "b", "c")),
        [(1, 1, -1), (1, -1, -1), (1, 0, 1), (1, 1, 1), (0, -1, 1)],
    )
    assert volume_function(del_pezzo(4)) == q4


@given(toric_diagrams(), st.fractions(min_value=Fraction(1, 5), max_value=5))
@settings(max_examples=25)
def test_volume_scales_with_degree_minus_three(P, t):
    f = volume_function(P)
    assert f.is_homogeneous_of_degree(-3)
    for xi in random_reeb_vectors(P, 2, seed=len(P)):
        scaled = tuple(t * x for x in xi)
        assert f.exact_value(*scaled) == f.exact_value(*xi) / t**3
        assert f.exact_value(*xi) > 0


@given(toric_diagrams())
@settings(max_examples=25)
def test_orbifold_weights_sum_to_twice_the_area(P):
    assert sum(d.d for d in localization_data(P)) == 2 * P.area()


@pytest.mark.parametrize("name", ["Q3", "P1,3", "Y3,1", "Q21b"])
def test_gradient_matches_finite_differences(name):
    P = CORPUS[name]
    f = volume_function(P)
    fa, fb = f.diff("a"), f.diff("b")
    h = mpmath.mpf("1e-6")
    with mpmath.workprec(200):
        for xi in random_reeb_vectors(P, 20, seed=hash(name) & 0xFFFF):
            a, b, c = (mpmath.mpf(x.numerator) / x.denominator for x in xi)
            num_a = (f.evaluate(a + h, b, c) - f.evaluate(a - h, b, c)) / (2 * h)
            num_b = (f.evaluate(a, b + h, c) - f.evaluate(a, b - h, c)) / (2 * h)
            for exact, approx in ((fa.evaluate(a, b, c), num_a), (fb.evaluate(a, b, c), num_b)):
                assert abs(exact - approx) <= 1e-6 * max(1, abs(exact))


# -- minimiser and certificate --------------------------------------------------


def test_q1_minimiser_is_rational():
    r = reeb_field(del_pezzo(1))
    assert r.overall == "quasi-regular"
    assert r.regularity["a"].value == 0 and r.regularity["b"].value == 0
    assert r.exact_value == Fraction(8, 27)


def test_q3_minimiser():
    r = reeb_field(del_pezzo(3))
    assert abs(r.a - (SQRT13 - 4)) < 1e-10
    assert r.regularity["b"].value == 0 and not r.regularity["a"].is_rational
    assert abs(r.value - (46 + 13 * SQRT13) / 324) < 1e-10
    assert r.irregular
    # a^2 + 8a + 3 vanishes at sqrt(13) - 4 and divides the eliminant
    x = sympy.sqrt(13) - 4
    assert sympy.expand(x * x + 8 * x + 3) == 0
    elim = r.certificate.eliminant_a
    lo, hi = r.a_interval
    q = lambda t: t * t + 8 * t + 3
    assert q(lo) * q(hi) < 0
    rem = [Fraction(c) for c in elim]
    while len(rem) >= 3:
        lead = rem[-1]
        for k, q in enumerate((3, 8, 1)):
            rem[len(rem) - 3 + k] -= lead * q
        rem.pop()
    assert not any(rem)


def test_q4_minimiser_after_mirroring():
    r = reeb_field(del_pezzo(4))
    target = (-57 + 9 * SQRT33) / 16
    assert abs(r.a - target) < 1e-10 and abs(-r.b - target) < 1e-10
    assert abs(r.value - (59 + 11 * SQRT33) / 486) < 1e-10
    assert r.irregular


@pytest.mark.parametrize(
    "s,expected",
    [
        (3, ("-0.2119737845", "1.244664220", "0.1787519891")),
        (4, ("-0.1547965799", "2.785162197", "0.1379166501")),
    ],
)
def test_cfo_minimisers(s, expected):
    r = reeb_field(family_cfo(1, s))
    for got, want in zip((r.a, r.b, r.value), expected):
        assert abs(got - mpmath.mpf(want)) < 1e-8
    assert r.irregular and not r.regularity["a"].is_rational


@pytest.mark.parametrize("name", ["Q2", "Q5", "P1,2", "Y2,1", "Y4,1", "Q21a"])
def test_certificate_is_sound(name):
    P = CORPUS[name]
    f = volume_function(P)
    r = reeb_field(P)
    H = r.numeric.hessian
    assert H[0][0] > 0 and H[0][0] * H[1][1] - H[0][1] ** 2 > 0
    assert r.numeric.gradient_norm < 1e-20
    for v, iv, elim in (("a", r.a_interval, r.certificate.eliminant_a), ("b", r.b_interval, r.certificate.eliminant_b)):
        lo, hi = iv
        assert hi - lo <= Fraction(1, 10**12)
        x = getattr(r, v)
        assert lo - Fraction(1, 10**30) <= Fraction(mpmath.nstr(x, 40)) <= hi + Fraction(1, 10**30)
        if r.regularity[v].is_rational:
            assert evaluate_univariate(elim, r.regularity[v].value) == 0
        else:
            assert len(isolate_real_roots(elim, lo, hi)) == 1
    lo, hi = r.value_interval
    assert lo <= r.value <= hi
    # nothing feasible does better
    for xi in random_reeb_vectors(P, 10, seed=3):
        assert mp(f.exact_value(*xi)) >= lo


# -- the degree-8 eliminant -----------------------------------------------------


@pytest.mark.parametrize("s,content", [(2, 1), (3, 4), (4, 9), (5, 8)])
def test_eliminant_matches_reference_polynomial(s, content):
    ours = cfo_irregularity_polynomial(s).univariate_coeffs("a")
    reference = reference_p(s)
    assert len(ours) == 9
    assert [Fraction(p, content) for p in reference] == [Fraction(c) for c in ours]


def test_eliminant_rejects_bad_parameters():
    with pytest.raises(ValueError):
        cfo_irregularity_polynomial(1)


# -- precision control ----------------------------------------------------------


def test_precision_override(monkeypatch):
    monkeypatch.setenv("REEBSCOPE_PRECISION", "384")
    assert working_precision() == 384
    assert reeb_field(del_pezzo(1)).numeric.precision == 384
    monkeypatch.setenv("REEBSCOPE_PRECISION", "32")
    with pytest.raises(ValueError):
        working_precision()
    monkeypatch.delenv("REEBSCOPE_PRECISION")
    assert working_precision() == 256
