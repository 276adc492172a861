from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from reebscope.exactmath import (
    ABC,
    IntMatrix,
    MultiPoly,
    RationalFunction3,
    bareiss_det,
    hermite_normal_form,
    isolate_real_roots,
    minors_gcd_2x3,
    parse_poly,
    poly_gcd,
    primitive,
    primitive_rational,
    rational_nullspace,
    rational_roots,
    resultant,
    solve_rational,
    squarefree_part,
    univariate_gcd,
)

a_, b_, c_ = sympy.symbols("a b c")
SYMS = {"a": a_, "b": b_, "c": c_}


def to_sympy(p: MultiPoly):
    return sympy.sympify(str(p).replace("^", "**"), locals=SYMS)


small = st.integers(-4, 4)


@st.composite
def polys(draw, variables=ABC, max_terms=4, max_deg=2):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in variables)
        terms[e] = draw(st.integers(-5, 5))
    return MultiPoly(variables, terms)


# -- integer linear algebra ---------------------------------------------------


def test_hnf_small_example():
    H, U = hermite_normal_form(IntMatrix.from_rows([[2, 4], [1, 3]]))
    assert H.to_rows() == [[1, 1], [0, 2]]
    assert U.to_rows() == [[1, -1], [-1, 2]]


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_hnf_shape_and_unimodular_transform(rows):
    M = IntMatrix.from_rows(rows)
    H, U = hermite_normal_form(M)
    assert (U @ M).to_rows() == H.to_rows()
    assert abs(U.det()) == 1
    assert abs(M.det()) == abs(H.det())
    # echelon shape with positive pivots and reduced entries above them pins H down uniquely
    rows_h = H.to_rows()
    last = -1
    for r, row in enumerate(rows_h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(x) for x in rows_h[r:])
            break
        piv = nz[0]
        assert piv > last and row[piv] > 0
        assert all(0 <= rows_h[i][piv] < row[piv] for i in range(r))
        last = piv


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_determinant_matches_sympy(rows):
    assert bareiss_det([list(r) for r in rows]) == sympy.Matrix(rows).det()


@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace_dimension_and_kernel(rows):
    basis = rational_nullspace(rows, 5)
    assert len(basis) == 5 - sympy.Matrix(rows).rank()
    for v in basis:
        assert all(sum(Fraction(x) * y for x, y in zip(r, v)) == 0 for r in rows)


def test_solve_rational_unique_and_singular():
    assert solve_rational([[2, 1], [1, 3]], [3, 4]) == [1, 1]
    assert solve_rational([[1, 2], [2, 4]], [1, 2]) is None
    assert solve_rational([[1, 0], [0, 1], [1, 1]], [1, 2, 4]) is None


def test_primitive_helpers():
    assert primitive((4, -6, 2)) == (2, -3, 1)
    assert primitive_rational([Fraction(1, 3), Fraction(2, 3), 0]) == (1, 2, 0)
    assert minors_gcd_2x3((1, 0, 0), (0, 3, 0)) == 3


# -- polynomials --------------------------------------------------------------


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero()
    assert to_sympy(p * q).expand() == (to_sympy(p) * to_sympy(q)).expand()


@given(polys())
def test_str_parse_round_trip(p):
    assert parse_poly(str(p), ABC) == p


@given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=2))
def test_gcd_matches_sympy(p, q, r):
    P, Q = p * r, q * r
    if P.is_zero() or Q.is_zero():
        return
    g = poly_gcd(P, Q)
    ref = sympy.gcd(to_sympy(P), to_sympy(Q))
    ratio = sympy.simplify(to_sympy(g) / ref)
    assert ratio.is_number and ratio != 0
    assert g.divides(P) and g.divides(Q)


def test_gcd_worked_example():
    a, b, c = (MultiPoly.var(v, ABC) for v in ABC)
    g = poly_gcd((a + b) ** 2 * (a - c), (a + b) * (a + 2 * c))
    assert g == a + b


def test_exact_division_rejects_remainders():
    a = MultiPoly.var("a", ABC)
    with pytest.raises(ValueError):
        (a * a + 1).exact_div(a)


def test_resultant_against_sympy():
    x, y = (MultiPoly.var(v, ("x", "y")) for v in ("x", "y"))
    p = x * x - 2
    q = y * y - x
    res = resultant(p, q, "x")
    X, Y = sympy.symbols("x y")
    ref = sympy.resultant(X**2 - 2, Y**2 - X, X)
    assert sympy.expand(sympy.sympify(str(res).replace("^", "**"), locals={"y": Y}) - ref) == 0


@given(polys(variables=("a", "b"), max_terms=3, max_deg=2), polys(variables=("a", "b"), max_terms=3, max_deg=2))
def test_resultant_property_matches_sympy(p, q):
    if p.degree("a") < 1 or q.degree("a") < 1:
        return
    res = resultant(p, q, "a")
    A, B = sympy.symbols("a b")
    conv = lambda m: sympy.sympify(str(m).replace("^", "**"), locals={"a": A, "b": B})
    ref = sympy.resultant(conv(p), conv(q), A)
    assert sympy.expand(conv(res) - ref) == 0


def test_univariate_gcd_and_squarefree():
    # (x-1)^2 (x+2) and (x-1)(x+3)
    assert univariate_gcd([2, -3, 0, 1], [-3, 2, 1]) == [-1, 1]
    assert squarefree_part([2, -3, 0, 1]) == [-2, 1, 1]


def test_rational_roots_and_isolation():
    assert rational_roots([-3, 2, 8]) == [Fraction(-3, 4), Fraction(1, 2)]
    # x^2 - 2 has two irrational roots
    ivs = isolate_real_roots([-2, 0, 1], -10, 10)
    assert len(ivs) == 2
    assert ivs[1][0] < sympy.sqrt(2) < ivs[1][1]
    assert rational_roots([-2, 0, 1]) == []


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=4, unique=True))
def test_rational_roots_recovers_planted_roots(roots):
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.prod([(x - sympy.Rational(r.numerator, r.denominator)) for r in roots]) * (x**2 + 1), x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    assert rational_roots(coeffs) == sorted(roots)


# -- rational functions ---------------------------------------------------------


def test_rational_function_canonical_equality():
    a, b, c = (MultiPoly.var(v, ABC) for v in ABC)
    f = RationalFunction3(a * a - b * b, (a - b) * c)
    g = RationalFunction3(a + b, c)
    assert f == g
    assert hash(f) == hash(g)
    assert f.is_homogeneous_of_degree(0)


def test_linear_term_constructor_sums_reciprocals():
    f = RationalFunction3.from_linear_terms([(1, [(1, 0, 0), (0, 1, 0)]), (1, [(1, 0, 0), (0, 0, 1)])])
    a, b, c = (MultiPoly.var(v, ABC) for v in ABC)
    assert f == RationalFunction3(b + c, a * b * c)
    assert f.exact_value(1, 2, 3) == Fraction(5, 6)
