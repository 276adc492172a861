"""Slow, independent reference computations used by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from hypothesis import strategies as st
from sympy.utilities.iterables import multiset_partitions

from reebscope.exactmath import dot
from reebscope.polytope import from_vertices, validate_toric_diagram


def _box_diagrams():
    box = list(product(range(-1, 2), repeat=2))
    found = set()
    for mask in range(1, 1 << len(box)):
        pts = [p for i, p in enumerate(box) if mask >> i & 1]
        if len(pts) < 3:
            continue
        try:
            P = from_vertices(pts)
        except ValueError:
            continue
        if not P.is_segment and validate_toric_diagram(P).valid:
            found.add(P.vertices)
    return sorted(found)


BOX_DIAGRAMS = _box_diagrams()


@st.composite
def toric_diagrams(draw, max_shear: int = 2):
    """A toric diagram from the 3x3 box, then a random shear and translation.

    Shears are unimodular, so primitive edges stay primitive.
    """
    verts = draw(st.sampled_from(BOX_DIAGRAMS))
    k = draw(st.integers(-max_shear, max_shear))
    m = draw(st.integers(-max_shear, max_shear))
    tx, ty = draw(st.integers(-1, 1)), draw(st.integers(-1, 1))
    moved = []
    for x, y in verts:
        x, y = x + k * y, y
        x, y = x, y + m * x
        moved.append((x + tx, y + ty))
    return from_vertices(moved)


def polygon_points_brute(P):
    """(interior, boundary) lattice point counts by testing every point of the bounding box."""
    xs = [x for x, _ in P.vertices]
    ys = [y for _, y in P.vertices]
    n = len(P.vertices)
    interior = boundary = 0
    for x, y in product(range(min(xs), max(xs) + 1), range(min(ys), max(ys) + 1)):
        signs = []
        for i in range(n):
            (x0, y0), (x1, y1) = P.vertices[i], P.vertices[(i + 1) % n]
            signs.append((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0))
        if all(s > 0 for s in signs):
            interior += 1
        elif all(s >= 0 for s in signs):
            boundary += 1
    return interior, boundary


def cone_points_brute(C_star, grading, max_height):
    """Lattice points x of the cone with 0 <= <grading, x> <= max_height."""
    bounds = []
    for k in range(3):
        vals = [Fraction(max_height * r[k], dot(grading, r)) for r in C_star.rays] + [Fraction(0)]
        bounds.append((int(min(vals)) - 1, int(max(vals)) + 1))
    out = []
    for x in product(*(range(lo, hi + 1) for lo, hi in bounds)):
        if dot(grading, x) <= max_height and C_star.contains(x):
            out.append(x)
    return out


def hilbert_basis_brute(C_star):
    """Irreducible lattice points of the cone, searched below a provable height bound."""
    grading = tuple(sum(r[k] for r in C_star.facet_normals) for k in range(3))
    heights = sorted((dot(grading, r) for r in C_star.rays), reverse=True)
    bound = sum(heights[:3])
    pts = [x for x in cone_points_brute(C_star, grading, bound) if any(x)]
    pts.sort(key=lambda x: dot(grading, x))
    basis = []
    for x in pts:
        hx = dot(grading, x)
        reducible = any(
            dot(grading, y) < hx and C_star.contains(tuple(a - b for a, b in zip(x, y))) for y in pts
        )
        if not reducible:
            basis.append(x)
    return sorted(basis)


def edge_partitions_brute(P):
    """Set partitions of the edges into zero-sum blocks of two or three edges."""
    d = P.edges()
    found = set()
    for part in multiset_partitions(list(range(len(d)))):
        if any(len(b) not in (2, 3) for b in part):
            continue
        if all(sum(d[i][0] for i in b) == 0 and sum(d[i][1] for i in b) == 0 for b in part):
            found.add(frozenset(tuple(b) for b in part))
    return found


def primitive_segments(radius):
    from math import gcd

    from reebscope.polytope import segment

    seen = set()
    for x, y in product(range(-radius, radius + 1), repeat=2):
        if (x, y) == (0, 0) or gcd(x, y) != 1:
            continue
        key = (x, y) if (y, x) > (0, 0) else (-x, -y)
        if key not in seen:
            seen.add(key)
            yield segment((0, 0), key)


def brute_admissible(p, q, radius=8):
    """Primitive segments L in a box with Y^{p,q} + L a decomposable toric diagram."""
    from reebscope.polytope import family_gmsw, minkowski_sum, segment_sum_valid

    Y = family_gmsw(p, q)
    out = []
    for L in primitive_segments(radius):
        if not segment_sum_valid(Y, L):
            continue
        Q = minkowski_sum(Y, L)
        if validate_toric_diagram(Q).valid and edge_partitions_brute(Q):
            out.append(L)
    return out
