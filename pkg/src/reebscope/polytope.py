"""Lattice polygons in Z^2 and the named families of toric diagrams."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence

Point = tuple[int, int]


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def _cross(u: Point, v: Point) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _yx(p: Point) -> tuple[int, int]:
    return (p[1], p[0])


def is_primitive(v: Point) -> bool:
    return gcd(abs(v[0]), abs(v[1])) == 1


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon with vertices counter-clockwise from the (y, x)-minimal one.

    A two-vertex instance is a lattice segment; it behaves as a degenerate
    polygon whose two edges are ``d`` and ``-d``.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 2 or len(set(verts)) != n:
            raise ValueError("a polygon needs at least two distinct vertices")
        if min(verts, key=_yx) != verts[0]:
            raise ValueError("vertices must start at the (y, x)-minimal vertex")
        if n == 2:
            return
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            if _cross(_sub(b, a), _sub(c, b)) <= 0:
                raise ValueError("vertices must be strictly convex and counter-clockwise")
        if self.twice_area() <= 0:
            raise ValueError("vertices must wind counter-clockwise exactly once")

    # -- basic data -----------------------------------------------------------
    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Point]:
        v = self.vertices
        return [_sub(v[(i + 1) % len(v)], v[i]) for i in range(len(v))]

    def edge_pairs(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def twice_area(self) -> int:
        v = self.vertices
        return sum(_cross(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    def area(self) -> Fraction:
        return Fraction(self.twice_area(), 2)

    def boundary_lattice_points(self) -> int:
        if self.is_segment:
            d = self.edges()[0]
            return gcd(abs(d[0]), abs(d[1])) + 1
        return sum(gcd(abs(dx), abs(dy)) for dx, dy in self.edges())

    def interior_lattice_points(self) -> int:
        """Count via Pick's theorem: 2A = 2i + b - 2."""
        if self.is_segment:
            raise ValueError("a segment has no interior")
        twice, b = self.twice_area(), self.boundary_lattice_points()
        return (twice - b + 2) // 2

    def contains(self, p: Point, strict: bool = False) -> bool:
        if self.is_segment:
            a, b = self.vertices
            if strict:
                return False
            d, w = _sub(b, a), _sub(p, a)
            return _cross(d, w) == 0 and 0 <= w[0] * d[0] + w[1] * d[1] <= d[0] ** 2 + d[1] ** 2
        for a, b in self.edge_pairs():
            s = _cross(_sub(b, a), _sub(p, a))
            if s < 0 or (strict and s == 0):
                return False
        return True

    def lattice_points(self) -> list[Point]:
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return [
            (x, y)
            for y in range(min(ys), max(ys) + 1)
            for x in range(min(xs), max(xs) + 1)
            if self.contains((x, y))
        ]

    def interior_points(self) -> list[Point]:
        """Interior lattice points sorted by (y, x)."""
        return [p for p in self.lattice_points() if self.contains(p, strict=True)]

    def lowest_interior_point(self) -> Point | None:
        pts = self.interior_points()
        return pts[0] if pts else None

    def translate(self, t: Point) -> LatticePolygon:
        return LatticePolygon(tuple(_add(v, t) for v in self.vertices))

    def barycenter(self) -> tuple[Fraction, Fraction]:
        """Average of the vertices."""
        n = len(self.vertices)
        return (
            Fraction(sum(x for x, _ in self.vertices), n),
            Fraction(sum(y for _, y in self.vertices), n),
        )

    def width(self, direction: Point) -> int:
        """Lattice width along a linear functional."""
        vals = [direction[0] * x + direction[1] * y for x, y in self.vertices]
        return max(vals) - min(vals)

    def to_text(self) -> str:
        return ";".join(f"({x},{y})" for x, y in self.vertices)

    def to_json(self) -> list[list[int]]:
        return [[x, y] for x, y in self.vertices]

    def __str__(self) -> str:
        return "Conv{" + ",".join(f"({x},{y})" for x, y in self.vertices) + "}"


def segment(p: Point, q: Point) -> LatticePolygon:
    """The lattice segment from p to q."""
    return from_vertices([p, q])


def from_vertices(points: Iterable[Sequence[int]]) -> LatticePolygon:
    """Convex hull of lattice points in canonical order.

    Points lying in the relative interior of hull edges are dropped.
    Collinear input yields a segment.
    """
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) < 2:
        raise ValueError("need at least two distinct points")

    def chain(seq: list[Point]) -> list[Point]:
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and _cross(_sub(out[-1], out[-2]), _sub(p, out[-1])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = chain(pts), chain(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) <= 2:
        ends = [pts[0], pts[-1]]
        hull = sorted(ends, key=_yx)
        return LatticePolygon(tuple(hull))
    start = min(range(len(hull)), key=lambda i: _yx(hull[i]))
    return LatticePolygon(tuple(hull[start:] + hull[:start]))


# ---------------------------------------------------------------------------
# validation and edge data


@dataclass(frozen=True)
class DiagramValidation:
    is_convex_simple: bool
    edges_primitive: bool
    offending_edges: tuple[tuple[Point, Point], ...]
    reasons: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    @property
    def valid(self) -> bool:
        return self.is_convex_simple and self.edges_primitive


def validate_toric_diagram(P: LatticePolygon) -> DiagramValidation:
    """A toric diagram is a 2-dimensional convex lattice polygon with primitive edges."""
    reasons: list[str] = []
    full = not P.is_segment
    if not full:
        reasons.append("polygon is not 2-dimensional")
    bad = tuple((a, b) for a, b in P.edge_pairs() if not is_primitive(_sub(b, a)))
    for a, b in bad:
        d = _sub(b, a)
        reasons.append(f"edge {a}->{b} has direction {d} with lattice length {gcd(abs(d[0]), abs(d[1]))}")
    return DiagramValidation(full, not bad, bad, tuple(reasons))


@dataclass(frozen=True)
class OrientedEdgeList:
    edges: tuple[Point, ...]
    start: Point = (0, 0)

    def __post_init__(self) -> None:
        if any(e == (0, 0) for e in self.edges):
            raise ValueError("edges must be nonzero")
        if (sum(e[0] for e in self.edges), sum(e[1] for e in self.edges)) != (0, 0):
            raise ValueError("edges of a closed polygon sum to zero")

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i: int) -> Point:
        return self.edges[i]


def oriented_edges(P: LatticePolygon) -> OrientedEdgeList:
    if P.is_segment:
        raise ValueError("oriented edges need a 2-dimensional polygon")
    return OrientedEdgeList(tuple(P.edges()), P.vertices[0])


def interior_lattice_points(P: LatticePolygon) -> int:
    return P.interior_lattice_points()


# ---------------------------------------------------------------------------
# Minkowski sums


def _half(v: Point) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u: Point, v: Point) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = _cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def merge_edges(edges: Iterable[Point]) -> list[Point]:
    """Sort edge vectors by angle from the positive x-axis, summing parallel ones."""
    ordered = sorted((e for e in edges if e != (0, 0)), key=cmp_to_key(_angle_cmp))
    merged: list[Point] = []
    for e in ordered:
        if merged and _angle_cmp(merged[-1], e) == 0:
            merged[-1] = _add(merged[-1], e)
        else:
            merged.append(e)
    return merged


def _point_error():
    raise ValueError("the sum of two points is not a polygon")


def minkowski_sum(P: LatticePolygon | Point, Q: LatticePolygon | Point) -> LatticePolygon:
    """Minkowski sum; either argument may also be a single lattice point."""
    if not isinstance(P, LatticePolygon):
        return Q.translate(tuple(P)) if isinstance(Q, LatticePolygon) else _point_error()
    if not isinstance(Q, LatticePolygon):
        return P.translate(tuple(Q))
    start = _add(P.vertices[0], Q.vertices[0])
    merged = merge_edges(P.edges() + Q.edges())
    pts = [start]
    for e in merged[:-1]:
        pts.append(_add(pts[-1], e))
    return from_vertices(pts)


def minkowski_sum_all(polys: Iterable[LatticePolygon | Point]) -> LatticePolygon | Point:
    total: LatticePolygon | Point = (0, 0)
    for p in polys:
        if isinstance(total, tuple) and not isinstance(p, LatticePolygon):
            total = _add(total, tuple(p))
        else:
            total = minkowski_sum(total, p)
    return total


def equal_up_to_translation(P: LatticePolygon, Q: LatticePolygon) -> bool:
    return len(P) == len(Q) and P.translate(_sub(Q.vertices[0], P.vertices[0])) == Q


@dataclass(frozen=True)
class SegmentCheck:
    valid: bool
    reasons: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.valid


def segment_sum_valid(Q: LatticePolygon, L: LatticePolygon) -> SegmentCheck:
    """Whether Q + L is again a toric diagram (L primitive and parallel to no edge of Q)."""
    reasons = []
    if not validate_toric_diagram(Q).valid:
        reasons.append("base polygon is not a toric diagram")
    if not L.is_segment:
        reasons.append("second summand is not a segment")
        return SegmentCheck(False, tuple(reasons))
    d = L.edges()[0]
    if not is_primitive(d):
        reasons.append(f"segment direction {d} is not primitive")
    parallel = [e for e in Q.edges() if _cross(e, d) == 0]
    if parallel:
        reasons.append(f"segment direction {d} is parallel to edge {parallel[0]}")
    return SegmentCheck(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# parsing

_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_points(text: str) -> list[Point]:
    """Accept ``(x,y);(x,y);...`` or a JSON array of pairs."""
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        if not isinstance(data, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(c, int) for c in p) for p in data
        ):
            raise ValueError("expected a JSON array of integer pairs")
        return [(p[0], p[1]) for p in data]
    chunks = [c for c in text.split(";") if c.strip()]
    pts = []
    for chunk in chunks:
        m = _PAIR.fullmatch(chunk.strip())
        if not m:
            raise ValueError(f"cannot parse point {chunk.strip()!r}")
        pts.append((int(m.group(1)), int(m.group(2))))
    if not pts:
        raise ValueError("no points given")
    return pts


def parse_polygon(text: str) -> LatticePolygon:
    return from_vertices(parse_points(text))


# ---------------------------------------------------------------------------
# named families

_DEL_PEZZO = {
    1: [(-1, 0), (0, -1), (1, 0), (0, 1)],
    2: [(1, 0), (0, 1), (-1, -1)],
    3: [(-1, 0), (-1, -1), (1, 0), (0, 1)],
    4: [(-1, 1), (-1, 0), (0, -1), (1, 0), (0, 1)],
    5: [(-1, -1), (0, -1), (1, 0), (1, 1), (0, 1), (-1, 0)],
}


def del_pezzo(k: int) -> LatticePolygon:
    """The reflexive polygons Q1..Q5 with the origin as unique interior point."""
    if k not in _DEL_PEZZO:
        raise ValueError("reflexive polygon index must be 1..5")
    return from_vertices(_DEL_PEZZO[k])


def family_gmsw(p: int, q: int) -> LatticePolygon:
    """The quadrilateral Conv{(0,0),(1,0),(p,p),(p-q-1,p-q)}."""
    if not (isinstance(p, int) and isinstance(q, int) and p > q > 0):
        raise ValueError("need integers p > q > 0")
    return from_vertices([(0, 0), (1, 0), (p, p), (p - q - 1, p - q)])


def _origin_at_lowest_interior(P: LatticePolygon) -> LatticePolygon:
    o = P.lowest_interior_point()
    if o is None:
        return P
    return P.translate((-o[0], -o[1]))


def cfo_summands(r: int, s: int) -> list[LatticePolygon]:
    """Segments Conv{0,(1,j)} for j = 1..r and the triangle Conv{0,(0,1),(1,r+s)}."""
    if not (isinstance(r, int) and isinstance(s, int) and r >= 1 and s >= 2):
        raise ValueError("need integers r >= 1 and s >= 2")
    parts = [segment((0, 0), (1, j)) for j in range(1, r + 1)]
    parts.append(from_vertices([(0, 0), (0, 1), (1, r + s)]))
    return parts


def family_cfo(r: int, s: int) -> LatticePolygon:
    """The (2r+3)-gon built from ``cfo_summands``, origin at its lowest interior point."""
    total = minkowski_sum_all(cfo_summands(r, s))
    assert isinstance(total, LatticePolygon)
    return _origin_at_lowest_interior(total)


QPQ_VARIANTS = ("q1-segment", "odd-segment")


def qpq_segment(p: int, q: int, variant: str) -> LatticePolygon:
    if variant == "q1-segment":
        if q != 1:
            raise ValueError("the q1-segment variant needs q = 1")
        return segment((0, 0), (1, 1))
    if variant == "odd-segment":
        if (p - q) % 2 == 0:
            raise ValueError("the odd-segment variant needs p - q odd")
        return segment((0, 0), (-p + q + 2, -p + q))
    raise ValueError(f"unknown variant {variant!r}; expected one of {QPQ_VARIANTS}")


def family_qpq(p: int, q: int, variant: str) -> LatticePolygon:
    """GMSW quadrilateral plus a segment, origin at the lowest interior point."""
    base = family_gmsw(p, q)
    L = qpq_segment(p, q, variant)
    check = segment_sum_valid(base, L)
    if not check:
        raise ValueError("; ".join(check.reasons))
    return _origin_at_lowest_interior(minkowski_sum(base, L))


def polygon_from_family(name: str, **params: int | str) -> LatticePolygon:
    """Dispatch on a family name: ``dp``/``gmsw``/``cfo``/``qpq``."""
    if name == "dp":
        return del_pezzo(int(params["k"]))
    if name == "gmsw":
        return family_gmsw(int(params["p"]), int(params["q"]))
    if name == "cfo":
        return family_cfo(int(params["r"]), int(params["s"]))
    if name == "qpq":
        return family_qpq(int(params["p"]), int(params["q"]), str(params.get("variant", "q1-segment")))
    raise ValueError(f"unknown family {name!r}")
