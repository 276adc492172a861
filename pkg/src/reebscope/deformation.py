"""Minkowski-decomposition combinatorics of toric diagrams and the data of
their versal deformations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from reebscope.exactmath import MultiPoly, primitive_rational, rational_nullspace, solve_rational
from reebscope.polytope import (
    LatticePolygon,
    equal_up_to_translation,
    family_gmsw,
    from_vertices,
    minkowski_sum,
    minkowski_sum_all,
    segment,
    segment_sum_valid,
    validate_toric_diagram,
)

Point = tuple[int, int]


def _cross(u: Point, v: Point) -> int:
    return u[0] * v[1] - u[1] * v[0]


def normalize_summand(Q: LatticePolygon) -> LatticePolygon:
    """Translate so that the first canonical vertex is the origin."""
    x, y = Q.vertices[0]
    return Q.translate((-x, -y))


def walk(P: LatticePolygon, weights: Sequence[int | Fraction]) -> LatticePolygon | None:
    """Polygon obtained by walking the scaled edges t_i d_i from the origin.

    Returns None when every step is zero.  Non-integral vertices are not
    allowed; scale the weights first.
    """
    pos = (Fraction(0), Fraction(0))
    pts = [pos]
    for t, d in zip(weights, P.edges()):
        if t:
            pos = (pos[0] + t * d[0], pos[1] + t * d[1])
            pts.append(pos)
    if pos != (0, 0):
        raise ValueError("weights do not close the edge walk")
    if len(pts) <= 2:
        return None
    if any(c.denominator != 1 for p in pts for c in p):
        raise ValueError("walk leaves the lattice")
    return normalize_summand(from_vertices([(int(x), int(y)) for x, y in pts]))


# ---------------------------------------------------------------------------
# summand space and cone


@dataclass(frozen=True)
class SummandSpace:
    N: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def summand_space(P: LatticePolygon) -> SummandSpace:
    if P.is_segment:
        raise ValueError("summand space needs a 2-dimensional polygon")
    d = P.edges()
    rows = [[e[0] for e in d], [e[1] for e in d]]
    basis = rational_nullspace(rows, len(d))
    return SummandSpace(len(d), tuple(tuple(v) for v in basis))


@dataclass(frozen=True)
class SummandCone:
    """Extreme rays of the cone of nonnegative closing edge weights, with their summands."""

    polygon: LatticePolygon
    generators: tuple[tuple[int, ...], ...]
    summands: tuple[LatticePolygon, ...]


def summand_cone(P: LatticePolygon) -> SummandCone:
    """Extreme rays have support of size two (antiparallel edges) or three (a closing triangle)."""
    if P.is_segment:
        raise ValueError("summand cone needs a 2-dimensional polygon")
    d = P.edges()
    n = len(d)
    gens: set[tuple[int, ...]] = set()
    for i, j in combinations(range(n), 2):
        if _cross(d[i], d[j]) == 0 and d[i][0] * d[j][0] + d[i][1] * d[j][1] < 0:
            t = [Fraction(0)] * n
            # t_i d_i + t_j d_j = 0 with the smallest integral weights
            li = gcd(abs(d[i][0]), abs(d[i][1]))
            lj = gcd(abs(d[j][0]), abs(d[j][1]))
            t[i], t[j] = Fraction(1, li), Fraction(1, lj)
            gens.add(primitive_rational(t))
    for i, j, k in combinations(range(n), 3):
        if 0 in (_cross(d[i], d[j]), _cross(d[i], d[k]), _cross(d[j], d[k])):
            continue
        # weights proportional to the complementary cross products
        w = (_cross(d[j], d[k]), _cross(d[k], d[i]), _cross(d[i], d[j]))
        if all(x > 0 for x in w) or all(x < 0 for x in w):
            t = [0] * n
            t[i], t[j], t[k] = (abs(x) for x in w)
            gens.add(primitive_rational(t))
    ordered = tuple(sorted(gens, reverse=True))
    summands = tuple(walk(P, g) for g in ordered)
    return SummandCone(P, ordered, summands)


def maximal_decompositions(P: LatticePolygon) -> list[tuple[Fraction, ...]]:
    """Vertices of {c >= 0 : sum c_i u_i = (1, ..., 1)} over the summand-cone generators u_i."""
    cone = summand_cone(P)
    gens = cone.generators
    n = len(P.edges())
    rank = n - 2
    target = [1] * n
    found: set[tuple[Fraction, ...]] = set()
    for subset in combinations(range(len(gens)), rank):
        cols = [gens[i] for i in subset]
        rows = [[c[r] for c in cols] for r in range(n)]
        sol = solve_rational(rows, target)
        if sol is None or any(x < 0 for x in sol):
            continue
        full = [Fraction(0)] * len(gens)
        for i, x in zip(subset, sol):
            full[i] = x
        found.add(tuple(full))
    return sorted(found, reverse=True)


# ---------------------------------------------------------------------------
# lattice decompositions


@dataclass(frozen=True)
class EdgePartitionDecomposition:
    """Partition of the edge indices (0-based, in the polygon's edge order) into closing blocks."""

    blocks: tuple[tuple[int, ...], ...]
    summands: tuple[LatticePolygon, ...]

    @property
    def size(self) -> int:
        return len(self.blocks)

    def key(self) -> frozenset[tuple[Point, ...]]:
        return frozenset(s.vertices for s in self.summands)

    def reconstruct(self) -> LatticePolygon:
        total = minkowski_sum_all(self.summands)
        assert isinstance(total, LatticePolygon)
        return total


def _block_summand(P: LatticePolygon, block: Sequence[int]) -> LatticePolygon:
    weights = [1 if i in block else 0 for i in range(len(P.edges()))]
    Q = walk(P, weights)
    assert Q is not None
    return Q


def lattice_maximal_decompositions(P: LatticePolygon) -> list[EdgePartitionDecomposition]:
    """All partitions of the edges into zero-sum blocks of two or three edges."""
    if not validate_toric_diagram(P).valid:
        raise ValueError("lattice decompositions need a valid toric diagram")
    d = P.edges()
    n = len(d)

    def zero(idx: Sequence[int]) -> bool:
        return sum(d[i][0] for i in idx) == 0 and sum(d[i][1] for i in idx) == 0

    results: list[tuple[tuple[int, ...], ...]] = []

    def search(remaining: tuple[int, ...], blocks: list[tuple[int, ...]]):
        if not remaining:
            results.append(tuple(blocks))
            return
        first, rest = remaining[0], remaining[1:]
        for j in range(len(rest)):
            pair = (first, rest[j])
            if zero(pair):
                search(rest[:j] + rest[j + 1 :], blocks + [pair])
        for j, k in combinations(range(len(rest)), 2):
            triple = (first, rest[j], rest[k])
            if zero(triple):
                left = tuple(x for m, x in enumerate(rest) if m not in (j, k))
                search(left, blocks + [triple])

    search(tuple(range(n)), [])
    out = []
    seen = set()
    for blocks in results:
        dec = EdgePartitionDecomposition(blocks, tuple(_block_summand(P, b) for b in blocks))
        if dec.key() not in seen:
            seen.add(dec.key())
            out.append(dec)
    out.sort(key=lambda dec: (dec.size, dec.blocks))
    return out


def versal_base(P: LatticePolygon) -> list[int]:
    """Dimensions m of the reduced components C^m, one per nontrivial decomposition."""
    return sorted(dec.size - 1 for dec in lattice_maximal_decompositions(P) if dec.size > 1)


# ---------------------------------------------------------------------------
# Minkowski scheme


@dataclass(frozen=True)
class SchemeIdeal:
    k0: int
    variables: tuple[str, ...]
    generators: tuple[tuple[MultiPoly, MultiPoly], ...]

    def flat(self) -> list[MultiPoly]:
        return [g for pair in self.generators for g in pair if not g.is_zero()]


def _primitive_normal(d: Point) -> Point:
    g = gcd(abs(d[0]), abs(d[1]))
    return (-d[1] // g, d[0] // g)


def lattice_width_bound(P: LatticePolygon) -> int:
    """Smallest width among the coordinate directions and the edge normals."""
    directions = [(1, 0), (0, 1)] + [_primitive_normal(e) for e in P.edges()]
    return min(P.width(u) for u in directions)


def scheme_ideal(P: LatticePolygon) -> SchemeIdeal:
    """Generators g_k(t) = sum_i t_i^k d_i for 1 <= k <= k0, split into coordinates."""
    if P.is_segment:
        raise ValueError("scheme ideal needs a 2-dimensional polygon")
    d = P.edges()
    names = tuple(f"t{i + 1}" for i in range(len(d)))
    k0 = max(lattice_width_bound(P), 1)
    gens = []
    for k in range(1, k0 + 1):
        comps = []
        for axis in range(2):
            terms = {}
            for i, e in enumerate(d):
                if e[axis]:
                    exps = tuple(k if j == i else 0 for j in range(len(d)))
                    terms[exps] = e[axis]
            comps.append(MultiPoly(names, terms))
        gens.append(tuple(comps))
    return SchemeIdeal(k0, names, tuple(gens))


@dataclass(frozen=True)
class FatPointCheck:
    linear_vanishes: bool
    quadratic_multiples: tuple[Fraction, Fraction]
    higher_divisible: bool

    def __bool__(self) -> bool:
        # one nonzero multiple of s^2 already forces s^2 = 0
        return self.linear_vanishes and any(self.quadratic_multiples) and self.higher_divisible


def gmsw_fat_point_check(p: int, q: int) -> FatPointCheck:
    """Check that the GMSW Minkowski scheme collapses to s^2 = 0 on the linear solution space.

    The linear equations are solved by t1 = t, t2 = t - p s/(p+q),
    t3 = t - q s/(p+q), t4 = t - s; t is the homothety direction.
    """
    if not (isinstance(p, int) and isinstance(q, int) and p > q >= 1):
        raise ValueError("need integers p > q >= 1")
    P = family_gmsw(p, q)
    ideal = scheme_ideal(P)
    ts = ("t", "s")
    t = MultiPoly.var("t", ts)
    s = MultiPoly.var("s", ts)
    images = {
        "t1": t,
        "t2": t - s * Fraction(p, p + q),
        "t3": t - s * Fraction(q, p + q),
        "t4": t - s,
    }
    sub = [tuple(g.compose(images, ts) for g in pair) for pair in ideal.generators]
    linear = all(g.is_zero() for g in sub[0])
    s2 = s * s
    mults = []
    if len(sub) >= 2:
        for g in sub[1]:
            try:
                quo = g.exact_div(s2)
            except ValueError:
                mults.append(Fraction(0))
                continue
            mults.append(Fraction(quo.constant_value()) if quo.is_constant() else Fraction(0))
    else:
        mults = [Fraction(0), Fraction(0)]
    higher = all(s2.divides(g) or g.is_zero() for pair in sub[1:] for g in pair)
    return FatPointCheck(linear, (mults[0], mults[1]), higher)


def gmsw_scheme_is_fat_point(p: int, q: int) -> bool:
    return bool(gmsw_fat_point_check(p, q))


# ---------------------------------------------------------------------------
# tautological cone


@dataclass(frozen=True)
class TautologicalCone:
    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]


def tautological_total_cone(
    P: LatticePolygon, decomposition: EdgePartitionDecomposition | Sequence[LatticePolygon]
) -> TautologicalCone:
    """Generators (v, e_k) for the vertices v of the k-th summand."""
    summands = decomposition.summands if isinstance(decomposition, EdgePartitionDecomposition) else tuple(decomposition)
    summands = tuple(normalize_summand(s) for s in summands)
    total = minkowski_sum_all(summands)
    if not isinstance(total, LatticePolygon) or not equal_up_to_translation(total, P):
        raise ValueError("summands do not add up to the polygon")
    m1 = len(summands)
    gens = []
    for k, S in enumerate(summands):
        e = tuple(int(j == k) for j in range(m1))
        for v in S.vertices:
            gens.append(v + e)
    return TautologicalCone(2 + m1, tuple(gens))


# ---------------------------------------------------------------------------
# smoothable extensions of the GMSW family


@dataclass(frozen=True)
class AdmissibleSegment:
    segment: LatticePolygon
    polygon: LatticePolygon
    decompositions: tuple[EdgePartitionDecomposition, ...]


def candidate_segments(p: int, q: int) -> list[LatticePolygon]:
    """Segments predicted by the parity criterion."""
    if not (isinstance(p, int) and isinstance(q, int) and p > q >= 1):
        raise ValueError("need integers p > q >= 1")
    out = []
    if q == 1:
        out.append(segment((0, 0), (1, 1)))
    if (p - q) % 2 == 1:
        out.append(segment((0, 0), (-p + q + 2, -p + q)))
    return out


def theorem_b_criterion(p: int, q: int) -> list[AdmissibleSegment]:
    """Segments L with Y + L a toric diagram admitting a lattice decomposition."""
    base = family_gmsw(p, q)
    out = []
    for L in candidate_segments(p, q):
        if any(equal_up_to_translation(L, a.segment) for a in out):
            continue
        if not segment_sum_valid(base, L):
            continue
        Q = minkowski_sum(base, L)
        decs = tuple(lattice_maximal_decompositions(Q))
        if decs:
            out.append(AdmissibleSegment(normalize_summand(L), Q, decs))
    return out


@dataclass(frozen=True)
class DecompositionReport:
    polygon: LatticePolygon
    cone: SummandCone
    maximal: tuple[tuple[Fraction, ...], ...]
    lattice: tuple[EdgePartitionDecomposition, ...]
    versal_dimensions: tuple[int, ...]
    tautological: tuple[TautologicalCone, ...]


def decomposition_report(P: LatticePolygon) -> DecompositionReport:
    lattice = tuple(lattice_maximal_decompositions(P))
    return DecompositionReport(
        polygon=P,
        cone=summand_cone(P),
        maximal=tuple(maximal_decompositions(P)),
        lattice=lattice,
        versal_dimensions=tuple(versal_base(P)),
        tautological=tuple(tautological_total_cone(P, dec) for dec in lattice if dec.size > 1),
    )
