"""Rank-3 rational polyhedral cones: cone over a diagram, duality, goodness,
half-open simplicial decompositions and Hilbert bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from reebscope.exactmath import (
    IntMatrix,
    cross,
    det3,
    dot,
    hermite_normal_form,
    minors_gcd_2x3,
    primitive,
    solve_rational,
)
from reebscope.polytope import LatticePolygon, validate_toric_diagram

Vec3 = tuple[int, int, int]


class InvalidDiagramError(ValueError):
    """Raised when a polygon fails the toric-diagram conditions."""


@dataclass(frozen=True)
class GorensteinCertificate:
    gamma: Vec3 | None

    @property
    def is_gorenstein(self) -> bool:
        return self.gamma is not None


@dataclass(frozen=True)
class PolyCone3:
    """Pointed full-dimensional cone in Z^3.

    ``rays`` are listed cyclically so that ``facet_normals[i]`` is the
    primitive inward normal of the facet spanned by ``rays[i]`` and
    ``rays[i+1]``.
    """

    rays: tuple[Vec3, ...]
    facet_normals: tuple[Vec3, ...]

    @classmethod
    def from_cyclic_rays(cls, rays: Sequence[Sequence[int]]) -> PolyCone3:
        rs = [primitive(tuple(int(x) for x in r)) for r in rays]
        n = len(rs)
        if n < 3:
            raise ValueError("a full-dimensional cone needs at least three rays")
        normals = [primitive(cross(rs[i], rs[(i + 1) % n])) for i in range(n)]
        if dot(normals[0], rs[2 % n]) < 0:
            rs = rs[::-1]
            normals = [primitive(cross(rs[i], rs[(i + 1) % n])) for i in range(n)]
        for i, nv in enumerate(normals):
            for j, r in enumerate(rs):
                v = dot(nv, r)
                on_facet = j in (i, (i + 1) % n)
                if (on_facet and v != 0) or (not on_facet and v <= 0):
                    raise ValueError("rays are not the cyclically ordered extreme rays of a pointed cone")
        return cls(tuple(rs), tuple(normals))

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]]) -> PolyCone3:
        """Cone generated by arbitrary integral vectors (extreme rays are extracted)."""
        gs = sorted({primitive(tuple(int(x) for x in g)) for g in gens})
        facets: set[Vec3] = set()
        for u, v in combinations(gs, 2):
            c = cross(u, v)
            if c == (0, 0, 0):
                continue
            c = primitive(c)
            vals = [dot(c, g) for g in gs]
            if all(x >= 0 for x in vals):
                facets.add(c)
            elif all(x <= 0 for x in vals):
                facets.add(tuple(-x for x in c))
        extreme = []
        for g in gs:
            on = [f for f in facets if dot(f, g) == 0]
            if len(on) >= 2:
                extreme.append(g)
        if len(extreme) < 3:
            raise ValueError("generators do not span a pointed full-dimensional cone")
        # cyclic order: walk along facets
        order = [extreme[0]]
        used = {extreme[0]}
        while len(order) < len(extreme):
            cur = order[-1]
            nxt = next(
                (
                    e
                    for e in extreme
                    if e not in used
                    and any(dot(f, cur) == 0 and dot(f, e) == 0 for f in facets)
                ),
                None,
            )
            if nxt is None:
                raise ValueError("could not order extreme rays")
            order.append(nxt)
            used.add(nxt)
        return cls.from_cyclic_rays(order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyCone3):
            return NotImplemented
        return set(self.rays) == set(other.rays)

    def __hash__(self) -> int:
        return hash(frozenset(self.rays))

    def contains(self, x: Sequence[int | Fraction]) -> bool:
        return all(dot(nv, x) >= 0 for nv in self.facet_normals)

    def interior_contains(self, x: Sequence[int | Fraction]) -> bool:
        return all(dot(nv, x) > 0 for nv in self.facet_normals)

    def gorenstein(self) -> GorensteinCertificate:
        """The primitive gamma with <gamma, r> = 1 on every ray, if it exists."""
        sol = solve_rational([list(r) for r in self.rays], [1] * len(self.rays))
        if sol is None or any(x.denominator != 1 for x in sol):
            return GorensteinCertificate(None)
        return GorensteinCertificate(tuple(int(x) for x in sol))

    def ray_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.rays)


def cone_over_polygon(P: LatticePolygon) -> PolyCone3:
    """Cone(P x {1}) with rays (v, 1) in the polygon's counter-clockwise order."""
    return PolyCone3.from_cyclic_rays([(x, y, 1) for x, y in P.vertices])


def cone_over_diagram(P: LatticePolygon) -> PolyCone3:
    check = validate_toric_diagram(P)
    if not check.valid:
        raise InvalidDiagramError("; ".join(check.reasons))
    return cone_over_polygon(P)


def dual_cone(C: PolyCone3) -> PolyCone3:
    return PolyCone3.from_cyclic_rays(C.facet_normals)


def moment_cone(P: LatticePolygon) -> PolyCone3:
    """Dual of the cone over a toric diagram."""
    return dual_cone(cone_over_diagram(P))


@dataclass(frozen=True)
class GoodnessWitness:
    good: bool
    failing_face: tuple[Vec3, Vec3] | None = None
    elementary_divisor: int = 1

    def __bool__(self) -> bool:
        return self.good


def is_good(C_star: PolyCone3) -> GoodnessWitness:
    """Every 2-face of the dual cone is spanned by part of a lattice basis."""
    gens = C_star.facet_normals  # rays of the dual cone, cyclically
    n = len(gens)
    for i in range(n):
        u, v = gens[i], gens[(i + 1) % n]
        g = minors_gcd_2x3(u, v)
        if g != 1:
            return GoodnessWitness(False, (u, v), g)
    return GoodnessWitness(True)


# ---------------------------------------------------------------------------
# simplicial decomposition


@dataclass(frozen=True)
class SimplicialPiece:
    """Half-open simplicial cone: facet i (opposite generator i) is removed when listed."""

    generators: tuple[Vec3, Vec3, Vec3]
    half_open_facets: frozenset[int]
    index: int
    parallelepiped_points: tuple[Vec3, ...]

    def coordinates(self, x: Sequence[int]) -> tuple[Fraction, ...]:
        """Coefficients lambda with x = sum lambda_i g_i."""
        g = self.generators
        d = det3(g)
        adj_cols = [cross(g[1], g[2]), cross(g[2], g[0]), cross(g[0], g[1])]
        return tuple(Fraction(dot(x, c), d) for c in adj_cols)

    def contains(self, x: Sequence[int]) -> bool:
        lam = self.coordinates(x)
        return all(
            (l > 0 if i in self.half_open_facets else l >= 0) for i, l in enumerate(lam)
        )


def _box_points(gens: Sequence[Vec3], open_at: Iterable[int] = ()) -> list[Vec3]:
    """Lattice points sum lambda_i g_i with lambda_i in [0,1), or (0,1] for i in ``open_at``."""
    open_at = set(open_at)
    H, _ = hermite_normal_form(IntMatrix.from_rows([list(g) for g in gens]))
    diag = [H[i, i] for i in range(3)]
    pts = []
    g = list(gens)
    d = det3(g)
    adj_cols = [cross(g[1], g[2]), cross(g[2], g[0]), cross(g[0], g[1])]
    for x in product(*(range(h) for h in diag)):
        lam = [Fraction(dot(x, c), d) for c in adj_cols]
        frac = [l - (l.numerator // l.denominator) for l in lam]
        frac = [Fraction(1) if (f == 0 and i in open_at) else f for i, f in enumerate(frac)]
        p = tuple(int(sum(f * gi[k] for f, gi in zip(frac, g))) for k in range(3))
        pts.append(p)
    return sorted(pts)


def simplicial_decomposition(C: PolyCone3) -> list[SimplicialPiece]:
    """Fan from the first ray, made half-open so that the pieces tile the cone."""
    rays = C.rays
    n = len(rays)
    if n < 3:
        raise ValueError("need at least three rays")
    fans = [(rays[0], rays[k], rays[k + 1]) for k in range(1, n - 1)]
    q = _generic_interior_point(C, fans)
    pieces = []
    for gens in fans:
        if det3(gens) < 0:
            gens = (gens[0], gens[2], gens[1])
        excluded = set()
        for i in range(3):
            others = [gens[j] for j in range(3) if j != i]
            nv = cross(others[0], others[1])
            if dot(nv, gens[i]) < 0:
                nv = tuple(-x for x in nv)
            if dot(nv, q) < 0:
                excluded.add(i)
        pts = _box_points(gens, excluded)
        pieces.append(SimplicialPiece(gens, frozenset(excluded), abs(det3(gens)), tuple(pts)))
    return pieces


def _generic_interior_point(C: PolyCone3, fans) -> tuple[Fraction, ...]:
    # Interior point avoiding every inner facet hyperplane of the fan.
    s = [sum(r[k] for r in C.rays) for k in range(3)]
    inner = []
    for gens in fans:
        for u, v in combinations(gens, 2):
            inner.append(cross(u, v))
    for k in range(1, 200):
        delta = (Fraction(1, 7 * k), Fraction(1, 13 * k * k), Fraction(1, 29 * k * k * k))
        q = tuple(Fraction(s[i]) + delta[i] for i in range(3))
        if C.interior_contains(q) and all(dot(nv, q) != 0 for nv in inner):
            return q
    raise RuntimeError("no generic interior point found")  # pragma: no cover


# ---------------------------------------------------------------------------
# Hilbert basis


@dataclass(frozen=True)
class HilbertBasis:
    elements: tuple[Vec3, ...]

    @property
    def as_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _hb_key(v: Vec3) -> tuple[int, int, int]:
    return (v[2], v[0], v[1])


def hilbert_basis(C_star: PolyCone3) -> HilbertBasis:
    """Minimal generators of the semigroup of lattice points in the cone."""
    rays = C_star.rays
    cands: set[Vec3] = set(rays)
    for k in range(1, len(rays) - 1):
        gens = (rays[0], rays[k], rays[k + 1])
        cands.update(p for p in _box_points(gens) if p != (0, 0, 0))
    cand_list = sorted(cands, key=_hb_key)
    keep = []
    for x in cand_list:
        reducible = any(
            y != x and C_star.contains(tuple(a - b for a, b in zip(x, y))) for y in cand_list
        )
        if not reducible:
            keep.append(x)
    return HilbertBasis(tuple(keep))


@dataclass(frozen=True)
class ReebCone:
    """Open cone {xi : <h, xi> > 0 for every form h}."""

    forms: tuple[Vec3, ...]

    def contains(self, xi: Sequence) -> bool:
        return all(dot(h, xi) > 0 for h in self.forms)

    def inequalities(self) -> list[str]:
        out = []
        for h in self.forms:
            terms = []
            for coef, name in zip(h, "abc"):
                if coef == 0:
                    continue
                sign = "-" if coef < 0 else "+"
                mag = abs(coef)
                body = name if mag == 1 else f"{mag}*{name}"
                terms.append((sign, body))
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                text += f" {sign} {body}"
            out.append(f"{text} > 0")
        return out


def reeb_cone(W: HilbertBasis | Sequence[Vec3]) -> ReebCone:
    forms = W.elements if isinstance(W, HilbertBasis) else tuple(tuple(w) for w in W)
    return ReebCone(tuple(forms))
