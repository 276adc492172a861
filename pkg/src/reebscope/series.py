"""Hilbert series of the moment-cone semigroup, its index character, and
degree-bounded toric ideal binomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from reebscope.cone import HilbertBasis, PolyCone3, SimplicialPiece, simplicial_decomposition
from reebscope.exactmath import ABC, MultiPoly, RationalFunction3, dot

Vec3 = tuple[int, int, int]


@dataclass(frozen=True)
class HilbertSeriesSum:
    """Sum over half-open simplicial pieces of sum_p z^p / prod_i (1 - z^{g_i})."""

    pieces: tuple[tuple[tuple[Vec3, ...], tuple[Vec3, Vec3, Vec3]], ...]

    @classmethod
    def from_pieces(cls, pieces: Sequence[SimplicialPiece]) -> HilbertSeriesSum:
        return cls(tuple((p.parallelepiped_points, p.generators) for p in pieces))

    def expand(self, grading: Sequence[int], max_grade: int) -> dict[Vec3, int]:
        """Coefficients of all monomials z^m with <grading, m> <= max_grade."""
        out: dict[Vec3, int] = {}
        for offsets, gens in self.pieces:
            steps = [dot(grading, g) for g in gens]
            if any(s <= 0 for s in steps):
                raise ValueError("grading must be positive on every generator")
            for p in offsets:
                room = max_grade - dot(grading, p)
                if room < 0:
                    continue
                for k0 in range(room // steps[0] + 1):
                    r1 = room - k0 * steps[0]
                    for k1 in range(r1 // steps[1] + 1):
                        r2 = r1 - k1 * steps[1]
                        for k2 in range(r2 // steps[2] + 1):
                            m = tuple(
                                p[i] + k0 * gens[0][i] + k1 * gens[1][i] + k2 * gens[2][i] for i in range(3)
                            )
                            out[m] = out.get(m, 0) + 1
        return out

    def to_latex(self) -> str:
        """Sum of fractions in the variables T_0, T_1, T_2."""
        parts = []
        for offsets, gens in self.pieces:
            num = "+".join(_latex_monomial(p) for p in offsets)
            den = "".join(f"\\left(1-{_latex_monomial(g)}\\right)" for g in gens)
            parts.append(f"\\frac{{{num}}}{{{den}}}")
        return " + ".join(parts)


def _latex_monomial(e: Sequence[int]) -> str:
    factors = []
    for i, k in enumerate(e):
        if k == 0:
            continue
        factors.append(f"T_{{{i}}}" if k == 1 else f"T_{{{i}}}^{{{k}}}")
    return "".join(factors) if factors else "1"


def hilbert_series(C_star: PolyCone3) -> HilbertSeriesSum:
    return HilbertSeriesSum.from_pieces(simplicial_decomposition(C_star))


@dataclass(frozen=True)
class IndexCharacterCoeffs:
    """Leading Laurent coefficients of the index character in t at t = 0."""

    a0: RationalFunction3
    a1: RationalFunction3


def _linear(v: Sequence[int]) -> MultiPoly:
    return MultiPoly.linear(v, ABC)


def index_character(C_star: PolyCone3) -> IndexCharacterCoeffs:
    """Coefficients of t^-3 and t^-2 after the substitution z_i = exp(-xi_i t).

    With x_i = <g_i, xi> and D offsets p, a piece expands as
    (D - t sum <p, xi> + ...) / (t^3 prod x_i) * (1 + t sum x_i / 2 + ...).
    """
    a0_terms = []
    a1_terms = []
    for piece in simplicial_decomposition(C_star):
        gens = piece.generators
        D = len(piece.parallelepiped_points)
        offsets_sum = [sum(p[k] for p in piece.parallelepiped_points) for k in range(3)]
        half_sum = _linear([sum(g[k] for g in gens) for k in range(3)]) * Fraction(D, 2)
        a0_terms.append((D, gens))
        a1_terms.append((half_sum - _linear(offsets_sum), gens))
    return IndexCharacterCoeffs(
        RationalFunction3.from_linear_terms(a0_terms),
        RationalFunction3.from_linear_terms(a1_terms),
    )


# ---------------------------------------------------------------------------
# toric ideal


@dataclass(frozen=True)
class Binomial:
    """z^lhs - z^rhs with 0-based exponent vectors; printed with 1-based indices."""

    lhs: tuple[int, ...]
    rhs: tuple[int, ...]

    def degree(self) -> int:
        return max(sum(self.lhs), sum(self.rhs))

    def weight(self, W: Sequence[Vec3]) -> tuple[int, int, int]:
        return tuple(sum(e * w[k] for e, w in zip(self.lhs, W)) for k in range(3))

    def is_homogeneous_for(self, W: Sequence[Vec3]) -> bool:
        rhs_w = tuple(sum(e * w[k] for e, w in zip(self.rhs, W)) for k in range(3))
        return self.weight(W) == rhs_w

    def __str__(self) -> str:
        return f"{_monomial(self.lhs)} - {_monomial(self.rhs)}"


def _monomial(e: Sequence[int]) -> str:
    parts = []
    for i, k in enumerate(e):
        if k:
            parts.append(f"z_{i + 1}" if k == 1 else f"z_{i + 1}^{k}")
    return "*".join(parts) if parts else "1"


def _positive_grading(W: Sequence[Vec3]) -> tuple[int, int, int]:
    """A grading strictly positive on every column.

    Uses (0,0,1) when possible, otherwise the sum of the rays of the dual cone.
    """
    if all(w[2] > 0 for w in W):
        return (0, 0, 1)
    dual = PolyCone3.from_generators(W).facet_normals
    return tuple(sum(n[k] for n in dual) for k in range(3))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def toric_ideal_binomials(W: HilbertBasis | Sequence[Vec3], max_degree: int = 2) -> list[Binomial]:
    """Binomial generators of the toric ideal of W up to standard degree ``max_degree``.

    Monomials sharing a W-weight form a fibre.  Fibres are processed by
    increasing grade; inside a fibre, monomials already connected by moves
    (shifted multiples of earlier binomials) are merged, and one new binomial
    is emitted per remaining extra component.  The output therefore
    generates the ideal in every degree up to the bound.
    """
    cols = list(W.elements if isinstance(W, HilbertBasis) else W)
    n = len(cols)
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    grading = _positive_grading(cols)
    grades = [dot(grading, w) for w in cols]
    cap = max_degree * max(grades)

    fibres: dict[Vec3, list[tuple[int, ...]]] = {}

    def enumerate_monomials(i: int, budget: int, prefix: list[int]):
        if i == n:
            yield tuple(prefix)
            return
        for k in range(budget // grades[i] + 1):
            prefix.append(k)
            yield from enumerate_monomials(i + 1, budget - k * grades[i], prefix)
            prefix.pop()

    for e in enumerate_monomials(0, cap, []):
        if not any(e):
            continue
        wt = tuple(sum(x * c[k] for x, c in zip(e, cols)) for k in range(3))
        fibres.setdefault(wt, []).append(e)

    moves: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    out: list[Binomial] = []
    for wt in sorted(fibres, key=lambda w: (dot(grading, w), w)):
        mons = fibres[wt]
        if len(mons) < 2:
            continue
        members = set(mons)
        uf = _UnionFind(mons)
        for m in mons:
            for lhs, rhs in moves:
                for src, dst in ((lhs, rhs), (rhs, lhs)):
                    if all(a >= b for a, b in zip(m, src)):
                        target = tuple(a - b + c for a, b, c in zip(m, src, dst))
                        if target in members:
                            uf.union(m, target)
        comps: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for m in mons:
            comps.setdefault(uf.find(m), []).append(m)
        if len(comps) == 1:
            continue
        reps = [min(c, key=lambda e: (sum(e), tuple(-x for x in e))) for c in comps.values()]
        anchor = max(reps)
        for r in sorted(reps, reverse=True):
            if r == anchor:
                continue
            # distinct components never share a variable: a common factor would
            # put the quotient pair in a lower, already connected fibre
            moves.append((r, anchor))
            if max(sum(r), sum(anchor)) <= max_degree:
                out.append(Binomial(r, anchor))
    return out
