"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`; integers are Python ints, so every
operation here is arbitrary precision.  The module provides small integer
matrices with Hermite normal form, sparse multivariate polynomials over Q,
a recursive polynomial gcd, canonical rational functions in ``(a, b, c)``,
Sylvester resultants, and real-root isolation for univariate polynomials.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence, Union

BigRat = Fraction
Number = Union[int, Fraction]
Vec = tuple[int, ...]


def as_rat(x: Number | str) -> Fraction:
    """Coerce ints, Fractions or ``"p/q"`` strings to a reduced Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


def _norm(c: Number) -> Number:
    # store integral coefficients as plain ints: int arithmetic is much faster
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# integer vectors and matrices


def dot(u: Sequence[Number], v: Sequence[Number]) -> Number:
    return sum(x * y for x, y in zip(u, v))


def cross(u: Sequence[int], v: Sequence[int]) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def vector_gcd(v: Iterable[int]) -> int:
    return reduce(gcd, (abs(x) for x in v), 0)


def primitive(v: Sequence[int]) -> Vec:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def primitive_rational(v: Sequence[Number]) -> Vec:
    """Smallest positive multiple of a rational vector that is integral."""
    den = reduce(lcm, (as_rat(x).denominator for x in v), 1)
    return primitive([int(as_rat(x) * den) for x in v])


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> IntMatrix:
        return cls.from_rows(list(zip(*cols)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vec:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vec]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(c) for c in self.columns()])

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = other.columns()
        return IntMatrix.from_rows([[dot(self.row(i), c) for c in cols] for i in range(self.rows)])

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(bareiss_det(self.to_rows()))

    def __str__(self) -> str:
        rows = self.to_rows()
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in rows)


def det3(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Signed determinant of a 3x3 integer matrix."""
    rows = m.to_rows() if isinstance(m, IntMatrix) else [list(r) for r in m]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("det3 needs a 3x3 matrix")
    return dot(rows[0], cross(rows[1], rows[2]))


def bareiss_det(rows: list[list]) -> Number:
    """Fraction-free determinant; works for any exact ring element type with ``//``-free division."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev: Number = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = _exact_quotient(value, prev)
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _exact_quotient(x, y):
    if isinstance(x, MultiPoly):
        return x if (isinstance(y, int) and y == 1) else x.exact_div(y)
    if isinstance(x, int) and isinstance(y, int):
        q, r = divmod(x, y)
        if r:
            raise ArithmeticError("inexact integer division in Bareiss elimination")
        return q
    return _norm(Fraction(x) / y)


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ m``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows last.
    """
    nrows, ncols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(nrows).to_rows()

    def combine(i: int, j: int, x: int, y: int, z: int, w: int) -> None:
        # rows (i, j) <- (x*ri + y*rj, z*ri + w*rj)
        a[i], a[j] = (
            [x * p + y * q for p, q in zip(a[i], a[j])],
            [z * p + w * q for p, q in zip(a[i], a[j])],
        )
        u[i], u[j] = (
            [x * p + y * q for p, q in zip(u[i], u[j])],
            [z * p + w * q for p, q in zip(u[i], u[j])],
        )

    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r + 1, nrows):
            if a[i][c] == 0:
                continue
            g, x, y = _xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            combine(r, i, x, y, -q, p)
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        pivot = a[r][c]
        for i in range(r):
            k = a[i][c] // pivot
            if k:
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
                u[i] = [x - k * y for x, y in zip(u[i], u[r])]
        r += 1
    return IntMatrix.from_rows(a), IntMatrix.from_rows(u)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) > 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def minors_gcd_2x3(r1: Sequence[int], r2: Sequence[int]) -> int:
    """gcd of the 2x2 minors; equals 1 iff the two rows extend to a basis of Z^3."""
    return vector_gcd(cross(r1, r2))


def rational_nullspace(rows: Sequence[Sequence[Number]], ncols: int) -> list[list[Fraction]]:
    """Basis of the kernel of a rational matrix, one vector per free column (RREF)."""
    a = [[as_rat(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(v)
    return basis


def solve_rational(rows: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> list[Fraction] | None:
    """Unique solution of a square or overdetermined consistent system, else None."""
    n = len(rows[0])
    aug = [[as_rat(x) for x in r] + [as_rat(b)] for r, b in zip(rows, rhs)]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    return [aug[i][-1] for i in range(n)]


# ---------------------------------------------------------------------------
# multivariate polynomials


def _grlex_key(exps: Vec) -> tuple[int, Vec]:
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial over Q in a fixed, ordered tuple of variables.

    Terms map exponent tuples to nonzero coefficients.  Instances are treated
    as immutable; every operation returns a new polynomial.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Vec, Number] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        n = len(self.variables)
        clean: dict[Vec, Number] = {}
        if terms:
            for e, c in terms.items():
                if c == 0:
                    continue
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent length does not match variable count")
                clean[e] = _norm(c)
        self._terms = clean
        self._hash: int | None = None

    # -- construction -----------------------------------------------------
    @classmethod
    def const(cls, value: Number, variables: Sequence[str]) -> MultiPoly:
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> MultiPoly:
        variables = tuple(variables)
        e = tuple(int(v == name) for v in variables)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {e: 1})

    @classmethod
    def linear(cls, coeffs: Sequence[Number], variables: Sequence[str], constant: Number = 0) -> MultiPoly:
        n = len(variables)
        terms = {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)}
        if constant:
            terms[(0,) * n] = constant
        return cls(variables, terms)

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Number], var: str = "x") -> MultiPoly:
        """Build from a low-to-high coefficient list."""
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)})

    def _new(self, terms: dict[Vec, Number]) -> MultiPoly:
        p = MultiPoly.__new__(MultiPoly)
        p.variables = self.variables
        p._terms = {e: _norm(c) for e, c in terms.items() if c != 0}
        p._hash = None
        return p

    def _coerce(self, other: MultiPoly | Number) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.variables)
        return NotImplemented

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[Vec, Number]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Vec, Number]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Number:
        return self._terms.get((0,) * len(self.variables), 0)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None

    def degree(self, name: str | None = None) -> int:
        """Degree in one variable, or total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self.index(name)
        return max(e[i] for e in self._terms)

    total_degree = degree

    def leading(self) -> tuple[Vec, Number]:
        """Leading (exponent, coefficient) in graded-lex order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def coefficient(self, exps: Sequence[int]) -> Number:
        return self._terms.get(tuple(exps), 0)

    def coeffs_in(self, name: str) -> dict[int, MultiPoly]:
        """Coefficients with respect to one variable, as polynomials free of it."""
        i = self.index(name)
        buckets: dict[int, dict[Vec, Number]] = {}
        for e, c in self._terms.items():
            k = e[i]
            buckets.setdefault(k, {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {k: self._new(t) for k, t in buckets.items()}

    def support_variables(self) -> tuple[str, ...]:
        used = [any(e[i] for e in self._terms) for i in range(len(self.variables))]
        return tuple(v for v, u in zip(self.variables, used) if u)

    def univariate_coeffs(self, name: str | None = None) -> list[Number]:
        """Low-to-high coefficients; the polynomial must involve at most ``name``."""
        if name is None:
            used = self.support_variables()
            if len(used) > 1:
                raise ValueError("polynomial is not univariate")
            name = used[0] if used else self.variables[0]
        i = self.index(name)
        deg = max(self.degree(name), 0)
        out: list[Number] = [0] * (deg + 1)
        for e, c in self._terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise ValueError("polynomial is not univariate")
            out[e[i]] = c
        return out

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t.get(e, 0) + c
        return self._new(t)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return self._new({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self._new({})
            return self._new({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict[Vec, Number] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> MultiPoly:
        return self * c

    def __truediv__(self, c: Number) -> MultiPoly:
        if isinstance(c, MultiPoly):
            return self.exact_div(c)
        return self * (1 / as_rat(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiPoly.const(other, self.variables)._terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def exact_div(self, d: MultiPoly | Number) -> MultiPoly:
        """Quotient when ``d`` divides ``self`` exactly; ValueError otherwise."""
        if not isinstance(d, MultiPoly):
            return self * (1 / as_rat(d))
        d = self._coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        de, dc = d.leading()
        if d.is_constant():
            return self * (1 / as_rat(dc))
        rem = dict(self._terms)
        quo: dict[Vec, Number] = {}
        dterms = list(d._terms.items())
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            m = tuple(x - y for x, y in zip(e, de))
            if any(x < 0 for x in m):
                raise ValueError("polynomial division is not exact")
            q = _norm(as_rat(c) / dc) if not isinstance(dc, int) or c % dc else c // dc
            quo[m] = q
            for f, fc in dterms:
                g = tuple(x + y for x, y in zip(f, m))
                v = rem.get(g, 0) - q * fc
                if v == 0:
                    rem.pop(g, None)
                else:
                    rem[g] = v
        return self._new(quo)

    def divides(self, other: MultiPoly) -> bool:
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    # -- calculus and substitution -------------------------------------------
    def diff(self, name: str) -> MultiPoly:
        i = self.index(name)
        t: dict[Vec, Number] = {}
        for e, c in self._terms.items():
            if e[i]:
                f = e[:i] + (e[i] - 1,) + e[i + 1 :]
                t[f] = t.get(f, 0) + c * e[i]
        return self._new(t)

    def subs(self, values: Mapping[str, Number]) -> MultiPoly:
        """Substitute numbers for some variables (the variable tuple is kept)."""
        idx = {self.index(k): as_rat(v) for k, v in values.items()}
        t: dict[Vec, Number] = {}
        for e, c in self._terms.items():
            f = list(e)
            for i, v in idx.items():
                if f[i]:
                    c = c * v ** f[i]
                    f[i] = 0
            f = tuple(f)
            t[f] = t.get(f, 0) + c
        return self._new(t)

    def drop(self, names: Iterable[str]) -> MultiPoly:
        """Remove variables that do not occur."""
        names = set(names)
        keep = [i for i, v in enumerate(self.variables) if v not in names]
        for e in self._terms:
            if any(e[i] for i in range(len(e)) if i not in keep):
                raise ValueError("cannot drop a variable that occurs")
        return MultiPoly([self.variables[i] for i in keep], {tuple(e[i] for i in keep): c for e, c in self._terms.items()})

    def embed(self, variables: Sequence[str]) -> MultiPoly:
        """Re-express in a larger variable tuple."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        t = {}
        for e, c in self._terms.items():
            f = [0] * len(variables)
            for i, x in zip(pos, e):
                f[i] = x
            t[tuple(f)] = c
        return MultiPoly(variables, t)

    def compose(self, images: Mapping[str, MultiPoly], variables: Sequence[str]) -> MultiPoly:
        """Substitute polynomials (in ``variables``) for every variable."""
        one = MultiPoly.const(1, variables)
        imgs = [images[v] for v in self.variables]
        powers: list[dict[int, MultiPoly]] = [{0: one} for _ in imgs]

        def power(i: int, k: int) -> MultiPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * imgs[i]
            return cache[k]

        total = MultiPoly(variables)
        for e, c in self._terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, point: Mapping[str, object] | Sequence[object]):
        """Evaluate at numbers of any ring type (Fraction, mpf, interval...)."""
        if isinstance(point, Mapping):
            vals = [point[v] for v in self.variables]
        else:
            vals = list(point)
        total = 0
        for e, c in self._terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    # -- normal forms ---------------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return Fraction(0)
        nums = [as_rat(c).numerator for c in self._terms.values()]
        dens = [as_rat(c).denominator for c in self._terms.values()]
        return Fraction(reduce(gcd, (abs(n) for n in nums)), reduce(lcm, dens))

    def primitive_part(self) -> MultiPoly:
        """Integer coefficients with gcd 1 and positive graded-lex leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self * (1 / c)

    def monic(self) -> MultiPoly:
        return self * (1 / as_rat(self.leading()[1]))

    # -- printing ---------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Vec, Number]]:
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x
            )
            neg = c < 0
            a = -c if neg else c
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            if k == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {str(self)!r})"


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse ``-a^2 + 2*a*b - 3/2*c`` style text (``^`` or ``**`` for powers)."""
    variables = tuple(variables)
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node: ast.AST) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MultiPoly.const(node.value, variables)
        if isinstance(node, ast.Name):
            return MultiPoly.var(node.id, variables)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise ValueError("division only by nonzero constants")
                return left * (1 / as_rat(right.constant_value()))
        raise ValueError(f"unsupported syntax in polynomial: {ast.dump(node)}")

    return walk(tree)


# ---------------------------------------------------------------------------
# polynomial gcd (recursive primitive remainder sequence)


def _pseudo_remainder(a: MultiPoly, b: MultiPoly, x: str) -> MultiPoly:
    db = b.degree(x)
    cb = b.coeffs_in(x)
    lcb = cb[db]
    i = a.index(x)
    r = a
    while not r.is_zero() and r.degree(x) >= db:
        dr = r.degree(x)
        lcr = r.coeffs_in(x)[dr]
        shift = MultiPoly(a.variables, {tuple(int(j == i) * (dr - db) for j in range(len(a.variables))): 1})
        r = r * lcb - lcr * shift * b
    return r


def _content_in(p: MultiPoly, x: str) -> MultiPoly:
    coeffs = list(p.coeffs_in(x).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, c)
    return MultiPoly.const(1, p.variables) if g.is_constant() else g


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q, normalised by :meth:`MultiPoly.primitive_part`."""
    if p.variables != q.variables:
        raise ValueError("variable mismatch")
    if p.is_zero():
        return q.primitive_part()
    if q.is_zero():
        return p.primitive_part()
    one = MultiPoly.const(1, p.variables)
    if p.is_constant() or q.is_constant():
        return one
    x = next(
        (v for v in p.variables if p.degree(v) > 0 or q.degree(v) > 0),
    )
    if p.degree(x) == 0:
        return poly_gcd(p, _content_in(q, x))
    if q.degree(x) == 0:
        return poly_gcd(_content_in(p, x), q)
    cp, cq = _content_in(p, x), _content_in(q, x)
    a, b = p.exact_div(cp), q.exact_div(cq)
    c = poly_gcd(cp, cq)
    if a.degree(x) < b.degree(x):
        a, b = b, a
    while True:
        r = _pseudo_remainder(a, b, x)
        if r.is_zero():
            g = b
            break
        if r.degree(x) == 0:
            g = one
            break
        a, b = b, r.exact_div(_content_in(r, x)).primitive_part()
    g = g.exact_div(_content_in(g, x)) if not g.is_constant() else g
    return (c * g).primitive_part()


def univariate_gcd(p: Sequence[Number], q: Sequence[Number]) -> list[Fraction]:
    """Monic gcd of low-to-high coefficient lists over Q (primitive remainder sequence)."""
    a, b = integer_coeffs(p), integer_coeffs(q)
    if not a or not b:
        g = a or b
        return [Fraction(x, g[-1]) for x in g] if g else []
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = integer_coeffs(_int_pseudo_rem(a, b))
        if not r:
            break
        a, b = b, r
    else:
        return [Fraction(1)]
    return [Fraction(x, b[-1]) for x in b]


def _int_pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while a and len(a) - 1 >= db:
        lead = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for i, c in enumerate(b):
            a[shift + i] -= lead * c
        _trim(a)
    return a


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        _trim(a)
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    while a and len(a) - 1 >= db:
        f = a[-1] / b[-1]
        shift = len(a) - 1 - db
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        _trim(a)
    return _trim(q), a


def integer_coeffs(coeffs: Sequence[Number]) -> list[int]:
    """Scale a rational coefficient list to coprime integers, positive leading coefficient."""
    c = _trim([as_rat(x) for x in coeffs])
    if not c:
        return []
    den = reduce(lcm, (x.denominator for x in c), 1)
    ints = [int(x * den) for x in c]
    g = vector_gcd(ints)
    sign = -1 if ints[-1] < 0 else 1
    return [sign * x // g for x in ints]


def squarefree_part(coeffs: Sequence[Number]) -> list[int]:
    c = integer_coeffs(coeffs)
    if len(c) <= 2:
        return c
    deriv = [i * x for i, x in enumerate(c)][1:]
    g = univariate_gcd(c, deriv)
    if len(g) <= 1:
        return c
    q, r = _poly_divmod([Fraction(x) for x in c], g)
    assert not r
    return integer_coeffs(q)


# ---------------------------------------------------------------------------
# rational functions in (a, b, c)

ABC = ("a", "b", "c")
LinearForm = tuple[int, int, int]


def normalize_linear_form(form: Sequence[Number]) -> tuple[LinearForm, Fraction]:
    """Split ``form = scale * L`` with L primitive integral and first nonzero entry positive."""
    p = primitive_rational(form)
    lead = next(x for x in p if x != 0)
    if lead < 0:
        p = tuple(-x for x in p)
    ref = next(i for i, x in enumerate(p) if x != 0)
    return p, as_rat(form[ref]) / p[ref]


class RationalFunction3:
    """Canonical exact rational function num/den in the variables ``(a, b, c)``.

    Canonical form: gcd(num, den) = 1, ``den`` has coprime integer
    coefficients and a positive graded-lex leading coefficient; any rational
    constant lives in ``num``.  When the denominator is known to be a product
    of linear forms the factorisation is kept in ``den_factors``.
    """

    __slots__ = ("num", "den", "den_factors")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, den_factors=None, _reduced: bool = False):
        if den is None:
            den = MultiPoly.const(1, num.variables)
        if num.variables != ABC or den.variables != ABC:
            num, den = num.embed(ABC), den.embed(ABC)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den, den_factors = num, MultiPoly.const(1, ABC), ()
        elif not _reduced:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
                den_factors = None
        if not num.is_zero():
            p = den.primitive_part()
            factor = as_rat(p.leading()[1]) / as_rat(den.leading()[1])
            num, den = num * factor, p
        self.num = num
        self.den = den
        self.den_factors: tuple[tuple[LinearForm, int], ...] | None = den_factors

    # -- construction from sums of reciprocal products of linear forms ----------
    @classmethod
    def from_linear_terms(cls, terms: Iterable[tuple[MultiPoly | Number, Sequence[Sequence[Number]]]]) -> RationalFunction3:
        """Sum of ``numerator / prod(linear forms)`` terms, reduced exactly.

        Reduction only needs trial division by the (irreducible) linear
        factors of the common denominator, which keeps this path fast.
        """
        prepared = []
        lcm_mult: dict[LinearForm, int] = {}
        for numerator, forms in terms:
            if not isinstance(numerator, MultiPoly):
                numerator = MultiPoly.const(numerator, ABC)
            elif numerator.variables != ABC:
                numerator = numerator.embed(ABC)
            scale = Fraction(1)
            mult: dict[LinearForm, int] = {}
            for f in forms:
                lf, s = normalize_linear_form(f)
                scale /= s
                mult[lf] = mult.get(lf, 0) + 1
            for lf, m in mult.items():
                lcm_mult[lf] = max(lcm_mult.get(lf, 0), m)
            prepared.append((numerator * scale, mult))
        cache: dict[LinearForm, MultiPoly] = {lf: MultiPoly.linear(lf, ABC) for lf in lcm_mult}
        total = MultiPoly(ABC)
        for numerator, mult in prepared:
            term = numerator
            for lf, m in lcm_mult.items():
                k = m - mult.get(lf, 0)
                if k:
                    term = term * cache[lf] ** k
            total = total + term
        return cls._from_factored(total, lcm_mult, cache)

    @classmethod
    def from_factored(cls, num: MultiPoly | Number, forms: Sequence[Sequence[Number]]) -> RationalFunction3:
        """``num / prod(forms)`` with cancellation of common linear factors."""
        return cls.from_linear_terms([(num, forms)])

    @classmethod
    def _from_factored(cls, num: MultiPoly, mult: dict[LinearForm, int], cache: dict[LinearForm, MultiPoly]) -> RationalFunction3:
        mult = dict(mult)
        if num.is_zero():
            return cls(num, _reduced=True)
        for lf in sorted(mult):
            while mult[lf]:
                try:
                    num = num.exact_div(cache[lf])
                except ValueError:
                    break
                mult[lf] -= 1
        den = MultiPoly.const(1, ABC)
        for lf in sorted(mult):
            if mult[lf]:
                den = den * cache[lf] ** mult[lf]
        factors = tuple((lf, m) for lf, m in sorted(mult.items()) if m)
        return cls(num, den, den_factors=factors, _reduced=True)

    @classmethod
    def constant(cls, value: Number) -> RationalFunction3:
        return cls(MultiPoly.const(value, ABC), _reduced=True)

    # -- arithmetic ---------------------------------------------------------------
    def _lift(self, other) -> RationalFunction3:
        if isinstance(other, RationalFunction3):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction3(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction3.constant(other)
        return NotImplemented

    def _factor_list(self) -> list[LinearForm] | None:
        if self.den_factors is None:
            return None
        out: list[LinearForm] = []
        for lf, m in self.den_factors:
            out.extend([lf] * m)
        return out

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        fa, fb = self._factor_list(), other._factor_list()
        if fa is not None and fb is not None:
            return RationalFunction3.from_linear_terms([(self.num, fa), (other.num, fb)])
        g = poly_gcd(self.den, other.den)
        da, db = self.den.exact_div(g), other.den.exact_div(g)
        return RationalFunction3(self.num * db + other.num * da, self.den * db)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction3:
        return RationalFunction3(-self.num, self.den, den_factors=self.den_factors, _reduced=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        fa, fb = self._factor_list(), other._factor_list()
        if fa is not None and fb is not None and other.num.is_constant():
            return RationalFunction3.from_linear_terms([(self.num * other.num, fa + fb)])
        return RationalFunction3(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction3(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- calculus and evaluation -----------------------------------------------------
    def diff(self, name: str) -> RationalFunction3:
        n, d = self.num, self.den
        return RationalFunction3(n.diff(name) * d - n * d.diff(name), d * d)

    def evaluate(self, a, b, c):
        point = {"a": a, "b": b, "c": c}
        return self.num.evaluate(point) / self.den.evaluate(point)

    def exact_value(self, a: Number, b: Number, c: Number) -> Fraction:
        return as_rat(self.num.evaluate({"a": as_rat(a), "b": as_rat(b), "c": as_rat(c)})) / as_rat(
            self.den.evaluate({"a": as_rat(a), "b": as_rat(b), "c": as_rat(c)})
        )

    def slice_c(self, value: Number) -> tuple[MultiPoly, MultiPoly]:
        """Numerator and denominator at fixed ``c``, as polynomials in ``(a, b)``."""
        return (
            self.num.subs({"c": value}).drop(["c"]),
            self.den.subs({"c": value}).drop(["c"]),
        )

    def is_homogeneous_of_degree(self, k: int) -> bool:
        degs_n = {sum(e) for e, _ in self.num.items()}
        degs_d = {sum(e) for e, _ in self.den.items()}
        if self.num.is_zero():
            return True
        return len(degs_n) == 1 and len(degs_d) == 1 and degs_n.pop() - degs_d.pop() == k

    # -- printing --------------------------------------------------------------------
    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def factored_str(self) -> str:
        """Numerator over the product of its linear denominator factors, when known."""
        if self.den_factors is None:
            return str(self)
        parts = []
        for lf, m in self.den_factors:
            text = f"({MultiPoly.linear(lf, ABC)})"
            parts.append(text if m == 1 else f"{text}^{m}")
        den = "*".join(parts) if parts else "1"
        return f"({self.num}) / ({den})"

    def __repr__(self) -> str:
        return f"RationalFunction3({str(self)!r})"


# ---------------------------------------------------------------------------
# resultants


def _sylvester(p_coeffs: list, q_coeffs: list, zero) -> list[list]:
    """Sylvester matrix from high-to-low coefficient lists."""
    m, n = len(p_coeffs) - 1, len(q_coeffs) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(p_coeffs) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(q_coeffs) + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, eliminate: str) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``eliminate``.

    The result lives in the same variable tuple (the eliminated variable no
    longer occurs).  With at most one remaining variable the determinant is
    computed by exact evaluation at integer points and interpolation.
    """
    if p.variables != q.variables:
        raise ValueError("variable mismatch")
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    m, n = p.degree(eliminate), q.degree(eliminate)
    if m == 0 and n == 0:
        raise ValueError(f"variable {eliminate!r} occurs in neither polynomial")
    pc, qc = p.coeffs_in(eliminate), q.coeffs_in(eliminate)
    zero = MultiPoly(p.variables)
    p_list = [pc.get(k, zero) for k in range(m, -1, -1)]
    q_list = [qc.get(k, zero) for k in range(n, -1, -1)]
    others = sorted(set(v for c in p_list + q_list for v in c.support_variables()), key=p.variables.index)
    if len(others) == 0:
        mat = _sylvester([c.constant_value() for c in p_list], [c.constant_value() for c in q_list], 0)
        return MultiPoly.const(bareiss_det(mat) if mat else 1, p.variables)
    if len(others) == 1:
        y = others[0]
        bound = min(
            m * q.degree(y) + n * p.degree(y),
            p.degree() * q.degree(),
        )
        xs = list(range(bound + 1))
        values = []
        for x0 in xs:
            pv = [as_rat(c.subs({y: x0}).constant_value()) for c in p_list]
            qv = [as_rat(c.subs({y: x0}).constant_value()) for c in q_list]
            values.append(as_rat(bareiss_det(_sylvester(pv, qv, 0))))
        coeffs = newton_interpolate(xs, values)
        i = p.index(y)
        return MultiPoly(p.variables, {tuple(k if j == i else 0 for j in range(len(p.variables))): c for k, c in enumerate(coeffs)})
    mat = _sylvester(p_list, q_list, zero)
    det = bareiss_det(mat)
    return det if isinstance(det, MultiPoly) else MultiPoly.const(det, p.variables)


def newton_interpolate(xs: Sequence[Number], ys: Sequence[Number]) -> list[Fraction]:
    """Coefficients (low to high) of the interpolating polynomial."""
    n = len(xs)
    coef = [as_rat(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # out = out * (x - xs[k]) + coef[k]
        nxt = [Fraction(0)] * n
        for i, c in enumerate(out):
            if c:
                if i + 1 < n:
                    nxt[i + 1] += c
                nxt[i] -= c * xs[k]
        nxt[0] += coef[k]
        out = nxt
    return _trim(out) or [Fraction(0)]


# ---------------------------------------------------------------------------
# real roots


def _as_int_coeffs(p: MultiPoly | Sequence[Number]) -> list[int]:
    coeffs = p.univariate_coeffs() if isinstance(p, MultiPoly) else list(p)
    out = integer_coeffs(coeffs)
    if not out:
        raise ValueError("zero polynomial")
    return out


def sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, using integer Horner."""
    # v^n p(u/v) = sum c_i u^i v^(n-i), computed by Horner in u with v-scaling
    u, v = x.numerator, x.denominator
    total = 0
    vpow = 1
    for c in reversed(coeffs):
        total = total * u + c * vpow
        vpow *= v
    return (total > 0) - (total < 0)


def _taylor_shift_one(c: list[int]) -> list[int]:
    c = list(c)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _descartes_bound(coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Sign variations bounding the number of roots in the open interval (lo, hi)."""
    n = len(coeffs) - 1
    den = lcm(lo.denominator, hi.denominator)
    l = lo.numerator * (den // lo.denominator)
    w = hi.numerator * (den // hi.denominator) - l
    # den^n * p(lo + (hi - lo) y) by Horner over the integers
    q = [coeffs[n]]
    dpow = 1
    for i in range(n - 1, -1, -1):
        dpow *= den
        nxt = [0] * (len(q) + 1)
        for k, c in enumerate(q):
            nxt[k] += c * l
            nxt[k + 1] += c * w
        nxt[0] += coeffs[i] * dpow
        q = nxt
    # (1+x)^n q(1/(1+x)): reverse then shift by one
    r = _taylor_shift_one(q[::-1])
    signs = [c > 0 for c in r if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _refine(coeffs: list[int], lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sign_at(coeffs, mid)
        if sm == 0:
            return mid, mid
        sl, sh = sign_at(coeffs, lo), sign_at(coeffs, hi)
        if sl * sh < 0:
            if sm == sl:
                lo = mid
            else:
                hi = mid
        elif _descartes_bound(coeffs, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def isolate_real_roots(
    p: MultiPoly | Sequence[Number],
    lo: Number,
    hi: Number,
    width: Fraction = Fraction(1, 2**40),
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals, each holding exactly one real root of ``p`` in (lo, hi).

    Intervals are open ``(l, h)`` unless ``l == h``, in which case the root is
    exactly ``l``.  Every interval is refined to width at most ``width``.
    """
    coeffs = squarefree_part(_as_int_coeffs(p))
    lo, hi = as_rat(lo), as_rat(hi)
    if len(coeffs) <= 1:
        return []
    found: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes_bound(coeffs, a, b)
        if v == 0:
            continue
        if v == 1:
            found.append((a, b))
            continue
        mid = (a + b) / 2
        if sign_at(coeffs, mid) == 0:
            found.append((mid, mid))
        stack.append((a, mid))
        stack.append((mid, b))
    out = []
    for a, b in found:
        out.append((a, b) if a == b else _refine(coeffs, a, b, width))
    return sorted(out)


def root_bound(coeffs: Sequence[int]) -> Fraction:
    """Power of two strictly above the Cauchy bound on |roots|."""
    lead = abs(coeffs[-1])
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else 0
    bound = 1 + Fraction(m, lead)
    k = 1
    while k <= bound:
        k *= 2
    return Fraction(k)


def rational_roots(p: MultiPoly | Sequence[Number], within: tuple[Number, Number] | None = None) -> list[Fraction]:
    """All rational roots of ``p`` (optionally only those in a closed interval).

    A rational root u/v in lowest terms has v dividing the leading
    coefficient.  Each real root is isolated to width below 1/(2 lc^2), where
    at most one such fraction fits; the candidate is then checked exactly.
    """
    coeffs = _as_int_coeffs(p)
    roots: list[Fraction] = []
    if coeffs[0] == 0:
        roots.append(Fraction(0))
        while coeffs[0] == 0:
            coeffs = coeffs[1:]
    coeffs = squarefree_part(coeffs)
    if len(coeffs) > 1:
        lead = abs(coeffs[-1])
        bound = root_bound(coeffs)
        lo, hi = (-bound, bound) if within is None else (as_rat(within[0]) - 1, as_rat(within[1]) + 1)
        target = Fraction(1, 4 * lead * lead)
        for a, b in isolate_real_roots(coeffs, lo, hi, width=target):
            if a == b:
                cand = a
            else:
                cand = ((a + b) / 2).limit_denominator(lead)
                if not a <= cand <= b:
                    continue
            if lead % cand.denominator == 0 and sign_at(coeffs, cand) == 0:
                roots.append(cand)
    if within is not None:
        lo_w, hi_w = as_rat(within[0]), as_rat(within[1])
        roots = [r for r in roots if lo_w <= r <= hi_w]
    return sorted(set(roots))


def evaluate_univariate(coeffs: Sequence[Number], x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def count_sign_changes(values: Iterable[Number]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)



