"""Elliptic curves in long Weierstrass form over GF(q).

    y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6

The public group law (:func:`add_points`, :func:`negate`, :func:`scalar_mul`)
works on :class:`~torsioncert.gf.FieldElement` coordinates and is valid in
every characteristic.  Point counting, group structure and curve enumeration
run on integer field indices (see :func:`torsioncert.gf.field_tables`), and
bulk enumeration is vectorised with numpy over whole blocks of coefficient
tuples.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Iterator, Optional

import numpy as np

from .arith import factorize, prime_factors
from .gf import FieldElement, FieldSpec, FieldTables, field_tables

#: Largest field order accepted by curve enumeration.
ENUMERATION_CAP = 32


class SingularCurveError(ValueError):
    """A group-law or counting operation was given a singular cubic."""


class PointNotOnCurveError(ValueError):
    pass


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassCurve:
    field: FieldSpec
    a1: FieldElement
    a2: FieldElement
    a3: FieldElement
    a4: FieldElement
    a6: FieldElement

    def __post_init__(self):
        for a in self.coefficients:
            if a.field != self.field:
                raise ValueError("coefficients must lie in the curve's field")

    @classmethod
    def from_coeffs(cls, field: FieldSpec, a1=0, a2=0, a3=0, a4=0, a6=0) -> "WeierstrassCurve":
        """Coefficients may be ints (constants mod p), coefficient tuples or elements."""
        conv = [a if isinstance(a, FieldElement) else field(a) for a in (a1, a2, a3, a4, a6)]
        return cls(field, *conv)

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> FieldElement:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def is_elliptic(self) -> bool:
        return not self.discriminant().is_zero()

    def contains(self, P: "CurvePoint") -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        if x.field != self.field or y.field != self.field:
            return False
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def __repr__(self):
        return f"WeierstrassCurve({self.field!r}, {list(self.coefficients)})"


def discriminant(curve: WeierstrassCurve) -> FieldElement:
    return curve.discriminant()


@dataclass(frozen=True)
class CurvePoint:
    x: Optional[FieldElement] = None
    y: Optional[FieldElement] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x!r}, {self.y!r})"


INFINITY = CurvePoint()


@dataclass(frozen=True)
class GroupShape:
    """E(F_q) isomorphic to Z/d1 x Z/d2 with d1 | d2."""

    d1: int
    d2: int
    q: int

    @property
    def order(self) -> int:
        return self.d1 * self.d2

    @property
    def trace(self) -> int:
        return self.q + 1 - self.order

    @property
    def exponent(self) -> int:
        return self.d2

    @property
    def is_cyclic(self) -> bool:
        return self.d1 == 1


def _require_elliptic(curve: WeierstrassCurve) -> None:
    if not curve.is_elliptic:
        raise SingularCurveError(f"{curve!r} is singular")


def _require_on_curve(curve: WeierstrassCurve, *points: CurvePoint) -> None:
    for P in points:
        if not curve.contains(P):
            raise PointNotOnCurveError(f"{P!r} is not on {curve!r}")


def negate(curve: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    _require_on_curve(curve, P)
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y - curve.a1 * P.x - curve.a3)


def _add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = curve.coefficients
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if (y1 + y2 + a1 * x2 + a3).is_zero():
            return INFINITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(x3, y3)


def add_points(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    _require_elliptic(curve)
    _require_on_curve(curve, P, Q)
    return _add(curve, P, Q)


def scalar_mul(curve: WeierstrassCurve, k: int, P: CurvePoint) -> CurvePoint:
    """k*P by double-and-add; k may be zero or negative."""
    _require_elliptic(curve)
    _require_on_curve(curve, P)
    if k < 0:
        k, P = -k, negate(curve, P)
    result, base = INFINITY, P
    while k:
        if k & 1:
            result = _add(curve, result, base)
        base = _add(curve, base, base)
        k >>= 1
    return result


@lru_cache(maxsize=16)
def _char2_roots(field: FieldSpec) -> list[tuple[int, ...]]:
    """roots[b*q + c] = all y with y^2 + b*y = c, found by scanning every (b, y)."""
    t = field_tables(field)
    q, A, M = t.q, t.add, t.mul
    roots: list[list[int]] = [[] for _ in range(q * q)]
    for b in range(q):
        for y in range(q):
            c = A[M[y * q + y] * q + M[b * q + y]]
            roots[b * q + c].append(y)
    return [tuple(r) for r in roots]


def _index_discriminant(t: FieldTables, a1: int, a2: int, a3: int, a4: int, a6: int) -> int:
    """Same formula as WeierstrassCurve.discriminant, on table indices."""
    q, A, M, N, c = t.q, t.add, t.mul, t.neg, t.const

    def m(*xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = M[acc * q + x]
        return acc

    def s(*xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = A[acc * q + x]
        return acc

    b2 = s(m(a1, a1), m(c(4), a2))
    b4 = s(m(c(2), a4), m(a1, a3))
    b6 = s(m(a3, a3), m(c(4), a6))
    b8 = s(m(a1, a1, a6), m(c(4), a2, a6), N[m(a1, a3, a4)], m(a2, a3, a3), N[m(a4, a4)])
    return s(N[m(b2, b2, b8)], N[m(c(8), b4, b4, b4)], N[m(c(27), b6, b6)], m(c(9), b2, b4, b6))


class _FastCurve:
    """Group law and point enumeration on integer field indices.

    Assumes the coefficients define a nonsingular curve; callers check.
    """

    def __init__(self, t: FieldTables, a1: int, a2: int, a3: int, a4: int, a6: int):
        self.t = t
        self.q = t.q
        self.odd = t.field.p != 2
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.two = t.const(2)
        self._points: list[tuple[int, int]] = []
        self._point_iter: Optional[Iterator[tuple[int, int]]] = None

    @classmethod
    def from_curve(cls, curve: WeierstrassCurve) -> "_FastCurve":
        t = field_tables(curve.field)
        idx = [t.to_index(a) for a in curve.coefficients]
        if _index_discriminant(t, *idx) == 0:
            raise SingularCurveError(f"{curve!r} is singular")
        return cls(t, *idx)

    def _bf(self, x: int) -> tuple[int, int]:
        """b(x) = a1 x + a3 and f(x) = x^3 + a2 x^2 + a4 x + a6."""
        q, A, M = self.q, self.t.add, self.t.mul
        x2 = M[x * q + x]
        b = A[M[self.a1 * q + x] * q + self.a3]
        f = A[A[A[M[x2 * q + x] * q + M[self.a2 * q + x2]] * q + M[self.a4 * q + x]] * q + self.a6]
        return b, f

    def _ys(self, x: int) -> tuple[int, ...]:
        q, t = self.q, self.t
        b, f = self._bf(x)
        if not self.odd:
            return _char2_roots(t.field)[b * q + f]
        A, M, N = t.add, t.mul, t.neg
        # (2y + b)^2 = 4 f + b^2
        d = A[M[t.const(4) * q + f] * q + M[b * q + b]]
        s = t.sqrt[d]
        if s is None:
            return ()
        inv2, nb = t.inv[self.two], N[b]
        return tuple(sorted({M[A[s * q + nb] * q + inv2], M[A[N[s] * q + nb] * q + inv2]}))

    def count(self) -> int:
        return 1 + sum(len(self._ys(x)) for x in range(self.q))

    def _generate(self) -> Iterator[tuple[int, int]]:
        for x in range(self.q):
            for y in self._ys(x):
                yield (x, y)

    def points(self) -> Iterator[tuple[int, int]]:
        """Affine points in (x, y) index order, memoised so repeated scans are cheap."""
        yield from self._points
        if self._point_iter is None:
            self._point_iter = self._generate()
        for P in self._point_iter:
            self._points.append(P)
            yield P

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        q, A, M, N, I = self.q, self.t.add, self.t.mul, self.t.neg, self.t.inv
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            b = A[M[self.a1 * q + x1] * q + self.a3]
            if A[A[y1 * q + y2] * q + b] == 0:
                return None
            # (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
            x1s = M[x1 * q + x1]
            h = A[A[M[self.t.const(3) * q + x1s] * q + M[M[self.two * q + self.a2] * q + x1]] * q + self.a4]
            num = A[h * q + N[M[self.a1 * q + y1]]]
            den = A[M[self.two * q + y1] * q + b]
        else:
            num = A[y2 * q + N[y1]]
            den = A[x2 * q + N[x1]]
        lam = M[num * q + I[den]]
        nu = A[y1 * q + N[M[lam * q + x1]]]
        x3 = A[A[M[lam * q + lam] * q + M[self.a1 * q + lam]] * q + N[A[A[self.a2 * q + x1] * q + x2]]]
        y3 = N[A[A[M[A[lam * q + self.a1] * q + x3] * q + nu] * q + self.a3]]
        return (x3, y3)

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        q, A, M = self.q, self.t.add, self.t.mul
        return (x, self.t.neg[A[A[y * q + M[self.a1 * q + x]] * q + self.a3]])

    def mul(self, k: int, P):
        if k < 0:
            k, P = -k, self.neg(P)
        result, base = None, P
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def order_of(self, P, group_order: int) -> int:
        o = group_order
        for ell in prime_factors(group_order):
            while o % ell == 0 and self.mul(o // ell, P) is None:
                o //= ell
        return o

    def exponent(self, n: int) -> int:
        """lcm of all point orders, assembled one prime at a time.

        For each prime ell with ell^a || n, the ell-part of the exponent is the
        largest ell-power order among the points' ell-primary components m*P
        (m = n / ell^a); the scan stops once that reaches ell^a.
        """
        exponent = 1
        for ell, a in factorize(n):
            m = n // ell**a
            best = 0
            for P in self.points():
                R = self.mul(m, P)
                k = 0
                while R is not None:
                    R = self.mul(ell, R)
                    k += 1
                if k > best:
                    best = k
                    if best == a:
                        break
            exponent *= ell**best
        return exponent

    def shape(self, n: Optional[int] = None) -> GroupShape:
        if n is None:
            n = self.count()
        d2 = self.exponent(n)
        return GroupShape(n // d2, d2, self.q)


def count_points(curve: WeierstrassCurve) -> int:
    """|E(F_q)| including the point at infinity.

    Odd characteristic completes the square, (2y + a1 x + a3)^2 = 4 f(x) + (a1 x + a3)^2,
    and counts square roots; characteristic 2 looks up the roots of y^2 + b y = c
    in a table built by scanning every (b, y) pair.
    """
    return _FastCurve.from_curve(curve).count()


def count_points_naive(curve: WeierstrassCurve) -> int:
    """|E(F_q)| by testing the curve equation at every (x, y); slow, for cross-checks."""
    _require_elliptic(curve)
    elems = curve.field.elements()
    return 1 + sum(1 for x in elems for y in elems if curve.contains(CurvePoint(x, y)))


def points(curve: WeierstrassCurve) -> list[CurvePoint]:
    """All rational points, infinity first, affine points sorted by (x, y) index."""
    fc = _FastCurve.from_curve(curve)
    el = fc.t.elements
    return [INFINITY] + [CurvePoint(el[x], el[y]) for x, y in fc.points()]


def point_order(curve: WeierstrassCurve, P: CurvePoint) -> int:
    _require_on_curve(curve, P)
    fc = _FastCurve.from_curve(curve)
    if P.is_infinity:
        return 1
    return fc.order_of((fc.t.to_index(P.x), fc.t.to_index(P.y)), fc.count())


def group_shape(curve: WeierstrassCurve) -> GroupShape:
    """(d1, d2) with d2 the group exponent (lcm of all point orders) and d1 = |E| / d2."""
    return _FastCurve.from_curve(curve).shape()


def exists_point_of_order(curve: WeierstrassCurve, N: int) -> bool:
    """True iff N divides the group exponent."""
    if N < 1:
        raise ValueError("N must be positive")
    return group_shape(curve).d2 % N == 0


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


class _NpTables:
    def __init__(self, field: FieldSpec):
        t = field_tables(field)
        q = self.q = t.q
        self.tables = t
        self.add = np.asarray(t.add, dtype=np.intp).reshape(q, q)
        self.mul = np.asarray(t.mul, dtype=np.intp).reshape(q, q)
        self.neg = np.asarray(t.neg, dtype=np.intp)
        self.is_square = np.array([s is not None for s in t.sqrt])
        if field.p == 2:
            self.nroots = np.array([len(r) for r in _char2_roots(field)], dtype=np.intp).reshape(q, q)

    def const(self, k: int) -> int:
        return self.tables.const(k)

    def scale(self, k: int, v):
        return self.mul[self.const(k), v]

    def sum(self, *vs):
        acc = vs[0]
        for v in vs[1:]:
            acc = self.add[acc, v]
        return acc


@lru_cache(maxsize=16)
def _np_tables(field: FieldSpec) -> _NpTables:
    return _NpTables(field)


def _batch_discriminant(T: _NpTables, a1, a2, a3, a4, a6):
    M, N = T.mul, T.neg
    b2 = T.sum(M[a1, a1], T.scale(4, a2))
    b4 = T.sum(T.scale(2, a4), M[a1, a3])
    b6 = T.sum(M[a3, a3], T.scale(4, a6))
    b8 = T.sum(M[M[a1, a1], a6], T.scale(4, M[a2, a6]), N[M[M[a1, a3], a4]],
               M[a2, M[a3, a3]], N[M[a4, a4]])
    return T.sum(
        N[M[M[b2, b2], b8]],
        N[T.scale(8, M[M[b4, b4], b4])],
        N[T.scale(27, M[b6, b6])],
        T.scale(9, M[M[b2, b4], b6]),
    )


def _batch_counts(T: _NpTables, a1, a2, a3, a4, a6):
    q, A, M = T.q, T.add, T.mul
    counts = np.ones(np.shape(a1), dtype=np.int64)
    odd = T.tables.field.p != 2
    four = T.const(4)
    for x in range(q):
        x2 = M[x, x]
        f = T.sum(M[x2, x], M[a2, x2], M[a4, x], a6)
        b = A[M[a1, x], a3]
        if odd:
            d = A[M[four, f], M[b, b]]
            counts += np.where(d == 0, 1, np.where(T.is_square[d], 2, 0))
        else:
            counts += T.nroots[b, f]
    return counts


def _check_cap(field: FieldSpec) -> None:
    if field.q > ENUMERATION_CAP:
        raise EnumerationCapError(f"curve enumeration is limited to q <= {ENUMERATION_CAP}")


def _coefficient_blocks(field: FieldSpec) -> Iterator[tuple[np.ndarray, ...]]:
    """Blocks of reduced-form coefficient index tuples (a1, a2, a3, a4, a6), in
    lexicographic order.  Characteristic >= 5 uses (0,0,0,a4,a6), characteristic 3
    uses (0,a2,0,a4,a6), characteristic 2 uses every tuple."""
    q, p = field.q, field.p
    r = np.arange(q, dtype=np.intp)
    if p == 2:
        g3, g4, g6 = (g.ravel() for g in np.meshgrid(r, r, r, indexing="ij"))
        for a1, a2 in itertools.product(range(q), repeat=2):
            yield (np.full_like(g3, a1), np.full_like(g3, a2), g3, g4, g6)
        return
    g4, g6 = (g.ravel() for g in np.meshgrid(r, r, indexing="ij"))
    zero = np.zeros_like(g4)
    if p == 3:
        for a2 in range(q):
            yield (zero, np.full_like(g4, a2), zero, g4, g6)
    else:
        yield (zero, zero, zero, g4, g6)


def enumerate_curve_blocks(field: FieldSpec) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (coeffs, counts): nonsingular reduced-form coefficient index tuples as
    a (k, 5) array, and |E(F_q)| for each row."""
    _check_cap(field)
    T = _np_tables(field)
    for block in _coefficient_blocks(field):
        keep = _batch_discriminant(T, *block) != 0
        rows = tuple(a[keep] for a in block)
        yield np.stack(rows, axis=1), _batch_counts(T, *rows)


def enumerate_curves(field: FieldSpec) -> Iterator[WeierstrassCurve]:
    """Every nonsingular curve in reduced form over the field.

    The reduced forms cover every isomorphism class over F_q, so the set of
    point counts seen here is complete.  Singular tuples are skipped.
    """
    _check_cap(field)
    el = field_tables(field).elements
    for coeffs, _ in enumerate_curve_blocks(field):
        for row in coeffs.tolist():
            yield WeierstrassCurve(field, *(el[i] for i in row))


def realized_orders(field: FieldSpec) -> Counter:
    """Multiset of |E(F_q)| over all enumerated curves."""
    out: Counter = Counter()
    for _, counts in enumerate_curve_blocks(field):
        vals, freq = np.unique(counts, return_counts=True)
        out.update(dict(zip(vals.tolist(), freq.tolist())))
    return out


def realized_traces(field: FieldSpec) -> set[int]:
    return {field.q + 1 - m for m in realized_orders(field)}


def group_shapes(field: FieldSpec) -> Iterator[tuple[tuple[int, ...], GroupShape]]:
    """(coefficient indices, GroupShape) for every enumerated curve.

    Bulk form of :func:`group_shape`: reuses the vectorised point counts and
    skips building element objects.
    """
    t = field_tables(field)
    for coeffs, counts in enumerate_curve_blocks(field):
        for row, n in zip(coeffs.tolist(), counts.tolist()):
            yield tuple(row), _FastCurve(t, *row).shape(n)


def curves_with_point_of_order(field: FieldSpec, N: int) -> list[WeierstrassCurve]:
    """Enumerated curves whose group exponent is divisible by N."""
    if N < 1:
        raise ValueError("N must be positive")
    el = field_tables(field).elements
    return [
        WeierstrassCurve(field, *(el[i] for i in row))
        for row, shape in group_shapes(field)
        if shape.d2 % N == 0
    ]

