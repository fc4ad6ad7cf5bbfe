"""Finite fields GF(p^n) in a fixed polynomial basis.

Elements are dense coefficient tuples ``(c_0, ..., c_{n-1})`` meaning
``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` reduced modulo a monic irreducible
polynomial.  The modulus is chosen deterministically (the lexicographically
least monic irreducible polynomial), so every field built here is the same
field, element for element, on every run.

For the bulk work done by the curve code there is also :func:`field_tables`,
which maps elements to integer indices (their position in
:func:`enumerate_elements`) and precomputes addition, multiplication,
inversion and square-root tables over those indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .arith import is_prime

#: Largest field order accepted by :func:`make_field`.
MAX_FIELD_ORDER = 2**20
#: Largest field order for which integer lookup tables are built.
TABLE_CAP = 1024


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


def _poly_rem(f: list[int], g: Sequence[int], p: int) -> list[int]:
    """Remainder of f by monic g; both low-order first, g[-1] == 1."""
    r = list(f)
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] % p
        if c:
            for i in range(dg + 1):
                r[k - dg + i] = (r[k - dg + i] - c * g[i]) % p
    return [c % p for c in r[:dg]]


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division of ``x^n + c_{n-1}x^{n-1} + ... + c_0`` by every monic
    polynomial of degree at most n/2."""
    n = len(modulus)
    if n <= 1:
        return True
    f = list(modulus) + [1]
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(p, d):
            if not any(_poly_rem(f, g, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^n) with monic modulus ``x^n + modulus[n-1] x^(n-1) + ... + modulus[0]``."""

    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.n < 1 or len(self.modulus) != self.n:
            raise FieldError("modulus length must equal the degree n >= 1")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.n

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        """Build an element from an integer (taken mod p, as a constant) or a
        coefficient sequence of length at most n."""
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.n - 1)
        else:
            value = tuple(int(c) for c in value)
            if len(value) > self.n:
                raise FieldError(f"too many coefficients for degree {self.n}")
            coeffs = tuple(c % self.p for c in value) + (0,) * (self.n - len(value))
        return FieldElement(self, coeffs)

    @cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @cached_property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """The class of x (equal to -c_0 when n = 1)."""
        if self.n == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def elements(self) -> list["FieldElement"]:
        return enumerate_elements(self)

    def __repr__(self):
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={_poly_str(self.modulus)})"


def _poly_str(modulus: Sequence[int]) -> str:
    n = len(modulus)
    terms = [f"x^{n}"]
    for k in range(n - 1, -1, -1):
        c = modulus[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if k == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms)


class FieldElement:
    """An immutable element of a :class:`FieldSpec`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("operands belong to different fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __lt__(self, other: "FieldElement"):
        return self.coeffs < other.coeffs

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.coeffs[0]}"
        return f"{self.coeffs}"

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        p, n = f.p, f.n
        if n == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % p,))
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        # x^n == -(c_{n-1} x^{n-1} + ... + c_0)
        mod = f.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(n):
                    prod[k - n + i] -= c * mod[i]
        return FieldElement(f, tuple(c % p for c in prod[:n]))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in a finite field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()


@lru_cache(maxsize=None)
def make_field(p: int, n: int = 1) -> FieldSpec:
    """Return GF(p^n) built on the lexicographically least monic irreducible
    modulus, scanning ``(c_{n-1}, ..., c_0)`` in ascending order."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("degree must be at least 1")
    if p**n > MAX_FIELD_ORDER:
        raise FieldError(f"field order {p}^{n} exceeds cap {MAX_FIELD_ORDER}")
    for high_first in itertools.product(range(p), repeat=n):
        modulus = tuple(reversed(high_first))
        if is_irreducible(modulus, p):
            return FieldSpec(p, n, modulus)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def enumerate_elements(field: FieldSpec) -> list[FieldElement]:
    """All q elements, lexicographic by coefficient tuple, zero first."""
    return [FieldElement(field, c) for c in itertools.product(range(field.p), repeat=field.n)]


# Plain-function forms of the field operations.

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, exponent: int) -> FieldElement:
    return a**exponent


def is_square(e: FieldElement) -> bool:
    f = e.field
    if f.p == 2 or e.is_zero():
        return True
    return e ** ((f.q - 1) // 2) == f.one


def sqrt(e: FieldElement) -> FieldElement | None:
    """Smallest (by coefficient tuple) y with y*y == e, or None."""
    for y in enumerate_elements(e.field):
        if y * y == e:
            return y
    return None


class FieldTables:
    """Integer-index lookup tables for one field.

    Index ``i`` is the position of an element in :func:`enumerate_elements`.
    ``add`` and ``mul`` are flat lists indexed by ``i * q + j``.
    """

    def __init__(self, field: FieldSpec):
        if field.q > TABLE_CAP:
            raise FieldError(f"lookup tables are limited to q <= {TABLE_CAP}")
        p, n, q = field.p, field.n, field.q
        self.field = field
        self.q = q
        self.elements = enumerate_elements(field)
        self.index = {e.coeffs: i for i, e in enumerate(self.elements)}
        digits = [e.coeffs for e in self.elements]
        weights = [p ** (n - 1 - k) for k in range(n)]

        def from_digits(ds):
            return sum(d * w for d, w in zip(ds, weights))

        self.neg = [from_digits((-d) % p for d in ds) for ds in digits]
        add = [0] * (q * q)
        for i, di in enumerate(digits):
            row = i * q
            for j in range(i, q):
                s = from_digits((a + b) % p for a, b in zip(di, digits[j]))
                add[row + j] = s
                add[j * q + i] = s
        self.add = add

        g = self._primitive_element()
        exp = [0] * (q - 1)
        log = [0] * q
        acc = field.one
        for k in range(q - 1):
            idx = self.index[acc.coeffs]
            exp[k] = idx
            log[idx] = k
            acc = acc * g
        mul = [0] * (q * q)
        for i in range(1, q):
            li = log[i]
            row = i * q
            for j in range(1, q):
                mul[row + j] = exp[(li + log[j]) % (q - 1)]
        self.mul = mul
        self.inv = [0] + [exp[(-log[i]) % (q - 1)] for i in range(1, q)]

        sqrt_table: list[int | None] = [None] * q
        for y in range(q):
            s = mul[y * q + y]
            if sqrt_table[s] is None:
                sqrt_table[s] = y
        self.sqrt = sqrt_table
        self.ints = [from_digits((k,) + (0,) * (n - 1)) for k in range(p)]

    def _primitive_element(self) -> FieldElement:
        q = self.q
        one = self.field.one
        for g in self.elements[1:]:
            acc, k = g, 1
            while acc != one:
                acc = acc * g
                k += 1
            if k == q - 1:
                return g
        raise AssertionError("multiplicative group is not cyclic")  # unreachable

    def const(self, k: int) -> int:
        """Index of the integer constant k (mod p)."""
        return self.ints[k % self.field.p]

    def to_index(self, e: FieldElement) -> int:
        return self.index[e.coeffs]

    def to_element(self, i: int) -> FieldElement:
        return self.elements[i]


@lru_cache(maxsize=64)
def field_tables(field: FieldSpec) -> FieldTables:
    return FieldTables(field)
