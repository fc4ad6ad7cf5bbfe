"""Data on the modular curves X_1(N): gonality lists, the J_1(N) decomposition
table, and the genus formula used to cross-check both."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from .arith import divisors, prime_factors, totient

GENUS_ZERO = frozenset(range(1, 11)) | {12}


@dataclass(frozen=True)
class GonalityTable:
    """Levels N for which X_1(N) has gonality at most 1, 2, 3."""

    one_gonal: frozenset
    two_gonal: frozenset
    three_gonal: frozenset

    def at_most(self, d: int) -> frozenset:
        try:
            return {1: self.one_gonal, 2: self.two_gonal, 3: self.three_gonal}[d]
        except KeyError:
            raise ValueError(f"no gonality data for d={d}; only d in {{1, 2, 3}}") from None


GONALITY = GonalityTable(
    one_gonal=GENUS_ZERO,
    two_gonal=GENUS_ZERO | {11, 14, 15, 13, 16, 18},
    three_gonal=GENUS_ZERO | {11, 14, 15, 13, 16, 18, 20},
)


def gonality_exceeds(N: int, d: int) -> bool:
    """True iff Gon(X_1(N)) > d, for d in {1, 2, 3}."""
    if N < 1:
        raise ValueError("level must be positive")
    return N not in GONALITY.at_most(d)


@dataclass(frozen=True)
class Factor:
    dimension: int
    multiplicity: int
    l_vanishes: bool


@dataclass(frozen=True)
class DecompositionRow:
    N: int
    factors: tuple[Factor, ...]

    @property
    def dimension(self) -> int:
        return sum(f.dimension * f.multiplicity for f in self.factors)

    @property
    def finite_over_q(self) -> bool:
        return not any(f.l_vanishes for f in self.factors)

    def format_factors(self) -> str:
        parts = []
        for f in self.factors:
            dm = f"{f.dimension}" if f.multiplicity == 1 else f"{f.dimension}({f.multiplicity})"
            parts.append(f"{dm}:{'T' if f.l_vanishes else 'F'}")
        return " ".join(parts)


class TableFormatError(ValueError):
    pass


def parse_table(text: str) -> dict[int, DecompositionRow]:
    rows: dict[int, DecompositionRow] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *triples = line.split()
        try:
            N = int(head)
            factors = []
            for triple in triples:
                d, m, flag = triple.split(",")
                if flag not in ("T", "F"):
                    raise ValueError(f"flag must be T or F, got {flag!r}")
                factor = Factor(int(d), int(m), flag == "T")
                if factor.dimension < 1 or factor.multiplicity < 1:
                    raise ValueError("dimension and multiplicity must be positive")
                factors.append(factor)
        except ValueError as exc:
            raise TableFormatError(f"line {lineno}: {exc}") from None
        if not factors:
            raise TableFormatError(f"line {lineno}: level {N} has no factors")
        if N in rows:
            raise TableFormatError(f"line {lineno}: duplicate level {N}")
        rows[N] = DecompositionRow(N, tuple(factors))
    return rows


def load_table(path: Optional[Path] = None) -> dict[int, DecompositionRow]:
    if path is None:
        text = resources.files("torsioncert").joinpath("data/j1_decomposition.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_table(text)


@lru_cache(maxsize=1)
def decomposition_table() -> dict[int, DecompositionRow]:
    return load_table()


def j1_finite_over_q(N: int) -> Optional[bool]:
    """Whether every factor of J_1(N) has L(A, 1) != 0, hence J_1(N)(Q) finite.

    None when N has no row in the table (unknown, not false).
    """
    row = decomposition_table().get(N)
    return None if row is None else row.finite_over_q


def genus_x1(N: int) -> int:
    """Genus of X_1(N) for N >= 5.

    g = 1 + mu/12 - c/2, with mu = (N^2/2) prod_{p | N} (1 - 1/p^2) the index of
    the image of Gamma_1(N) in PSL_2(Z) and c = (1/2) sum_{d | N} phi(d) phi(N/d)
    the number of cusps.  No elliptic points occur for N >= 4.
    """
    if N <= 4:
        raise ValueError("genus formula implemented for N >= 5 only")
    mu = Fraction(N * N, 2)
    for p in prime_factors(N):
        mu *= 1 - Fraction(1, p * p)
    cusps = Fraction(sum(totient(d) * totient(N // d) for d in divisors(N)), 2)
    g = 1 + mu / 12 - cusps / 2
    if g.denominator != 1:
        raise ArithmeticError(f"non-integral genus {g} for N={N}")
    return int(g)
