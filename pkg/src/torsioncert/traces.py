"""Hasse interval and the classification of Frobenius traces over F_q.

Everything is exact integer arithmetic: |t| <= 2 sqrt(q) is t^2 <= 4q,
t = +-sqrt(q) is t^2 = q, t = +-p^((n+1)/2) is t^2 = p^(n+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Optional

#: The five admissibility conditions, keyed by their number.
CONDITIONS = {
    1: "gcd(t, p) = 1",
    2: "n even and t^2 = 4q",
    3: "n even, p != 1 mod 3 and t^2 = q",
    4: "n odd, p in {2, 3} and t^2 = p^(n+1)",
    5: "t = 0 and (n odd, or n even with p != 1 mod 4)",
}


def hasse_contains(q: int, m: int) -> bool:
    """True iff m lies in the Hasse interval, (q + 1 - m)^2 <= 4q."""
    if m <= 0:
        raise ValueError(f"group order must be positive, got {m}")
    return (q + 1 - m) ** 2 <= 4 * q


def hasse_bounds(q: int) -> tuple[int, int]:
    """Smallest and largest integer m with hasse_contains(q, m)."""
    r = isqrt(4 * q)
    return max(1, q + 1 - r), q + 1 + r


@dataclass(frozen=True)
class TraceQuery:
    t: int
    p: int
    n: int
    admissible: bool
    matched_condition: Optional[int]

    @property
    def q(self) -> int:
        return self.p**self.n

    def describe(self) -> str:
        if self.matched_condition is None:
            reason = "outside Hasse bound" if self.t * self.t > 4 * self.q else "no condition holds"
            return f"t={self.t}: inadmissible ({reason})"
        return f"t={self.t}: admissible via ({self.matched_condition}) {CONDITIONS[self.matched_condition]}"


def _first_condition(t: int, p: int, n: int) -> Optional[int]:
    q = p**n
    t2 = t * t
    if gcd(t, p) == 1:
        return 1
    if n % 2 == 0 and t2 == 4 * q:
        return 2
    if n % 2 == 0 and p % 3 != 1 and t2 == q:
        return 3
    if n % 2 == 1 and p in (2, 3) and t2 == p ** (n + 1):
        return 4
    if t == 0 and (n % 2 == 1 or p % 4 != 1):
        return 5
    return None


def admissible_trace(t: int, p: int, n: int) -> TraceQuery:
    """Whether t is the trace of Frobenius of some elliptic curve over F_{p^n}.

    ``matched_condition`` is the first of conditions (1)-(5) that holds.
    """
    q = p**n
    if t * t > 4 * q:
        return TraceQuery(t, p, n, False, None)
    cond = _first_condition(t, p, n)
    return TraceQuery(t, p, n, cond is not None, cond)


def trace_range(q: int) -> range:
    r = isqrt(4 * q)
    return range(-r, r + 1)


def admissible_traces(p: int, n: int) -> set[int]:
    return {t for t in trace_range(p**n) if admissible_trace(t, p, n).admissible}


def admissible_orders(p: int, n: int) -> set[int]:
    q = p**n
    return {q + 1 - t for t in admissible_traces(p, n)}


def multiples_in_hasse(N: int, p: int, n: int) -> set[int]:
    """Positive multiples of N inside the Hasse interval of q = p^n."""
    if N < 1:
        raise ValueError("N must be positive")
    q = p**n
    lo, hi = hasse_bounds(q)
    first = max(N, -(-lo // N) * N)
    return {m for m in range(first, hi + 1, N) if hasse_contains(q, m)}
