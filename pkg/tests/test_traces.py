from decimal import Decimal, getcontext
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsioncert.arith import is_prime
from torsioncert.gf import make_field
from torsioncert.traces import (
    admissible_orders,
    admissible_trace,
    admissible_traces,
    hasse_bounds,
    hasse_contains,
    multiples_in_hasse,
)
from torsioncert.weierstrass import realized_traces

getcontext().prec = 60


def hasse_oracle(q, m):
    r = Decimal(q).sqrt()
    return (1 - r) ** 2 <= m <= (1 + r) ** 2


def test_hasse_examples():
    assert hasse_contains(27, 25)
    assert not hasse_contains(27, 49)
    assert hasse_contains(27, 38)  # (28-38)^2 = 100 <= 108
    assert not hasse_contains(27, 39)  # 121 > 108
    with pytest.raises(ValueError):
        hasse_contains(27, 0)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 10**6), st.integers(1, 10**6))
def test_hasse_matches_decimal_oracle(q, m):
    assert hasse_contains(q, m) == hasse_oracle(q, m)


@pytest.mark.parametrize("q", [2, 3, 4, 9, 25, 27, 121, 1024])
def test_hasse_bounds_tight(q):
    lo, hi = hasse_bounds(q)
    assert hasse_contains(q, lo) and hasse_contains(q, hi)
    assert not hasse_contains(q, hi + 1)
    assert lo == 1 or not hasse_contains(q, lo - 1)


def test_trace_examples():
    assert not admissible_trace(3, 3, 3).admissible
    assert not admissible_trace(6, 3, 3).admissible
    t9 = admissible_trace(9, 3, 3)
    assert t9.admissible and t9.matched_condition == 4
    t10 = admissible_trace(10, 3, 3)
    assert t10.admissible and t10.matched_condition == 1
    assert not admissible_trace(11, 3, 3).admissible


@pytest.mark.parametrize(
    "t,p,n,cond",
    [
        (6, 3, 2, 2), (-6, 3, 2, 2), (3, 3, 2, 3), (0, 3, 2, 5),
        (10, 5, 2, 2), (5, 5, 2, 3), (0, 5, 2, None),
        (7, 7, 2, None),  # 7 = 1 mod 3
        (0, 13, 2, None), (0, 7, 2, 5),  # 7 = 3 mod 4
        (4, 2, 3, 4), (0, 2, 3, 5), (2, 2, 3, None),
        (0, 5, 1, 5), (0, 5, 3, 5),
    ],
)
def test_supersingular_conditions(t, p, n, cond):
    tq = admissible_trace(t, p, n)
    assert tq.matched_condition == cond
    assert tq.admissible == (cond is not None)


@settings(max_examples=400, deadline=None)
@given(st.integers(-200, 200), st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(1, 5))
def test_trace_query_consistency(t, p, n):
    tq = admissible_trace(t, p, n)
    q = p**n
    if tq.admissible:
        assert t * t <= 4 * q
        assert tq.matched_condition in {1, 2, 3, 4, 5}
    else:
        assert tq.matched_condition is None
    if t * t <= 4 * q and gcd(t, p) == 1:
        assert tq.matched_condition == 1


def test_admissible_orders():
    assert admissible_orders(2, 1) == {1, 2, 3, 4, 5}
    assert admissible_orders(3, 1) == set(range(1, 8))
    orders27 = admissible_orders(3, 3)
    assert 25 not in orders27 and 22 not in orders27
    for p, n in [(2, 4), (3, 3), (5, 2), (7, 3)]:
        q = p**n
        assert all((q + 1 - m) ** 2 <= 4 * q for m in admissible_orders(p, n))


def test_multiples_in_hasse():
    assert multiples_in_hasse(25, 3, 3) == {25}
    assert multiples_in_hasse(40, 3, 3) == set()
    assert multiples_in_hasse(49, 3, 3) == set()
    assert multiples_in_hasse(22, 3, 2) == set()
    assert multiples_in_hasse(22, 3, 3) == {22}
    assert multiples_in_hasse(5, 3, 2) == {5, 10, 15}
    assert multiples_in_hasse(1, 2, 1) == {1, 2, 3, 4, 5}


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (5, 2)])
def test_waterhouse_small_fields(p, n):
    F = make_field(p, n)
    realized = realized_traces(F)
    assert realized == admissible_traces(p, n)
    assert all(hasse_contains(F.q, F.q + 1 - t) for t in realized)


def test_prime_fields_all_traces_admissible():
    for p in [x for x in range(5, 60) if is_prime(x)]:
        lo, hi = hasse_bounds(p)
        # |t| < p, so t is coprime to p or t = 0 (allowed for odd n)
        assert admissible_orders(p, 1) == set(range(lo, hi + 1))
