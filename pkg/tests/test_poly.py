from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from dessinlab.poly import (
    Poly,
    count_real_roots,
    isolate_real_roots,
    poly_from_json,
    poly_to_json,
    refine_root,
    sturm_chain,
)


def test_arith_basic():
    p = Poly([1, 2, 1])  # (x+1)^2
    q = Poly([-1, 1])
    assert p * q == Poly([-1, -1, 1, 1])
    assert (p + q).c == (0, 3, 1)
    assert (p - p).is_zero()
    assert Poly.from_roots([1, -1]) == Poly([-1, 0, 1])


def test_divmod_exact():
    p = Poly([-1, 0, 0, 1])  # x^3 - 1
    d = Poly([-1, 1])
    q, r = p.divmod(d)
    assert r.is_zero()
    assert q == Poly([1, 1, 1])


@given(
    st.lists(st.integers(-9, 9), min_size=1, max_size=6),
    st.lists(st.integers(-9, 9), min_size=2, max_size=5),
)
def test_divmod_identity(ac, bc):
    a, b = Poly(ac), Poly(bc)
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_compose_shift():
    p = Poly([0, 0, 1])  # x^2
    assert p.shift(1) == Poly([1, 2, 1])
    assert p.compose(Poly([0, 0, 1])) == Poly([0, 0, 0, 0, 1])


def test_gcd_squarefree():
    p = Poly.from_roots([1, 1, 2])
    assert p.squarefree() == Poly.from_roots([1, 2])
    assert p.gcd(p.deriv()) == Poly.from_roots([1])


def test_order_at():
    p = Poly.from_roots([3, 3, 3, 5])
    assert p.order_at(3) == 3
    assert p.order_at(5) == 1
    assert p.order_at(0) == 0


def test_root_isolation_simple():
    p = Poly.from_roots([-2, 0, Q(7, 2)])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 3
    roots = [-2, 0, Q(7, 2)]
    for (lo, hi), r in zip(ivs, roots):
        assert lo <= r <= hi


def test_root_isolation_clustered():
    p = Poly.from_roots([Q(1, 100), Q(2, 100), Q(3, 100), -5])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 4
    for i in range(len(ivs) - 1):
        assert ivs[i][1] <= ivs[i + 1][0] or ivs[i][0] + ivs[i][1] < ivs[i + 1][0] + ivs[i + 1][1]


def test_count_real_roots():
    p = Poly([1, 0, 1])  # x^2 + 1
    assert count_real_roots(p) == 0
    p = Poly([-2, 0, 1])  # x^2 - 2
    assert count_real_roots(p) == 2
    assert count_real_roots(p, 0, 2) == 1


def test_refine_root():
    p = Poly([-2, 0, 1])
    (lo, hi) = isolate_real_roots(p)[1]
    lo, hi = refine_root(p, lo, hi, Q(1, 10**6))
    assert hi - lo <= Q(1, 10**6)
    assert lo * lo <= 2 <= hi * hi


def test_sturm_chain_ends_constant():
    p = Poly.from_roots([0, 1, 2, 3])
    ch = sturm_chain(p)
    assert ch[-1].degree == 0


def test_json_roundtrip():
    p = Poly([Q(1, 3), 0, Q(-7, 2)])
    assert poly_from_json(poly_to_json(p)) == p
