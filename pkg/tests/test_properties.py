"""Randomized invariants; each property counts the cases it actually executed."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction as F
from functools import lru_cache

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from mintheta.rootsys import canonical_type_name, parse_type
from mintheta.weyl import element_of, inversion_set, min_coset_reps
from mintheta.zexpr import AffineArg, ConstantExpr, XiExpr, canonical, divisor_sigma, divisor_sigma_closed

CASES: Counter = Counter()
SETTINGS = dict(deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)


def classical_order(name: str) -> int:
    """Weyl group order from the classical formulas, independent of the orbit code."""
    out = 1
    for part in canonical_type_name(name).split("x"):
        if part == "T":
            continue
        fam, n = part[0], int(part[1:])
        if fam == "A":
            out *= math.factorial(n + 1)
        elif fam == "D":
            out *= 2 ** (n - 1) * math.factorial(n)
        else:
            out *= {6: 51840, 7: 2903040, 8: 696729600}[n]
    return out


# ---------------------------------------------------------------------------
# zexpr normal forms

halves = st.integers(-24, 24).map(lambda k: F(k, 2))
xi_factor = st.tuples(st.sampled_from([-2, -1, 1, 2]), halves, st.integers(-3, 3))
xi_exprs = st.lists(xi_factor, max_size=8).map(lambda fs: XiExpr(1, [(AffineArg(a, b), e) for a, b, e in fs]))

xi_points = st.integers(-20, 22).filter(lambda k: k not in (0, 2)).map(lambda k: F(k, 2))
const_atoms = st.one_of(
    xi_points.map(ConstantExpr.xi),
    st.integers(-3, 3).map(ConstantExpr.Q),
    st.just(ConstantExpr.R()),
    st.just(ConstantExpr.A()),
)
monomials = st.lists(const_atoms, min_size=1, max_size=5).map(lambda xs: math.prod(xs[1:], start=xs[0]))


@settings(max_examples=2500, **SETTINGS)
@given(xi_exprs, st.randoms(use_true_random=False))
def test_xi_canonical_idempotent_and_order_free(e, rnd):
    CASES["zexpr"] += 1
    c = canonical(e)
    assert canonical(c) == c
    shuffled = list(e.factors)
    rnd.shuffle(shuffled)
    assert XiExpr(e.const, shuffled) == e
    assert all(a.slope > 0 for a in c.args())
    assert (e * e.inverse()) == XiExpr()


@settings(max_examples=2500, **SETTINGS)
@given(monomials, monomials, monomials)
def test_constant_field_laws(a, b, c):
    CASES["zexpr"] += 1
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a * b) / b == a
    assert (a + b) * c == a * c + b * c
    assert ConstantExpr(dict(a.terms)) == a


# ---------------------------------------------------------------------------
# divisor function


@settings(max_examples=3000, **SETTINGS)
@given(st.integers(-1, 200), st.integers(-10, 10).filter(bool), st.integers(2, 97))
def test_divisor_closed_form_matches_sum(m, s, q):
    CASES["divisor"] += 1
    assert divisor_sigma(m, s, q) == divisor_sigma_closed(m, s, q)


# ---------------------------------------------------------------------------
# Weyl groups

TYPES = ("A3", "A5", "D4", "D5", "D6", "E6", "E7", "E8")
ORBIT_TYPES = ("A2", "A4", "A5", "D4", "D5", "E6")


@settings(max_examples=2500, **SETTINGS)
@given(st.sampled_from(TYPES), st.data())
def test_inversion_set_size_is_length(name, data):
    CASES["inversion"] += 1
    rs = parse_type(name)
    word = data.draw(st.lists(st.sampled_from(rs.labels), max_size=40))
    w = element_of(rs, word)
    assert len(inversion_set(rs, w)) == w.length == len(w.word)
    assert w.length % 2 == len(word) % 2
    assert w.length <= len(word)
    assert w.inverse.length == w.length


@lru_cache(maxsize=None)
def _orbit_count(name: str, levi: tuple[int, ...]) -> int:
    return len(min_coset_reps(parse_type(name), levi))


@settings(max_examples=2000, **SETTINGS)
@given(st.sampled_from(ORBIT_TYPES), st.data())
def test_orbit_count_times_levi_order(name, data):
    rs = parse_type(name)
    levi = tuple(sorted(data.draw(st.sets(st.sampled_from(rs.labels)))))
    levi_order = classical_order(rs.subsystem(levi).name) if levi else 1
    assume(classical_order(name) // levi_order <= 2000)
    CASES["orbit"] += 1
    assert _orbit_count(name, levi) * levi_order == classical_order(name)


PROPERTIES = (
    test_xi_canonical_idempotent_and_order_free,
    test_constant_field_laws,
    test_divisor_closed_form_matches_sum,
    test_inversion_set_size_is_length,
    test_orbit_count_times_levi_order,
)
