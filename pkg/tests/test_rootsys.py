"""Root data: positive-root closure, type recognition and parabolic rho."""

from __future__ import annotations

from fractions import Fraction

import pytest

from mintheta.rootsys import (
    RootSystem,
    UnsupportedType,
    build_root_system,
    canonical_type_name,
    dynkin_type_name,
    height,
    parse_type,
    rho_parabolic,
)


class TestPositiveRoots:
    @pytest.mark.parametrize(
        "name,count",
        [("A1", 1), ("A3", 6), ("A5", 15), ("D4", 12), ("D5", 20), ("D8", 56), ("E6", 36), ("E7", 63), ("E8", 120)],
    )
    def test_counts(self, name, count):
        assert len(parse_type(name).positive_roots) == count

    @pytest.mark.parametrize("name,h", [("A4", 4), ("D6", 9), ("E6", 11), ("E7", 17), ("E8", 29)])
    def test_highest_root_height_is_coxeter_minus_one(self, name, h):
        assert height(parse_type(name).highest_root) == h

    def test_e8_highest_root_bourbaki(self):
        assert parse_type("E8").highest_root == (2, 3, 4, 6, 5, 4, 3, 2)

    def test_e6_highest_root_bourbaki(self):
        assert parse_type("E6").highest_root == (1, 2, 2, 3, 2, 1)

    def test_roots_are_nonnegative_and_closed_under_simple_reflection(self):
        rs = parse_type("D5")
        roots = set(rs.positive_roots)
        for r in rs.positive_roots:
            assert all(c >= 0 for c in r)
            for lab in rs.labels:
                if r == rs.simple_root(lab):
                    continue
                img = tuple(a - rs.pair_roots(r, rs.simple_root(lab)) * b for a, b in zip(r, rs.simple_root(lab)))
                assert img in roots


class TestTypes:
    def test_parse_is_case_insensitive(self):
        assert parse_type("e7") == parse_type("E7")

    @pytest.mark.parametrize("bad", ["", "E", "X5", "E9", "Zq"])
    def test_unsupported(self, bad):
        with pytest.raises((UnsupportedType, ValueError)):
            parse_type(bad)

    def test_levi_types(self):
        e7 = parse_type("E7")
        assert e7.subsystem([1, 2, 3, 4, 5, 6]).name == "E6"
        assert e7.subsystem([2, 3, 4, 5, 6, 7]).name == "D6"
        assert parse_type("A5").subsystem([1, 2, 4, 5]).name == "A2xA2"

    def test_canonical_small_types(self):
        assert canonical_type_name("D3") == "A3"
        assert canonical_type_name("D2") == "A1xA1"
        assert canonical_type_name("A1xD3") == "A3xA1"

    def test_empty_system_is_torus(self):
        assert dynkin_type_name(()) == "T"

    def test_non_simply_laced_rejected(self):
        with pytest.raises(ValueError):
            RootSystem("B2", ((2, -2), (-1, 2)), (1, 2))


class TestRhoParabolic:
    @pytest.mark.parametrize(
        "name,beta0,k",
        [("E6", 1, 6), ("E7", 7, 9), ("E8", 8, Fraction(29, 2)), ("E7", 1, Fraction(17, 2)), ("D5", 1, 4)],
    )
    def test_pairing_with_beta0(self, name, beta0, k):
        rs = parse_type(name)
        levi = [x for x in rs.labels if x != beta0]
        assert rho_parabolic(rs, levi)[rs.index(beta0)] == k

    def test_full_levi_gives_zero(self):
        rs = build_root_system("E", 6)
        assert all(x == 0 for x in rho_parabolic(rs, rs.labels))

    def test_borel_gives_rho(self):
        rs = parse_type("D4")
        assert all(x == 1 for x in rho_parabolic(rs, ()))
