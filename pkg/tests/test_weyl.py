"""Weyl group elements: words, lengths, inverses, coset representatives."""

from __future__ import annotations

import numpy as np
import pytest

from mintheta.rootsys import parse_type
from mintheta.weyl import (
    BadLabel,
    BudgetExceeded,
    double_coset_min_reps,
    element_of,
    enumerate_group,
    identity,
    inversion_set,
    longest_element,
    min_coset_reps,
    parse_word,
    reflection,
    weyl_group_order,
)

KNOWN_ORDERS = {"A1": 2, "A3": 24, "A5": 720, "D4": 192, "D5": 1920, "D6": 23040, "E6": 51840, "E7": 2903040, "E8": 696729600}


class TestElements:
    def test_reflection_is_involution(self):
        rs = parse_type("E6")
        for lab in rs.labels:
            s = reflection(rs, lab)
            assert (s * s).is_identity()
            assert s(rs.simple_root(lab)) == tuple(-c for c in rs.simple_root(lab))

    def test_word_roundtrip_and_reduced(self):
        rs = parse_type("E7")
        w = element_of(rs, "7654234567")
        assert w.length == 10
        assert element_of(rs, w.word) == w
        assert len(w.word) == w.length

    def test_word_is_lex_minimal(self):
        rs = parse_type("A2")
        # s1 s2 s1 = s2 s1 s2; the cached word is the lexicographically smaller one
        assert element_of(rs, "212").word == (1, 2, 1)

    def test_non_reduced_word_collapses(self):
        rs = parse_type("D4")
        assert element_of(rs, "1221").is_identity()
        assert element_of(rs, "12131") == element_of(rs, "123")

    def test_inverse(self):
        rs = parse_type("E8")
        w = element_of(rs, "87654231435426543")
        assert (w * w.inverse).is_identity()
        assert w.inverse.word == tuple(reversed(w.word)) or w.inverse.length == w.length

    def test_bad_label(self):
        with pytest.raises((BadLabel, KeyError)):
            element_of(parse_type("A3"), "15")

    def test_parse_word_ignores_spaces(self):
        assert parse_word("12 3") == (1, 2, 3)

    def test_repr(self):
        rs = parse_type("A3")
        assert repr(element_of(rs, "21")) == "w(21)"
        assert repr(identity(rs)) == "w()"

    def test_descents(self):
        rs = parse_type("A3")
        w = element_of(rs, "12")
        assert w.left_descents() == [1]
        assert w.right_descents() == [2]


class TestLongest:
    @pytest.mark.parametrize("name", ["A4", "D5", "E6", "E7", "E8"])
    def test_length_is_number_of_positive_roots(self, name):
        rs = parse_type(name)
        assert longest_element(rs, rs.labels).length == len(rs.positive_roots)

    def test_inversion_set_of_longest_is_everything(self):
        rs = parse_type("D4")
        assert inversion_set(rs, longest_element(rs, rs.labels)) == frozenset(rs.positive_roots)

    def test_e6_longest_induces_diagram_flip(self):
        rs = parse_type("E6")
        w0 = longest_element(rs, rs.labels)
        assert w0(rs.simple_root(1)) == tuple(-c for c in rs.simple_root(6))
        assert w0(rs.simple_root(2)) == tuple(-c for c in rs.simple_root(2))


class TestGroupOrder:
    @pytest.mark.parametrize("name", sorted(KNOWN_ORDERS))
    def test_order_matches_classical_value(self, name):
        assert weyl_group_order(parse_type(name)) == KNOWN_ORDERS[name]

    @pytest.mark.parametrize("name", ["A3", "D4", "D5"])
    def test_enumeration(self, name):
        rs = parse_type(name)
        g = enumerate_group(rs)
        assert len(g) == KNOWN_ORDERS[name]
        assert len({m.tobytes() for m in g}) == len(g)
        assert np.array_equal(g[0], np.eye(rs.rank, dtype=np.int64))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_group(parse_type("E7"), budget=10**5)


class TestCosets:
    def test_min_coset_reps_count(self):
        rs = parse_type("E7")
        assert len(min_coset_reps(rs, [1, 2, 3, 4, 5, 6])) == 56
        assert len(min_coset_reps(parse_type("E6"), [2, 3, 4, 5, 6])) == 27

    def test_min_coset_reps_are_minimal(self):
        rs = parse_type("D5")
        levi = [2, 3, 4, 5]
        for w in min_coset_reps(rs, levi):
            assert all(rs.is_positive(w(rs.simple_root(a))) for a in levi)

    def test_double_cosets(self):
        rs = parse_type("E6")
        reps = double_coset_min_reps(rs, [1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        # W_{D5} \ W(E6) / W_{D5} has three double cosets
        assert len(reps) == 3
        assert reps[0].is_identity()
