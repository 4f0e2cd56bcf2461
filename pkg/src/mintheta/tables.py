"""Tabulated reference values, transcribed as published, used as expected data.

Each entry is data only; the checks in ``mintheta.verify`` recompute the
values from root data and compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from mintheta.zexpr import ConstantExpr, XiExpr


def _xi_const(num: list[int], den: list[int]) -> ConstantExpr:
    out = ConstantExpr.const(1)
    for r in num:
        out = out * ConstantExpr.xi(r)
    for r in den:
        out = out / ConstantExpr.xi(r)
    return out


def cv0_d(n: int) -> XiExpr:
    """c_v0 for (D_n, D_{n-1})."""
    return XiExpr.ratio([(1, 0), (1, -n + 2)], [(1, 1), (1, n - 1)])


CV0_EXCEPTIONAL = {
    "E6/D5": XiExpr.ratio([(1, -2), (1, -5)], [(1, 6), (1, 3)]),
    "E6/A5": XiExpr.ratio(
        [(1, F(-3, 2)), (1, F(-5, 2)), (1, F(-9, 2)), (2, 0)],
        [(1, F(5, 2)), (1, F(7, 2)), (1, F(11, 2)), (2, 1)],
    ),
    "E7/E6": XiExpr.ratio([(1, 0), (1, -4), (1, -8)], [(1, 1), (1, 5), (1, 9)]),
    "E7/D6": XiExpr.ratio(
        [(1, F(-5, 2)), (1, F(-9, 2)), (1, F(-15, 2)), (2, 0)],
        [(1, F(7, 2)), (1, F(11, 2)), (1, F(17, 2)), (2, 1)],
    ),
    # the last denominator factor is printed as xi(2+1); read as xi(2s+1)
    "E8/E7": XiExpr.ratio(
        [(1, F(-9, 2)), (1, F(-17, 2)), (1, F(-27, 2)), (2, 0)],
        [(1, F(11, 2)), (1, F(19, 2)), (1, F(29, 2)), (2, 1)],
    ),
}

CV0_WEAK = {
    "A5,A2xA2": XiExpr.ratio([(1, 0), (1, -1), (1, -2)], [(1, 1), (1, 2), (1, 3)]),
    "D3,D2": XiExpr.ratio([(1, -1), (1, 0)], [(1, 1), (1, 2)]),
    "D5,A4": XiExpr.ratio([(1, -1), (1, -3)], [(1, 2), (1, 4)]),
    "D6,A5": XiExpr.ratio([(1, -2), (1, 0), (1, -4)], [(1, 1), (1, 5), (1, 3)]),
}

# pole order of c_v0 at s0 stated for the weakly admissible pairs
WEAK_POLE_ORDER = {"A5,A2xA2": -2, "D3,D2": -2, "D5,A4": -1, "D6,A5": -1}

V1_WORDS = {
    "D": "1",
    "E6/D5": "65431",
    "E6/A5": "24315436542",
    "E7/E6": "7654234567",
    "E7/D6": "13425436542765431",
    "E8/E7": "8765432143546 257 6453412345678",
}

# the printed E6/D5 word spells v1^{-1}; it is read right to left
V1_WORDS_REVERSED = frozenset({"E6/D5"})


def cv1_d(n: int) -> ConstantExpr:
    return _xi_const([n - 1], [n])


CV1_EXCEPTIONAL = {
    "E6/D5": _xi_const([4], [9]),
    "E6/A5": _xi_const([3, 4, 5], [6, 8, 9]),
    "E7/E6": _xi_const([5, 9], [10, 14]),
    "E7/D6": _xi_const([4, 6, 8], [9, 12, 14]),
    "E8/E7": _xi_const([6, 10, 14], [15, 20, 24]),
}


@dataclass(frozen=True)
class Reduction:
    """One staged reduction step: Levi L-hat (by removed node), target types and u."""

    hat_node: int
    hat_types: tuple[str, str]
    u_word: str
    u1_word: str | None
    u_factor: XiExpr | None = None


REDUCTIONS = {
    "E6/D5": Reduction(1, ("D5", "D4"), "13425431", "1", XiExpr.ratio([(1, 2), (1, -1)], [(1, 3), (1, 6)])),
    "E6/A5": Reduction(1, ("D5", "A4"), "24354265431", "2431"),
    "E7/E6": Reduction(1, ("D6", "D5"), "76542314354265431", "765431"),
    "E7/D6": Reduction(7, ("E6", "D5"), "13425431654234567", "134567"),
    "E8/E7": Reduction(1, ("D7", "D6"), "87654231435426543 1 76542 3456 87 65423143542 65431", "87654231435426543 7654287 65431"),
}

# expansion coefficients printed for the exceptional functionals (|Delta| exponents)
EXPANSION_E6_D5 = {"θ_X": F(0), "p_X": F(0), "θ[D5,D4]": F(1)}
EXPANSION_E7_D6_BOUNDARY = {"p_Y∘ι": F(0), "θ[D6,D5]": F(3, 2)}

# four-leaf set for (D3, D2)
EXPANSION_D3 = {"θ_X3": F(0), "θ_X2": F(1, 2), "p_1": F(1, 2), "p_3": F(1, 2), "E": F(0)}
