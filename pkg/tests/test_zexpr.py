"""Exact zeta algebra: normal forms, Laurent data and numeric oracles."""

from __future__ import annotations

import warnings
from fractions import Fraction as F

import mpmath
import pytest

from mintheta.zexpr import (
    DEFAULT_MODEL,
    GENUS_TWO_MODEL,
    SECOND_MODEL,
    AffineArg,
    ConstantExpr,
    HalfPointWarning,
    NotSimplePole,
    PoleAtEvaluationPoint,
    XiExpr,
    ZetaModel,
    divisor_sigma,
    divisor_sigma_closed,
    laurent,
    leading_coefficient,
    numeric_eval,
    numeric_order,
    numeric_residue,
    pole_order,
    residue_const,
    value_at,
)

MODELS = (DEFAULT_MODEL, SECOND_MODEL, GENUS_TWO_MODEL)
xi = ConstantExpr.xi


class TestConstantExpr:
    def test_functional_equation_in_normal_form(self):
        assert xi(-3) == xi(4)
        assert xi(F(1, 3)) == xi(F(2, 3))

    def test_poles_rejected(self):
        with pytest.raises(PoleAtEvaluationPoint):
            xi(0)
        with pytest.raises(PoleAtEvaluationPoint):
            xi(1)

    def test_delta_is_q_power(self):
        assert ConstantExpr.delta(F(1, 2)) == ConstantExpr.Q(-1)
        assert ConstantExpr.delta(0) == ConstantExpr.const(1)

    def test_field_operations(self):
        a = xi(2) * ConstantExpr.R() / xi(5)
        assert a / a == ConstantExpr.const(1)
        assert (a + a) == a * 2
        assert (a - a).is_zero()
        assert a ** 2 == a * a
        assert a ** -1 == a.inverse()

    def test_zero_exponents_dropped(self):
        assert ConstantExpr({((ConstantExpr.Q().terms[0][0][0][0], F(0)),): F(3)}) == ConstantExpr.const(3)

    def test_delta_exponent(self):
        assert ConstantExpr.delta(F(3, 2)).delta_exponent() == F(3, 2)
        assert (xi(2) * ConstantExpr.Q()).delta_exponent() is None

    def test_rendering(self):
        assert str(ConstantExpr.R() * xi(4) * xi(5) / (xi(6) * xi(10) * xi(14))) == "R·ξ(4)·ξ(5)/(ξ(6)·ξ(10)·ξ(14))"

    def test_inverse_of_sum_rejected(self):
        with pytest.raises((ValueError, ZeroDivisionError, ArithmeticError)):
            (xi(2) + xi(3)).inverse()

    def test_evaluate_matches_model(self):
        for m in MODELS:
            e = xi(3) * xi(2) / xi(5)
            assert abs(e.evaluate(m) - m.xi(3) * m.xi(2) / m.xi(5)) < mpmath.mpf(10) ** -30


class TestXiExpr:
    def test_negative_slope_flipped(self):
        assert XiExpr.xi(-1, 2) == XiExpr.xi(1, -1)

    def test_constant_factors_absorbed(self):
        e = XiExpr(1, [(AffineArg(0, 3), 1), (AffineArg(1, 0), 1)])
        assert e.const == xi(3)
        assert e.args() == [AffineArg(1, 0)]

    def test_cancellation(self):
        e = XiExpr.ratio([(1, 2), (1, 0)], [(1, 2)])
        assert e == XiExpr.xi(1, 0)

    def test_rendering(self):
        e = XiExpr.ratio([(1, F(-3, 2)), (2, 0)], [(1, F(5, 2)), (2, 1)])
        assert str(e) == "ξ(s-3/2)·ξ(2s)/(ξ(s+5/2)·ξ(2s+1))"


class TestLaurent:
    def test_simple_pole(self):
        e = XiExpr.ratio([(1, 0)], [(1, 1)])
        assert pole_order(e, 1) == -1
        assert residue_const(e, 1) == ConstantExpr.R() / xi(2)

    def test_pole_at_zero_has_negative_residue(self):
        e = XiExpr.xi(1, 0)
        assert residue_const(e, 0) == -ConstantExpr.R()

    def test_double_pole_not_simple(self):
        e = XiExpr.ratio([(1, 0), (1, -1)], [(1, 1), (1, 2)])
        assert pole_order(e, 1) == -2
        with pytest.raises(NotSimplePole):
            residue_const(e, 1)
        # xi(s-1) has residue -R at s = 1
        assert leading_coefficient(e, 1) == -ConstantExpr.R() ** 2 / (xi(2) * xi(3))

    def test_zero_and_value(self):
        e = XiExpr.ratio([(1, 2)], [(1, 0)])
        assert pole_order(e, 0) == 1
        assert pole_order(XiExpr.ratio([(1, 1)], [(1, 0)]), 0) == 0
        assert value_at(e, 0).is_zero()
        with pytest.raises(PoleAtEvaluationPoint):
            value_at(XiExpr.xi(1, 0), 0)

    def test_half_point_flagged(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            pole_order(XiExpr.xi(1, 0), F(1, 2))
        assert any(issubclass(w.category, HalfPointWarning) for w in caught)

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.label())
    def test_symbolic_residue_matches_contour(self, model):
        e = XiExpr.ratio([(1, -8), (1, -4), (1, 0)], [(1, 1), (1, 5), (1, 9)])
        sym = residue_const(e, 5).evaluate(model)
        num = numeric_residue(e, 5, model)
        assert abs(sym - num) < mpmath.mpf(10) ** -12 * max(1, abs(sym))

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.label())
    def test_second_coefficient_matches_contour(self, model):
        e = XiExpr.ratio([(1, -1), (1, 0)], [(1, 1), (1, 2)])
        ser = laurent(e, 1, top=-1)
        for k in (-2, -1):
            sym = ser.coeff(k).evaluate(model)
            num = numeric_residue(e, 1, model, order=-k)
            assert abs(sym - num) < mpmath.mpf(10) ** -10 * max(1, abs(sym))

    def test_numeric_order(self):
        e = XiExpr.ratio([(1, -1), (1, 0)], [(1, 1), (1, 2)])
        assert round(numeric_order(e, 1)) == -2


class TestZetaModel:
    def test_parse(self):
        assert ZetaModel.parse("q=3,g=1,num=1:-1:3") == SECOND_MODEL

    def test_riemann_hypothesis_enforced(self):
        with pytest.raises(ValueError):
            ZetaModel(q=2, g=1, numerator=(1, 0, 5))

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.label())
    @pytest.mark.parametrize("s", [F(1, 3), F(5, 2), F(-7, 4), F(9, 1)])
    def test_functional_equation(self, model, s):
        with mpmath.workdps(40):
            x = mpmath.mpf(s.numerator) / s.denominator
            a, b = model.xi(x), model.xi(1 - x)
        assert abs(a - b) < mpmath.mpf(10) ** -25 * abs(a)

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.label())
    def test_residue_at_one(self, model):
        e = XiExpr.xi(1, 0)
        assert abs(numeric_residue(e, 1, model) - model.R) < mpmath.mpf(10) ** -15

    def test_numeric_eval_rejects_pole(self):
        with pytest.raises(PoleAtEvaluationPoint):
            numeric_eval(XiExpr.xi(1, 0), 1, DEFAULT_MODEL)


class TestDivisorSigma:
    def test_values(self):
        assert divisor_sigma(2, 1, 3) == 1 + 3 + 9
        assert divisor_sigma(-1, 2, 5) == 0

    @pytest.mark.parametrize("m", [-1, 0, 1, 4])
    @pytest.mark.parametrize("s", [-2, 1, 3])
    def test_closed_form(self, m, s):
        assert divisor_sigma(m, s, 4) == divisor_sigma_closed(m, s, 4)

    def test_closed_form_fails_below_minus_one(self):
        assert divisor_sigma(-2, 1, 2) != divisor_sigma_closed(-2, 1, 2)

    def test_half_integer_rejected(self):
        with pytest.raises(ValueError):
            divisor_sigma(1, F(1, 2), 2)
