"""Symbolic algebra over completed zeta values of a function field.

Conventions. The completed zeta function is xi(s) = q^{-(1-g)s} zeta(s), with
xi(s) = xi(1-s), simple poles at s = 0 and s = 1, Res_{s=1} xi = R and
Res_{s=0} xi = -R. Q denotes q^{1-g}, so |Delta|^{1/2} = Q^{-1} and
zeta(s) = Q^s xi(s).

Near the pole at 1 we write xi(1+u) = R/u + gamma_0 + gamma_1 u + ..., and
store gamma_0 through A = 2 gamma_0 / R. The functional equation then gives
xi(u) = -R/u + gamma_0 - gamma_1 u + ..., which forces xi(u)/xi(u+1) = -1 + A u.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Mapping, Sequence, Union

import mpmath

Number = Union[int, Fraction]
HALF = Fraction(1, 2)


class PoleAtEvaluationPoint(ValueError):
    """Raised when a numeric or constant evaluation hits a pole of xi."""


class NotSimplePole(ValueError):
    """Raised when a residue is requested at a point that is not a simple pole."""


class HalfPointWarning(UserWarning):
    """A xi argument equals 1/2, where xi may vanish for some curves."""


def _frac(x: Number | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# atoms and constant expressions

_KIND_ORDER = {"Q": 0, "R": 1, "A": 2, "gamma": 3, "xi": 4, "dxi": 5, "sigma": 6, "absr": 7, "ln": 8}


@total_ordering
@dataclass(frozen=True)
class Atom:
    """An opaque generator: Q, R, A, gamma_k, xi(r), xi^{(j)}(r)/j!, sigma(a,r), |r_i|, ln|r_i|."""

    kind: str
    args: tuple = ()

    def _key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.args)

    def __lt__(self, other: Atom) -> bool:
        return self._key() < other._key()

    def render(self) -> str:
        if self.kind in ("Q", "R", "A"):
            return self.kind
        if self.kind == "gamma":
            return f"γ{self.args[0]}"
        if self.kind == "xi":
            return f"ξ({fmt_frac(self.args[0])})"
        if self.kind == "dxi":
            r, j = self.args
            return f"ξ[{j}]({fmt_frac(r)})"
        if self.kind == "sigma":
            return f"σ({self.args[0]},{fmt_frac(self.args[1])})"
        if self.kind == "absr":
            return f"|r{self.args[0]}|"
        if self.kind == "ln":
            return f"ln|r{self.args[0]}|"
        raise ValueError(self.kind)


Monomial = tuple[tuple[Atom, Fraction], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[Atom, Fraction] = dict(a)
    for atom, e in b:
        exps[atom] = exps.get(atom, Fraction(0)) + e
    return tuple(sorted(((k, v) for k, v in exps.items() if v != 0), key=lambda kv: kv[0]))


def _mono_pow(a: Monomial, e: Fraction) -> Monomial:
    return tuple((atom, x * e) for atom, x in a) if e != 0 else ()


class ConstantExpr:
    """A finite sum of rational multiples of monomials in atoms, kept in normal form."""

    __slots__ = ("terms", "__dict__")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = _mono_mul((), m)
            clean[m] = clean.get(m, Fraction(0)) + _frac(c)
        clean = {m: c for m, c in clean.items() if c != 0}
        self.terms: tuple[tuple[Monomial, Fraction], ...] = tuple(sorted(clean.items(), key=lambda mc: _mono_key(mc[0])))

    # constructors -----------------------------------------------------------
    @classmethod
    def const(cls, x: Number) -> ConstantExpr:
        return cls({(): _frac(x)})

    @classmethod
    def atom(cls, atom: Atom, exponent: Number = 1) -> ConstantExpr:
        return cls({((atom, _frac(exponent)),): Fraction(1)})

    @classmethod
    def Q(cls, exponent: Number = 1) -> ConstantExpr:
        return cls.atom(Atom("Q"), exponent)

    @classmethod
    def R(cls, exponent: Number = 1) -> ConstantExpr:
        return cls.atom(Atom("R"), exponent)

    @classmethod
    def A(cls) -> ConstantExpr:
        return cls.atom(Atom("A"))

    @classmethod
    def delta(cls, exponent: Number) -> ConstantExpr:
        """|Delta|^e = Q^{-2e}."""
        return cls.Q(-2 * _frac(exponent))

    @classmethod
    def gamma(cls, k: int) -> ConstantExpr:
        """Coefficient of u^k in xi(1+u); gamma_0 is expressed through A and R."""
        if k == 0:
            return cls.A() * cls.R() * Fraction(1, 2)
        return cls.atom(Atom("gamma", (k,)))

    @classmethod
    def xi(cls, r: Number, exponent: Number = 1) -> ConstantExpr:
        r = _frac(r)
        if r in (0, 1):
            raise PoleAtEvaluationPoint(f"xi({fmt_frac(r)}) is a pole")
        return cls.atom(Atom("xi", (max(r, 1 - r),)), exponent)

    @classmethod
    def xi_taylor(cls, r: Number, j: int) -> ConstantExpr:
        """xi^{(j)}(r)/j!, normalized with xi^{(j)}(r) = (-1)^j xi^{(j)}(1-r)."""
        r = _frac(r)
        if r in (0, 1):
            raise PoleAtEvaluationPoint(f"xi is singular at {fmt_frac(r)}")
        if j == 0:
            return cls.xi(r)
        sign = 1
        if r < HALF:
            r, sign = 1 - r, (-1) ** j
        elif r == HALF and j % 2 == 1:
            return cls()
        return cls.atom(Atom("dxi", (r, j))) * sign

    @classmethod
    def sigma(cls, label: str, r: Number) -> ConstantExpr:
        return cls.atom(Atom("sigma", (label, _frac(r))))

    @classmethod
    def torus_abs(cls, i: int, exponent: Number = 1) -> ConstantExpr:
        return cls.atom(Atom("absr", (i,)), exponent)

    @classmethod
    def torus_ln(cls, i: int) -> ConstantExpr:
        return cls.atom(Atom("ln", (i,)))

    # algebra ----------------------------------------------------------------
    def _coerce(self, other: ConstantExpr | Number) -> ConstantExpr:
        return other if isinstance(other, ConstantExpr) else ConstantExpr.const(other)

    def __add__(self, other: ConstantExpr | Number) -> ConstantExpr:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms:
            out[m] = out.get(m, Fraction(0)) + c
        return ConstantExpr(out)

    __radd__ = __add__

    def __neg__(self) -> ConstantExpr:
        return ConstantExpr({m: -c for m, c in self.terms})

    def __sub__(self, other: ConstantExpr | Number) -> ConstantExpr:
        return self + (-self._coerce(other))

    def __rsub__(self, other: ConstantExpr | Number) -> ConstantExpr:
        return self._coerce(other) - self

    def __mul__(self, other: ConstantExpr | Number) -> ConstantExpr:
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return ConstantExpr(out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> ConstantExpr:
        if not self.is_monomial():
            raise ZeroDivisionError(f"cannot invert non-monomial {self}")
        (m, c), = self.terms
        return ConstantExpr({_mono_pow(m, Fraction(-1)): 1 / c})

    def __truediv__(self, other: ConstantExpr | Number) -> ConstantExpr:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: ConstantExpr | Number) -> ConstantExpr:
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: Number) -> ConstantExpr:
        e = _frac(e)
        if e.denominator == 1 and e >= 0:
            out = ConstantExpr.const(1)
            for _ in range(int(e)):
                out = out * self
            return out
        if not self.is_monomial():
            raise ValueError("fractional or negative powers need a monomial")
        (m, c), = self.terms
        if e.denominator != 1 and c != 1:
            raise ValueError("fractional power of a non-unit coefficient")
        return ConstantExpr({_mono_pow(m, e): c ** int(e) if e.denominator == 1 else Fraction(1)})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ConstantExpr.const(other)
        return isinstance(other, ConstantExpr) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    # inspection -------------------------------------------------------------
    def atoms(self) -> set[Atom]:
        return {a for m, _ in self.terms for a, _ in m}

    def exponent_of(self, kind: str) -> Fraction:
        """Exponent of a single-generator atom in a monomial expression."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (m, _), = self.terms
        return sum((e for a, e in m if a.kind == kind), Fraction(0))

    @property
    def coefficient(self) -> Fraction:
        if not self.is_monomial():
            raise ValueError("not a monomial")
        return self.terms[0][1]

    def delta_exponent(self) -> Fraction | None:
        """e when this equals |Delta|^e exactly, else None."""
        if not self.is_monomial() or self.coefficient != 1:
            return None
        (m, _), = self.terms
        if any(a.kind != "Q" for a, _ in m):
            return None
        return -self.exponent_of("Q") / 2

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = [_render_monomial(m, c) for m, c in self.terms]
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"ConstantExpr({self})"

    def evaluate(self, model: ZetaModel, torus: Mapping[int, float] | None = None) -> mpmath.mpf:
        total = mpmath.mpf(0)
        for m, c in self.terms:
            val = mpmath.mpf(c.numerator) / c.denominator
            for atom, e in m:
                val *= model.atom_value(atom, torus) ** (mpmath.mpf(e.numerator) / e.denominator)
            total += val
        return total


def _mono_key(m: Monomial) -> tuple:
    return tuple((a._key(), e) for a, e in m)


def _render_power(base: str, e: Fraction) -> str:
    return base if e == 1 else f"{base}^{fmt_frac(e)}"


def _render_monomial(m: Monomial, c: Fraction, extra_num: Sequence[str] = (), extra_den: Sequence[str] = ()) -> str:
    num = [_render_power(a.render(), e) for a, e in m if e > 0] + list(extra_num)
    den = [_render_power(a.render(), -e) for a, e in m if e < 0] + list(extra_den)
    sign = "-" if c < 0 else ""
    c = abs(c)
    if c.numerator != 1 or not num:
        num.insert(0, str(c.numerator))
    if c.denominator != 1:
        den.insert(0, str(c.denominator))
    text = "·".join(num)
    if den:
        text += "/" + (den[0] if len(den) == 1 else "(" + "·".join(den) + ")")
    return sign + text


def _mp(x: Number):
    x = _frac(x)
    return mpmath.mpf(x.numerator) / x.denominator


# ---------------------------------------------------------------------------
# affine arguments and xi-products


@total_ordering
@dataclass(frozen=True)
class AffineArg:
    """The affine function slope*s + intercept."""

    slope: Fraction
    intercept: Fraction

    def __init__(self, slope: Number, intercept: Number):
        object.__setattr__(self, "slope", _frac(slope))
        object.__setattr__(self, "intercept", _frac(intercept))

    def __lt__(self, other: AffineArg) -> bool:
        return (self.slope, self.intercept) < (other.slope, other.intercept)

    def at(self, s: Number) -> Fraction:
        return self.slope * _frac(s) + self.intercept

    def shift(self, d: Number) -> AffineArg:
        return AffineArg(self.slope, self.intercept + _frac(d))

    def __str__(self) -> str:
        if self.slope == 0:
            return fmt_frac(self.intercept)
        head = "s" if self.slope == 1 else f"{fmt_frac(self.slope)}s"
        if self.intercept == 0:
            return head
        sign = "+" if self.intercept > 0 else "-"
        return f"{head}{sign}{fmt_frac(abs(self.intercept))}"


class XiExpr:
    """A monomial constant times a product of xi(a s + b)^e with a > 0."""

    __slots__ = ("const", "factors", "__dict__")

    def __init__(self, const: ConstantExpr | Number = 1, factors: Mapping[AffineArg, int] | Iterable[tuple[AffineArg, int]] = ()):
        const = const if isinstance(const, ConstantExpr) else ConstantExpr.const(const)
        if not const.is_monomial():
            raise ValueError("XiExpr constant must be a monomial")
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict[AffineArg, int] = {}
        for arg, e in items:
            if arg.slope < 0:
                arg = AffineArg(-arg.slope, 1 - arg.intercept)
            if arg.slope == 0:
                const = const * ConstantExpr.xi(arg.intercept, e)
                continue
            merged[arg] = merged.get(arg, 0) + e
        self.const = const
        self.factors: tuple[tuple[AffineArg, int], ...] = tuple(sorted((a, e) for a, e in merged.items() if e != 0))

    @classmethod
    def xi(cls, slope: Number, intercept: Number, exponent: int = 1) -> XiExpr:
        return cls(1, [(AffineArg(slope, intercept), exponent)])

    @classmethod
    def ratio(cls, num: Iterable[tuple[Number, Number]], den: Iterable[tuple[Number, Number]], const: ConstantExpr | Number = 1) -> XiExpr:
        """Product of xi(a s + b) over num divided by the same over den."""
        facs = [(AffineArg(a, b), 1) for a, b in num] + [(AffineArg(a, b), -1) for a, b in den]
        return cls(const, facs)

    @property
    def scalar(self) -> Fraction:
        return self.const.coefficient

    @property
    def q_power(self) -> Fraction:
        return self.const.exponent_of("Q")

    def __mul__(self, other: XiExpr | ConstantExpr | Number) -> XiExpr:
        if not isinstance(other, XiExpr):
            return XiExpr(self.const * other, self.factors)
        return XiExpr(self.const * other.const, list(self.factors) + list(other.factors))

    __rmul__ = __mul__

    def inverse(self) -> XiExpr:
        return XiExpr(self.const.inverse(), [(a, -e) for a, e in self.factors])

    def __truediv__(self, other: XiExpr | ConstantExpr | Number) -> XiExpr:
        if not isinstance(other, XiExpr):
            other = XiExpr(other)
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, XiExpr) and self.const == other.const and self.factors == other.factors

    def __hash__(self) -> int:
        return hash((self.const, self.factors))

    def canonical(self) -> XiExpr:
        return XiExpr(self.const, self.factors)

    def args(self) -> list[AffineArg]:
        return [a for a, _ in self.factors]

    def max_slope(self) -> Fraction:
        return max((a.slope for a in self.args()), default=Fraction(0))

    def __str__(self) -> str:
        num = [_render_power(f"ξ({a})", Fraction(e)) for a, e in self.factors if e > 0]
        den = [_render_power(f"ξ({a})", Fraction(-e)) for a, e in self.factors if e < 0]
        (m, c), = self.const.terms
        return _render_monomial(m, c, num, den)

    def __repr__(self) -> str:
        return f"XiExpr({self})"


def canonical(e: XiExpr) -> XiExpr:
    return e.canonical()


# ---------------------------------------------------------------------------
# truncated series


@dataclass(frozen=True)
class LaurentSeries:
    """Coefficients c_k of (s - point)^k for k = valuation, ..., valuation + len(coeffs) - 1."""

    point: Fraction
    valuation: int
    coeffs: tuple[ConstantExpr, ...]

    def coeff(self, k: int) -> ConstantExpr:
        i = k - self.valuation
        if i < 0:
            return ConstantExpr()
        if i >= len(self.coeffs):
            raise IndexError(f"order {k} beyond truncation")
        return self.coeffs[i]

    @property
    def top(self) -> int:
        return self.valuation + len(self.coeffs) - 1

    def leading_order(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return self.valuation + i
        return None

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        lo = min(self.valuation, other.valuation)
        hi = min(self.top, other.top)
        return LaurentSeries(self.point, lo, tuple(self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1)))

    def __mul__(self, other: LaurentSeries | ConstantExpr) -> LaurentSeries:
        if isinstance(other, ConstantExpr):
            return LaurentSeries(self.point, self.valuation, tuple(c * other for c in self.coeffs))
        n = min(len(self.coeffs), len(other.coeffs))
        out = []
        for k in range(n):
            acc = ConstantExpr()
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return LaurentSeries(self.point, self.valuation + other.valuation, tuple(out))

    def inverse(self) -> LaurentSeries:
        lead = self.coeffs[0]
        if lead.is_zero():
            raise ZeroDivisionError("leading coefficient vanishes")
        inv0 = lead.inverse()
        out = [inv0]
        for k in range(1, len(self.coeffs)):
            acc = ConstantExpr()
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(-(inv0 * acc))
        return LaurentSeries(self.point, -self.valuation, tuple(out))

    def truncate(self, top: int) -> LaurentSeries:
        return LaurentSeries(self.point, self.valuation, self.coeffs[: max(0, top - self.valuation + 1)])

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            k = self.valuation + i
            var = "u" if k == 1 else (f"u^{k}" if k else "")
            parts.append(f"({c})" + (f"·{var}" if var else ""))
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(u^{self.top + 1})  [u = s - {fmt_frac(self.point)}]"


def _xi_series(arg: AffineArg, s0: Fraction, n: int) -> LaurentSeries:
    """Series of xi(arg(s)) in u = s - s0 with n coefficients."""
    x = arg.at(s0)
    a = arg.slope
    if x == 1 or x == 0:
        sign = 1 if x == 1 else -1
        coeffs = [ConstantExpr.R() * (sign / a)]
        for k in range(n - 1):
            coeffs.append(ConstantExpr.gamma(k) * (sign**k * a**k))
        return LaurentSeries(s0, -1, tuple(coeffs))
    coeffs = [ConstantExpr.xi_taylor(x, j) * a**j for j in range(n)]
    return LaurentSeries(s0, 0, tuple(coeffs))


def _factor_order(arg: AffineArg, s0: Fraction) -> int:
    return -1 if arg.at(s0) in (0, 1) else 0


def half_point_args(e: XiExpr, s0: Number) -> list[AffineArg]:
    s0 = _frac(s0)
    return [a for a in e.args() if a.at(s0) == HALF]


def pole_order(e: XiExpr, s0: Number) -> int:
    """Order of e at s0: negative for a pole, positive for a zero."""
    s0 = _frac(s0)
    if half_point_args(e, s0):
        warnings.warn(f"argument equal to 1/2 in {e} at s={fmt_frac(s0)}", HalfPointWarning, stacklevel=2)
    return sum(ex * _factor_order(a, s0) for a, ex in e.factors)


def laurent(e: XiExpr, s0: Number, depth: int = 2, top: int = 1) -> LaurentSeries:
    """Expansion of e around s0 with coefficients of orders pole_order(e)..top."""
    s0 = _frac(s0)
    val = sum(ex * _factor_order(a, s0) for a, ex in e.factors)
    if val < -depth:
        raise ValueError(f"pole of order {-val} exceeds depth {depth}")
    n = top - val + 1
    if n <= 0:
        return LaurentSeries(s0, val, ())
    out = LaurentSeries(s0, 0, (e.const,) + (ConstantExpr(),) * (n - 1))
    for arg, ex in e.factors:
        ser = _xi_series(arg, s0, n)
        if ex < 0:
            ser = ser.inverse()
        for _ in range(abs(ex)):
            out = out * ser
    if out.valuation != val:
        raise ArithmeticError("valuation bookkeeping mismatch")
    return out


def residue_const(e: XiExpr, s0: Number) -> ConstantExpr:
    order = pole_order(e, s0)
    if order != -1:
        raise NotSimplePole(f"{e} has order {order} at s={fmt_frac(_frac(s0))}")
    return laurent(e, s0, depth=1, top=-1).coeff(-1)


def leading_coefficient(e: XiExpr, s0: Number) -> ConstantExpr:
    order = pole_order(e, s0)
    return laurent(e, s0, depth=max(2, -order), top=order).coeff(order)


def value_at(e: XiExpr, s0: Number) -> ConstantExpr:
    """Value of e at a point where it is holomorphic."""
    order = pole_order(e, s0)
    if order < 0:
        raise PoleAtEvaluationPoint(f"{e} has a pole of order {-order} at {fmt_frac(_frac(s0))}")
    if order > 0:
        return ConstantExpr()
    return leading_coefficient(e, s0)


# ---------------------------------------------------------------------------
# numeric model


@dataclass(frozen=True)
class ZetaModel:
    """A concrete curve: zeta(s) = P(q^{-s}) / ((1 - q^{-s})(1 - q^{1-s}))."""

    q: int
    g: int
    numerator: tuple[int, ...]
    sigma_values: tuple[tuple[tuple[str, Fraction], float], ...] = ()
    dps: int = 40
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if self.g < 1:
            raise ValueError("genus must be at least 1")
        if len(self.numerator) != 2 * self.g + 1 or self.numerator[0] != 1:
            raise ValueError("numerator must have degree 2g and constant term 1")
        with mpmath.workdps(self.dps):
            coeffs = list(reversed(self.numerator))
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=60)
            for r in roots:
                # reciprocal roots have modulus sqrt(q), so roots have modulus q^{-1/2}
                if abs(abs(r) - mpmath.sqrt(self.q) ** -1) > mpmath.mpf(10) ** -20:
                    raise ValueError(f"numerator root {r} violates |root| = q^(-1/2)")

    @classmethod
    def parse(cls, text: str) -> ZetaModel:
        """Parse 'q=2,g=1,num=1:0:2' (colon-separated numerator coefficients)."""
        fields = dict(part.split("=", 1) for part in text.split(",") if part.strip())
        num = tuple(int(x) for x in fields.get("num", "1:0:2").split(":"))
        return cls(q=int(fields.get("q", 2)), g=int(fields.get("g", 1)), numerator=num)

    @property
    def delta_abs(self) -> int | Fraction:
        return Fraction(self.q) ** (2 * self.g - 2)

    def label(self) -> str:
        return f"q={self.q},g={self.g},num={':'.join(map(str, self.numerator))}"

    def with_sigma(self, values: Mapping[tuple[str, Number], float]) -> ZetaModel:
        items = tuple(sorted(((k[0], _frac(k[1])), float(v)) for k, v in values.items()))
        return ZetaModel(self.q, self.g, self.numerator, items, self.dps)

    # evaluation -------------------------------------------------------------
    def _prec(self):
        # never lower the ambient precision; mpmath.diff raises it for its step
        return mpmath.workdps(max(self.dps, mpmath.mp.dps))

    def zeta(self, s):
        with self._prec():
            s = mpmath.mpmathify(s)
            t = mpmath.power(self.q, -s)
            p = mpmath.polyval(list(reversed(self.numerator)), t)
            den = (1 - t) * (1 - self.q * t)
            if den == 0:
                raise PoleAtEvaluationPoint(f"zeta pole at s={s}")
            return p / den

    def xi(self, s):
        with self._prec():
            s = mpmath.mpmathify(s)
            return mpmath.power(self.q, -(1 - self.g) * s) * self.zeta(s)

    def xi_float(self, s: float) -> float:
        t = self.q ** (-s)
        p = 0.0
        for c in reversed(self.numerator):
            p = p * t + c
        return self.q ** (-(1 - self.g) * s) * p / ((1 - t) * (1 - self.q * t))

    @cached_property
    def R(self):
        with mpmath.workdps(self.dps):
            q = mpmath.mpf(self.q)
            p = mpmath.polyval(list(reversed(self.numerator)), 1 / q)
            return mpmath.power(q, -(1 - self.g)) * p / ((1 - 1 / q) * mpmath.log(q))

    def laurent_at_one(self, k: int):
        """Coefficient of u^k in xi(1+u), by a Cauchy integral."""
        key = ("gamma", k)
        if key not in self._cache:
            with mpmath.workdps(self.dps):
                rad = mpmath.mpf("0.25")

                def integrand(theta):
                    u = rad * mpmath.expj(theta)
                    return self.xi(1 + u) * u ** (-k)

                val = mpmath.quad(integrand, [0, mpmath.pi, 2 * mpmath.pi]) / (2 * mpmath.pi)
                self._cache[key] = mpmath.re(val)
        return self._cache[key]

    def taylor(self, r: Fraction, j: int):
        key = ("taylor", r, j)
        if key not in self._cache:
            with mpmath.workdps(self.dps):
                x = mpmath.mpf(r.numerator) / r.denominator
                self._cache[key] = mpmath.diff(self.xi, x, j) / mpmath.factorial(j)
        return self._cache[key]

    @cached_property
    def A(self):
        return 2 * self.laurent_at_one(0) / self.R

    def atom_value(self, atom: Atom, torus: Mapping[int, float] | None = None):
        if atom.kind == "Q":
            return mpmath.power(self.q, 1 - self.g)
        if atom.kind == "R":
            return self.R
        if atom.kind == "A":
            return self.A
        if atom.kind == "gamma":
            return self.laurent_at_one(atom.args[0])
        if atom.kind == "xi":
            r = atom.args[0]
            return self.xi(mpmath.mpf(r.numerator) / r.denominator)
        if atom.kind == "dxi":
            return self.taylor(*atom.args)
        if atom.kind == "sigma":
            for key, v in self.sigma_values:
                if key == atom.args:
                    return mpmath.mpf(v)
            raise KeyError(f"no value bound for σ{atom.args}")
        if atom.kind in ("absr", "ln"):
            if torus is None or atom.args[0] not in torus:
                raise KeyError(f"no torus value for r{atom.args[0]}")
            val = mpmath.mpf(torus[atom.args[0]])
            return val if atom.kind == "absr" else mpmath.log(val)
        raise ValueError(atom.kind)


DEFAULT_MODEL = ZetaModel(q=2, g=1, numerator=(1, 0, 2))
SECOND_MODEL = ZetaModel(q=3, g=1, numerator=(1, -1, 3))
GENUS_TWO_MODEL = ZetaModel(q=2, g=2, numerator=(1, 0, 4, 0, 4))


def numeric_eval(e: XiExpr | ConstantExpr, s: Number | float | None, model: ZetaModel, torus: Mapping[int, float] | None = None):
    """High-precision value of a symbolic expression under a concrete model."""
    if isinstance(e, ConstantExpr):
        return e.evaluate(model, torus)
    val = e.const.evaluate(model, torus)
    for arg, ex in e.factors:
        if isinstance(s, (int, Fraction)):
            x = arg.at(s)
            if x in (0, 1):
                raise PoleAtEvaluationPoint(f"ξ({arg}) is singular at s={fmt_frac(_frac(s))}")
            x = _mp(x)
        else:
            x = _mp(arg.slope) * mpmath.mpf(s) + _mp(arg.intercept)
        val *= model.xi(x) ** ex
    return val


def numeric_residue(e: XiExpr, s0: Number, model: ZetaModel, order: int = 1):
    """Coefficient of (s-s0)^{-order} by a Cauchy integral on a small circle."""
    s0 = _frac(s0)
    with mpmath.workdps(model.dps):
        c = mpmath.mpf(s0.numerator) / s0.denominator
        rad = mpmath.mpf("0.05")

        def integrand(theta):
            u = rad * mpmath.expj(theta)
            return _eval_complex(e, c + u, model) * u ** order

        val = mpmath.quad(integrand, [0, mpmath.pi / 2, mpmath.pi, 3 * mpmath.pi / 2, 2 * mpmath.pi]) / (2 * mpmath.pi)
        return mpmath.re(val)


def _eval_complex(e: XiExpr, s, model: ZetaModel):
    val = e.const.evaluate(model)
    for arg, ex in e.factors:
        x = _mp(arg.slope) * s + _mp(arg.intercept)
        val *= model.xi(x) ** ex
    return val


def numeric_order(e: XiExpr, s0: Number, model: ZetaModel = DEFAULT_MODEL, h1: float = 1e-3, h2: float = 1e-5) -> float:
    """Order of vanishing at s0 estimated from the log-ratio slope in floats."""
    s0 = float(_frac(s0))

    def mag(h: float) -> float:
        total = 0.0
        for arg, ex in e.factors:
            x = float(arg.slope) * (s0 + h) + float(arg.intercept)
            total += ex * math.log(abs(model.xi_float(x)))
        return total

    return (mag(h2) - mag(h1)) / math.log(h2 / h1)


# ---------------------------------------------------------------------------
# divisor function


def local_zeta(s: Number, q_v: int) -> Fraction:
    s = _frac(s)
    if s.denominator != 1:
        raise ValueError("exact local zeta needs an integer exponent")
    return 1 / (1 - Fraction(q_v) ** (-int(s)))


def divisor_sigma(m: int, s: Number, q_v: int) -> Fraction:
    """sigma_v(m, s) = sum_{k=0}^m q_v^{k s} for m >= 0, and 0 for m < 0."""
    s = _frac(s)
    if s.denominator != 1:
        raise ValueError("exact divisor function needs an integer exponent")
    if m < 0:
        return Fraction(0)
    return sum((Fraction(q_v) ** (k * int(s)) for k in range(m + 1)), Fraction(0))


def divisor_sigma_closed(m: int, s: Number, q_v: int) -> Fraction:
    """zeta_v(-s) + zeta_v(s) q_v^{m s}; agrees with divisor_sigma for m >= -1, s != 0."""
    s = _frac(s)
    return local_zeta(-s, q_v) + local_zeta(s, q_v) * Fraction(q_v) ** (m * int(s))
