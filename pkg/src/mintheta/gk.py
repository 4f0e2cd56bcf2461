"""Characters, Gindikin-Karpelevich factors and constant-term audits.

The character of the degenerate principal series along P' pairs with a
coroot alpha^vee as s*c + k*c - ht(alpha), where c is the beta0'-coefficient
of alpha and k = <rho_P', beta0'^vee>. As a weight this is
s*omega_{beta0'} + rho_P' - rho_B.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from mintheta.parabolic import ParabolicPair, TripleSpec, distinguished_elements, find_triple, pair_for_type, q_levi
from mintheta.rootsys import Root, RootSystem, canonical_type_name, negate, rho_parabolic
from mintheta.tables import REDUCTIONS, Reduction
from mintheta.weyl import (
    DEFAULT_BUDGET,
    WeylElt,
    _adjugate,
    double_coset_min_reps,
    element_of,
    enumerate_group,
    identity,
    inversion_set,
    longest_element,
    parse_word,
    min_coset_reps,
    reflection,
)
from mintheta.zexpr import AffineArg, ConstantExpr, LaurentSeries, XiExpr, fmt_frac, laurent, pole_order, residue_const, value_at


class AuditFailed(AssertionError):
    """Raised when a constant-term audit finds an unexpected pole."""


class ReductionStepFailed(AssertionError):
    """Raised when a staged reduction clause fails."""


class RankBudgetExceeded(ValueError):
    """Raised when a torus-level analysis is requested above rank 3."""


@dataclass(frozen=True)
class AffineWeight:
    """chi(s) = base + s * direction, both in fundamental coordinates."""

    base: tuple[Fraction, ...]
    direction: tuple[Fraction, ...]

    def pair(self, root: Sequence[int]) -> AffineArg:
        return AffineArg(RootSystem.pair_weight(self.direction, root), RootSystem.pair_weight(self.base, root))

    def at(self, s: Fraction) -> tuple[Fraction, ...]:
        return tuple(b + s * d for b, d in zip(self.base, self.direction))


def chi_series(rs: RootSystem, pprime_levi: Sequence[int], beta0p: int) -> AffineWeight:
    """chi_{P',s} = s*omega_{beta0'} + rho_{P'} - rho_B."""
    if beta0p in pprime_levi:
        raise ValueError("beta0' must lie outside the Levi")
    rho_p = rho_parabolic(rs, pprime_levi)
    base = tuple(r - 1 for r in rho_p)
    return AffineWeight(base, rs.fundamental_weight(beta0p))


def pair_chi(p: ParabolicPair) -> AffineWeight:
    return chi_series(p.rs, p.levi_prime, p.beta0_prime)


def transformed_chi(chi: AffineWeight, w: WeylElt) -> AffineWeight:
    """w^{-1}(chi), via <w^{-1} chi, a^vee> = <chi, (w a)^vee> on simple coroots."""
    rs = w.rs
    base, direction = [], []
    for lab in rs.labels:
        arg = chi.pair(w(rs.simple_root(lab)))
        direction.append(arg.slope)
        base.append(arg.intercept)
    return AffineWeight(tuple(base), tuple(direction))


def gk_factor(rs: RootSystem, w: WeylElt, chi: AffineWeight) -> XiExpr:
    """Product over R_w of xi(x)/xi(x+1) with x = <chi, alpha^vee>."""
    factors: list[tuple[AffineArg, int]] = []
    for root in sorted(inversion_set(rs, w), key=lambda r: (sum(r), r)):
        x = chi.pair(root)
        if x.slope not in (0, 1, 2):
            raise ValueError(f"unexpected slope {x.slope} in a GK factor")
        factors += [(x, 1), (x.shift(1), -1)]
    return XiExpr(1, factors)


def levi_shift(rs: RootSystem, chi: AffineWeight, w: WeylElt, levi: Sequence[int], missing: int) -> AffineArg:
    """s_w with w^{-1}(chi)|_L = chi_{Q_w, s_w}, read off the missing simple coroot of Q_w."""
    sub = rs.subsystem(levi)
    k_q = rho_parabolic(sub, [x for x in levi if x != missing])[sub.index(missing)]
    return chi.pair(w(rs.simple_root(missing))).shift(1 - k_q)


def levi_top_point(rs: RootSystem, levi: Sequence[int], missing: int) -> Fraction:
    """<rho_Q, gamma^vee> inside L, where the Levi Eisenstein series has its top pole."""
    sub = rs.subsystem(levi)
    return rho_parabolic(sub, [x for x in levi if x != missing])[sub.index(missing)]


# ---------------------------------------------------------------------------
# constant-term audit


@dataclass
class CtTermReport:
    w: WeylElt
    q_levi: tuple[int, ...]
    q_is_full: bool
    s_w: AffineArg | None
    c_w: XiExpr
    pole_order_at_s0: int
    classification: str
    note: str = ""

    def to_dict(self, s0: Fraction) -> dict:
        return {
            "w": repr(self.w),
            "Q_w": "L" if self.q_is_full else list(self.q_levi),
            "s_w": None if self.s_w is None else str(self.s_w),
            "s_w(s0)": None if self.s_w is None else fmt_frac(self.s_w.at(s0)),
            "c_w": str(self.c_w),
            "pole_order": self.pole_order_at_s0,
            "class": self.classification,
            "note": self.note,
        }


def _term(rs: RootSystem, chi: AffineWeight, w: WeylElt, levi: Sequence[int], levi_p: Sequence[int], s0: Fraction) -> CtTermReport:
    ql = q_levi(w, tuple(levi), tuple(levi_p))
    full = ql == tuple(levi)
    shift = None
    missing = [a for a in levi if a not in ql]
    if len(missing) == 1:
        shift = levi_shift(rs, chi, w, levi, missing[0])
    c = gk_factor(rs, w, chi)
    return CtTermReport(w, ql, full, shift, c, pole_order(c, s0), "")


def ct_audit(t: TripleSpec | ParabolicPair) -> list[CtTermReport]:
    """Every w in Psi_{L',L}, with v0 and v1 identified and other terms classified."""
    triple = t if isinstance(t, TripleSpec) else None
    p = t.pair if triple else t
    rs, s0 = p.rs, p.params[0]
    levi, levi_p = p.levi, p.levi_prime
    chi = pair_chi(p)
    v0 = rs_v0(p)
    v1 = distinguished_elements(triple).v1 if triple else None
    reports = []
    for w in double_coset_min_reps(rs, levi_p, levi):
        rep = _term(rs, chi, w, levi, levi_p, s0)
        if w == v0:
            rep.classification = "v0-term"
        elif v1 is not None and w == v1:
            rep.classification = "v1-term"
        elif rep.q_is_full:
            rep.classification = "constant-function"
            rep.note = "character of L"
        elif rep.s_w is not None and rep.s_w.at(s0) == levi_top_point(rs, levi, next(a for a in levi if a not in rep.q_levi)):
            rep.classification = "constant-function"
            rep.note = "Levi series at its top pole"
        else:
            rep.classification = "holomorphic-other"
            rep.note = "Levi Eisenstein holomorphy taken from the literature"
        reports.append(rep)
    return reports


def rs_v0(p: ParabolicPair) -> WeylElt:
    return longest_element(p.rs, p.rs.labels) * longest_element(p.rs, p.levi)


@dataclass
class AuditSummary:
    passed: bool
    problems: list[str]
    reports: list[CtTermReport]


def audit_summary(t: TripleSpec) -> AuditSummary:
    reports = ct_audit(t)
    s0, s1 = t.params0[0], t.params1[0]
    problems = []
    v0s = [r for r in reports if r.classification == "v0-term"]
    v1s = [r for r in reports if r.classification == "v1-term"]
    if len(v0s) != 1 or len(v1s) != 1:
        problems.append("v0/v1 not uniquely present")
    else:
        if v0s[0].pole_order_at_s0 != -1 or not v0s[0].q_is_full:
            problems.append("v0-term is not a simple pole with Q = L")
        if v1s[0].pole_order_at_s0 != 0 or v1s[0].s_w is None or v1s[0].s_w.at(s0) != s1:
            problems.append("v1-term is not holomorphic with shift s1")
    for r in reports:
        if r.classification not in ("v0-term", "v1-term") and r.pole_order_at_s0 < 0:
            problems.append(f"{r.w!r} has a c-level pole of order {-r.pole_order_at_s0}")
    return AuditSummary(not problems, problems, reports)


# ---------------------------------------------------------------------------
# SL2 base case


def sl2_facts() -> dict:
    """Rank-one GK factor, its residue and Taylor data, and the Whittaker template."""
    from mintheta.rootsys import build_root_system

    rs = build_root_system("A", 1)
    chi = chi_series(rs, (), 1)
    c = gk_factor(rs, reflection(rs, 1), chi)
    expected = XiExpr.ratio([(1, 0)], [(1, 1)])
    ser = laurent(c, 0, top=1)
    torus = torus_series(rs, chi, [identity(rs), reflection(rs, 1)], Fraction(0), {1}, "staged", top=1)
    whittaker = {str(s): str(whittaker_template(Fraction(s))) for s in (1, 2, 3)}
    out = {
        "c(s)": str(c),
        "c(s) matches xi(s)/xi(s+1)": c == expected,
        "residue at 1": residue_const(c, 1),
        "c(0)": value_at(c, 0),
        "derivative at 0": ser.coeff(1),
        "torus order-1 term": torus.coeff(1),
        "whittaker": whittaker,
        "whittaker nonzero for s>0": all(not whittaker_template(Fraction(s)).is_zero() for s in (1, 2, 3)),
    }
    return out


def whittaker_template(s: Fraction) -> ConstantExpr:
    """q^{-s(1-g)} sigma(a,-s) / xi(s+1) = Q^{-s} sigma(a,-s) / xi(s+1)."""
    return ConstantExpr.Q(-s) * ConstantExpr.sigma("a", -s) / ConstantExpr.xi(s + 1)


# ---------------------------------------------------------------------------
# torus-decorated expansions (rank <= 3)


def _torus_factor(i: int, e0: Fraction, a: Fraction, s0: Fraction, n: int) -> LaurentSeries:
    """|r_i|^{e0 + a u} expanded in u."""
    coeffs = []
    base = ConstantExpr.torus_abs(i, e0) if e0 != 0 else ConstantExpr.const(1)
    term = base
    for k in range(n):
        coeffs.append(term)
        term = term * ConstantExpr.torus_ln(i) * (a / (k + 1))
    return LaurentSeries(s0, 0, tuple(coeffs))


def torus_series(
    rs: RootSystem,
    chi: AffineWeight,
    group: list[WeylElt],
    s0: Fraction,
    staged: set[int],
    convention: str,
    top: int = 0,
) -> LaurentSeries:
    """Sum over the group of c_w(s) |t|^{exponent_w(s)} expanded around s0.

    "normalized": exponent = w^{-1}chi(s) + rho in every coordinate.
    "staged": coordinates outside ``staged`` are frozen at s0 without the rho
    shift, staged coordinates carry w^{-1}chi(s) + 1.
    """
    if rs.rank > 3:
        raise RankBudgetExceeded("torus expansions are limited to rank <= 3")
    total: LaurentSeries | None = None
    for w in group:
        c = gk_factor(rs, w, chi)
        order = pole_order(c, s0)
        ser = laurent(c, s0, depth=2, top=top)
        n = top - order + 1
        mu = transformed_chi(chi, w)
        for i, lab in enumerate(rs.labels):
            e0 = mu.base[i] + s0 * mu.direction[i]
            if convention == "normalized":
                fac = _torus_factor(lab, e0 + 1, mu.direction[i], s0, n)
            elif lab in staged:
                fac = _torus_factor(lab, e0 + 1, mu.direction[i], s0, n)
            else:
                fac = _torus_factor(lab, e0, Fraction(0), s0, n)
            ser = ser * fac
        total = ser if total is None else total + ser
    assert total is not None
    return total


@dataclass
class GroupReport:
    character: tuple[Fraction, ...]
    members: list[WeylElt]
    individual_orders: list[int]
    grouped_order: int | None
    series: LaurentSeries

    def leading(self) -> ConstantExpr:
        assert self.grouped_order is not None
        return self.series.coeff(self.grouped_order)

    def to_dict(self) -> dict:
        return {
            "character": [fmt_frac(x) for x in self.character],
            "members": [repr(w) for w in self.members],
            "individual_orders": self.individual_orders,
            "grouped_order": self.grouped_order,
            "leading": None if self.grouped_order is None else str(self.leading()),
        }


def grouped_pole_analysis(rs: RootSystem, pprime: Sequence[int], beta0p: int, s0: Fraction, convention: str = "staged") -> list[GroupReport]:
    """Borel-level spherical constant term grouped by the character at s0."""
    if rs.rank > 3:
        raise RankBudgetExceeded("grouped pole analysis is limited to rank <= 3")
    s0 = Fraction(s0)
    chi = chi_series(rs, pprime, beta0p)
    reps = [w.inverse for w in min_coset_reps(rs, pprime)]
    reps.sort(key=lambda w: (w.length, w.word))
    groups: dict[tuple[Fraction, ...], list[WeylElt]] = {}
    for w in reps:
        groups.setdefault(transformed_chi(chi, w).at(s0), []).append(w)
    out = []
    for char, members in groups.items():
        orders = [pole_order(gk_factor(rs, w, chi), s0) for w in members]
        staged = set()
        for w in members:
            for lab in rs.labels:
                if w * reflection(rs, lab) in members:
                    staged.add(lab)
        top = min(orders) + 2
        ser = torus_series(rs, chi, members, s0, staged, convention, top=max(top, 0))
        out.append(GroupReport(char, members, orders, ser.leading_order(), ser))
    return out


# ---------------------------------------------------------------------------
# unique relevant element


@dataclass
class UniquenessReport:
    pair: str
    method: str
    passed: bool
    relevant: list[str]
    expected: str
    candidates: int
    steps: list[dict] = field(default_factory=list)
    duration_ms: int = 0


def _inverse_batch(rs: RootSystem, mats: np.ndarray) -> np.ndarray:
    adj, det = _adjugate(rs)
    cartan = np.array(rs.cartan, dtype=np.int64)
    num = np.einsum("ij,mkj,kl->mil", adj, mats, cartan)
    return num // det


def relevant_candidates_bruteforce(p: ParabolicPair, beta: int, budget: int = DEFAULT_BUDGET) -> list[WeylElt]:
    """Psi_{L',L_beta} by filtering the full group."""
    rs = p.rs
    group = enumerate_group(rs, budget)
    inv = _inverse_batch(rs, group)
    ok = group[:, :, rs.index(beta)].sum(axis=1) > 0
    for lab in p.levi_prime:
        ok &= inv[:, :, rs.index(lab)].sum(axis=1) > 0
    return sorted((WeylElt(rs, m) for m in group[ok]), key=lambda w: (w.length, w.word))


def relevant_candidates_orbit(p: ParabolicPair, beta: int) -> list[WeylElt]:
    """The same set from inverses of W/W_{L'} representatives, filtered by w(beta) > 0."""
    rs = p.rs
    reps = [w.inverse for w in min_coset_reps(rs, p.levi_prime)]
    out = [w for w in reps if rs.is_positive(w(rs.simple_root(beta)))]
    return sorted(out, key=lambda w: (w.length, w.word))


def relevant_elements(p: ParabolicPair, candidates: list[WeylElt], beta: int, s0: Fraction) -> list[WeylElt]:
    rs = p.rs
    chi = pair_chi(p)
    i_p = rs.index(p.beta0_prime)
    out = []
    for v in candidates:
        img = v(rs.simple_root(beta))
        outside = rs.is_positive(img) and img[i_p] > 0
        if outside and pole_order(gk_factor(rs, v, chi), s0) < 0:
            out.append(v)
    return out


def relevant_uniqueness_bruteforce(p: ParabolicPair, s0: Fraction | None = None, budget: int = DEFAULT_BUDGET) -> UniquenessReport:
    start = time.perf_counter()
    s0 = p.params[0] if s0 is None else s0
    beta = p.beta0
    brute = relevant_candidates_bruteforce(p, beta, budget)
    orbit = relevant_candidates_orbit(p, beta)
    rel = relevant_elements(p, brute, beta, s0)
    expected = rs_v0(p) * reflection(p.rs, beta)
    passed = rel == [expected] and set(brute) == set(orbit)
    return UniquenessReport(
        pair=p.label,
        method="brute-force",
        passed=passed,
        relevant=[repr(v) for v in rel],
        expected=repr(expected),
        candidates=len(brute),
        steps=[{"clause": "brute-force and orbit candidate sets agree", "ok": set(brute) == set(orbit)}],
        duration_ms=int((time.perf_counter() - start) * 1000),
    )


def _step(steps: list[dict], clause: str, ok: bool, detail: str = "") -> None:
    steps.append({"clause": clause, "ok": bool(ok), "detail": detail})


def _diagram_flip(rs: RootSystem) -> dict[int, int]:
    """Label permutation a -> a' with alpha_{a'} = -w0(alpha_a)."""
    w0 = longest_element(rs, rs.labels)
    return {a: rs.labels[negate(w0(rs.simple_root(a))).index(1)] for a in rs.labels}


def _relabel(word: str | None, perm: dict[int, int] | None) -> tuple[int, ...] | None:
    if word is None:
        return None
    labels = parse_word(word)
    return labels if perm is None else tuple(perm[x] for x in labels)


def staged_reduction(t: TripleSpec, budget: int = DEFAULT_BUDGET) -> UniquenessReport:
    """Reduce to (L-hat, M-hat) with the tabulated u and recurse."""
    return _staged(t.pair, REDUCTIONS[t.key], budget, None)


def _staged(p: ParabolicPair, red: Reduction, budget: int, perm: dict[int, int] | None) -> UniquenessReport:
    start = time.perf_counter()
    rs, s0 = p.rs, p.params[0]
    chi = pair_chi(p)
    levi_p = p.levi_prime
    hat_node = red.hat_node if perm is None else perm[red.hat_node]
    hat = tuple(x for x in rs.labels if x != hat_node)
    steps: list[dict] = []
    psi = double_coset_min_reps(rs, levi_p, hat)
    u = element_of(rs, _relabel(red.u_word, perm))
    _step(steps, "u lies in Psi_{L',L-hat}", u in psi, f"|Psi| = {len(psi)}")
    sub = rs.subsystem(hat)
    _step(steps, "L-hat has the tabulated type", canonical_type_name(sub.name) == canonical_type_name(red.hat_types[0]), sub.name)

    term_u = _term(rs, chi, u, hat, levi_p, s0)
    _step(steps, "(a) c_u holomorphic at s0", term_u.pole_order_at_s0 >= 0, str(term_u.c_w))
    if red.u_factor is not None:
        _step(steps, "c_u equals the tabulated factor", term_u.c_w == red.u_factor, str(red.u_factor))
    missing = [a for a in hat if a not in term_u.q_levi]
    m_hat_type = rs.subsystem(term_u.q_levi).name
    _step(
        steps,
        "(b) Q_u is the parabolic of L-hat with Levi M-hat",
        len(missing) == 1 and canonical_type_name(m_hat_type) == canonical_type_name(red.hat_types[1]),
        f"Levi {m_hat_type}, missing {missing}",
    )
    target = pair_for_type(*red.hat_types)
    s_hat = target.params[0]
    shift_ok = term_u.s_w is not None and term_u.s_w.at(s0) == s_hat
    shown = fmt_frac(term_u.s_w.at(s0)) if term_u.s_w is not None else None
    _step(steps, "(c) shift of u lands on the (L-hat, M-hat) parameter", shift_ok, f"s_u = {term_u.s_w} -> {shown}")

    constant_terms = []
    for w in psi:
        if w == u:
            continue
        term = _term(rs, chi, w, hat, levi_p, s0)
        if term.pole_order_at_s0 < 0:
            _step(steps, f"c_w holomorphic for {w!r}", False, str(term.c_w))
        if term.q_is_full or term.s_w is None:
            continue
        gamma = next(a for a in hat if a not in term.q_levi)
        if term.s_w.at(s0) == levi_top_point(rs, hat, gamma):
            constant_terms.append((w, term))
    detail = "; ".join(f"{w!r}: s_w = {tm.s_w} -> {fmt_frac(tm.s_w.at(s0))}" for w, tm in constant_terms)
    _step(steps, "(d) a u1-term is a constant function at its evaluation point", bool(constant_terms), detail)
    if red.u1_word is not None:
        u1 = element_of(rs, _relabel(red.u1_word, perm))
        _step(steps, "tabulated u1 is that constant term", any(w == u1 for w, _ in constant_terms), repr(u1))

    # the inner problem: L-hat with parabolic Q_u, same beta
    inner_pair = ParabolicPair(sub, p.beta0, (s_hat, target.params[1]), f"{red.hat_types[0]},{red.hat_types[1]}")
    _step(steps, "inner pair has beta' equal to the Levi-missing root of Q_u", [inner_pair.beta0_prime] == missing, f"beta = {p.beta0}")
    if sub.name.startswith("E"):
        inner_key = next(t.key for t in _triples() if canonical_type_name(t.rs.name) == canonical_type_name(sub.name) and canonical_type_name(t.pair.levi_type) == canonical_type_name(red.hat_types[1]))
        catalog_beta = find_triple(inner_key).beta0
        inner_perm = None if catalog_beta == p.beta0 else _diagram_flip(sub)
        inner = _staged(inner_pair, REDUCTIONS[inner_key], budget, inner_perm)
    else:
        inner = relevant_uniqueness_bruteforce(inner_pair, s_hat, budget)
    _step(steps, f"recursion into ({red.hat_types[0]},{red.hat_types[1]}) by {inner.method}", inner.passed, f"relevant {inner.relevant}")
    for st in inner.steps:
        steps.append({**st, "clause": "  " + st["clause"]})

    expected = rs_v0(p) * reflection(rs, p.beta0)
    relevant: list[str] = []
    if inner.passed and len(inner.relevant) == 1:
        v_hat = element_of(rs, (rs_v0(inner_pair) * reflection(sub, p.beta0)).word)
        v = u * v_hat
        relevant = [repr(v)]
        _step(steps, "u times the inner relevant element equals v0 s_beta", v == expected, repr(expected))
    passed = all(st["ok"] for st in steps)
    return UniquenessReport(
        pair=p.label,
        method="staged",
        passed=passed,
        relevant=relevant,
        expected=repr(expected),
        candidates=len(psi),
        steps=steps,
        duration_ms=int((time.perf_counter() - start) * 1000),
    )


def _triples():
    from mintheta.parabolic import triple_catalog

    return triple_catalog()


def relevant_uniqueness(t: TripleSpec | ParabolicPair, budget: int = DEFAULT_BUDGET) -> UniquenessReport:
    if isinstance(t, TripleSpec) and t.key in REDUCTIONS:
        return staged_reduction(t, budget)
    p = t.pair if isinstance(t, TripleSpec) else t
    return relevant_uniqueness_bruteforce(p, budget=budget)
