"""The check suite behind ``mintheta verify``.

Each group returns a list of ``CheckResult`` in a fixed order so reports are
byte-deterministic for a fixed configuration.
"""

from __future__ import annotations

import fnmatch
import time
from fractions import Fraction
from typing import Callable, Sequence

from mintheta.decomp import (
    NUMERIC_MODELS,
    CheckResult,
    c_GL,
    check,
    cv0,
    d3_analysis,
    d_n_expected,
    expand_theta,
    transition_kappa,
    verify_gk_identities,
)
from mintheta.gk import audit_summary, gk_factor, pair_chi, relevant_uniqueness, sl2_facts
from mintheta.parabolic import (
    LemmaCheckFailed,
    TripleSpec,
    distinguished_elements,
    find_pair,
    rho_parabolic,
    tilde_beta,
    triple_catalog,
    weak_pair_catalog,
)
from mintheta.rootsys import canonical_type_name
from mintheta.tables import (
    CV0_EXCEPTIONAL,
    CV0_WEAK,
    CV1_EXCEPTIONAL,
    EXPANSION_E6_D5,
    EXPANSION_E7_D6_BOUNDARY,
    V1_WORDS,
    V1_WORDS_REVERSED,
    WEAK_POLE_ORDER,
    cv0_d,
    cv1_d,
)
from mintheta.weyl import DEFAULT_BUDGET, element_of
from mintheta.zexpr import ConstantExpr, XiExpr, ZetaModel, fmt_frac, pole_order, residue_const, value_at

GROUPS = ("table", "v-words", "gk", "relevant", "transition", "decomp", "d3", "sl2")


def _is_d(t: TripleSpec) -> bool:
    return t.key.startswith("D")


def _cv0_expected(t: TripleSpec) -> XiExpr:
    return cv0_d(int(t.key[1:])) if _is_d(t) else CV0_EXCEPTIONAL[t.key]


def _cv1_expected(t: TripleSpec) -> ConstantExpr:
    return cv1_d(int(t.key[1:])) if _is_d(t) else CV1_EXCEPTIONAL[t.key]


# ---------------------------------------------------------------------------
# tables


def table_checks(**_) -> list[CheckResult]:
    out = []
    for t in triple_catalog():
        start = time.perf_counter()
        p, sub = t.pair, t.sub_pair
        k1 = rho_parabolic(sub.rs, sub.levi)[sub.rs.index(t.beta1)]
        cols = {
            "rho_P": (t.k0, p.k),
            "rho_Q": (t.k1, k1),
            "d0": (t.params0[1], p.derived_d0(t.params0[0])),
            "d1": (t.params1[1], sub.derived_d0(t.params1[0])),
            "beta1 joined to beta0": (True, t.beta1_connected()),
            "tilde beta height 2k-1": (2 * t.k0 - 1, tilde_beta(p).height),
            "c_v0 pole at s0": (-1, pole_order(cv0(p), t.params0[0])),
            "(G1,M1) type": (_canon(t.names[1], t.names[2]), _canon(sub.rs.name, sub.levi_type)),
        }
        bad = [k for k, (e, c) in cols.items() if e != c]
        detail = "; ".join(f"{k}={_fmt(c)}" for k, (_, c) in cols.items())
        if t.printed_params1 is not None:
            detail += f"; printed (s1,d1)=({_fmt(t.printed_params1[0])},{_fmt(t.printed_params1[1])}) differs from the derived d1"
        out.append(check(f"table.triple.{t.key}", "all columns", "all columns" if not bad else f"mismatch {bad}", "table:triples", not bad, detail, start))
    for t in triple_catalog():
        start = time.perf_counter()
        got = cv0(t.pair)
        exp = _cv0_expected(t)
        order = pole_order(got, t.params0[0])
        out.append(check(f"table.cv0.{t.key}", exp, got, "table:c_v0", exp == got and order == -1, f"pole order {order}", start))
    for p in weak_pair_catalog():
        start = time.perf_counter()
        got = cv0(p)
        exp = CV0_WEAK[p.label]
        order = pole_order(got, p.params[0])
        want = WEAK_POLE_ORDER[p.label]
        out.append(check(f"table.cv0.{p.label}", exp, got, "table:c_v0-weak", exp == got and order == want, f"pole order {order} (stated {want})", start))
    for t in triple_catalog():
        start = time.perf_counter()
        d = distinguished_elements(t)
        got = value_at(gk_factor(t.rs, d.v1, pair_chi(t.pair)), t.params0[0])
        out.append(check(f"table.cv1.{t.key}", _cv1_expected(t), got, "table:c_v1", start=start))
    return out


def _canon(g: str, l: str) -> str:
    return f"{canonical_type_name(g)},{canonical_type_name(l)}"


def _fmt(x) -> str:
    return fmt_frac(x) if isinstance(x, Fraction) else str(x)


# ---------------------------------------------------------------------------
# v1 words and the distinguished-element clauses


def vword_checks(**_) -> list[CheckResult]:
    out = []
    for t in triple_catalog():
        start = time.perf_counter()
        try:
            d = distinguished_elements(t)
        except LemmaCheckFailed as exc:
            out.append(check(f"v-words.{t.key}", "four clauses", str(exc), "lemma:v0-v1", False, start=start))
            continue
        key = "D" if _is_d(t) else t.key
        printed = V1_WORDS[key].replace(" ", "")
        word = printed[::-1] if key in V1_WORDS_REVERSED else printed
        got = element_of(t.rs, word)
        detail = "; ".join(f"{k}: ok" for k in d.clauses) + f"; v1 = {d.v1!r}"
        if key in V1_WORDS_REVERSED:
            literal = element_of(t.rs, printed)
            detail += f"; printed w({printed}) read right to left (literal reading equals v1^-1: {literal == d.v1.inverse})"
        out.append(check(f"v-words.{t.key}", f"w({word})", repr(d.v1), "lemma:v0-v1", got == d.v1, detail, start))
    return out


# ---------------------------------------------------------------------------
# GK identities and audits


def gk_checks(models: Sequence[ZetaModel] = NUMERIC_MODELS, **_) -> list[CheckResult]:
    out = []
    for t in triple_catalog():
        out.extend(verify_gk_identities(t, models))
    for t in triple_catalog():
        start = time.perf_counter()
        s = audit_summary(t)
        classes = ",".join(r.classification for r in s.reports)
        out.append(check(f"ct.audit.{t.key}", "ok", "ok" if s.passed else "; ".join(s.problems), "thm:constant-term", s.passed,
                         f"{len(s.reports)} terms: {classes}; Levi holomorphy of the other terms is externally sourced", start))
    start = time.perf_counter()
    t = next(x for x in triple_catalog() if x.key == "E7/E6")
    res = residue_const(cv0(t.pair), t.params0[0])
    exp = ConstantExpr.R() * ConstantExpr.xi(5) * ConstantExpr.xi(4) / (ConstantExpr.xi(6) * ConstantExpr.xi(10) * ConstantExpr.xi(14))
    out.append(check("gk.residue.E7/E6", exp, res, "table:c_v0", start=start))
    return out


# ---------------------------------------------------------------------------
# unique relevant element


def relevant_checks(budget: int = DEFAULT_BUDGET, **_) -> list[CheckResult]:
    out = []
    for t in triple_catalog():
        if _is_d(t) and int(t.key[1:]) > 7:
            continue
        r = relevant_uniqueness(t, budget)
        detail = f"{r.method}; {r.candidates} candidates; " + "; ".join(f"{s['clause'].strip()}: {'ok' if s['ok'] else 'FAIL'}" for s in r.steps)
        out.append(CheckResult(f"relevant.{t.key}", "pass" if r.passed else "fail", r.expected, ", ".join(r.relevant), "prop:unique-relevant", r.duration_ms, detail))
    for p in weak_pair_catalog():
        if p.label == "D3,D2":
            continue
        r = relevant_uniqueness(p, budget)
        out.append(CheckResult(f"relevant.{p.label}", "pass" if r.passed else "fail", r.expected, ", ".join(r.relevant), "prop:unique-relevant", r.duration_ms,
                               f"{r.method}; {r.candidates} candidates"))
    return out


# ---------------------------------------------------------------------------
# transitions


TRANSITIONS = [(f"D{n}", f"A{n - 1}", f"D{n - 1}") for n in range(4, 9)] + [("E6", "A5", "D5"), ("E7", "D6", "E6")]


def transition_checks(**_) -> list[CheckResult]:
    out = []
    for key in TRANSITIONS:
        start = time.perf_counter()
        tr = transition_kappa(*key)
        n = int(key[0][1:])
        want = Fraction(n - 4, 2) if key[0].startswith("D") else Fraction(1, 2)
        e = tr.kappa.delta_exponent()
        steps = "; ".join(f"{s.id}: {s.status}" for s in tr.steps)
        out.append(check(f"transition.{'/'.join(key)}", f"|Δ|^{fmt_frac(want)}", f"|Δ|^{fmt_frac(e)}" if e is not None else str(tr.kappa),
                         "thm:transition", e == want and tr.passed, steps, start))
    return out


# ---------------------------------------------------------------------------
# expansions


def _top_level(tree) -> dict[str, Fraction]:
    """Leaf exponents keyed by functional, root tag dropped, boundary maps B and T not spelled out."""
    tag = f"[{tree.root}]"
    out = {}
    for leaf in tree.children:
        name = leaf.functional.replace(tag, "")
        out[name + ("∘ι" if "ι" in leaf.path else "")] = leaf.exponent
    return out


def decomp_checks(**_) -> list[CheckResult]:
    out = []
    for n in range(4, 9):
        start = time.perf_counter()
        tree = expand_theta(f"D{n},D{n - 1}", "full")
        got = tree.exponents()
        exp = d_n_expected(n)
        non_terminal = len(tree.children) - 1
        out.append(check(f"decomp.D{n}", exp, got, "thm:dn-recursion", got == exp and non_terminal == 2 * (n - 3), f"{non_terminal} non-terminal leaves; {tree}", start))
    start = time.perf_counter()
    tree = expand_theta("E6,D5", 1, transitions=True)
    got = _top_level(tree)
    out.append(check("decomp.E6/D5", EXPANSION_E6_D5, got, "expansion:e6-d5", start=start, detail=str(tree)))
    start = time.perf_counter()
    tree = expand_theta("E7,D6", 1, transitions=True)
    got = _top_level(tree)
    sub = {k: got.get(k) for k in EXPANSION_E7_D6_BOUNDARY}
    out.append(check("decomp.E7/D6", EXPANSION_E7_D6_BOUNDARY, sub, "expansion:e7-d6", start=start, detail=str(tree)))
    start = time.perf_counter()
    tree = expand_theta("E8,E7", 2)
    exp = {
        "θ_X[E8,E7]": Fraction(-31, 2),
        "θ_Y[E8,E7]∘ι": Fraction(0),
        "p_Y[E8,E7]∘ι": Fraction(0),
        "θ_X[E7,E6]∘B": Fraction(1, 2),
        "p_X[E7,E6]∘B": Fraction(1, 2),
        "θ[E6,D5]∘B^(2)": Fraction(1),
    }
    out.append(check("decomp.E8/E7", exp, tree.exponents(), "expansion:e8-e7", start=start, detail=str(tree)))
    for key, n_exp in (("E6,A5", Fraction(-13, 2)), ("E7,D6", Fraction(-19, 2)), ("E8,E7", Fraction(-31, 2))):
        start = time.perf_counter()
        p = find_pair(key)
        tree = expand_theta(key, 1)
        got = tree.children[0].exponent
        out.append(check(f"decomp.H-exponent.{key}", n_exp, got, "thm:main-decomposition", start=start, detail=f"dim V = {p.dim_v}, n = {p.heisenberg_n}"))
    return out


# ---------------------------------------------------------------------------
# (D3, D2) and SL2


def d3_checks(**_) -> list[CheckResult]:
    rep = d3_analysis("staged")
    out = list(rep.checks)
    norm = d3_analysis("normalized")
    out.extend(c for c in norm.checks if c.id == "d3.torus-profile.normalized")
    return out


def sl2_checks(**_) -> list[CheckResult]:
    f = sl2_facts()
    return [
        check("sl2.c-function", True, f["c(s) matches xi(s)/xi(s+1)"], "prop:sl2", detail=f["c(s)"]),
        check("sl2.residue", ConstantExpr.R() / ConstantExpr.xi(2), f["residue at 1"], "prop:sl2"),
        check("sl2.c(0)", ConstantExpr.const(-1), f["c(0)"], "prop:sl2"),
        check("sl2.c'(0)", ConstantExpr.A(), f["derivative at 0"], "prop:sl2"),
        check("sl2.torus", ConstantExpr.torus_abs(1) * (ConstantExpr.torus_ln(1) * 2 + ConstantExpr.A()), f["torus order-1 term"], "lemma:sl2-torus"),
        check("sl2.whittaker", True, f["whittaker nonzero for s>0"], "prop:sl2", detail=str(f["whittaker"])),
    ]


RUNNERS: dict[str, Callable[..., list[CheckResult]]] = {
    "table": table_checks,
    "v-words": vword_checks,
    "gk": gk_checks,
    "relevant": relevant_checks,
    "transition": transition_checks,
    "decomp": decomp_checks,
    "d3": d3_checks,
    "sl2": sl2_checks,
}


def run_suite(groups: Sequence[str] = GROUPS, filters: Sequence[str] = (), models: Sequence[ZetaModel] = NUMERIC_MODELS, budget: int = DEFAULT_BUDGET) -> list[CheckResult]:
    results: list[CheckResult] = []
    for g in groups:
        results.extend(RUNNERS[g](models=models, budget=budget))
    if filters:
        results = [r for r in results if any(fnmatch.fnmatch(r.id, f) for f in filters)]
    ids = [r.id for r in results]
    if len(ids) != len(set(ids)):
        raise AssertionError("duplicate check ids")
    return results
