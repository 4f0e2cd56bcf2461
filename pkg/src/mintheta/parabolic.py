"""Maximal parabolic pairs (G, L), admissible triples (G, L, M) and their data.

A pair is fixed by a root system and the simple label beta0 removed from the
Dynkin diagram. The catalog holds the parameters (s0, d0) and (s1, d1) as
tabulated; every other column is recomputed from root data and compared.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from mintheta.rootsys import Root, RootSystem, build_root_system, canonical_type_name, height, negate, rho_parabolic
from mintheta.weyl import WeylElt, double_coset_min_reps, longest_element, maps_into_positive, reflection

Params = tuple[Fraction, Fraction]


class NotAdmissibleType(ValueError):
    """Raised when an S/H-only construction meets a pair of other type."""


class LemmaCheckFailed(AssertionError):
    """Raised when a clause about v0 or v1 fails; the message names the clause."""


def _params(s: Fraction | int | str, d: Fraction | int | str) -> Params:
    return (Fraction(s), Fraction(d))


@dataclass(frozen=True)
class ParabolicPair:
    """A maximal parabolic P = LV of G given by the removed simple label beta0."""

    rs: RootSystem
    beta0: int
    params: Params | None = None
    name: str = ""

    @property
    def levi(self) -> tuple[int, ...]:
        return tuple(x for x in self.rs.labels if x != self.beta0)

    @cached_property
    def nilrad_roots(self) -> tuple[Root, ...]:
        i = self.rs.index(self.beta0)
        return tuple(r for r in self.rs.positive_roots if r[i] >= 1)

    @cached_property
    def grading(self) -> dict[int, int]:
        i = self.rs.index(self.beta0)
        return dict(sorted(Counter(r[i] for r in self.nilrad_roots).items()))

    @property
    def pair_type(self) -> str:
        top = max(self.grading)
        if top == 1:
            return "S"
        if top == 2 and self.grading[2] == 1:
            return "H"
        return "other"

    @property
    def dim_v(self) -> int:
        return len(self.nilrad_roots)

    @property
    def heisenberg_n(self) -> int | None:
        """n with dim V = 2n + 1 for H-pairs."""
        return (self.dim_v - 1) // 2 if self.pair_type == "H" else None

    @property
    def levi_type(self) -> str:
        return self.rs.subsystem(self.levi).name

    @property
    def label(self) -> str:
        return self.name or f"{self.rs.name},{self.levi_type}"

    @cached_property
    def k(self) -> Fraction:
        """<rho_P, beta0^vee>."""
        return rho_parabolic(self.rs, self.levi)[self.rs.index(self.beta0)]

    @cached_property
    def beta0_prime(self) -> int:
        """The simple label beta0' with alpha_{beta0'} = -w0(alpha_{beta0})."""
        img = negate(longest_element(self.rs, self.rs.labels)(self.rs.simple_root(self.beta0)))
        return self.rs.labels[img.index(1)]

    @property
    def levi_prime(self) -> tuple[int, ...]:
        return tuple(x for x in self.rs.labels if x != self.beta0_prime)

    def with_params(self, s0: Fraction | int | str, d0: Fraction | int | str) -> ParabolicPair:
        return ParabolicPair(self.rs, self.beta0, _params(s0, d0), self.name)

    def derived_d0(self, s0: Fraction) -> Fraction:
        """d0 from -s0 + <rho_P, beta0^vee> = d0 + 1."""
        return -Fraction(s0) + self.k - 1

    def to_dict(self) -> dict:
        out = {
            "pair": self.label,
            "group": self.rs.name,
            "beta0": self.beta0,
            "levi": self.levi_type,
            "type": self.pair_type,
            "dim_V": self.dim_v,
            "grading": {str(k): v for k, v in self.grading.items()},
            "rho_pairing": str(self.k),
        }
        if self.heisenberg_n is not None:
            out["n"] = self.heisenberg_n
        if self.params:
            out["s0"], out["d0"] = str(self.params[0]), str(self.params[1])
        return out


def classify_pair(rs: RootSystem, beta0: int, params: Params | None = None, name: str = "") -> ParabolicPair:
    rs.index(beta0)
    return ParabolicPair(rs, beta0, params, name)


@dataclass(frozen=True)
class TildeBeta:
    root: Root

    @property
    def height(self) -> int:
        return height(self.root)


def tilde_beta(p: ParabolicPair) -> TildeBeta:
    """s_{beta0}(alpha0): alpha0 for S-pairs and alpha0 - beta0 for H-pairs."""
    if p.pair_type not in ("S", "H"):
        raise NotAdmissibleType(f"{p.label} is neither an S- nor an H-pair")
    root = reflection(p.rs, p.beta0)(p.rs.highest_root)
    tb = TildeBeta(root)
    if tb.height != 2 * p.k - 1:
        raise LemmaCheckFailed(f"height of tilde beta {tb.height} != 2k-1 for {p.label}")
    w0 = longest_element(p.rs, p.rs.labels)
    if w0(root) != negate(root):
        raise LemmaCheckFailed(f"w0 does not negate tilde beta for {p.label}")
    return tb


@dataclass(frozen=True)
class TripleSpec:
    """A row (G, L, M): beta1 is the unique simple root of L joined to beta0."""

    key: str
    rs: RootSystem
    beta0: int
    beta1: int
    params0: Params
    params1: Params
    k0: Fraction
    k1: Fraction
    printed_params1: Params | None = None
    names: tuple[str, str, str] = ("", "", "")

    @property
    def pair(self) -> ParabolicPair:
        return ParabolicPair(self.rs, self.beta0, self.params0, f"{self.names[0]},{self.names[1]}")

    @property
    def levi(self) -> tuple[int, ...]:
        return self.pair.levi

    @property
    def m_levi(self) -> tuple[int, ...]:
        return tuple(x for x in self.levi if x != self.beta1)

    @cached_property
    def sub_pair(self) -> ParabolicPair:
        """(G1, M1) = (L, M) as a pair inside the Levi sub-system."""
        return ParabolicPair(self.rs.subsystem(self.levi), self.beta1, self.params1, f"{self.names[1]},{self.names[2]}")

    @property
    def label(self) -> str:
        return f"{self.names[0]},{self.names[1]}"

    def beta1_connected(self) -> bool:
        i, j = self.rs.index(self.beta0), self.rs.index(self.beta1)
        neighbours = [self.rs.labels[t] for t in range(self.rs.rank) if self.rs.cartan[i][t] == -1]
        return neighbours == [self.beta1] and self.rs.cartan[i][j] == -1

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "G": self.names[0],
            "L": self.names[1],
            "M": self.names[2],
            "beta0": self.beta0,
            "beta1": self.beta1,
            "s0,d0": [str(x) for x in self.params0],
            "s1,d1": [str(x) for x in self.params1],
            "rho_P": str(self.k0),
            "rho_Q": str(self.k1),
        }


def _d_row(n: int) -> TripleSpec:
    return TripleSpec(
        key=f"D{n}",
        rs=build_root_system("D", n),
        beta0=1,
        beta1=2,
        params0=_params(1, n - 3),
        params1=_params(1, n - 4),
        k0=Fraction(n - 1),
        k1=Fraction(n - 2),
        printed_params1=_params(1, n - 2),
        names=(f"D{n}", f"D{n - 1}", f"D{n - 2}"),
    )


_E_ROWS = (
    # key, group, beta0, beta1, (s0, d0), (s1, d1), k0, k1, names
    ("E6/D5", ("E", 6), 6, 5, (3, 2), (2, 1), 6, 4, ("E6", "D5", "A4")),
    ("E7/E6", ("E", 7), 7, 6, (5, 3), (3, 2), 9, 6, ("E7", "E6", "D5")),
    ("E6/A5", ("E", 6), 2, 4, ("7/2", 1), (2, 0), "11/2", 3, ("E6", "A5", "A2xA2")),
    ("E7/D6", ("E", 7), 1, 3, ("11/2", 2), (3, 1), "17/2", 5, ("E7", "D6", "A5")),
    ("E8/E7", ("E", 8), 8, 7, ("19/2", 4), (5, 3), "29/2", 9, ("E8", "E7", "E6")),
)


DEFAULT_D_RANKS = tuple(range(4, 9))


@lru_cache(maxsize=None)
def triple_catalog(d_ranks: tuple[int, ...] = DEFAULT_D_RANKS) -> tuple[TripleSpec, ...]:
    """The D_n rows for the requested ranks followed by the five exceptional rows."""
    rows = [_d_row(n) for n in d_ranks]
    for key, (fam, rank), b0, b1, p0, p1, k0, k1, names in _E_ROWS:
        rows.append(
            TripleSpec(
                key=key,
                rs=build_root_system(fam, rank),
                beta0=b0,
                beta1=b1,
                params0=_params(*p0),
                params1=_params(*p1),
                k0=Fraction(k0),
                k1=Fraction(k1),
                names=names,
            )
        )
    return tuple(rows)


def find_triple(key: str) -> TripleSpec:
    key = key.replace(":", "/").replace(",", "/").upper()
    for t in triple_catalog():
        if t.key == key:
            return t
    if key.startswith("D") and key[1:].split("/")[0].isdigit():
        n = int(key[1:].split("/")[0])
        if n >= 4:
            return _d_row(n)
    raise KeyError(f"no catalog triple {key!r}")


# weakly admissible pairs: (name, group, beta0, (s0, d0))
_WEAK = (
    ("A5,A2xA2", ("A", 5), 3, (2, 0)),
    ("D3,D2", ("A", 3), 2, (1, 0)),
    ("D5,A4", ("D", 5), 5, (2, 1)),
    ("D6,A5", ("D", 6), 6, (3, 1)),
)


@lru_cache(maxsize=None)
def weak_pair_catalog() -> tuple[ParabolicPair, ...]:
    """The weakly admissible auxiliary pairs; (D3, D2) uses A3 labels with beta0 = 2."""
    return tuple(
        ParabolicPair(build_root_system(fam, rank), b0, _params(*p), name) for name, (fam, rank), b0, p in _WEAK
    )


def d_pair(n: int) -> ParabolicPair:
    if n == 3:
        return weak_pair_catalog()[1]
    return _d_row(n).pair


def pair_catalog(d_ranks: tuple[int, ...] = DEFAULT_D_RANKS) -> tuple[ParabolicPair, ...]:
    return tuple(t.pair for t in triple_catalog(d_ranks)) + weak_pair_catalog()


def find_pair(name: str) -> ParabolicPair:
    """Look up 'E7,E6', 'E7:E6', 'D5,D4' or 'D3,D2'."""
    norm = name.replace(":", ",").replace("/", ",").replace("×", "x").upper()
    for p in pair_catalog():
        if p.label.upper() == norm:
            return p
    g, _, l = norm.partition(",")
    if g.startswith("D") and g[1:].isdigit() and l == f"D{int(g[1:]) - 1}":
        return d_pair(int(g[1:]))
    raise KeyError(f"no catalog pair {name!r}")


def pair_for_type(g_type: str, l_type: str) -> ParabolicPair:
    """Catalog pair whose group and Levi have the given isomorphism types."""
    g_c, l_c = canonical_type_name(g_type), canonical_type_name(l_type)
    candidates = list(pair_catalog())
    if g_c.startswith("D") and g_c[1:].isdigit():
        candidates.append(d_pair(int(g_c[1:])))
    for p in candidates:
        if canonical_type_name(p.rs.name) == g_c and canonical_type_name(p.levi_type) == l_c:
            return p
    raise KeyError(f"no catalog pair of type ({g_type}, {l_type})")


# ---------------------------------------------------------------------------
# distinguished elements


@dataclass(frozen=True)
class Distinguished:
    v0: WeylElt
    v1: WeylElt
    v0_levi: WeylElt
    m_prime: tuple[int, ...]
    beta1_prime: int
    s1_computed: Fraction
    clauses: dict = field(default_factory=dict)


def q_levi(w: WeylElt, levi: tuple[int, ...], levi_prime: tuple[int, ...]) -> tuple[int, ...]:
    """Simple labels of the Levi of w^{-1}P'w meet L: alpha in Delta_L with w(alpha) in Delta_{L'}."""
    rs = w.rs
    simple_prime = {rs.simple_root(x) for x in levi_prime}
    return tuple(a for a in levi if w(rs.simple_root(a)) in simple_prime)


def distinguished_elements(t: TripleSpec) -> Distinguished:
    """v0 = w0 w0^L, v1 = v0 s_beta0 (v0^L)^{-1}, with all four clauses checked."""
    from mintheta.gk import chi_series, levi_shift

    rs, p = t.rs, t.pair
    levi, levi_p, m_levi = p.levi, p.levi_prime, t.m_levi
    w0 = longest_element(rs, rs.labels)
    w0_l = longest_element(rs, levi)
    v0 = w0 * w0_l
    v0_l = w0_l * longest_element(rs, m_levi)
    v1 = v0 * reflection(rs, t.beta0) * v0_l.inverse

    psi = set(double_coset_min_reps(rs, levi_p, levi))
    clauses = {}
    clauses["v0 in Psi and Q_v0 = L"] = v0 in psi and q_levi(v0, levi, levi_p) == levi
    tb = tilde_beta(p)
    clauses["v0(beta0) = -tilde beta"] = v0(rs.simple_root(t.beta0)) == negate(tb.root)

    m_prime = tuple(sorted(rs.labels[negate(w0_l(rs.simple_root(a))).index(1)] for a in m_levi))
    beta1_prime = next(a for a in levi if a not in m_prime)
    clauses["v1 in Psi and Q_v1 = Q'"] = v1 in psi and q_levi(v1, levi, levi_p) == m_prime

    chi = chi_series(rs, levi_p, p.beta0_prime)
    shift = levi_shift(rs, chi, v1, levi, beta1_prime)
    s1 = shift.at(t.params0[0])
    clauses["shift of v1 lands on s1"] = s1 == t.params1[0]

    failed = [name for name, ok in clauses.items() if not ok]
    if failed:
        raise LemmaCheckFailed(f"{t.key}: failed clause(s) {failed}")
    return Distinguished(v0, v1, v0_l, m_prime, beta1_prime, s1, clauses)
