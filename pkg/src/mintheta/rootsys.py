"""Simply-laced root systems with exact integer and rational data.

Roots are integer tuples in the simple-root basis. Weights are rational
tuples in the fundamental-weight basis, so the i-th coordinate of a weight
is its pairing with the i-th simple coroot. Simple roots carry Bourbaki
labels (1-based); a Levi sub-system keeps the labels of its ambient system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Root = tuple[int, ...]
Weight = tuple[Fraction, ...]


class UnsupportedType(ValueError):
    """Raised for a (family, rank) outside A_n, D_n (n >= 3), E6, E7, E8."""


def _cartan_from_edges(rank: int, edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for a, b in edges:
        c[a - 1][b - 1] = c[b - 1][a - 1] = -1
    return tuple(tuple(row) for row in c)


def _dynkin_edges(family: str, rank: int) -> list[tuple[int, int]]:
    if family == "A" and rank >= 1:
        return [(i, i + 1) for i in range(1, rank)]
    if family == "D" and rank >= 3:
        return [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    if family == "E" and rank in (6, 7, 8):
        return [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, rank)]
    raise UnsupportedType(f"unsupported root system {family}{rank}")


def _solve_exact(matrix: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _close_positive_roots(cartan: tuple[tuple[int, ...], ...]) -> list[Root]:
    """Positive roots by the root-string rule, starting from the simple roots."""
    rank = len(cartan)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for i in range(rank):
                pair = sum(cartan[i][j] * root[j] for j in range(rank))
                # p = how far the i-string extends downward from root
                p = 0
                down = list(root)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                if p - pair > 0:
                    up = list(root)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        frontier = nxt
    return sorted(found, key=lambda r: (sum(r), r))


@dataclass(frozen=True)
class RootSystem:
    """A simply-laced root system given by its Cartan matrix and labels."""

    name: str
    cartan: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    family: str | None = None
    positive_roots: tuple[Root, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.cartan)
        if len(self.labels) != n:
            raise ValueError("labels and Cartan matrix disagree in size")
        for i in range(n):
            for j in range(n):
                entry = self.cartan[i][j]
                if i == j and entry != 2:
                    raise ValueError("Cartan diagonal must be 2")
                if i != j and (entry not in (0, -1) or entry != self.cartan[j][i]):
                    raise ValueError("Cartan matrix must be symmetric simply-laced")
        if not self.positive_roots:
            object.__setattr__(self, "positive_roots", tuple(_close_positive_roots(self.cartan)))

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"label {label} not in {self.name}") from None

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.positive_roots) | frozenset(negate(r) for r in self.positive_roots)

    @cached_property
    def cartan_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return _solve_exact(self.cartan)

    def simple_root(self, label: int) -> Root:
        i = self.index(label)
        return tuple(int(j == i) for j in range(self.rank))

    def coefficient(self, root: Root, label: int) -> int:
        return root[self.index(label)]

    def pair_roots(self, a: Root, b: Root) -> int:
        """The pairing <a, b^vee>; symmetric for simply-laced systems."""
        return sum(a[i] * self.cartan[i][j] * b[j] for i in range(self.rank) for j in range(self.rank))

    def root_to_weight(self, root: Root) -> Weight:
        return tuple(Fraction(sum(self.cartan[i][j] * root[j] for j in range(self.rank))) for i in range(self.rank))

    def weight_to_root_coords(self, weight: Sequence[Fraction]) -> tuple[Fraction, ...]:
        inv = self.cartan_inverse
        return tuple(sum((inv[i][j] * weight[j] for j in range(self.rank)), Fraction(0)) for i in range(self.rank))

    def fundamental_weight(self, label: int) -> Weight:
        i = self.index(label)
        return tuple(Fraction(int(j == i)) for j in range(self.rank))

    @staticmethod
    def pair_weight(weight: Sequence[Fraction], root: Root) -> Fraction:
        """The pairing <weight, root^vee>."""
        return sum((Fraction(w) * c for w, c in zip(weight, root)), Fraction(0))

    @cached_property
    def highest_root(self) -> Root:
        top = max(height(r) for r in self.positive_roots)
        tops = [r for r in self.positive_roots if height(r) == top]
        if len(tops) != 1:
            raise ValueError(f"{self.name} is reducible; no unique highest root")
        return tops[0]

    def is_positive(self, root: Sequence[int]) -> bool:
        return any(c > 0 for c in root)

    def levi_roots(self, levi: Iterable[int]) -> tuple[Root, ...]:
        """Positive roots supported on the given simple labels."""
        allowed = {self.index(x) for x in levi}
        return tuple(r for r in self.positive_roots if all(c == 0 or i in allowed for i, c in enumerate(r)))

    def subsystem(self, levi: Iterable[int]) -> RootSystem:
        """The Levi root sub-system on the given labels, keeping ambient labels."""
        labs = tuple(sorted(set(levi)))
        idx = [self.index(x) for x in labs]
        cartan = tuple(tuple(self.cartan[i][j] for j in idx) for i in idx)
        return RootSystem(name=dynkin_type_name(cartan), cartan=cartan, labels=labs)

    def embed(self, sub: RootSystem, root: Root) -> Root:
        """Coordinates of a root of a Levi sub-system inside this system."""
        out = [0] * self.rank
        for lab, c in zip(sub.labels, root):
            out[self.index(lab)] = c
        return tuple(out)

    def restrict(self, sub: RootSystem, root: Root) -> Root:
        return tuple(root[self.index(lab)] for lab in sub.labels)


def negate(root: Root) -> Root:
    return tuple(-c for c in root)


def height(root: Root) -> int:
    return sum(root)


def _components(cartan: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(cartan)
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in range(n):
                if cartan[v][u] == -1 and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _connected_type(cartan: Sequence[Sequence[int]], comp: list[int]) -> str:
    degree = {v: sum(1 for u in comp if cartan[v][u] == -1) for v in comp}
    branch = [v for v in comp if degree[v] == 3]
    n = len(comp)
    if not branch:
        return f"A{n}"
    centre = branch[0]
    arms = []
    for start in (u for u in comp if cartan[centre][u] == -1):
        length, prev, cur = 1, centre, start
        while True:
            nxt = [u for u in comp if cartan[cur][u] == -1 and u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{n}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise UnsupportedType("not a simply-laced finite type")


def dynkin_type_name(cartan: Sequence[Sequence[int]]) -> str:
    """Isomorphism type such as 'E6', 'D5' or 'A2xA2'; empty system gives 'T'."""
    comps = _components(cartan)
    if not comps:
        return "T"
    names = sorted((_connected_type(cartan, c) for c in comps), key=lambda s: (s[0], -int(s[1:])))
    return "x".join(names)


def canonical_type_name(name: str) -> str:
    """Normalize coincidences of small types: D3 = A3, D2 = A1xA1."""
    parts = []
    for part in name.split("x"):
        if part == "D3":
            parts.append("A3")
        elif part == "D2":
            parts.extend(["A1", "A1"])
        else:
            parts.append(part)
    return "x".join(sorted(parts, key=lambda s: (s[0], -int(s[1:]))))


def build_root_system(family: str, rank: int) -> RootSystem:
    """A_n (n >= 1), D_n (n >= 3), E6, E7 or E8 with Bourbaki labels."""
    return _build(family.upper(), rank)


@lru_cache(maxsize=None)
def _build(family: str, rank: int) -> RootSystem:
    cartan = _cartan_from_edges(rank, _dynkin_edges(family, rank))
    return RootSystem(name=f"{family}{rank}", cartan=cartan, labels=tuple(range(1, rank + 1)), family=family)


def parse_type(text: str) -> RootSystem:
    """Build from a name such as 'E6' or 'd5'."""
    text = text.strip()
    if len(text) < 2 or not text[1:].isdigit():
        raise UnsupportedType(f"cannot parse root system name {text!r}")
    return build_root_system(text[0], int(text[1:]))


def highest_root(rs: RootSystem) -> Root:
    return rs.highest_root


def rho_parabolic(rs: RootSystem, levi: Iterable[int]) -> Weight:
    """Half the sum of positive roots outside the Levi, in fundamental coordinates."""
    inside = set(rs.levi_roots(levi))
    total = [0] * rs.rank
    for r in rs.positive_roots:
        if r not in inside:
            for i in range(rs.rank):
                total[i] += r[i]
    return tuple(Fraction(x, 2) for x in rs.root_to_weight(tuple(total)))
