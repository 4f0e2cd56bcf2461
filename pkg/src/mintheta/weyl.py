"""Weyl group elements as integer matrices on simple-root coordinates.

Elements are compared by matrix, never by word. The word ``w(k1, ..., kr)``
means the product s_k1 ... s_kr, so s_kr acts first.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from mintheta.rootsys import Root, RootSystem

Word = tuple[int, ...]

DEFAULT_BUDGET = 10**7


class BadLabel(ValueError):
    """Raised for a simple label that does not belong to the root system."""


class BudgetExceeded(RuntimeError):
    """Raised when a full group enumeration would exceed the element budget."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def _reflections(rs: RootSystem) -> tuple[np.ndarray, ...]:
    n = rs.rank
    cartan = np.array(rs.cartan, dtype=np.int64)
    mats = []
    for i in range(n):
        m = np.eye(n, dtype=np.int64)
        # s_i(x) = x - <x, a_i^vee> a_i
        m[i, :] -= cartan[i, :]
        mats.append(_frozen(m))
    return tuple(mats)


@lru_cache(maxsize=None)
def _adjugate(rs: RootSystem) -> tuple[np.ndarray, int]:
    cartan = np.array(rs.cartan, dtype=np.int64)
    det = round(np.linalg.det(cartan.astype(float)))
    adj = np.rint(np.linalg.inv(cartan.astype(float)) * det).astype(np.int64)
    if not np.array_equal(adj @ cartan, det * np.eye(rs.rank, dtype=np.int64)):
        raise ArithmeticError("Cartan adjugate is not exact")
    return adj, det


@lru_cache(maxsize=None)
def _positive_matrix(rs: RootSystem) -> np.ndarray:
    return _frozen(np.array(rs.positive_roots, dtype=np.int64).reshape(-1, rs.rank))


class WeylElt:
    """A Weyl group element acting on root coordinates by ``matrix @ root``."""

    __slots__ = ("rs", "matrix", "__dict__")

    def __init__(self, rs: RootSystem, matrix: np.ndarray):
        self.rs = rs
        self.matrix = _frozen(matrix)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeylElt) and self.rs == other.rs and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __mul__(self, other: WeylElt) -> WeylElt:
        return WeylElt(self.rs, self.matrix @ other.matrix)

    def __call__(self, root: Sequence[int]) -> Root:
        return tuple(int(x) for x in self.matrix @ np.asarray(root, dtype=np.int64))

    def __repr__(self) -> str:
        return f"w({''.join(map(str, self.word))})" if all(x < 10 for x in self.word) else f"w{self.word}"

    @cached_property
    def inverse(self) -> WeylElt:
        adj, det = _adjugate(self.rs)
        cartan = np.array(self.rs.cartan, dtype=np.int64)
        num = adj @ self.matrix.T @ cartan
        inv = num // det
        if not np.array_equal(inv * det, num):
            raise ArithmeticError("inverse is not integral")
        return WeylElt(self.rs, inv)

    @cached_property
    def length(self) -> int:
        images = _positive_matrix(self.rs) @ self.matrix.T
        return int(np.count_nonzero(images.sum(axis=1) < 0))

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, np.eye(self.rs.rank, dtype=np.int64))

    def left_descents(self) -> list[int]:
        """Labels i with l(s_i w) < l(w), i.e. w^{-1}(a_i) negative."""
        inv = self.inverse.matrix
        return [lab for i, lab in enumerate(self.rs.labels) if inv[:, i].sum() < 0]

    def right_descents(self) -> list[int]:
        return [lab for i, lab in enumerate(self.rs.labels) if self.matrix[:, i].sum() < 0]

    @cached_property
    def word(self) -> Word:
        """Lexicographically minimal reduced word."""
        refl = _reflections(self.rs)
        out = []
        cur = self
        while not cur.is_identity():
            lab = min(cur.left_descents())
            out.append(lab)
            cur = WeylElt(self.rs, refl[self.rs.index(lab)] @ cur.matrix)
        return tuple(out)


def identity(rs: RootSystem) -> WeylElt:
    return WeylElt(rs, np.eye(rs.rank, dtype=np.int64))


def parse_word(word: str | Iterable[int]) -> Word:
    """Accept '65431', '6 5 4 3 1' or a sequence of labels."""
    if isinstance(word, str):
        return tuple(int(ch) for ch in word if not ch.isspace() and ch not in ",()w")
    return tuple(int(x) for x in word)


def element_of(rs: RootSystem, word: str | Iterable[int]) -> WeylElt:
    labels = parse_word(word)
    refl = _reflections(rs)
    m = np.eye(rs.rank, dtype=np.int64)
    for lab in labels:
        if lab not in rs.labels:
            raise BadLabel(f"label {lab} not in {rs.name} labels {rs.labels}")
        m = m @ refl[rs.index(lab)]
    return WeylElt(rs, m)


def reflection(rs: RootSystem, label: int) -> WeylElt:
    return element_of(rs, (label,))


def root_reflection(rs: RootSystem, root: Root) -> WeylElt:
    """s_root(x) = x - <x, root^vee> root."""
    n = rs.rank
    cartan = np.array(rs.cartan, dtype=np.int64)
    r = np.asarray(root, dtype=np.int64)
    m = np.eye(n, dtype=np.int64) - np.outer(r, r @ cartan)
    return WeylElt(rs, m)


def longest_element(rs: RootSystem, subset: Iterable[int]) -> WeylElt:
    """Longest element of the parabolic subgroup generated by ``subset``."""
    subset = sorted(set(subset))
    refl = _reflections(rs)
    m = np.eye(rs.rank, dtype=np.int64)
    while True:
        ascent = next((lab for lab in subset if m[:, rs.index(lab)].sum() > 0), None)
        if ascent is None:
            return WeylElt(rs, m)
        m = m @ refl[rs.index(ascent)]


def inversion_set(rs: RootSystem, w: WeylElt) -> frozenset[Root]:
    """Positive roots sent to negative roots by w^{-1}."""
    inv = w.inverse.matrix
    return frozenset(r for r in rs.positive_roots if (inv @ np.asarray(r)).sum() < 0)


def maps_into_positive(w: WeylElt, labels: Iterable[int]) -> bool:
    return all(w.matrix[:, w.rs.index(lab)].sum() > 0 for lab in labels)


def _sort_key(w: WeylElt) -> tuple[int, Word]:
    return (w.length, w.word)


def min_coset_reps(rs: RootSystem, levi: Iterable[int]) -> list[WeylElt]:
    """All w with w(levi) positive, via BFS on the orbit of a weight fixed by W_levi."""
    levi = set(levi)
    cartan = rs.cartan
    start = tuple(0 if lab in levi else 1 for lab in rs.labels)
    refl = _reflections(rs)
    seen = {start: np.eye(rs.rank, dtype=np.int64)}
    frontier = [start]
    while frontier:
        nxt = []
        for mu in frontier:
            mat = seen[mu]
            for i in range(rs.rank):
                if mu[i] > 0:
                    new = tuple(mu[j] - mu[i] * cartan[i][j] for j in range(rs.rank))
                    if new not in seen:
                        seen[new] = refl[i] @ mat
                        nxt.append(new)
        frontier = nxt
    return sorted((WeylElt(rs, m) for m in seen.values()), key=_sort_key)


def double_coset_min_reps(rs: RootSystem, left: Iterable[int], right: Iterable[int]) -> list[WeylElt]:
    """Psi_{left,right}: w(right) positive and w^{-1}(left) positive."""
    left = list(left)
    return [w for w in min_coset_reps(rs, right) if maps_into_positive(w.inverse, left)]


def weyl_group_order(rs: RootSystem) -> int:
    """Order via a chain of orbit sizes |W_S| = |W_S / W_{S - s}| * |W_{S - s}|."""
    order = 1
    labels = list(rs.labels)
    while labels:
        sub = rs.subsystem(labels)
        order *= len(min_coset_reps(sub, labels[:-1]))
        labels = labels[:-1]
    return order


def enumerate_group(rs: RootSystem, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All group matrices, shape (|W|, n, n), by a vectorized BFS on the orbit of rho."""
    order = weyl_group_order(rs)
    if order > budget:
        raise BudgetExceeded(f"|W({rs.name})| = {order} exceeds budget {budget}")
    n = rs.rank
    cartan = np.array(rs.cartan, dtype=np.int64)
    refl = _reflections(rs)
    weights = np.ones((1, n), dtype=np.int64)
    mats = np.eye(n, dtype=np.int64)[None, :, :]
    layers = [mats]
    while len(weights):
        new_w, new_m = [], []
        for i in range(n):
            mask = weights[:, i] > 0
            if mask.any():
                w = weights[mask]
                new_w.append(w - w[:, i : i + 1] * cartan[i][None, :])
                new_m.append(np.einsum("ij,mjk->mik", refl[i], mats[mask]))
        if not new_w:
            break
        w_all = np.concatenate(new_w)
        m_all = np.concatenate(new_m)
        _, keep = np.unique(w_all, axis=0, return_index=True)
        keep.sort()
        weights, mats = w_all[keep], m_all[keep]
        layers.append(mats)
    group = np.concatenate(layers)
    if len(group) != order:
        raise ArithmeticError("enumeration disagrees with the orbit-chain order")
    return group
