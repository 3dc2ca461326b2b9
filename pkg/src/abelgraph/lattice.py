"""Twister lattice, degree class group and canonical class representatives.

Twister multidegrees are the column span of the intersection matrix ``M``
(``M[v][w]`` counts edges v-w, the diagonal makes rows sum to zero).  Classes
of multidegrees modulo that span are represented by base-reduced divisors,
computed with Dhar's burning algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import HostMismatch, IndexMismatch, InvariantViolation, TotalDegreeMismatch
from .graph import DualGraph, Tail
from .intmat import adjugate_and_det, bareiss_determinant, smith_diagonal


@dataclass(frozen=True)
class Multidegree:
    host: DualGraph = field(repr=False)
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.host.gamma:
            raise IndexMismatch(f"expected {self.host.gamma} entries, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def from_mapping(cls, host: DualGraph, mapping: Mapping[str, int]) -> "Multidegree":
        if set(mapping) != set(host.vertex_ids):
            raise IndexMismatch(
                f"multidegree keys {sorted(mapping)} != vertices {list(host.vertex_ids)}"
            )
        return cls(host, tuple(int(mapping[v]) for v in host.vertex_ids))

    @classmethod
    def zero(cls, host: DualGraph) -> "Multidegree":
        return cls(host, (0,) * host.gamma)

    @classmethod
    def indicator(cls, host: DualGraph, vertices: Iterable[str]) -> "Multidegree":
        chosen = set(vertices)
        return cls(host, tuple(1 if v in chosen else 0 for v in host.vertex_ids))

    @cached_property
    def total(self) -> int:
        return sum(self.values)

    def __getitem__(self, vertex: str) -> int:
        return self.values[self.host.index[vertex]]

    def degree_on(self, vertices: Iterable[str]) -> int:
        return sum(self[v] for v in vertices)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.host.vertex_ids, self.values))

    def __add__(self, other: "Multidegree") -> "Multidegree":
        _same_host(self, other)
        return Multidegree(self.host, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Multidegree") -> "Multidegree":
        _same_host(self, other)
        return Multidegree(self.host, tuple(a - b for a, b in zip(self.values, other.values)))

    def __repr__(self) -> str:
        return f"Multidegree({self.as_dict()})"


def _same_host(a: Multidegree, b: Multidegree) -> None:
    if a.host != b.host:
        raise HostMismatch("multidegrees live on different graphs")


def twister_matrix(X: DualGraph) -> list[list[int]]:
    """Intersection matrix C_v . C_w; loops contribute nothing."""
    mult = X.multiplicity
    M = [list(row) for row in mult]
    for i in range(X.gamma):
        M[i][i] = -sum(mult[i])
    return M


def twister_multidegree(X: DualGraph, D: Mapping[str, int] | Sequence[int]) -> Multidegree:
    """Multidegree of the twister O_X(sum D_v C_v)."""
    if isinstance(D, Mapping):
        if set(D) != set(X.vertex_ids):
            raise IndexMismatch("twister coefficients must be indexed by the vertices")
        coeffs = [int(D[v]) for v in X.vertex_ids]
    else:
        coeffs = [int(c) for c in D]
        if len(coeffs) != X.gamma:
            raise IndexMismatch("twister coefficients must be indexed by the vertices")
    M = twister_matrix(X)
    return Multidegree(X, tuple(sum(M[i][j] * coeffs[j] for j in range(X.gamma)) for i in range(X.gamma)))


def tail_twister_multidegree(
    X: DualGraph, combination: Mapping[Tail, int] | Iterable[tuple[Tail, int]]
) -> Multidegree:
    """Multidegree of O_X(sum a_Q Q): -1 on the tail side of its bridge, +1 across."""
    items = combination.items() if isinstance(combination, Mapping) else combination
    values = [0] * X.gamma
    for Q, a in items:
        if Q.host != X:
            raise HostMismatch("tail belongs to another graph")
        single = [0] * X.gamma
        single[X.index[Q.inner]] -= 1
        single[X.index[Q.outer]] += 1
        check = twister_multidegree(X, [1 if v in Q.vertices else 0 for v in X.vertex_ids])
        if tuple(single) != check.values:
            raise InvariantViolation(f"tail twister of {Q.sorted_ids} disagrees with M * 1_Q")
        for i in range(X.gamma):
            values[i] += a * single[i]
    return Multidegree(X, tuple(values))


# ---------------------------------------------------------------------------
# class group


@dataclass(frozen=True)
class DegreeClassGroup:
    host: DualGraph = field(repr=False)
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)


def class_group(X: DualGraph) -> DegreeClassGroup:
    """Invariant factors of the degree-0 multidegrees modulo twisters."""
    if X.gamma == 1:
        return DegreeClassGroup(X, ())
    diag = smith_diagonal(twister_matrix(X))
    # connected graph: the Laplacian has rank gamma - 1, the zero is the degree map
    if diag.count(0) != 1:
        raise InvariantViolation(f"intersection matrix has unexpected rank: {diag}")
    return DegreeClassGroup(X, tuple(d for d in diag if d > 1))


def spanning_tree_count(X: DualGraph) -> int:
    """Matrix-tree theorem: any principal (gamma-1)-minor of the Laplacian."""
    if X.gamma == 1:
        return 1
    L = [[-x for x in row] for row in twister_matrix(X)]
    minor = [row[1:] for row in L[1:]]
    return bareiss_determinant(minor)


# ---------------------------------------------------------------------------
# reduced divisors


class _Reducer:
    """Per-(graph, base) data for reducing multidegrees modulo twisters."""

    def __init__(self, X: DualGraph, base: str):
        self.X = X
        self.q = X.index[base]
        self.others = [i for i in range(X.gamma) if i != self.q]
        self.M = twister_matrix(X)
        lap = [[-self.M[i][j] for j in self.others] for i in self.others]
        self.lap_q = lap
        self.adj, self.det = adjugate_and_det(lap)
        if self.det <= 0:
            raise InvariantViolation("reduced Laplacian is not positive definite")
        # w = adj . 1 satisfies lap_q w = det * 1: borrowing along w adds det to every vertex
        self.lift = [sum(row) for row in self.adj]

    def fire(self, vals: list[int], x: Sequence[int]) -> None:
        """Fire each non-base vertex x_i times (negative x borrows)."""
        n = self.X.gamma
        full = [0] * n
        for k, i in enumerate(self.others):
            full[i] = x[k]
        for i in range(n):
            row = self.M[i]
            vals[i] += sum(row[j] * full[j] for j in range(n) if full[j])

    def reduce(self, values: Sequence[int]) -> list[int]:
        vals = list(values)
        c = [vals[i] for i in self.others]
        # move close to the reduced divisor with one exact linear solve
        y = [sum(a * b for a, b in zip(row, c)) // self.det for row in self.adj]
        self.fire(vals, y)
        worst = min(vals[i] for i in self.others)
        if worst < 0:
            t = -(worst // self.det)
            self.fire(vals, [-t * w for w in self.lift])
        if any(vals[i] < 0 for i in self.others):
            raise InvariantViolation("failed to make the divisor effective off the base")
        return self._burn(vals)

    def _burn(self, vals: list[int]) -> list[int]:
        n = self.X.gamma
        mult = self.X.multiplicity
        while True:
            burned = [False] * n
            burned[self.q] = True
            changed = True
            while changed:
                changed = False
                for v in range(n):
                    if burned[v]:
                        continue
                    fire_in = sum(mult[v][u] for u in range(n) if burned[u])
                    if vals[v] < fire_in:
                        burned[v] = True
                        changed = True
            legal = [v for v in range(n) if not burned[v]]
            if not legal:
                return vals
            out = {v: sum(mult[v][u] for u in range(n) if burned[u]) for v in legal}
            times = min(vals[v] // out[v] for v in legal if out[v])
            for v in range(n):
                if burned[v]:
                    vals[v] += times * sum(mult[v][u] for u in legal)
                else:
                    vals[v] -= times * out[v]

    def reduce_batch(self, D: np.ndarray) -> np.ndarray:
        """Vectorized ``reduce`` for many multidegrees at once (int64 rows)."""
        D = np.array(D, dtype=np.int64, copy=True)
        if D.size and np.abs(D).max() > 1 << 30:
            raise OverflowError("batch reduction is limited to moderate entries")
        n = self.X.gamma
        M = np.array(self.M, dtype=np.int64)
        mult = np.array(self.X.multiplicity, dtype=np.int64)
        adj = np.array(self.adj, dtype=np.int64)
        others = np.array(self.others, dtype=np.int64)

        def fire(x_others: np.ndarray) -> None:
            full = np.zeros((D.shape[0], n), dtype=np.int64)
            full[:, others] = x_others
            D[:] += full @ M.T

        y = np.floor_divide(D[:, others] @ adj.T, self.det)
        fire(y)
        worst = D[:, others].min(axis=1)
        t = np.where(worst < 0, -np.floor_divide(worst, self.det), 0)
        fire(-t[:, None] * np.array(self.lift, dtype=np.int64)[None, :])
        if (D[:, others] < 0).any():
            raise InvariantViolation("failed to make the divisors effective off the base")
        while True:
            burned = np.zeros(D.shape, dtype=bool)
            burned[:, self.q] = True
            while True:
                fire_in = burned.astype(np.int64) @ mult
                new = ~burned & (D < fire_in)
                if not new.any():
                    break
                burned |= new
            legal = ~burned
            if not legal.any():
                return D
            out = np.where(legal, burned.astype(np.int64) @ mult, 0)
            ratio = np.where(out > 0, D // np.maximum(out, 1), np.iinfo(np.int64).max)
            times = np.where(legal.any(axis=1), ratio.min(axis=1), 0)
            D += times[:, None] * (legal.astype(np.int64) @ M)


def _reducer(X: DualGraph, base: str | None) -> _Reducer:
    base = X.vertex_ids[0] if base is None else base
    if base not in X.index:
        raise IndexMismatch(f"unknown base vertex {base!r}")
    cache = X.__dict__.setdefault("_reducers", {})
    if base not in cache:
        cache[base] = _Reducer(X, base)
    return cache[base]


def canonical_representative(X: DualGraph, d: Multidegree, base: str | None = None) -> Multidegree:
    """The base-reduced multidegree equivalent to ``d`` modulo twisters."""
    if d.host != X:
        raise HostMismatch("multidegree belongs to another graph")
    if X.gamma == 1:
        return d
    return Multidegree(X, tuple(_reducer(X, base).reduce(d.values)))


def canonical_representatives(X: DualGraph, rows: np.ndarray, base: str | None = None) -> np.ndarray:
    """Batch form of :func:`canonical_representative` on an ``(N, gamma)`` array."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != X.gamma:
        raise IndexMismatch("rows must have one column per vertex")
    if X.gamma == 1:
        return rows.copy()
    return _reducer(X, base).reduce_batch(rows)


def class_key(X: DualGraph, d: Multidegree, base: str | None = None) -> tuple[int, ...]:
    return canonical_representative(X, d, base).values


def classes_equal(X: DualGraph, d1: Multidegree, d2: Multidegree, base: str | None = None) -> bool:
    if d1.host != X or d2.host != X:
        raise HostMismatch("multidegrees belong to another graph")
    if d1.total != d2.total:
        raise TotalDegreeMismatch(f"total degrees differ: {d1.total} vs {d2.total}")
    return class_key(X, d1, base) == class_key(X, d2, base)


def in_twister_lattice(X: DualGraph, d: Multidegree) -> bool:
    """Membership in the column span of M, decided by an exact linear solve."""
    if d.total != 0:
        return False
    if X.gamma == 1:
        return True
    r = _reducer(X, None)
    c = [d.values[i] for i in r.others]
    return all(sum(a * b for a, b in zip(row, c)) % r.det == 0 for row in r.adj)


def reference_multidegree(X: DualGraph, d: int, base: str | None = None) -> Multidegree:
    """Degree ``d`` at the base vertex, 0 elsewhere; shifts degree-0 classes to degree d."""
    base = X.vertex_ids[0] if base is None else base
    return Multidegree(X, tuple(d if v == base else 0 for v in X.vertex_ids))
