from itertools import combinations, product

import numpy as np
import pytest

from abelgraph.errors import HostMismatch, IndexMismatch, TotalDegreeMismatch
from abelgraph.graph import DualGraph, tails
from abelgraph.intmat import bareiss_determinant, smith_diagonal
from abelgraph.lattice import (
    Multidegree,
    canonical_representative,
    canonical_representatives,
    class_group,
    classes_equal,
    in_twister_lattice,
    spanning_tree_count,
    tail_twister_multidegree,
    twister_matrix,
    twister_multidegree,
)

from graphs import G1, G2, G3, G4, G5, banana, chain, loop_curve, star


def brute_spanning_trees(X) -> int:
    """Count (gamma-1)-subsets of non-loop edges that connect every vertex."""
    edges = [e for e in X.edges if not e.is_loop]
    n = X.gamma
    count = 0
    for subset in combinations(edges, n - 1):
        parent = {v: v for v in X.vertex_ids}

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        merged = 0
        for e in subset:
            a, b = find(e.ends[0]), find(e.ends[1])
            if a != b:
                parent[a] = b
                merged += 1
        count += merged == n - 1
    return count


def is_reduced(X, values, base) -> bool:
    """Brute-force burning criterion: no nonempty S avoiding base can fire."""
    others = [v for v in X.vertex_ids if v != base]
    if any(values[X.index[v]] < 0 for v in others):
        return False
    for r in range(1, len(others) + 1):
        for S in combinations(others, r):
            S = set(S)
            if all(
                values[X.index[v]]
                >= sum(X.multiplicity[X.index[v]][X.index[w]] for w in X.vertex_ids if w not in S)
                for v in S
            ):
                return False
    return True


def test_twister_multidegree_examples():
    X = G2()
    assert twister_multidegree(X, [0, 0]).values == (0, 0)
    assert twister_multidegree(X, [1, 1]).values == (0, 0)
    assert twister_multidegree(X, [1, 0]).values == (-3, 3)
    with pytest.raises(IndexMismatch):
        twister_multidegree(X, [1, 0, 0])


def test_twister_matrix_rows_sum_zero():
    for X in (G2(), G3(), star(), loop_curve()):
        M = twister_matrix(X)
        assert all(sum(row) == 0 for row in M)
        assert M == [list(col) for col in zip(*M)]


def test_tail_twister_examples():
    X = G3()
    small = next(t for t in tails(X) if t.size_class == "small")
    assert tail_twister_multidegree(X, [(small, 1)]).values == (-1, 1)
    path = chain(1, 1, 1)
    by = {t.sorted_ids: t for t in tails(path)}
    total = tail_twister_multidegree(path, [(by[("A",)], 1), (by[("A", "B")], 1)])
    assert total.values == (-1, 0, 1)
    assert tail_twister_multidegree(path, []).values == (0, 0, 0)


def test_tail_twister_rejects_foreign_tail():
    with pytest.raises(HostMismatch):
        tail_twister_multidegree(G2(), [(tails(G3())[0], 1)])


def test_class_group_examples():
    assert class_group(G1()).order == 1
    assert class_group(G1()).invariant_factors == ()
    assert class_group(G2()).invariant_factors == (3,)
    for k in range(1, 7):
        assert class_group(banana(0, 0, k)).order == k


def test_spanning_tree_examples():
    assert spanning_tree_count(G1()) == 1
    assert spanning_tree_count(G2()) == 3
    assert spanning_tree_count(chain(1, 1, 1)) == 1


def test_spanning_trees_against_enumeration(corpus):
    for X in corpus[:80]:
        assert spanning_tree_count(X) == brute_spanning_trees(X)


def test_complete_graph_group():
    # K4 has critical group Z/4 x Z/4
    ids = "abcd"
    X = DualGraph.build({v: 0 for v in ids}, [(f"{a}{b}", a, b) for a, b in combinations(ids, 2)])
    assert class_group(X).invariant_factors == (4, 4)
    assert spanning_tree_count(X) == 16


def test_smith_diagonal_small():
    assert smith_diagonal([[2, 4], [6, 8]]) == [2, 4]
    assert smith_diagonal([[0, 0], [0, 0]]) == [0, 0]
    assert bareiss_determinant([[2, 1], [1, 3]]) == 5


def test_canonical_representative_examples():
    X = G2()
    zero = Multidegree.zero(X)
    assert canonical_representative(X, zero) == zero
    assert canonical_representative(X, Multidegree(X, (-3, 3)), "C1").values == (0, 0)
    a = canonical_representative(X, Multidegree(X, (1, 0)), "C1")
    b = canonical_representative(X, Multidegree(X, (-2, 3)), "C1")
    assert a == b


def test_classes_equal_examples():
    X = G2()
    d = Multidegree(X, (1, 0))
    assert classes_equal(X, d, d)
    assert classes_equal(X, d, Multidegree(X, (-2, 3)))
    assert not classes_equal(X, d, Multidegree(X, (0, 1)))
    with pytest.raises(TotalDegreeMismatch):
        classes_equal(X, d, Multidegree(X, (0, 0)))
    with pytest.raises(HostMismatch):
        classes_equal(X, d, Multidegree(G5(), (1, 0)))


def test_reduced_forms_pass_burning_test(corpus):
    rng = np.random.default_rng(1)
    for X in corpus:
        if X.gamma > 5:
            continue
        for base in X.vertex_ids[:2]:
            for _ in range(4):
                d = Multidegree(X, tuple(int(v) for v in rng.integers(-8, 9, X.gamma)))
                R = canonical_representative(X, d, base)
                assert is_reduced(X, R.values, base)
                assert in_twister_lattice(X, d - R)
                assert canonical_representative(X, R, base) == R


def test_batch_matches_scalar(corpus):
    rng = np.random.default_rng(2)
    for X in corpus[:120]:
        rows = rng.integers(-20, 21, size=(30, X.gamma))
        batch = canonical_representatives(X, rows)
        for row, out in zip(rows, batch):
            scalar = canonical_representative(X, Multidegree(X, tuple(int(v) for v in row)))
            assert tuple(int(v) for v in out) == scalar.values


def test_lattice_membership_routes_agree():
    X = G4()  # Z/2
    for a, b in product(range(-4, 5), repeat=2):
        d = Multidegree(X, (a, b))
        if a + b:
            assert not in_twister_lattice(X, d)
            continue
        assert in_twister_lattice(X, d) == (a % 2 == 0)
        assert in_twister_lattice(X, d) == classes_equal(X, d, Multidegree.zero(X))


def test_twister_kernel_is_constants(corpus):
    rng = np.random.default_rng(3)
    for X in corpus[:60]:
        D = [int(v) for v in rng.integers(-3, 4, X.gamma)]
        shifted = [v + 5 for v in D]
        assert twister_multidegree(X, D) == twister_multidegree(X, shifted)
        other = list(D)
        other[0] += 1
        if X.gamma > 1:
            assert twister_multidegree(X, D) != twister_multidegree(X, other)
        assert twister_multidegree(X, D).total == 0
