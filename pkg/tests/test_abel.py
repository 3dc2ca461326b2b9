import pytest

from abelgraph.abel import (
    BLOWUP_HOST,
    STABLE_HOST,
    Term,
    abel_fibers,
    abel_image,
    abel_images_equal,
    abel_multidegree,
    bvine_set,
    is_one_general,
    small_tails_through,
    vine_abel_multidegree,
    vine_parameters,
)
from abelgraph.balanced import is_d_general, is_semibalanced
from abelgraph.errors import Not1General, NotTwoComponent, UnknownPoint
from abelgraph.graph import PointOnCurve, bridges

from graphs import G2, G3, G4, G5, banana, chain, loop_curve, star

P = PointOnCurve.smooth
N = PointOnCurve.node


def test_small_tails_through_examples():
    assert small_tails_through(G3(), P("C2")) == []
    assert [t.sorted_ids for t in small_tails_through(G3(), P("C1"))] == [("C1",)]
    X = chain(1, 1, 3)
    assert X.genus == 5
    assert [t.sorted_ids for t in small_tails_through(X, P("A"))] == [("A",), ("A", "B")]
    with pytest.raises(UnknownPoint):
        small_tails_through(X, P("Z"))


def test_node_membership_in_tails():
    X = chain(1, 1, 3)
    # e1 generates {A} and lies in both {A} and {A, B}
    assert [t.sorted_ids for t in small_tails_through(X, N("e1"))] == [("A",), ("A", "B")]
    assert [t.sorted_ids for t in small_tails_through(X, N("e2"))] == [("A", "B")]


def test_abel_multidegree_examples():
    assert abel_multidegree(G3(), P("C2")).values == (0, 1)
    assert abel_multidegree(G3(), P("C1")).values == (0, 1)
    assert abel_multidegree(G2(), P("C1")).values == (1, 0)
    with pytest.raises(UnknownPoint):
        abel_multidegree(G2(), N("e1"))


def test_image_of_bridge_node():
    X = G3()
    image = abel_image(X, N("e1"))
    assert image.host_kind == STABLE_HOST and not image.boundary
    assert image.multidegree.values == (0, 1)
    pieces = {p.sorted_ids: p.terms for p in image.pieces}
    # (O_C1, O_C2(q2)): nothing on C1, the C2 branch of the node on C2
    assert pieces == {("C2",): (Term("e1", "C2", 1),), ("C1",): ()}


def test_image_of_smooth_point_on_small_tail():
    image = abel_image(G3(), P("C1", "p"))
    pieces = {p.sorted_ids: p.terms for p in image.pieces}
    assert pieces[("C1",)] == (Term("C1:p", "C1", 1), Term("e1", "C1", -1))
    assert pieces[("C2",)] == (Term("e1", "C2", 1),)


def test_image_of_nonseparating_node():
    image = abel_image(G2(), N("e1"))
    assert image.host_kind == BLOWUP_HOST and image.boundary
    assert image.multidegree.as_dict() == {"C1": 0, "C2": 0, "E_e1": 1}
    assert image.qfix_extension  # G2 is not 1-general
    loop = abel_image(loop_curve(), N("l"))
    assert loop.boundary and loop.multidegree[loop.exceptional] == 1
    assert [p.terms for p in loop.pieces] == [()]


def test_chain_pieces():
    X = chain(1, 1, 3)
    image = abel_image(X, P("A", "p"))
    assert [p.sorted_ids for p in image.pieces] == [("C",), ("B",), ("A",)]
    assert [p.degree for p in image.pieces] == [1, 0, 0]
    assert image.piece_multidegree() == image.multidegree


def test_images_equal_examples():
    assert abel_images_equal(G2(), N("e1"), N("e1"))
    assert not abel_images_equal(G2(), N("e1"), N("e2"))
    assert abel_images_equal(star(), P("c", "p"), P("c", "q"))
    assert not abel_images_equal(star(), P("a", "p"), P("a", "q"))
    assert abel_images_equal(star(), P("c", "p"), N("e1"))
    assert not abel_images_equal(G3(), P("C1", "p"), N("e1"))


def test_fibers_examples():
    f = abel_fibers(G5(), ("p", "q"))
    assert f.nontrivial == []
    f = abel_fibers(star(), ("p", "q"))
    assert len(f.nontrivial) == 1
    symbols = sorted(p.symbol for p in f.nontrivial[0])
    assert symbols == ["c:p", "c:q", "e1", "e2", "e3"]
    assert abel_fibers(G3(), ("p", "q")).nontrivial == []
    with pytest.raises(Not1General):
        abel_fibers(G2())


def test_vine_parameters_examples():
    p = vine_parameters(G4(), 2)
    assert p.m == 0 and [p.r[a] for a in range(3)] == [0, 1, 0]
    q = vine_parameters(G5(), 2)
    assert q.m == -1 and [q.r[a] for a in range(3)] == [1, 2, 3]
    assert p.r[p.m] == 0
    with pytest.raises(NotTwoComponent):
        vine_parameters(star(), 1)


def test_vine_multidegree_examples():
    assert vine_abel_multidegree(G4(), 2, 2).values == (0, 2)
    for a0 in range(3):
        assert vine_abel_multidegree(G5(), 2, a0).values == (a0, 2 - a0)


def test_split_curves():
    for g in range(2, 7):
        X = banana(0, 0, g + 1)
        assert X.genus == g
        for d in range(1, g + 1):
            for a0 in range(d + 1):
                assert vine_abel_multidegree(X, d, a0).values == (a0, d - a0)
            assert is_d_general(X, d).general == ((d - g) % 2 == 0)


def test_bvine_examples():
    r = bvine_set(G2(), 1)
    assert [L.values for L in r.progression] == [(-1, 2), (0, 1), (1, 0)]
    assert not r.equality and len(r.balanced.B) == 4
    r5 = bvine_set(G5(), 1)
    assert len(r5.progression) == 4 and r5.equality
    r4 = bvine_set(G4(), 2)
    assert [L.values for L in r4.progression] == [(0, 2), (1, 1)] and r4.equality


def test_vine_degree_one_matches_abel_map(corpus):
    vines = [X for X in corpus if X.gamma == 2]
    assert vines
    for X in vines:
        if not is_one_general(X):
            continue
        c1, c2 = X.vertex_ids
        assert vine_abel_multidegree(X, 1, 1) == abel_multidegree(X, P(c1))
        assert vine_abel_multidegree(X, 1, 0) == abel_multidegree(X, P(c2))


def test_boundary_law_small_examples():
    for X in (G2(), G3(), G4(), star(), chain(1, 1, 3), loop_curve()):
        br = set(bridges(X))
        for e in X.edges:
            image = abel_image(X, N(e.id))
            assert image.boundary == (e.id not in br)
            assert is_semibalanced(image.host, image.multidegree)


def test_trees_of_lines_collapse():
    from graphs import three_lines, two_lines

    f = abel_fibers(two_lines(), ("p", "q"))
    assert [sorted(p.symbol for p in fiber) for fiber in f.nontrivial] == [
        ["L1:p", "L1:q", "L2:p", "L2:q", "ea", "eb", "ec", "ed", "m"]
    ]
    f = abel_fibers(three_lines())
    assert len(f.nontrivial) == 1 and len(f.nontrivial[0]) == 3 + 7
