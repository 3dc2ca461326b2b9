"""Invariant suite run over corpus graphs.

Each check takes a stable graph and raises ``CheckFailed`` (or an
``InvariantViolation`` from the library) when a property fails.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .abel import abel_image, abel_multidegree, fibers_from_comparator, fibers_from_trees, is_one_general, point_classes
from .balanced import (
    arithmetic_generality_criterion,
    is_balanced,
    is_d_general,
    is_semibalanced,
    is_stably_balanced,
    sigma1_witness,
)
from .errors import AbelGraphError, InvariantViolation
from .graph import (
    DualGraph,
    PointOnCurve,
    Subcurve,
    Tail,
    _connected_masks,
    blow_up,
    bridges,
    point_in_tail,
    small_tail_set,
    stability_class,
    subcurve_report,
    tail_pair_relation,
    tails,
    QUASISTABLE,
)
from .lattice import (
    Multidegree,
    canonical_representative,
    canonical_representatives,
    class_group,
    classes_equal,
    spanning_tree_count,
    tail_twister_multidegree,
)


class CheckFailed(AssertionError):
    pass


def expect(cond: bool, message: str) -> None:
    if not cond:
        raise CheckFailed(message)


# -- graph_core -------------------------------------------------------------


def brute_force_bridges(X: DualGraph) -> list[str]:
    return sorted(
        e.id
        for e in X.edges
        if not e.is_loop and len(X._components(X.full_mask, frozenset([e.id]))) > 1
    )


def check_graph_core(X: DualGraph) -> None:
    expect(sum(X.omega_degrees) == 2 * X.genus - 2, "omega degrees do not sum to 2g-2")
    for mask in _connected_masks(X, None):
        Z = subcurve_report(X, X.ids_of(mask))
        expect(Z.w >= 0, f"negative w on {Z.sorted_ids}")
    expect(bridges(X) == brute_force_bridges(X), "Tarjan bridges disagree with deletion test")
    ts = tails(X)
    expect(len(ts) == 2 * len(bridges(X)), "two tails per bridge expected")
    for Q in ts:
        sub = Subcurve(X, Q.vertices)
        expect(sub.connected and sub.k == 1, f"tail {Q.sorted_ids} is not a one-bridge side")
    for e in X.edges:
        Y = blow_up(X, e.id)
        expect(Y.genus == X.genus, f"blow-up at {e.id} changes the genus")
        expect(stability_class(Y) == QUASISTABLE, f"blow-up at {e.id} is not quasistable")


def nested_chains(ts: list[Tail]) -> list[list[Tail]]:
    """All nonempty chains Q_1 < Q_2 < ... of tails under strict inclusion."""
    ordered = sorted(ts, key=lambda t: (len(t.vertices), t.sorted_ids))
    chains: list[list[Tail]] = []

    def grow(chain: list[Tail], start: int) -> None:
        chains.append(list(chain))
        for j in range(start, len(ordered)):
            if chain[-1].vertices < ordered[j].vertices:
                chain.append(ordered[j])
                grow(chain, j + 1)
                chain.pop()

    for i, Q in enumerate(ordered):
        grow([Q], i + 1)
    return chains


def check_tail_relations(X: DualGraph) -> None:
    ts = tails(X)
    for Q1 in ts:
        for Q2 in ts:
            tail_pair_relation(Q1, Q2)
    by_bridge: dict[str, list[Tail]] = {}
    for Q in ts:
        by_bridge.setdefault(Q.bridge, []).append(Q)
    for pair in by_bridge.values():
        a, b = pair
        expect(a.genus + b.genus == X.genus, "tail genera do not add up")
        total = tail_twister_multidegree(X, [(a, 1), (b, 1)])
        expect(all(v == 0 for v in total.values), "complementary tail twisters do not cancel")


def check_tail_twister_chains(X: DualGraph) -> None:
    """Every connected proper subcurve has degree in [-1, 1] on a chain twister, with the stated extremes."""
    masks = [m for m in _connected_masks(X, None) if m != X.full_mask]
    for chain in nested_chains(tails(X)):
        T = tail_twister_multidegree(X, [(Q, 1) for Q in chain])
        for m in masks:
            Z = frozenset(X.ids_of(m))
            deg = T.degree_on(Z)
            expect(-1 <= deg <= 1, f"chain twister has degree {deg} on {sorted(Z)}")
            crossing = [
                Q for Q in chain if len({end in Z for end in X.edge_map[Q.bridge].ends}) == 2
            ]
            if len(crossing) == 1:
                (Q,) = crossing
                if Z <= Q.vertices:
                    expect(deg == -1, "lower extreme not attained")
                else:
                    expect(Z.isdisjoint(Q.vertices) and deg == 1, "upper extreme not attained")
            else:
                expect(deg == 0, f"extreme degree {deg} without a unique crossing node")


# -- lattice ----------------------------------------------------------------


def check_class_group(X: DualGraph) -> None:
    expect(class_group(X).order == spanning_tree_count(X), "class group order != spanning trees")


def brute_force_class_count(X: DualGraph, radius: int = 10) -> int:
    """Distinct reduced forms of degree-0 multidegrees in the box [-radius, radius]^gamma."""
    n = X.gamma
    if n == 1:
        return 1
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
    head = np.stack([g.ravel() for g in grids], axis=1)
    last = -head.sum(axis=1)
    keep = np.abs(last) <= radius
    rows = np.concatenate([head[keep], last[keep, None]], axis=1)
    reps = canonical_representatives(X, rows)
    return len(np.unique(reps, axis=0))


def check_degree_classes(X: DualGraph, radius: int = 10) -> None:
    expect(brute_force_class_count(X, radius) == class_group(X).order, "brute-force class count mismatch")


def check_reduction(X: DualGraph, samples: int = 20, seed: int = 0) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        L = Multidegree(X, tuple(int(v) for v in rng.integers(-6, 7, X.gamma)))
        R = canonical_representative(X, L)
        expect(canonical_representative(X, R) == R, "reduction is not idempotent")
        expect(classes_equal(X, L, R), "reduced form left its class")


# -- balanced ---------------------------------------------------------------


def check_balanced(X: DualGraph, degrees: range | None = None) -> None:
    g = X.genus
    degrees = range(0, 2 * g - 1) if degrees is None else degrees
    for d in degrees:
        gen = is_d_general(X, d)  # asserts surjectivity and the two-route agreement
        bal = gen.balanced
        expect(bool(bal.B), f"no balanced multidegree in degree {d}")
        expect(gen.class_map.surjective, f"class map not surjective in degree {d}")
        expect(gen.class_map.bijective == (len(bal.B) == len(bal.Btilde)), "bijective != (B~ = B)")
        expect(gen.general == gen.class_map.bijective, "d-general verdict disagrees with class map")
        if arithmetic_generality_criterion(g, d):
            expect(gen.general, f"gcd(d-g+1, 2g-2) = 1 but not {d}-general")
        for L in bal.B:
            expect(is_balanced(X, L) and is_semibalanced(X, L), "enumerated element not balanced")
        for L in bal.Btilde:
            expect(is_stably_balanced(X, L), "B~ element not stably balanced")


def check_one_generality(X: DualGraph) -> None:
    general = is_one_general(X)
    if X.genus % 2 == 1:
        expect(general, "odd genus curve is not 1-general")
    Z = sigma1_witness(X)
    expect((Z is None) == general, "witness presence disagrees with 1-generality")
    if Z is not None:
        rest = X.full_mask & ~Z.mask
        expect(Z.w == X.genus - 1, "witness has w != g-1")
        expect(Z.k % 2 == 1, "witness has even k")
        expect(Z.connected and X.is_connected_mask(rest), "witness or complement disconnected")


# -- abel -------------------------------------------------------------------


def check_abel_multidegrees(X: DualGraph) -> None:
    Q = small_tail_set(X)
    for v in X.vertex_ids:
        p = PointOnCurve.smooth(v)
        L = abel_multidegree(X, p)
        expect(is_semibalanced(X, L), f"Abel multidegree at {v} not semibalanced")
        pure = Multidegree.indicator(X, [v])
        in_small = any(point_in_tail(X, p, T) for T in Q if T.size_class == "small")
        expect(is_semibalanced(X, pure) == (not in_small), f"O(p) semibalancedness wrong at {v}")
        # L - O(p) is a tail twister, so both lie in one class
        expect(classes_equal(X, L, pure), f"Abel multidegree at {v} left the class of O(p)")
        image = abel_image(X, p)
        expect(image.multidegree == L, "image multidegree differs from abel_multidegree")


def check_boundary_law(X: DualGraph) -> None:
    br = set(bridges(X))
    for e in X.edges:
        image = abel_image(X, PointOnCurve.node(e.id))
        expect(image.boundary == (e.id not in br), f"boundary flag wrong at node {e.id}")
        expect(image.piece_multidegree() == image.multidegree, "pieces do not sum to the multidegree")
        expect(is_semibalanced(image.host, image.multidegree), "node image not semibalanced")
        if image.boundary:
            expect(image.multidegree[image.exceptional] == 1, "exceptional degree is not 1")


def check_fibers(X: DualGraph, labels: tuple[str, ...] = ("p", "q")) -> bool:
    """Compare the two fiber routes; returns False when the curve is not 1-general (skipped)."""
    if not is_one_general(X):
        return False
    points = point_classes(X, labels)
    expect(fibers_from_trees(X, points) == fibers_from_comparator(X, points), "fiber routes disagree")
    return True


SUITE: list[tuple[str, Callable[[DualGraph], object]]] = [
    ("graph_core", check_graph_core),
    ("tail_relations", check_tail_relations),
    ("tail_twister_chains", check_tail_twister_chains),
    ("class_group", check_class_group),
    ("reduction", check_reduction),
    ("balanced", check_balanced),
    ("one_generality", check_one_generality),
    ("abel_multidegrees", check_abel_multidegrees),
    ("boundary_law", check_boundary_law),
    ("fibers", check_fibers),
]


@dataclass
class SuiteResult:
    graph_index: int
    check: str
    ok: bool
    detail: str = ""


def run_suite(graphs, with_degree_box: bool = False) -> list[SuiteResult]:
    results = []
    for i, X in enumerate(graphs):
        suite = list(SUITE)
        if with_degree_box and X.gamma <= 5:
            suite.append(("degree_classes", check_degree_classes))
        for name, fn in suite:
            try:
                fn(X)
                results.append(SuiteResult(i, name, True))
            except (CheckFailed, InvariantViolation, AbelGraphError) as exc:
                results.append(SuiteResult(i, name, False, f"{type(exc).__name__}: {exc}"))
    return results
