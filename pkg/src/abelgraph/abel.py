"""The first Abel map of a stable curve, its completion at nodes, and its fibers.

Points are symbolic: a smooth point is (component, label) and a node is an
edge id.  An Abel image is recorded as a host graph (X itself, or the blow-up
of X at a nonseparating node), a multidegree on that host and, piece by piece,
the formal divisor whose line bundle the image restricts to.  Pieces meet only
in separating nodes, so the pieces determine the image.

The two-component degree-d formula lives here too (``vine_*``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .balanced import (
    BalancedSet,
    basic_bounds,
    enumerate_balanced,
    is_balanced,
    is_d_general,
    is_semibalanced,
)
from .errors import (
    AbelGraphError,
    GenusTooSmall,
    InvariantViolation,
    Not1General,
    NotStable,
    NotTwoComponent,
    UnknownPoint,
)
from .graph import (
    BlowUp,
    DualGraph,
    PointOnCurve,
    Subcurve,
    Tail,
    blocks,
    blow_up_data,
    bridges,
    is_stable,
    point_in_tail,
    separating_trees_of_lines,
    small_tail_set,
    strict_small_tails,
    tails,
)
from .lattice import Multidegree, tail_twister_multidegree


def _require_stable(X: DualGraph) -> None:
    if X.genus < 2:
        raise GenusTooSmall(f"arithmetic genus {X.genus} < 2")
    if not is_stable(X):
        raise NotStable("the curve must be stable")


def is_one_general(X: DualGraph) -> bool:
    cache = X.__dict__
    if "_one_general" not in cache:
        cache["_one_general"] = is_d_general(X, 1).general
    return cache["_one_general"]


def _nested(chain: list[Tail]) -> list[Tail]:
    """Sort tails that pairwise contain one another into an increasing chain."""
    chain = sorted(chain, key=lambda t: len(t.vertices))
    for a, b in zip(chain, chain[1:]):
        if not a.vertices < b.vertices:
            raise InvariantViolation(f"tails {a.sorted_ids} and {b.sorted_ids} are not nested")
    return chain


def _chain_through(X: DualGraph, p: PointOnCurve, candidates: list[Tail]) -> list[Tail]:
    return _nested([Q for Q in candidates if point_in_tail(X, p, Q)])


def small_tails_through(X: DualGraph, p: PointOnCurve) -> list[Tail]:
    """Tails of Q(X) containing p, smallest first."""
    _require_stable(X)
    p.check(X)
    return _chain_through(X, p, small_tail_set(X))


def _abel_vector(X: DualGraph, component: str, tail_set: list[Tail]) -> Multidegree:
    p = PointOnCurve.smooth(component, "_")
    chain = _chain_through(X, p, tail_set)
    return Multidegree.indicator(X, [component]) + tail_twister_multidegree(X, [(Q, 1) for Q in chain])


def abel_multidegree(X: DualGraph, p: PointOnCurve) -> Multidegree:
    """Multidegree of O_X(p) twisted by every tail of Q(X) through p."""
    _require_stable(X)
    p.check(X)
    if p.is_node:
        raise UnknownPoint("abel_multidegree takes a smooth point")
    L = _abel_vector(X, p.component, small_tail_set(X))
    if not is_semibalanced(X, L) or not is_balanced(X, L):
        raise InvariantViolation(f"Abel multidegree {L} is not balanced")
    return L


# ---------------------------------------------------------------------------
# formal divisors and images


@dataclass(frozen=True, order=True)
class Term:
    symbol: str
    vertex: str
    coeff: int


def _combine(terms: list[tuple[str, str, int]]) -> tuple[Term, ...]:
    acc: Counter = Counter()
    for symbol, vertex, coeff in terms:
        acc[(symbol, vertex)] += coeff
    return tuple(sorted(Term(s, v, c) for (s, v), c in acc.items() if c))


@dataclass(frozen=True)
class FormalDivisor:
    """A divisor on one piece of the host; node terms name the branch by its vertex."""

    vertices: frozenset[str]
    terms: tuple[Term, ...]

    @property
    def degree(self) -> int:
        return sum(t.coeff for t in self.terms)

    @property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))


STABLE_HOST = "stable"
BLOWUP_HOST = "blowup"


@dataclass(frozen=True)
class AbelImage:
    point: PointOnCurve
    host: DualGraph = field(repr=False)
    host_kind: str
    node: str | None
    exceptional: str | None
    multidegree: Multidegree
    pieces: tuple[FormalDivisor, ...]
    boundary: bool
    # set when X is not 1-general: same formulas, half-genus tail kept in Q(X)
    qfix_extension: bool = False

    def piece_multidegree(self) -> Multidegree:
        values = {v: 0 for v in self.host.vertex_ids}
        for piece in self.pieces:
            for t in piece.terms:
                values[t.vertex] += t.coeff
        if self.exceptional is not None:
            values[self.exceptional] += 1
        return Multidegree.from_mapping(self.host, values)


def _pieces(chain_desc: list[Tail], all_vertices: frozenset[str], last: list[tuple[str, str, int]]):
    """Pieces Q, Z_1, ..., Z_m for tails P_1 > ... > P_m; ``last`` goes on Z_m."""
    if not chain_desc:
        return (FormalDivisor(all_vertices, _combine(last)),)
    P = chain_desc
    m = len(P)
    out = [FormalDivisor(all_vertices - P[0].vertices, _combine([(P[0].bridge, P[0].outer, 1)]))]
    for i in range(m - 1):
        Z = P[i].vertices - P[i + 1].vertices
        terms = [(P[i + 1].bridge, P[i + 1].outer, 1), (P[i].bridge, P[i].inner, -1)]
        out.append(FormalDivisor(Z, _combine(terms)))
    out.append(FormalDivisor(P[-1].vertices, _combine([*last, (P[-1].bridge, P[-1].inner, -1)])))
    return tuple(out)


@dataclass
class _BlowupRoute:
    blowup: BlowUp
    multidegree: Multidegree
    tails_used: list[Tail]


def _blowup_route(X: DualGraph, r: str, tail_set: list[Tail]) -> _BlowupRoute:
    """Image of node r as O(r-bar) twisted by the lifted tails through r-bar on the blow-up."""
    bu = blow_up_data(X, r)
    Y, E = bu.graph, bu.exceptional
    by_vertices = {t.vertices: t for t in tails(Y)}
    node = PointOnCurve.node(r)
    lifted: list[Tail] = []
    for Q in tail_set:
        inside = point_in_tail(X, node, Q)
        lifted.append(by_vertices[Q.vertices | {E}] if inside else by_vertices[Q.vertices])
        if Q.bridge == r:
            lifted.append(by_vertices[Q.vertices])
    if all(Q.size_class != "half" for Q in tail_set):
        expected = {t.vertices for t in strict_small_tails(Y)}
        if {t.vertices for t in lifted} != expected:
            raise InvariantViolation(f"lifted tails at {r} differ from the small tails of the blow-up")
    through = [t for t in lifted if E in t.vertices]
    L = _abel_vector(Y, E, through)
    if not is_semibalanced(Y, L):
        raise InvariantViolation(f"blow-up image of {r} is not semibalanced")
    separating = r in bridges(X)
    if L[E] != (0 if separating else 1):
        raise InvariantViolation(f"degree {L[E]} on the exceptional component of {r}")
    return _BlowupRoute(bu, L, through)


def abel_image(X: DualGraph, p: PointOnCurve) -> AbelImage:
    """Completed first Abel map at a smooth point or a node."""
    _require_stable(X)
    p.check(X)
    tail_set = small_tail_set(X)
    qfix = not is_one_general(X)
    everything = frozenset(X.vertex_ids)

    if not p.is_node:
        chain = _chain_through(X, p, tail_set)
        pieces = _pieces(chain[::-1], everything, [(p.symbol, p.component, 1)])
        L = abel_multidegree(X, p)
        image = AbelImage(p, X, STABLE_HOST, None, None, L, pieces, False, qfix)
    elif p.edge in bridges(X):
        chain = _chain_through(X, p, tail_set)
        if not chain or chain[0].bridge != p.edge:
            raise InvariantViolation(f"separating node {p.edge} generates no tail of Q(X)")
        innermost = chain[0]
        pieces = _pieces(chain[::-1], everything, [(p.edge, innermost.inner, 1)])
        route = _blowup_route(X, p.edge, tail_set)
        L = Multidegree.from_mapping(X, {v: route.multidegree[v] for v in X.vertex_ids})
        image = AbelImage(p, X, STABLE_HOST, None, None, L, pieces, False, qfix)
    else:
        route = _blowup_route(X, p.edge, tail_set)
        Y = route.blowup.graph
        chain = _chain_through(X, p, tail_set)
        lifted = [
            Tail(Y, Q.vertices, Q.bridge, Q.inner, Q.outer, Q.genus, Q.size_class) for Q in chain
        ]
        pieces = _pieces(lifted[::-1], everything, [])
        image = AbelImage(
            p, Y, BLOWUP_HOST, p.edge, route.blowup.exceptional, route.multidegree, pieces, True, qfix
        )

    if image.piece_multidegree() != image.multidegree:
        raise InvariantViolation(
            f"piece degrees {image.piece_multidegree()} disagree with {image.multidegree}"
        )
    return image


def _restrict(image: AbelImage, block: frozenset[str]) -> Counter:
    out: Counter = Counter()
    for piece in image.pieces:
        for t in piece.terms:
            if t.vertex in block:
                out[(t.symbol, t.vertex)] += t.coeff
    return Counter({k: v for k, v in out.items() if v})


def _is_rational_line(X: DualGraph, block: frozenset[str]) -> bool:
    if len(block) != 1:
        return False
    (v,) = block
    i = X.index[v]
    return X.genera[i] == 0 and X.loop_count[i] == 0


def images_equal(X: DualGraph, a: AbelImage, b: AbelImage) -> bool:
    """Compare two images by restricting both to every bridge-free block of X.

    Distinct generic points on a block are never linearly equivalent unless the
    block is a single smooth rational component, where only degrees matter.
    """
    if a.point == b.point:
        return True
    if a.host_kind != b.host_kind:
        return False
    if a.host_kind == BLOWUP_HOST:
        # balanced bundles on different quasistable curves
        return a.node == b.node
    for block in blocks(X):
        da, db = _restrict(a, block), _restrict(b, block)
        if da == db:
            continue
        if _is_rational_line(X, block) and sum(da.values()) == sum(db.values()):
            continue
        return False
    return True


def abel_images_equal(X: DualGraph, p: PointOnCurve, q: PointOnCurve) -> bool:
    _require_stable(X)
    if p == q:
        p.check(X)
        return True
    return images_equal(X, abel_image(X, p), abel_image(X, q))


# ---------------------------------------------------------------------------
# fibers


def point_classes(X: DualGraph, labels: tuple[str, ...] = ("p",)) -> list[PointOnCurve]:
    points = [PointOnCurve.smooth(v, label) for v in X.vertex_ids for label in labels]
    points.extend(PointOnCurve.node(e.id) for e in X.edges)
    return points


@dataclass
class AbelFibers:
    points: list[PointOnCurve]
    partition: list[list[PointOnCurve]]
    trees: list[frozenset[str]]

    @property
    def nontrivial(self) -> list[list[PointOnCurve]]:
        return [f for f in self.partition if len(f) > 1]


def _partition_from_key(points: list[PointOnCurve], key) -> list[list[PointOnCurve]]:
    groups: dict = {}
    for i, p in enumerate(points):
        groups.setdefault(key(i, p), []).append(p)
    return sorted(groups.values(), key=lambda f: points.index(f[0]))


def fibers_from_trees(X: DualGraph, points: list[PointOnCurve]) -> list[list[PointOnCurve]]:
    """Points on (or at a node touching) the same maximal separating tree of lines collapse."""
    trees = separating_trees_of_lines(X)
    owner = {v: k for k, tree in enumerate(trees) for v in tree}

    def key(i: int, p: PointOnCurve):
        if p.is_node:
            hits = {owner[v] for v in X.edge_map[p.edge].ends if v in owner}
            if len(hits) > 1:
                raise InvariantViolation(f"node {p.edge} touches two maximal trees")
            return ("tree", hits.pop()) if hits else ("point", i)
        if p.component in owner:
            return ("tree", owner[p.component])
        return ("point", i)

    return _partition_from_key(points, key)


def fibers_from_comparator(X: DualGraph, points: list[PointOnCurve]) -> list[list[PointOnCurve]]:
    """Partition induced by pairwise comparison of symbolic images."""
    images = [abel_image(X, p) for p in points]
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if images_equal(X, images[i], images[j]):
                parent[find(j)] = find(i)
    # the relation must already be transitive: check every pair against the classes
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            same = find(i) == find(j)
            if same != images_equal(X, images[i], images[j]):
                raise InvariantViolation("image comparison is not an equivalence relation")
    return _partition_from_key(points, lambda i, p: find(i))


def abel_fibers(X: DualGraph, labels: tuple[str, ...] = ("p",), verify: bool = True) -> AbelFibers:
    """Fibers of the completed Abel map over representative points of every component and node."""
    _require_stable(X)
    if not is_one_general(X):
        raise Not1General("fibers are only described for 1-general curves")
    points = point_classes(X, labels)
    partition = fibers_from_trees(X, points)
    if verify:
        other = fibers_from_comparator(X, points)
        if other != partition:
            raise InvariantViolation("separating-tree fibers disagree with the image comparator")
    return AbelFibers(points, partition, separating_trees_of_lines(X))


# ---------------------------------------------------------------------------
# two-component curves


def _two_components(X: DualGraph, first: str | None) -> tuple[str, str]:
    if X.gamma != 2:
        raise NotTwoComponent(f"expected two components, found {X.gamma}")
    _require_stable(X)
    c1 = X.vertex_ids[0] if first is None else first
    if c1 not in X.index:
        raise NotTwoComponent(f"unknown component {c1!r}")
    c2 = next(v for v in X.vertex_ids if v != c1)
    return c1, c2


@dataclass
class VineParameters:
    components: tuple[str, str]
    d: int
    delta: int
    lower_bound: Fraction
    m: int
    r: dict[int, int]


def vine_parameters(X: DualGraph, d: int, first: str | None = None) -> VineParameters:
    """m = ceil of the C1 lower bound in degree d, and the residues r(a) for 0 <= a <= d."""
    c1, c2 = _two_components(X, first)
    delta = X.multiplicity[X.index[c1]][X.index[c2]]
    lower = basic_bounds(Subcurve(X, frozenset([c1])), d).m
    m = ceil(lower)
    r = {a: (a - m) % delta for a in range(0, max(d, 0) + 1)}
    return VineParameters((c1, c2), d, delta, lower, m, r)


@dataclass
class BvineReport:
    progression: list[Multidegree]
    equality: bool
    balanced: BalancedSet = field(repr=False)


def bvine_set(X: DualGraph, d: int, first: str | None = None) -> BvineReport:
    """The delta consecutive balanced multidegrees (m, d-m), ..., and whether they are all of B."""
    params = vine_parameters(X, d, first)
    c1, c2 = params.components
    prog = [
        Multidegree.from_mapping(X, {c1: params.m + i, c2: d - params.m - i})
        for i in range(params.delta)
    ]
    equality = params.lower_bound.denominator != 1
    bal = enumerate_balanced(X, d)
    members = set(bal.B)
    if not all(L in members for L in prog):
        raise InvariantViolation("progression not contained in the balanced set")
    if (set(prog) == members) != equality:
        raise InvariantViolation("equality flag disagrees with the balanced set")
    if is_d_general(X, d).general != equality:
        raise InvariantViolation("equality flag disagrees with d-generality")
    return BvineReport(prog, equality, bal)


def vine_abel_multidegree(X: DualGraph, d: int, a0: int, first: str | None = None) -> Multidegree:
    """Degree-d Abel multidegree when a0 of the d points lie on the first component."""
    if not 0 <= a0 <= d:
        raise AbelGraphError(f"a0 must lie in [0, {d}]")
    params = vine_parameters(X, d, first)
    c1, c2 = params.components
    shift = params.m + params.r[a0]
    L = Multidegree.from_mapping(X, {c1: shift, c2: d - shift})
    if not is_balanced(X, L):
        raise InvariantViolation(f"vine multidegree {L} is not balanced")
    if not params.m <= L[c1] <= params.m + params.delta - 1:
        raise InvariantViolation(f"vine multidegree {L} outside the progression")
    return L
