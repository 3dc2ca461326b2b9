"""Dual graphs of nodal curves and their purely combinatorial invariants.

A nodal curve is encoded by its dual graph: one vertex per irreducible
component, weighted by the geometric genus of its normalization, and one edge
per node.  Self-nodes of a component are loops.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    EmptySet,
    HostMismatch,
    InvalidGraph,
    InvariantViolation,
    LimitExceeded,
    MultipleHalfNodes,
    UnknownEdge,
    UnknownPoint,
)

DEFAULT_MAX_VERTICES = 16

STABLE = "stable"
SEMISTABLE = "semistableNotStable"
QUASISTABLE = "quasistableNotStable"
NOT_SEMISTABLE = "notSemistable"


def max_vertices() -> int:
    """Vertex limit for subset enumeration, overridable via the environment."""
    raw = os.environ.get("ABELGRAPH_MAX_VERTICES")
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError:
        raise LimitExceeded(f"ABELGRAPH_MAX_VERTICES is not an integer: {raw!r}")
    if value < 1:
        raise LimitExceeded("ABELGRAPH_MAX_VERTICES must be positive")
    return value


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class DualGraph:
    """Genus-weighted connected multigraph; vertices and edges kept sorted by id."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices, key=lambda v: v.id))
        edges = tuple(
            sorted((Edge(e.id, tuple(sorted(e.ends))) for e in self.edges), key=lambda e: e.id)
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        self._validate()

    @classmethod
    def build(cls, genera: Mapping[str, int], edges: Iterable[Sequence[str]] = ()) -> "DualGraph":
        """Build from ``{vertex: genus}`` and ``(edge_id, end, end)`` triples."""
        vs = tuple(Vertex(v, g) for v, g in genera.items())
        es = []
        for item in edges:
            if len(item) != 3:
                raise InvalidGraph(f"edge must be (id, end, end), got {item!r}")
            eid, a, b = item
            es.append(Edge(eid, (a, b)))
        return cls(vs, tuple(es))

    def _validate(self) -> None:
        if not self.vertices:
            raise InvalidGraph("a curve has at least one component")
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise InvalidGraph("duplicate vertex id")
        for v in self.vertices:
            if not isinstance(v.id, str) or not v.id:
                raise InvalidGraph(f"vertex ids must be nonempty strings: {v.id!r}")
            if isinstance(v.genus, bool) or not isinstance(v.genus, int) or v.genus < 0:
                raise InvalidGraph(f"genus of {v.id} must be a nonnegative integer")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise InvalidGraph("duplicate edge id")
        known = set(ids)
        for e in self.edges:
            if not isinstance(e.id, str) or not e.id:
                raise InvalidGraph(f"edge ids must be nonempty strings: {e.id!r}")
            for end in e.ends:
                if end not in known:
                    raise InvalidGraph(f"edge {e.id} has unknown end {end!r}")
        if len(self._components(self.full_mask, frozenset())) != 1:
            raise InvalidGraph("dual graph must be connected")

    # -- cached structure -------------------------------------------------

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertex_ids)}

    @cached_property
    def genera(self) -> tuple[int, ...]:
        return tuple(v.genus for v in self.vertices)

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.index[e.ends[0]], self.index[e.ends[1]]) for e in self.edges)

    @cached_property
    def valence(self) -> tuple[int, ...]:
        val = [0] * self.gamma
        for i, j in self.edge_pairs:
            val[i] += 1
            val[j] += 1
        return tuple(val)

    @cached_property
    def loop_count(self) -> tuple[int, ...]:
        loops = [0] * self.gamma
        for i, j in self.edge_pairs:
            if i == j:
                loops[i] += 1
        return tuple(loops)

    @cached_property
    def multiplicity(self) -> tuple[tuple[int, ...], ...]:
        """Number of non-loop edges between each pair of vertices."""
        n = self.gamma
        mult = [[0] * n for _ in range(n)]
        for i, j in self.edge_pairs:
            if i != j:
                mult[i][j] += 1
                mult[j][i] += 1
        return tuple(tuple(row) for row in mult)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        masks = [0] * self.gamma
        for i, j in self.edge_pairs:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return tuple(masks)

    @property
    def gamma(self) -> int:
        return len(self.vertices)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def genus(self) -> int:
        return sum(self.genera) + len(self.edges) - self.gamma + 1

    @cached_property
    def omega_degrees(self) -> tuple[int, ...]:
        """Per-vertex degree of the dualizing sheaf, 2g_v - 2 + valence."""
        return tuple(2 * g - 2 + val for g, val in zip(self.genera, self.valence))

    # -- vertex sets as bitmasks ------------------------------------------

    def mask_of(self, vertices: Iterable[str]) -> int:
        mask = 0
        for v in vertices:
            if v not in self.index:
                raise InvalidGraph(f"unknown vertex {v!r}")
            mask |= 1 << self.index[v]
        return mask

    def ids_of(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertex_ids) if mask >> i & 1)

    def _components(self, mask: int, removed: frozenset[str]) -> list[int]:
        """Connected components of the induced subgraph on ``mask``, minus ``removed`` edges."""
        adj: list[int] = [0] * len(self.vertices)
        index = {v.id: i for i, v in enumerate(self.vertices)}
        for e in self.edges:
            if e.id in removed:
                continue
            i, j = index[e.ends[0]], index[e.ends[1]]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        comps = []
        left = mask
        while left:
            seed = left & -left
            comp = seed
            frontier = seed
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                new = adj[low.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            left &= ~comp
        return comps

    def is_connected_mask(self, mask: int) -> bool:
        if not mask:
            return False
        seed = mask & -mask
        comp = seed
        frontier = seed
        nbrs = self.neighbor_masks
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbrs[low.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        return comp == mask

    def boundary_count(self, mask: int) -> int:
        """k_Z: non-loop edges with exactly one end in the set."""
        return sum(1 for i, j in self.edge_pairs if (mask >> i & 1) != (mask >> j & 1))

    def internal_edge_count(self, mask: int) -> int:
        return sum(1 for i, j in self.edge_pairs if mask >> i & 1 and mask >> j & 1)

    def __repr__(self) -> str:
        vs = ", ".join(f"{v.id}:{v.genus}" for v in self.vertices)
        es = ", ".join(f"{e.id}={e.ends[0]}-{e.ends[1]}" for e in self.edges)
        return f"DualGraph([{vs}], [{es}])"


# ---------------------------------------------------------------------------
# subcurves


@dataclass(frozen=True)
class Subcurve:
    host: DualGraph = field(repr=False)
    vertices: frozenset[str]

    @cached_property
    def mask(self) -> int:
        return self.host.mask_of(self.vertices)

    @cached_property
    def connected(self) -> bool:
        return self.host.is_connected_mask(self.mask)

    @cached_property
    def k(self) -> int:
        return self.host.boundary_count(self.mask)

    @cached_property
    def w(self) -> int:
        """Degree of the dualizing sheaf on Z, summed vertex by vertex."""
        om = self.host.omega_degrees
        return sum(om[i] for i in range(self.host.gamma) if self.mask >> i & 1)

    @cached_property
    def g(self) -> int | None:
        if not self.connected:
            return None
        gen = self.host.genera
        total = sum(gen[i] for i in range(self.host.gamma) if self.mask >> i & 1)
        return total + self.host.internal_edge_count(self.mask) - len(self.vertices) + 1

    @property
    def is_proper(self) -> bool:
        return self.mask != self.host.full_mask

    @property
    def complement(self) -> frozenset[str]:
        return frozenset(self.host.vertex_ids) - self.vertices

    @property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))

    @property
    def is_exceptional_component(self) -> bool:
        if len(self.vertices) != 1:
            return False
        (v,) = self.vertices
        return is_exceptional(self.host, v)


def arithmetic_genus(X: DualGraph) -> int:
    return X.genus


def subcurve_report(X: DualGraph, S: Iterable[str]) -> Subcurve:
    """Subcurve invariants k, w and (when connected) g, with adjunction checked."""
    vertices = frozenset(S)
    if not vertices:
        raise EmptySet("subcurve vertex set is empty")
    for v in vertices:
        if v not in X.index:
            raise InvalidGraph(f"unknown vertex {v!r}")
    Z = Subcurve(X, vertices)
    if Z.connected and Z.w != 2 * Z.g - 2 + Z.k:
        raise InvariantViolation(f"adjunction fails on {Z.sorted_ids}: w={Z.w}, g={Z.g}, k={Z.k}")
    return Z


def _connected_masks(X: DualGraph, limit: int | None) -> list[int]:
    limit = max_vertices() if limit is None else limit
    if X.gamma > limit:
        raise LimitExceeded(f"{X.gamma} vertices exceeds the enumeration limit {limit}")
    cache = X.__dict__.setdefault("_connected_masks_cache", None)
    if cache is None:
        found = [m for m in range(1, X.full_mask + 1) if X.is_connected_mask(m)]
        found.sort(key=X.ids_of)
        cache = found
        X.__dict__["_connected_masks_cache"] = cache
    return cache


def enumerate_connected_subcurves(
    X: DualGraph, proper_only: bool = False, limit: int | None = None
) -> Iterator[Subcurve]:
    """Yield every connected vertex subset once, ordered by sorted id tuple."""
    for mask in _connected_masks(X, limit):
        if proper_only and mask == X.full_mask:
            continue
        yield Subcurve(X, frozenset(X.ids_of(mask)))


# ---------------------------------------------------------------------------
# stability


def is_exceptional(X: DualGraph, v: str) -> bool:
    i = X.index[v]
    return X.genera[i] == 0 and X.loop_count[i] == 0 and X.valence[i] == 2


def exceptional_vertices(X: DualGraph) -> tuple[str, ...]:
    return tuple(v for v in X.vertex_ids if is_exceptional(X, v))


def stability_class(X: DualGraph) -> str:
    rational = [i for i in range(X.gamma) if X.genera[i] == 0]
    if all(X.valence[i] >= 3 for i in rational):
        return STABLE
    if any(X.valence[i] < 2 for i in rational):
        return NOT_SEMISTABLE
    exc = {X.index[v] for v in exceptional_vertices(X)}
    for i, j in X.edge_pairs:
        if i != j and i in exc and j in exc:
            return SEMISTABLE
    return QUASISTABLE


def is_stable(X: DualGraph) -> bool:
    return stability_class(X) == STABLE


def is_semistable(X: DualGraph) -> bool:
    return stability_class(X) != NOT_SEMISTABLE


def is_quasistable(X: DualGraph) -> bool:
    return stability_class(X) in (STABLE, QUASISTABLE)


# ---------------------------------------------------------------------------
# bridges and tails


def bridges(X: DualGraph) -> list[str]:
    """Edges whose removal disconnects X (Tarjan low-link, parallel edges respected)."""
    n = X.gamma
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (i, j) in enumerate(X.edge_pairs):
        if i == j:
            continue
        adj[i].append((j, k))
        adj[j].append((i, k))
    order = [-1] * n
    low = [0] * n
    found: list[str] = []
    counter = 0
    # iterative DFS; the edge index (not the neighbor) identifies the tree edge
    stack = [(0, -1, iter(adj[0]))]
    order[0] = low[0] = counter
    counter += 1
    while stack:
        v, via, it = stack[-1]
        advanced = False
        for w, k in it:
            if k == via:
                continue
            if order[w] == -1:
                order[w] = low[w] = counter
                counter += 1
                stack.append((w, k, iter(adj[w])))
                advanced = True
                break
            low[v] = min(low[v], order[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            parent = stack[-1][0]
            low[parent] = min(low[parent], low[v])
            if low[v] > order[parent]:
                found.append(X.edges[via].id)
    return sorted(found)


SMALL = "small"
LARGE = "large"
HALF = "half"


@dataclass(frozen=True)
class Tail:
    """One side of a bridge.  ``inner`` is the bridge end inside the tail."""

    host: DualGraph = field(repr=False)
    vertices: frozenset[str]
    bridge: str
    inner: str
    outer: str
    genus: int
    size_class: str

    @property
    def subcurve(self) -> Subcurve:
        return Subcurve(self.host, self.vertices)

    @property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))


def _size_class(genus: int, total: int) -> str:
    if 2 * genus < total:
        return SMALL
    if 2 * genus > total:
        return LARGE
    return HALF


def tails(X: DualGraph) -> list[Tail]:
    """Both tails of every bridge, ordered by bridge id then side."""
    out = []
    for b in bridges(X):
        edge = X.edge_map[b]
        comps = X._components(X.full_mask, frozenset([b]))
        if len(comps) != 2:
            raise InvariantViolation(f"bridge {b} does not split X in two")
        pair = []
        for comp in comps:
            ids = frozenset(X.ids_of(comp))
            inner, outer = edge.ends if edge.ends[0] in ids else edge.ends[::-1]
            Z = Subcurve(X, ids)
            pair.append(Tail(X, ids, b, inner, outer, Z.g, _size_class(Z.g, X.genus)))
        if pair[0].genus + pair[1].genus != X.genus:
            raise InvariantViolation(f"tail genera do not add up at {b}")
        pair.sort(key=lambda t: t.sorted_ids)
        out.extend(pair)
    return out


def strict_small_tails(X: DualGraph) -> list[Tail]:
    """Tails of genus strictly below g/2."""
    return sorted((t for t in tails(X) if t.size_class == SMALL), key=lambda t: t.sorted_ids)


def small_tail_set(X: DualGraph) -> list[Tail]:
    """Small tails plus one tail of genus g/2 when such a tail exists.

    The half-genus side kept is the one whose sorted id tuple is smallest.
    """
    all_tails = tails(X)
    small = [t for t in all_tails if t.size_class == SMALL]
    half = [t for t in all_tails if t.size_class == HALF]
    half_nodes = sorted({t.bridge for t in half})
    if len(half_nodes) > 1:
        raise MultipleHalfNodes(f"several nodes split X into equal genera: {half_nodes}")
    if half:
        small.append(min(half, key=lambda t: t.sorted_ids))
    return sorted(small, key=lambda t: t.sorted_ids)


COVER = "cover"
DISJOINT = "disjoint"
FIRST_IN_SECOND = "Q1subQ2"
SECOND_IN_FIRST = "Q2subQ1"
EQUAL = "equal"


def tail_pair_relation(Q1: Tail, Q2: Tail) -> str:
    if Q1.host != Q2.host:
        raise HostMismatch("tails live on different graphs")
    a, b = Q1.vertices, Q2.vertices
    if a == b:
        return EQUAL
    if a < b:
        return FIRST_IN_SECOND
    if b < a:
        return SECOND_IN_FIRST
    if a | b == frozenset(Q1.host.vertex_ids):
        return COVER
    if not a & b:
        return DISJOINT
    raise InvariantViolation(f"no relation between tails {sorted(a)} and {sorted(b)}")


# ---------------------------------------------------------------------------
# separating lines and trees


def separating_lines(X: DualGraph) -> list[str]:
    """Loopless genus-0 vertices all of whose edges are bridges."""
    br = set(bridges(X))
    out = []
    for v in X.vertex_ids:
        i = X.index[v]
        if X.genera[i] or X.loop_count[i]:
            continue
        incident = [e.id for e in X.edges if v in e.ends]
        if all(e in br for e in incident):
            out.append(v)
    return out


def separating_trees_of_lines(X: DualGraph) -> list[frozenset[str]]:
    """Maximal connected genus-0 subcurves meeting the rest only in bridges."""
    lines = separating_lines(X)
    if not lines:
        return []
    mask = X.mask_of(lines)
    trees = []
    for comp in X._components(mask, frozenset()):
        Z = Subcurve(X, frozenset(X.ids_of(comp)))
        if Z.g != 0 or not _meets_rest_in_bridges(X, Z):
            raise InvariantViolation(f"{Z.sorted_ids} is not a separating tree of lines")
        trees.append(Z.vertices)
    for tree in trees:
        # every connected piece of a separating tree is again one
        sub = X.mask_of(tree)
        for m in _submasks(sub):
            if X.is_connected_mask(m):
                piece = Subcurve(X, frozenset(X.ids_of(m)))
                if piece.g != 0 or not _meets_rest_in_bridges(X, piece):
                    raise InvariantViolation(f"{piece.sorted_ids} breaks the subtree property")
    return sorted(trees, key=lambda t: tuple(sorted(t)))


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _meets_rest_in_bridges(X: DualGraph, Z: Subcurve) -> bool:
    br = set(bridges(X))
    for e in X.edges:
        inside = [end in Z.vertices for end in e.ends]
        if inside[0] != inside[1] and e.id not in br:
            return False
    return True


def blocks(X: DualGraph) -> list[frozenset[str]]:
    """Connected components of X after deleting every bridge."""
    comps = X._components(X.full_mask, frozenset(bridges(X)))
    return sorted((frozenset(X.ids_of(c)) for c in comps), key=lambda b: tuple(sorted(b)))


# ---------------------------------------------------------------------------
# blow-ups


def _fresh(name: str, taken: set[str]) -> str:
    candidate = name
    n = 1
    while candidate in taken:
        candidate = f"{name}~{n}"
        n += 1
    return candidate


@dataclass(frozen=True)
class BlowUp:
    graph: DualGraph
    node: str
    exceptional: str
    # half-edge ids joining the exceptional vertex to the two former ends of the node
    halves: tuple[str, str]
    ends: tuple[str, str]


def blow_up_data(X: DualGraph, r: str) -> BlowUp:
    if r not in X.edge_map:
        raise UnknownEdge(f"no edge {r!r}")
    edge = X.edge_map[r]
    exc = _fresh(f"E_{r}", set(X.vertex_ids))
    taken = {e.id for e in X.edges if e.id != r}
    h1 = _fresh(f"{r}_a", taken)
    taken.add(h1)
    h2 = _fresh(f"{r}_b", taken)
    genera = {v.id: v.genus for v in X.vertices}
    genera[exc] = 0
    es = [(e.id, *e.ends) for e in X.edges if e.id != r]
    es.append((h1, exc, edge.ends[0]))
    es.append((h2, exc, edge.ends[1]))
    Y = DualGraph.build(genera, es)
    if Y.genus != X.genus:
        raise InvariantViolation("blow-up changed the arithmetic genus")
    return BlowUp(Y, r, exc, (h1, h2), edge.ends)


def blow_up(X: DualGraph, r: str) -> DualGraph:
    """Replace node ``r`` by a new smooth rational component joining its branches."""
    return blow_up_data(X, r).graph


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class PointOnCurve:
    kind: str
    component: str | None = None
    label: str | None = None
    edge: str | None = None

    @classmethod
    def smooth(cls, component: str, label: str = "p") -> "PointOnCurve":
        return cls("smoothPoint", component=component, label=label)

    @classmethod
    def node(cls, edge: str) -> "PointOnCurve":
        return cls("node", edge=edge)

    @property
    def is_node(self) -> bool:
        return self.kind == "node"

    @property
    def symbol(self) -> str:
        # node symbols are bare edge ids; smooth symbols always carry a colon
        if self.is_node:
            return self.edge
        return f"{self.component}:{self.label}"

    def check(self, X: DualGraph) -> None:
        if self.is_node:
            if self.edge not in X.edge_map:
                raise UnknownPoint(f"no node {self.edge!r}")
        elif self.kind == "smoothPoint":
            if self.component not in X.index or not self.label:
                raise UnknownPoint(f"no component {self.component!r}")
        else:
            raise UnknownPoint(f"unknown point kind {self.kind!r}")


def point_in_tail(X: DualGraph, p: PointOnCurve, Q: Tail) -> bool:
    """Smooth points by component; a node if both ends lie in Q or it generates Q."""
    p.check(X)
    if not p.is_node:
        return p.component in Q.vertices
    if p.edge == Q.bridge:
        return True
    a, b = X.edge_map[p.edge].ends
    return a in Q.vertices and b in Q.vertices
