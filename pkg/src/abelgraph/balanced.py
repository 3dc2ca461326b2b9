"""Basic Inequality, balanced multidegrees, the class map and d-generality.

All bounds are exact rationals.  For enumeration they are turned into integer
boxes once per (graph, degree): an integer degree satisfies ``m <= x <= M``
iff ``ceil(m) <= x <= floor(M)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd

from .errors import (
    GenusTooSmall,
    HostMismatch,
    InvariantViolation,
    NotConnected,
    NotQuasistable,
    NotSemibalanced,
    NotStable,
)
from .graph import (
    DualGraph,
    Subcurve,
    _connected_masks,
    exceptional_vertices,
    is_quasistable,
    is_stable,
)
from .lattice import Multidegree, canonical_representative, class_group


def _require_genus(X: DualGraph) -> None:
    if X.genus < 2:
        raise GenusTooSmall(f"arithmetic genus {X.genus} < 2")


@dataclass(frozen=True)
class BasicBounds:
    subcurve: Subcurve
    d: int
    M: Fraction
    m: Fraction


def basic_bounds(Z: Subcurve, d: int) -> BasicBounds:
    X = Z.host
    _require_genus(X)
    if not Z.connected:
        raise NotConnected(f"{Z.sorted_ids} is not connected")
    upper = Fraction(d * Z.w, 2 * X.genus - 2) + Fraction(Z.k, 2)
    lower = Fraction(0) if Z.is_exceptional_component else upper - Z.k
    return BasicBounds(Z, d, upper, lower)


@dataclass(frozen=True)
class _Constraint:
    members: tuple[int, ...]
    lo: int
    hi: int
    m: Fraction
    M: Fraction
    # complement consists of exceptional vertices only
    complement_exceptional: bool


def _constraints(X: DualGraph, d: int) -> list[_Constraint]:
    cache = X.__dict__.setdefault("_bieq_cache", {})
    if d in cache:
        return cache[d]
    _require_genus(X)
    exc = {X.index[v] for v in exceptional_vertices(X)}
    out = []
    for mask in _connected_masks(X, None):
        if mask == X.full_mask:
            continue
        Z = Subcurve(X, frozenset(X.ids_of(mask)))
        b = basic_bounds(Z, d)
        members = tuple(i for i in range(X.gamma) if mask >> i & 1)
        rest = [i for i in range(X.gamma) if not mask >> i & 1]
        out.append(
            _Constraint(members, ceil(b.m), floor(b.M), b.m, b.M, all(i in exc for i in rest))
        )
    cache[d] = out
    return out


def _check_host(X: DualGraph, L: Multidegree) -> None:
    if L.host != X:
        raise HostMismatch("multidegree belongs to another graph")


def _semibalanced_lower(X: DualGraph, L: Multidegree) -> bool:
    vals = L.values
    return all(sum(vals[i] for i in c.members) >= c.m for c in _constraints(X, L.total))


def _semibalanced_two_sided(X: DualGraph, L: Multidegree) -> bool:
    vals = L.values
    for c in _constraints(X, L.total):
        deg = sum(vals[i] for i in c.members)
        if not c.m <= deg <= c.M:
            return False
    return True


def is_semibalanced(X: DualGraph, L: Multidegree) -> bool:
    """Basic Inequality on every connected proper subcurve.

    Lower bounds alone suffice; the two-sided check is run as well and the
    two verdicts must agree.
    """
    _check_host(X, L)
    lower = _semibalanced_lower(X, L)
    full = _semibalanced_two_sided(X, L)
    if lower != full:
        raise InvariantViolation(f"lower-bound and two-sided checks disagree on {L}")
    return full


def _exceptional_degrees_one(X: DualGraph, L: Multidegree) -> bool:
    return all(L[v] == 1 for v in exceptional_vertices(X))


def is_balanced(X: DualGraph, L: Multidegree) -> bool:
    semi = is_semibalanced(X, L)
    if is_stable(X) and semi and not _exceptional_degrees_one(X, L):
        raise InvariantViolation("semibalanced but not balanced on a stable curve")
    return semi and _exceptional_degrees_one(X, L)


def _attains_lower_badly(X: DualGraph, L: Multidegree) -> bool:
    vals = L.values
    for c in _constraints(X, L.total):
        if c.m.denominator == 1 and sum(vals[i] for i in c.members) == c.m:
            if not c.complement_exceptional:
                return True
    return False


def is_stably_balanced(X: DualGraph, L: Multidegree) -> bool:
    return is_balanced(X, L) and not _attains_lower_badly(X, L)


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class BalancedSet:
    host: DualGraph = field(repr=False)
    d: int
    B: list[Multidegree]
    Btilde: list[Multidegree]

    @property
    def unstable_part(self) -> list[Multidegree]:
        stable = set(self.Btilde)
        return [L for L in self.B if L not in stable]


def _balanced_vectors(X: DualGraph, d: int) -> list[tuple[int, ...]]:
    n = X.gamma
    cons = _constraints(X, d)
    exc = {X.index[v] for v in exceptional_vertices(X)}
    lo = [None] * n
    hi = [None] * n
    checks: list[list[_Constraint]] = [[] for _ in range(n)]
    for c in cons:
        if len(c.members) == 1:
            (i,) = c.members
            lo[i], hi[i] = c.lo, c.hi
        checks[max(c.members)].append(c)
    if n == 1:
        return [(d,)]
    for i in exc:
        lo[i] = max(lo[i], 1)
        hi[i] = min(hi[i], 1)
    # bounds on the suffix sums prune hopeless partial assignments early
    suffix_lo = [0] * (n + 1)
    suffix_hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + lo[i]
        suffix_hi[i] = suffix_hi[i + 1] + hi[i]

    found: list[tuple[int, ...]] = []
    x = [0] * n

    def ok(i: int) -> bool:
        for c in checks[i]:
            deg = sum(x[j] for j in c.members)
            if deg < c.lo or deg > c.hi:
                return False
        return True

    def rec(i: int, partial: int) -> None:
        if i == n - 1:
            last = d - partial
            if lo[i] <= last <= hi[i]:
                x[i] = last
                if ok(i):
                    found.append(tuple(x))
            return
        rest_lo, rest_hi = suffix_lo[i + 1], suffix_hi[i + 1]
        for v in range(lo[i], hi[i] + 1):
            s = partial + v
            if s + rest_lo > d or s + rest_hi < d:
                continue
            x[i] = v
            if ok(i):
                rec(i + 1, s)

    rec(0, 0)
    return found


def enumerate_balanced(X: DualGraph, d: int) -> BalancedSet:
    """All balanced multidegrees of total degree d, lexicographically ordered."""
    _require_genus(X)
    if not is_quasistable(X):
        raise NotQuasistable("balanced multidegrees exist only on quasistable curves")
    B = [Multidegree(X, v) for v in _balanced_vectors(X, d)]
    for L in B:
        if not is_balanced(X, L):
            raise InvariantViolation(f"enumeration produced unbalanced {L}")
    Btilde = [L for L in B if not _attains_lower_badly(X, L)]
    return BalancedSet(X, d, B, Btilde)


# ---------------------------------------------------------------------------
# class map and generality


@dataclass
class ClassMapReport:
    d: int
    order: int
    surjective: bool
    injective: bool
    fibers: dict[tuple[int, ...], list[Multidegree]]

    @property
    def bijective(self) -> bool:
        return self.surjective and self.injective


def _require_stable(X: DualGraph) -> None:
    _require_genus(X)
    if not is_stable(X):
        raise NotStable("the curve must be stable")


def class_map_analysis(X: DualGraph, d: int, balanced: BalancedSet | None = None) -> ClassMapReport:
    """Map each balanced multidegree to its class in the degree-d class group."""
    _require_stable(X)
    balanced = enumerate_balanced(X, d) if balanced is None else balanced
    fibers: dict[tuple[int, ...], list[Multidegree]] = {}
    for L in balanced.B:
        key = canonical_representative(X, L).values
        fibers.setdefault(key, []).append(L)
    order = class_group(X).order
    if len(fibers) > order:
        raise InvariantViolation(f"{len(fibers)} classes found but the group has order {order}")
    return ClassMapReport(
        d=d,
        order=order,
        surjective=len(fibers) == order,
        injective=len(fibers) == len(balanced.B),
        fibers=dict(sorted(fibers.items())),
    )


@dataclass
class DGenerality:
    d: int
    general: bool
    witness: Multidegree | None
    class_map: ClassMapReport = field(repr=False)
    balanced: BalancedSet = field(repr=False)


def is_d_general(X: DualGraph, d: int) -> DGenerality:
    """Decide d-generality by bijectivity of the class map and by B~ = B, which must agree."""
    _require_stable(X)
    bal = enumerate_balanced(X, d)
    report = class_map_analysis(X, d, bal)
    if not report.surjective:
        raise InvariantViolation(f"class map not surjective in degree {d}")
    all_stable = len(bal.Btilde) == len(bal.B)
    if report.bijective != all_stable:
        raise InvariantViolation(
            f"degree {d}: class map bijective={report.bijective} but B~=B is {all_stable}"
        )
    unstable = bal.unstable_part
    return DGenerality(d, all_stable, unstable[0] if unstable else None, report, bal)


def arithmetic_generality_criterion(g: int, d: int) -> bool:
    """True iff every stable curve of genus g is d-general."""
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    return gcd(d - g + 1, 2 * g - 2) == 1


def sigma1_witness(X: DualGraph) -> Subcurve | None:
    """A connected proper Z with w_Z = g-1, k_Z odd and connected complement, if any.

    Such a subcurve exists exactly when X is not 1-general; both sides are
    computed and compared.
    """
    _require_stable(X)
    witness = None
    for mask in _connected_masks(X, None):
        if mask == X.full_mask:
            continue
        Z = Subcurve(X, frozenset(X.ids_of(mask)))
        if Z.w == X.genus - 1 and Z.k % 2 == 1 and X.is_connected_mask(X.full_mask & ~mask):
            witness = Z
            break
    general = is_d_general(X, 1).general
    if general == (witness is not None):
        raise InvariantViolation(
            f"1-general={general} but witness {'found' if witness else 'missing'}"
        )
    return witness


# ---------------------------------------------------------------------------
# equivalence of semibalanced multidegrees


def canonical_graph_form(X: DualGraph) -> tuple:
    """Labelled graph up to renaming of edges."""
    vs = tuple((v.id, v.genus) for v in X.vertices)
    es = tuple(sorted(e.ends for e in X.edges))
    return vs, es


@dataclass(frozen=True)
class EquivalenceKey:
    host: DualGraph = field(compare=False)
    restricted: tuple[tuple[str, int], ...]
    exceptional: tuple[str, ...]
    host_form: tuple = field(repr=False)


def contract_exceptional(Y: DualGraph, vertices: list[str]) -> DualGraph:
    """Contract exceptional vertices, joining their two neighbours by a single edge."""
    genera = {v.id: v.genus for v in Y.vertices}
    edges = {e.id: list(e.ends) for e in Y.edges}
    for E in vertices:
        incident = [eid for eid, ends in edges.items() if E in ends]
        if len(incident) != 2 or genera.get(E) != 0:
            raise NotQuasistable(f"{E} is not an exceptional component")
        far = []
        for eid in incident:
            ends = edges.pop(eid)
            far.append(ends[1] if ends[0] == E else ends[0])
        del genera[E]
        new_id = E
        while new_id in edges:
            new_id += "'"
        edges[new_id] = far
    return DualGraph.build(genera, [(eid, *ends) for eid, ends in edges.items()])


def equivalence_key(Y: DualGraph, L: Multidegree) -> EquivalenceKey:
    """Quasistable model plus restriction to non-exceptional components."""
    _check_host(Y, L)
    _require_genus(Y)
    if not is_quasistable(Y):
        raise NotQuasistable("equivalence keys are formed on quasistable curves")
    if not is_semibalanced(Y, L):
        raise NotSemibalanced(f"{L} is not semibalanced")
    zero = [v for v in exceptional_vertices(Y) if L[v] == 0]
    host = contract_exceptional(Y, zero) if zero else Y
    kept = {v: L[v] for v in host.vertex_ids}
    M = Multidegree.from_mapping(host, kept)
    if not is_balanced(host, M):
        raise InvariantViolation("contracting degree-0 exceptional components left an unbalanced bundle")
    exc = exceptional_vertices(host)
    restricted = tuple((v, kept[v]) for v in host.vertex_ids if v not in exc)
    return EquivalenceKey(host, restricted, exc, canonical_graph_form(host))
