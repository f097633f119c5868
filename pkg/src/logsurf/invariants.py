"""Discriminants, chain data, barks and coefficient (log-discrepancy) vectors.

Everything here is exact rational arithmetic on a dual graph.  The linear
solver in :mod:`logsurf.graph` is the single audited code path for
coefficients; the bark-based closed forms below are an independent route and
the two are cross-checked by the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import (
    HypothesisViolated,
    NotAChain,
    NotAdmissible,
    NotATree,
    NotNegativeDefinite,
    NotPeelable,
)
from .graph import (
    DualGraph,
    Fork,
    LogSurfaceModel,
    Vertex,
    ZERO,
    ONE,
    branching_number,
    find_shapes,
    is_negative_definite,
)
from .linalg import bareiss_det

Subdivisor = dict[str, Fraction]


def discriminant(graph: DualGraph, S: Iterable[str]) -> int:
    """d(S) = det(-Q|S); d(empty) = 1."""
    ids = sorted(set(S))
    for v in ids:
        graph.vertex(v)
    return bareiss_det(graph.neg_q(ids))


def split_discriminant(
    graph: DualGraph,
    D1: Iterable[str],
    D2: Iterable[str],
    T1: str,
    T2: str,
) -> int:
    """d(D1)d(D2) - (T1.T2) d(D1-T1) d(D2-T2), valid when D1 and D2 are
    disjoint and joined through the single pair T1, T2 only."""
    s1, s2 = set(D1), set(D2)
    if s1 & s2:
        raise HypothesisViolated("the two divisors share a component")
    if T1 not in s1 or T2 not in s2:
        raise HypothesisViolated("T1, T2 must lie in D1, D2 respectively")
    for u in s1:
        for w, m in graph.adjacency[u].items():
            if w in s2 and (u, w) != (T1, T2):
                raise HypothesisViolated(f"extra connecting edge {u}-{w}")
    m = graph.mult(T1, T2)
    return (
        discriminant(graph, s1) * discriminant(graph, s2)
        - m * discriminant(graph, s1 - {T1}) * discriminant(graph, s2 - {T2})
    )


@dataclass(frozen=True)
class ChainData:
    """An ordered chain with its discriminant data.

    ``d_upper[i]`` is d(T^(i+1)+...+T^(m)) and ``d_lower[i]`` is
    d(T^(1)+...+T^(i-1)), both indexed from 1 in the usual convention (the
    stored tuples are 0-based, entry i-1 for index i).
    """

    vertices: tuple[str, ...]
    d: int
    d_prime: int
    d_upper: tuple[int, ...]
    d_lower: tuple[int, ...]

    @property
    def delta(self) -> Fraction:
        return Fraction(1, self.d)

    @property
    def inductance(self) -> Fraction:
        return Fraction(self.d_prime, self.d)


def _check_chain(graph: DualGraph, order: Sequence[str]) -> None:
    ids = list(order)
    for v in ids:
        graph.vertex(v)
    if len(set(ids)) != len(ids):
        raise NotAChain("repeated vertex in chain order")
    for i, u in enumerate(ids):
        for j in range(i + 1, len(ids)):
            m = graph.mult(u, ids[j])
            want = 1 if j == i + 1 else 0
            if m != want:
                raise NotAChain(f"vertices {u!r}, {ids[j]!r} intersect in {m}, expected {want}")


def chain_data(graph: DualGraph, order: Sequence[str]) -> ChainData:
    """Discriminant data of an ordered chain; d'(empty) = 0 by convention.

    For admissible chains the classical invariants (gcd(d, d') = 1 and
    delta + inductance <= 1) are asserted on the way out.
    """
    ids = tuple(order)
    _check_chain(graph, ids)
    m = len(ids)
    d = discriminant(graph, ids)
    d_upper = tuple(discriminant(graph, ids[i:]) for i in range(1, m + 1))
    d_lower = tuple(discriminant(graph, ids[:i]) for i in range(m))
    d_prime = d_upper[0] if m else 0
    cd = ChainData(ids, d, d_prime, d_upper, d_lower)
    if ids and is_admissible_chain(graph, ids):
        assert_admissible(graph, cd)
    return cd


def is_admissible_chain(graph: DualGraph, order: Sequence[str]) -> bool:
    return all(
        graph.vertex(v).weight >= 2 and graph.vertex(v).genus == 0 for v in order
    )


def assert_admissible(graph: DualGraph, cd: ChainData) -> None:
    if not cd.vertices:
        return
    if not is_admissible_chain(graph, cd.vertices):
        raise NotAdmissible(f"chain {list(cd.vertices)} has a non-admissible component")
    # sanity of the classical facts: gcd(d, d') = 1 and delta + ind <= 1
    if gcd(cd.d, cd.d_prime) != 1:
        raise NotAdmissible("gcd(d, d') != 1 on an admissible chain")
    if cd.delta + cd.inductance > 1:
        raise NotAdmissible("delta + inductance > 1 on an admissible chain")


@dataclass(frozen=True)
class BarkDivisor:
    coefficients: Subdivisor
    fork_factor: Optional[Fraction] = None


def bark_chain(graph: DualGraph, order: Sequence[str]) -> BarkDivisor:
    """Bk' of an admissible ordered chain: coefficient d^(i)/d on T^(i).

    Satisfies T^(i) . Bk' = -1 for i = 1 and 0 otherwise.
    """
    cd = chain_data(graph, order)
    assert_admissible(graph, cd)
    coeffs = {
        v: Fraction(cd.d_upper[i], cd.d) for i, v in enumerate(cd.vertices)
    }
    return BarkDivisor(coeffs)


def bark_chain_reversed(graph: DualGraph, order: Sequence[str]) -> BarkDivisor:
    """Bk-transpose: the bark of the same chain with the opposite order,
    i.e. coefficient d_(i)/d on T^(i)."""
    return bark_chain(graph, tuple(reversed(tuple(order))))


def _oriented_rod(graph: DualGraph, rod: Sequence[str]) -> tuple[str, ...]:
    # deterministic order: lexicographically smallest tip first
    ids = tuple(rod)
    if len(ids) > 1 and ids[-1] < ids[0]:
        ids = tuple(reversed(ids))
    return ids


@dataclass(frozen=True)
class PeelableComponent:
    kind: str  # "twig" | "rod" | "fork"
    vertices: frozenset[str]
    twig: tuple[str, ...] = ()
    fork: Optional[Fork] = None


def classify_peelable(graph: DualGraph, D: Iterable[str], exc: Iterable[str]) -> list[PeelableComponent]:
    """Split exc into maximal admissible twigs, admissible rods and admissible
    forks of D; raises NotPeelable when a component is none of these."""
    dset = set(D)
    excset = set(exc)
    if not excset <= dset:
        raise NotPeelable("exceptional set not contained in the boundary")
    shapes = find_shapes(graph, dset)
    comps = graph.connected_components(excset)
    out: list[PeelableComponent] = []
    rods = {frozenset(r): r for r in shapes.rods}
    twigs: dict[frozenset[str], tuple[str, ...]] = {}

    def add_prefix(t: Sequence[str], proper: bool) -> None:
        # the maximal admissible twig from this tip is the admissible prefix
        prefix: list[str] = []
        for v in t:
            if graph.vertex(v).weight >= 2 and graph.vertex(v).genus == 0:
                prefix.append(v)
            else:
                break
        if prefix and not (proper and len(prefix) == len(t)):
            twigs[frozenset(prefix)] = tuple(prefix)

    for t in shapes.maximal_twigs:
        add_prefix(t, proper=False)
    for rodv in shapes.rods:
        # inside a chain component, twigs grow from either tip but must stay
        # proper (the whole component is the rod, not a twig)
        add_prefix(rodv, proper=True)
        add_prefix(tuple(reversed(rodv)), proper=True)
    forks = {frozenset({f.center} | {v for t in f.twigs for v in t}): f for f in shapes.forks}
    for comp in comps:
        if comp in rods:
            order = rods[comp]
            if not is_admissible_chain(graph, order):
                raise NotPeelable(f"rod {sorted(comp)} is not admissible")
            out.append(PeelableComponent("rod", comp, twig=_oriented_rod(graph, order)))
        elif comp in twigs:
            order = twigs[comp]
            if not is_admissible_chain(graph, order):
                raise NotPeelable(f"twig {sorted(comp)} is not admissible")
            out.append(PeelableComponent("twig", comp, twig=order))
        elif comp in forks:
            f = forks[comp]
            if not _fork_admissible(graph, f):
                raise NotPeelable(f"fork at {f.center!r} is not admissible")
            out.append(PeelableComponent("fork", comp, fork=f))
        else:
            raise NotPeelable(
                f"component {sorted(comp)} is not a maximal twig, rod or fork of D"
            )
    return out


def fork_delta(graph: DualGraph, f: Fork) -> Fraction:
    return sum(
        (Fraction(1, chain_data(graph, t).d) for t in f.twigs), ZERO
    )


def _fork_admissible(graph: DualGraph, f: Fork) -> bool:
    center = graph.vertex(f.center)
    if center.weight < 2 or center.genus != 0:
        return False
    if any(not is_admissible_chain(graph, t) for t in f.twigs):
        return False
    return fork_delta(graph, f) > 1


def bark_fork(graph: DualGraph, f: Fork) -> BarkDivisor:
    """Bark of an admissible fork: u (E0 + sum Bk-transpose T_i) + sum Bk' T_i
    with u = (sum delta(T_i) - 1) / (-E0^2 - sum ind(T_i-transposed))."""
    if not _fork_admissible(graph, f):
        raise NotAdmissible(f"fork at {f.center!r} is not admissible")
    num = fork_delta(graph, f) - 1
    den = Fraction(graph.vertex(f.center).weight)
    for t in f.twigs:
        den -= chain_data(graph, tuple(reversed(t))).inductance
    u = num / den
    coeffs: Subdivisor = {f.center: u}
    for t in f.twigs:
        up = bark_chain(graph, t).coefficients
        down = bark_chain_reversed(graph, t).coefficients
        for v in t:
            coeffs[v] = u * down[v] + up[v]
    return BarkDivisor(coeffs, fork_factor=u)


def bark_D(graph: DualGraph, D: Iterable[str], exc: Iterable[str]) -> BarkDivisor:
    """Bk_D of a disjoint union of maximal admissible twigs, admissible rods
    and admissible forks of D, extended additively."""
    coeffs: Subdivisor = {}
    factor = None
    for comp in classify_peelable(graph, D, exc):
        if comp.kind == "twig":
            part = bark_chain(graph, comp.twig).coefficients
        elif comp.kind == "rod":
            up = bark_chain(graph, comp.twig).coefficients
            down = bark_chain_reversed(graph, comp.twig).coefficients
            part = {v: up[v] + down[v] for v in comp.twig}
        else:
            bd = bark_fork(graph, comp.fork)
            part = bd.coefficients
            factor = bd.fork_factor
        coeffs.update(part)
    return BarkDivisor(coeffs, fork_factor=factor)


@dataclass(frozen=True)
class CoefficientVector:
    values: dict[str, Fraction]

    @property
    def complement(self) -> dict[str, Fraction]:
        """Log discrepancies ld = 1 - cf."""
        return {v: 1 - c for v, c in self.values.items()}

    def max_value(self) -> Fraction:
        return max(self.values.values(), default=ZERO)


def coefficients_linear(model: LogSurfaceModel) -> CoefficientVector:
    """cf of every contracted vertex over the current model, by the linear
    system sum_i cf_i (-E_i.E_j) = K.E_j + theta_j + B.E_j.  This is the
    universal oracle for every closed-form coefficient formula."""
    return CoefficientVector(dict(model.coefficients))


def coefficient_divisor_uniform(
    model: LogSurfaceModel, exc: Iterable[str], r: Fraction
) -> CoefficientVector:
    """Closed form for a uniform boundary: Exc - Bk_D(Exc) - (1-r) Bk-transpose
    of the twig part.  Requires exc to consist of maximal admissible twigs,
    admissible rods and admissible forks of the reduced boundary."""
    r = Fraction(r)
    graph = model.graph
    dset = set(model.boundary_flagged)
    excset = set(exc)
    comps = classify_peelable(graph, dset, excset)
    bk = bark_D(graph, dset, excset).coefficients
    values: Subdivisor = {v: ONE - bk[v] for v in excset}
    for comp in comps:
        if comp.kind == "twig":
            down = bark_chain_reversed(graph, comp.twig).coefficients
            for v in comp.twig:
                values[v] -= (1 - r) * down[v]
    return CoefficientVector(values)


# ---------------------------------------------------------------------------
# germ graphs and the appendix identities


@dataclass(frozen=True)
class GermGraph:
    """A negative definite decorated graph (a resolution graph).

    Decorations are the contacts with the unseen non-exceptional part; the
    derived quantities k(E_j) = theta_j + 2g_j + w_j - 2 and
    u(E_j) = 2 - beta(E_j) - theta_j - 2g_j drive the coefficient function.
    """

    graph: DualGraph

    def __post_init__(self) -> None:
        if not is_negative_definite(self.graph, self.graph.ids):
            raise NotNegativeDefinite("a resolution graph must be negative definite")

    @cached_property
    def model(self) -> LogSurfaceModel:
        return LogSurfaceModel(self.graph, frozenset(self.graph.ids))

    @cached_property
    def coefficients(self) -> dict[str, Fraction]:
        return dict(self.model.coefficients)

    def k_of(self, vid: str) -> Fraction:
        v = self.graph.vertex(vid)
        return v.decoration + 2 * v.genus + v.weight - 2

    def u_of(self, vid: str) -> Fraction:
        v = self.graph.vertex(vid)
        beta = branching_number(self.graph, [vid])
        return 2 - beta - v.decoration - 2 * v.genus

    def is_minimal(self) -> bool:
        return all(
            v.weight >= 2 or v.genus >= 1 for v in self.graph.vertices
        )


def germ_of(model: LogSurfaceModel, component: Iterable[str]) -> GermGraph:
    """The resolution germ of one singular point of a model: the contracted
    component with decorations recording the reduced contacts with the
    non-contracted boundary."""
    comp = set(component)
    if not comp <= model.contracted:
        raise NotNegativeDefinite("germ components must be contracted")
    graph = model.graph
    outside = [b for b in model.boundary_flagged]
    vs = []
    for v in graph.vertices:
        if v.id not in comp:
            continue
        contact = sum(graph.mult(v.id, b) for b in outside)
        vs.append(
            Vertex(v.id, v.weight, v.genus, v.decoration + contact, v.boundary)
        )
    es = tuple(e for e in graph.edges if e.a in comp and e.b in comp)
    return GermGraph(DualGraph(tuple(vs), es))


def _tree_paths(graph: DualGraph) -> dict[tuple[str, str], tuple[str, ...]]:
    ids = graph.ids
    n = len(ids)
    edge_count = sum(e.mult for e in graph.edges)
    if edge_count != n - len(graph.connected_components(ids)):
        raise NotATree("graph has a circular subgraph")
    paths: dict[tuple[str, str], tuple[str, ...]] = {}
    for start in ids:
        stack = [(start, (start,))]
        seen = {start}
        while stack:
            cur, path = stack.pop()
            paths[(start, cur)] = path
            for w in graph.adjacency[cur]:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, path + (w,)))
    return paths


def tree_coefficient_identity(germ: GermGraph, j: str) -> Fraction:
    """1 - cf(E_j) computed by the closed tree formula
    (sum_i u(E_i) d(E - path(E_i, E_j))) / d(E)."""
    graph = germ.graph
    graph.vertex(j)
    paths = _tree_paths(graph)
    d_all = discriminant(graph, graph.ids)
    total = ZERO
    for i in graph.ids:
        if (i, j) not in paths:
            raise NotATree(f"{i!r} and {j!r} lie in different components")
        rest = set(graph.ids) - set(paths[(i, j)])
        total += germ.u_of(i) * discriminant(graph, rest)
    return total / d_all


def cofactor_matches_path(graph: DualGraph, i: str, j: str) -> bool:
    """Check (-Q)^[i,j] = d(E - path(E_i,E_j)) for a tree."""
    ids = list(graph.ids)
    paths = _tree_paths(graph)
    if (i, j) not in paths:
        raise NotATree(f"{i!r} and {j!r} lie in different components")
    ii, jj = ids.index(i), ids.index(j)
    m = graph.neg_q(ids)
    minor = [
        [m[a][b] for b in range(len(ids)) if b != jj]
        for a in range(len(ids))
        if a != ii
    ]
    cof = (-1) ** (ii + jj) * bareiss_det(minor)
    return cof == discriminant(graph, set(ids) - set(paths[(i, j)]))


@dataclass(frozen=True)
class TotalCoefficient:
    value: Fraction
    witness: str
    may_underreport_at_eps0: bool


def total_coefficient(model: LogSurfaceModel) -> TotalCoefficient:
    """Maximum of boundary coefficients and exceptional coefficients of the
    given resolution.  Exact for any positive epsilon; at epsilon = 0 the flag
    warns when a blowup at a double point could exceed the reported value."""
    entries: dict[str, Fraction] = dict(model.coefficients)
    for b in model.boundary_support:
        entries[b] = model.coeff(b)
    if not entries:
        return TotalCoefficient(ZERO, "", False)
    value = max(entries.values())
    witness = min(v for v, c in entries.items() if c == value)
    # a blowup at a point on two components with coefficients c, c' yields a
    # curve of coefficient c + c' - 1; at eps = 0 the reported maximum is not
    # a certified supremum whenever some adjacent pair sums above 1
    flag = any(
        model.graph.mult(u, w) > 0 and entries[u] + entries[w] > 1
        for u, w in itertools.combinations(sorted(entries), 2)
    )
    return TotalCoefficient(value, witness, flag)
