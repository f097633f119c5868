"""Weighted decorated dual graphs of curve configurations and log surface models.

A vertex stands for an irreducible curve E on a smooth projective surface;
its ``weight`` is -E^2, edges carry intersection numbers.  A model is such a
graph together with a set of already contracted vertices (the contracted
block must be negative definite), which represents a possibly singular
surface via its smooth model.  All intersection numbers on the singular
model are computed through the unique rational pullback that meets every
contracted curve trivially.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import (
    CoeffOutOfRange,
    DanglingEdge,
    DuplicateId,
    InvalidSite,
    NotNegativeDefinite,
    SelfLoop,
    UnknownVertex,
    ValidationError,
)
from .linalg import leading_minors, solve_int

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Vertex:
    """A curve: weight = -E^2, decoration = germ-mode contact with unseen
    boundary, boundary = coefficient of the curve in the boundary divisor."""

    id: str
    weight: int
    genus: int = 0
    decoration: Fraction = ZERO
    boundary: Fraction = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "decoration", Fraction(self.decoration))
        object.__setattr__(self, "boundary", Fraction(self.boundary))
        if not (0 <= self.boundary <= 1):
            raise CoeffOutOfRange(f"boundary coefficient {self.boundary} of {self.id!r} not in [0,1]")
        if self.decoration < 0:
            raise CoeffOutOfRange(f"decoration {self.decoration} of {self.id!r} negative")
        if self.genus < 0:
            raise ValidationError(f"genus of {self.id!r} negative")


@dataclass(frozen=True)
class Edge:
    """Unordered pair of distinct vertices with a positive intersection number."""

    a: str
    b: str
    mult: int = 1

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise SelfLoop(f"self-loop at {self.a!r} (snc model has none)")
        if self.mult < 1:
            raise ValidationError(f"edge {self.a}-{self.b} with multiplicity {self.mult}")
        if self.b < self.a:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        seen: set[str] = set()
        for v in self.vertices:
            if v.id in seen:
                raise DuplicateId(f"duplicate vertex id {v.id!r}")
            seen.add(v.id)
        pairs: set[tuple[str, str]] = set()
        for e in self.edges:
            if e.a not in seen or e.b not in seen:
                raise DanglingEdge(f"edge {e.a}-{e.b} references an unknown vertex")
            if e.pair in pairs:
                raise ValidationError(f"two edges between {e.a!r} and {e.b!r}")
            pairs.add(e.pair)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def _mult(self) -> dict[tuple[str, str], int]:
        return {e.pair: e.mult for e in self.edges}

    @cached_property
    def adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {v.id: {} for v in self.vertices}
        for e in self.edges:
            adj[e.a][e.b] = e.mult
            adj[e.b][e.a] = e.mult
        return adj

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.by_id[vid]
        except KeyError:
            raise UnknownVertex(f"no vertex {vid!r}") from None

    def mult(self, u: str, v: str) -> int:
        if u == v:
            return -self.vertex(u).weight
        key = (u, v) if u < v else (v, u)
        return self._mult.get(key, 0)

    def pairing(self, A: Mapping[str, Fraction], B: Mapping[str, Fraction]) -> Fraction:
        """Raw bilinear intersection form on the smooth model."""
        total = ZERO
        for u, cu in A.items():
            if cu == 0:
                continue
            row = self.adjacency[u]
            for v, cv in B.items():
                if cv == 0:
                    continue
                total += cu * cv * (row.get(v, 0) if u != v else -self.vertex(u).weight)
        return total

    def k_dot(self, vid: str) -> int:
        """K . E by adjunction: 2g - 2 + weight."""
        v = self.vertex(vid)
        return 2 * v.genus - 2 + v.weight

    def neg_q(self, order: Iterable[str]) -> list[list[int]]:
        ids = list(order)
        return [[-self.mult(u, v) for v in ids] for u in ids]

    def connected_components(self, within: Iterable[str]) -> list[frozenset[str]]:
        pool = set(within)
        comps: list[frozenset[str]] = []
        while pool:
            seed = min(pool)
            comp = {seed}
            queue = [seed]
            while queue:
                u = queue.pop()
                for w in self.adjacency[u]:
                    if w in pool and w not in comp:
                        comp.add(w)
                        queue.append(w)
            pool -= comp
            comps.append(frozenset(comp))
        return sorted(comps, key=min)

    def without(self, removed: Iterable[str]) -> "DualGraph":
        gone = set(removed)
        return DualGraph(
            tuple(v for v in self.vertices if v.id not in gone),
            tuple(e for e in self.edges if e.a not in gone and e.b not in gone),
        )


def validate(graph: DualGraph) -> DualGraph:
    """Re-run all construction invariants; returns the graph unchanged."""
    DualGraph(graph.vertices, graph.edges)
    return graph


def intersect(model: "LogSurfaceModel", A: Mapping[str, Fraction], B: Mapping[str, Fraction]) -> Fraction:
    """Intersection of the images of A and B on the contracted model."""
    return model.intersect(A, B)


def canonical_intersect(model: "LogSurfaceModel", A: Mapping[str, Fraction]) -> Fraction:
    """A . K on the contracted model."""
    return model.canonical_intersect(A)


def branching_number(graph: DualGraph, T: Iterable[str], D: Optional[Iterable[str]] = None) -> int:
    """T . (D - T), the total edge multiplicity leaving T inside D.

    D defaults to the whole vertex set.
    """
    tset = set(T)
    dset = set(D) if D is not None else set(graph.ids)
    for vid in tset | dset:
        graph.vertex(vid)
    total = 0
    for u in tset:
        for w, m in graph.adjacency[u].items():
            if w in dset and w not in tset:
                total += m
    return total


def is_negative_definite(graph: DualGraph, S: Iterable[str]) -> bool:
    """Sylvester's criterion on -Q restricted to S (any fixed order works)."""
    ids = sorted(set(S))
    for vid in ids:
        graph.vertex(vid)
    return all(m > 0 for m in leading_minors(graph.neg_q(ids)))


# ---------------------------------------------------------------------------
# shape detection


@dataclass(frozen=True)
class Fork:
    center: str
    twigs: tuple[tuple[str, ...], ...]  # each ordered tip-first


@dataclass(frozen=True)
class Bench:
    central_chain: tuple[str, ...]
    feet: tuple[str, ...]


@dataclass(frozen=True)
class HalfBench:
    central_chain: tuple[str, ...]  # C_1 carries the two (-2)-feet
    feet: tuple[str, ...]


@dataclass(frozen=True)
class ShapeReport:
    tips: tuple[str, ...]
    maximal_twigs: tuple[tuple[str, ...], ...]  # ordered, tip of D first; rods excluded
    rods: tuple[tuple[str, ...], ...]
    segments: tuple[tuple[str, ...], ...]
    forks: tuple[Fork, ...]
    benches: tuple[Bench, ...]
    half_benches: tuple[HalfBench, ...]
    circular: tuple[frozenset[str], ...]
    superfluous: tuple[str, ...]


def _chain_order(graph: DualGraph, comp: frozenset[str], dset: set[str]) -> Optional[tuple[str, ...]]:
    """Order a connected component as a chain inside D; None when not a chain."""
    if len(comp) == 1:
        return (next(iter(comp)),)
    deg = {}
    for v in comp:
        within = sum(m for w, m in graph.adjacency[v].items() if w in comp)
        if within > 2:
            return None
        deg[v] = within
    ends = sorted(v for v in comp if deg[v] == 1)
    if len(ends) != 2:
        return None  # circular
    order = [ends[0]]
    prev = None
    while True:
        nxts = [w for w in graph.adjacency[order[-1]] if w in comp and w != prev and graph.adjacency[order[-1]][w] == 1]
        if not nxts:
            break
        prev = order[-1]
        order.append(nxts[0])
    return tuple(order) if len(order) == len(comp) else None


def find_shapes(graph: DualGraph, D: Iterable[str]) -> ShapeReport:
    """Shape taxonomy of the reduced subdivisor spanned by D."""
    dset = set(D)
    for vid in dset:
        graph.vertex(vid)
    beta = {v: branching_number(graph, [v], dset) for v in dset}
    tips = tuple(sorted(v for v in dset if beta[v] <= 1))
    comps = graph.connected_components(dset)

    rods: list[tuple[str, ...]] = []
    circular: list[frozenset[str]] = []
    forks: list[Fork] = []
    benches: list[Bench] = []
    chain_comps: set[frozenset[str]] = set()
    # circular subgraphs: strip vertices of internal degree <= 1 repeatedly;
    # whatever survives is a union of cycles (possibly deep inside a component)
    core = set(dset)
    while True:
        drop = [
            v
            for v in core
            if sum(m for w, m in graph.adjacency[v].items() if w in core) <= 1
        ]
        if not drop:
            break
        core -= set(drop)
    circular.extend(graph.connected_components(core))
    for comp in comps:
        if comp in set(circular):
            continue
        order = _chain_order(graph, comp, dset)
        if order is not None and all(beta[v] <= 2 for v in comp):
            rods.append(order)
            chain_comps.add(comp)
            continue
        fk = _as_fork(graph, comp, dset, beta)
        if fk is not None:
            forks.append(fk)
        bench = _as_bench(graph, comp, dset, beta)
        if bench is not None:
            benches.append(bench)

    maximal_twigs: list[tuple[str, ...]] = []
    twig_vertices: set[str] = set()
    for tip in tips:
        comp = next(c for c in comps if tip in c)
        if comp in chain_comps or comp in set(circular):
            continue
        walk = [tip]
        prev = None
        while True:
            cur = walk[-1]
            nxts = [
                w
                for w in graph.adjacency[cur]
                if w in dset and w != prev and graph.adjacency[cur][w] == 1
            ]
            if len(nxts) != 1 or beta[nxts[0]] > 2:
                break
            prev = cur
            walk.append(nxts[0])
        maximal_twigs.append(tuple(walk))
        twig_vertices.update(walk)

    segments: list[tuple[str, ...]] = []
    seg_pool = {
        v
        for v in dset
        if beta[v] <= 2 and v not in twig_vertices and not any(v in c for c in circular)
    }
    seg_pool -= {v for r in rods for v in r}
    for comp in graph.connected_components(seg_pool):
        order = _chain_order(graph, comp, dset)
        if order is not None and not any(beta[v] <= 1 for v in comp):
            segments.append(order)

    half_benches = tuple(_half_benches(graph, dset, beta))

    superfluous = []
    for v in sorted(dset):
        vert = graph.vertex(v)
        if vert.weight != 1 or vert.genus != 0:
            continue
        nbrs = [(w, m) for w, m in graph.adjacency[v].items() if w in dset]
        if len(nbrs) <= 2 and all(m == 1 for _, m in nbrs):
            superfluous.append(v)

    return ShapeReport(
        tips=tips,
        maximal_twigs=tuple(maximal_twigs),
        rods=tuple(rods),
        segments=tuple(segments),
        forks=tuple(forks),
        benches=tuple(benches),
        half_benches=half_benches,
        circular=tuple(circular),
        superfluous=tuple(superfluous),
    )


def _as_fork(graph: DualGraph, comp: frozenset[str], dset: set[str], beta: dict[str, int]) -> Optional[Fork]:
    if any(graph.adjacency[u].get(w, 0) > 1 for u in comp for w in comp):
        return None
    branch = [v for v in comp if sum(1 for w in graph.adjacency[v] if w in comp) >= 3]
    if len(branch) != 1:
        return None
    center = branch[0]
    if beta[center] != 3 or sum(1 for w in graph.adjacency[center] if w in comp) != 3:
        return None
    twigs = []
    for start in sorted(w for w in graph.adjacency[center] if w in comp):
        walk = [start]
        prev = center
        while True:
            nxts = [w for w in graph.adjacency[walk[-1]] if w in comp and w != prev]
            if not nxts:
                break
            if len(nxts) > 1:
                return None
            prev = walk[-1]
            walk.append(nxts[0])
        twigs.append(tuple(reversed(walk)))  # tip first
    if sum(len(t) for t in twigs) + 1 != len(comp):
        return None
    return Fork(center=center, twigs=tuple(twigs))


def _as_bench(graph: DualGraph, comp: frozenset[str], dset: set[str], beta: dict[str, int]) -> Optional[Bench]:
    if any(beta[v] != branching_number(graph, [v], comp) for v in comp):
        return None  # bench must be a whole connected component of D
    leaves = sorted(v for v in comp if sum(m for w, m in graph.adjacency[v].items() if w in comp) == 1)
    if len(leaves) != 4:
        return None
    if any(graph.vertex(v).weight != 2 or graph.vertex(v).genus != 0 for v in leaves):
        return None
    core = comp - set(leaves)
    if not core:
        return None
    order = _chain_order(graph, frozenset(core), dset)
    if order is None:
        return None
    ends = {order[0], order[-1]}
    attach: dict[str, int] = {v: 0 for v in core}
    for leaf in leaves:
        ns = [w for w in graph.adjacency[leaf] if w in core]
        if len(ns) != 1 or graph.adjacency[leaf][ns[0]] != 1:
            return None
        attach[ns[0]] += 1
    if len(order) == 1:
        ok = attach[order[0]] == 4
    else:
        ok = attach[order[0]] == 2 and attach[order[-1]] == 2 and all(
            attach[v] == 0 for v in order[1:-1]
        )
    if not ok:
        return None
    return Bench(central_chain=order, feet=tuple(leaves))


def _half_benches(graph: DualGraph, dset: set[str], beta: dict[str, int]):
    out = []
    tips2 = [
        v
        for v in dset
        if beta[v] == 1 and graph.vertex(v).weight == 2 and graph.vertex(v).genus == 0
    ]
    for u1, u2 in itertools.combinations(sorted(tips2), 2):
        n1 = [w for w in graph.adjacency[u1] if w in dset]
        n2 = [w for w in graph.adjacency[u2] if w in dset]
        if n1 != n2 or len(n1) != 1:
            continue
        chain = [n1[0]]
        while True:
            # record the prefix when all its external contact sits at the far end
            t = set(chain) | {u1, u2}
            ext = branching_number(graph, t, dset)
            ext_at_end = branching_number(graph, [chain[-1]], dset - (t - {chain[-1]}))
            if ext == 1 and ext_at_end == 1:
                out.append(HalfBench(central_chain=tuple(chain), feet=(u1, u2)))
            nxts = [
                w
                for w in graph.adjacency[chain[-1]]
                if w in dset and w not in t and graph.adjacency[chain[-1]][w] == 1
            ]
            if ext != ext_at_end or len(nxts) != 1 or beta[nxts[0]] > 2:
                break
            chain.append(nxts[0])
    return out


# ---------------------------------------------------------------------------
# blowups


def blow_up(graph: DualGraph, site: tuple, new_id: Optional[str] = None) -> DualGraph:
    """Blow up a free point ("free", v) or an intersection point ("edge", u, v).

    The new (-1)-vertex absorbs one intersection point; incident weights grow
    by one per incidence.
    """
    if new_id is None:
        k = 1
        existing = set(graph.ids)
        while f"x{k}" in existing:
            k += 1
        new_id = f"x{k}"
    if new_id in graph.by_id:
        raise InvalidSite(f"vertex id {new_id!r} already used")
    if not site or site[0] not in ("free", "edge"):
        raise InvalidSite(f"bad site {site!r}")
    if site[0] == "free":
        _, v = site
        graph.vertex(v)
        verts = [
            replace(w, weight=w.weight + 1) if w.id == v else w for w in graph.vertices
        ]
        verts.append(Vertex(new_id, 1))
        return DualGraph(tuple(verts), (*graph.edges, Edge(v, new_id)))
    _, u, v = site
    if graph.mult(u, v) < 1 or u == v:
        raise InvalidSite(f"no intersection point of {u!r} and {v!r}")
    verts = [
        replace(w, weight=w.weight + 1) if w.id in (u, v) else w
        for w in graph.vertices
    ]
    verts.append(Vertex(new_id, 1))
    edges = []
    for e in graph.edges:
        if e.pair == tuple(sorted((u, v))):
            if e.mult > 1:
                edges.append(Edge(e.a, e.b, e.mult - 1))
        else:
            edges.append(e)
    edges.extend([Edge(u, new_id), Edge(v, new_id)])
    return DualGraph(tuple(verts), tuple(edges))


def blow_down(graph: DualGraph, vid: str) -> DualGraph:
    """Contract a numeric (-1)-vertex; neighbours gain weight/genus accordingly."""
    v = graph.vertex(vid)
    if v.weight != 1 or v.genus != 0:
        raise InvalidSite(f"{vid!r} is not a (-1)-vertex")
    nbrs = [(w, m) for w, m in graph.adjacency[vid].items()]
    verts = []
    for w in graph.vertices:
        if w.id == vid:
            continue
        m = graph.adjacency[vid].get(w.id, 0)
        if m:
            verts.append(
                replace(w, weight=w.weight - m * m, genus=w.genus + m * (m - 1) // 2)
            )
        else:
            verts.append(w)
    new_mult: dict[tuple[str, str], int] = {}
    for e in graph.edges:
        if vid in e.pair:
            continue
        new_mult[e.pair] = e.mult
    for (a, ma), (b, mb) in itertools.combinations(nbrs, 2):
        key = tuple(sorted((a, b)))
        new_mult[key] = new_mult.get(key, 0) + ma * mb
    return DualGraph(tuple(verts), tuple(Edge(a, b, m) for (a, b), m in sorted(new_mult.items())))


def contracts_to_smooth_point(graph: DualGraph, S: Iterable[str]) -> bool:
    """Whether the support S blows down entirely through (-1)-contractions."""
    sset = set(S)
    if not sset:
        return True
    g = graph
    while sset:
        cand = [v for v in sorted(sset) if g.vertex(v).weight == 1 and g.vertex(v).genus == 0]
        if not cand:
            return False
        g = blow_down(g, cand[0])
        sset.remove(cand[0])
    return True


# ---------------------------------------------------------------------------
# log surface models


@dataclass(frozen=True)
class LogSurfaceModel:
    """A dual graph plus a contracted vertex set and a boundary.

    The boundary coefficient of a vertex is ``uniform_r`` when that vertex is
    flagged (``boundary > 0``) and ``uniform_r`` is set, else the vertex's own
    ``boundary`` field.
    """

    graph: DualGraph
    contracted: frozenset[str] = frozenset()
    uniform_r: Optional[Fraction] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "contracted", frozenset(self.contracted))
        if self.uniform_r is not None:
            r = Fraction(self.uniform_r)
            if not (0 <= r <= 1):
                raise CoeffOutOfRange(f"uniform coefficient {r} not in [0,1]")
            object.__setattr__(self, "uniform_r", r)
        for vid in self.contracted:
            self.graph.vertex(vid)
        if not is_negative_definite(self.graph, self.contracted):
            raise NotNegativeDefinite(
                f"contracted set {sorted(self.contracted)} is not negative definite"
            )

    # -- basic views ------------------------------------------------------

    @cached_property
    def contracted_order(self) -> tuple[str, ...]:
        return tuple(sorted(self.contracted))

    def coeff(self, vid: str) -> Fraction:
        v = self.graph.vertex(vid)
        if self.uniform_r is not None and v.boundary > 0:
            return self.uniform_r
        return v.boundary

    @cached_property
    def boundary_support(self) -> tuple[str, ...]:
        return tuple(
            v.id
            for v in self.graph.vertices
            if v.id not in self.contracted and self.coeff(v.id) > 0
        )

    @cached_property
    def boundary_flagged(self) -> tuple[str, ...]:
        """Vertices flagged as boundary (support of the reduced divisor D),
        regardless of the current coefficient value."""
        return tuple(
            v.id
            for v in self.graph.vertices
            if v.id not in self.contracted and v.boundary > 0
        )

    def is_uniform(self) -> bool:
        coeffs = {self.coeff(v) for v in self.boundary_flagged}
        return len(coeffs) <= 1

    @cached_property
    def r(self) -> Optional[Fraction]:
        if self.uniform_r is not None:
            return self.uniform_r
        coeffs = {self.coeff(v) for v in self.boundary_flagged}
        if len(coeffs) == 1:
            return coeffs.pop()
        return None

    def noncontracted(self) -> tuple[str, ...]:
        return tuple(v for v in self.graph.ids if v not in self.contracted)

    def contract(self, *vids: str) -> "LogSurfaceModel":
        for vid in vids:
            self.graph.vertex(vid)
            if vid in self.contracted:
                raise UnknownVertex(f"{vid!r} is already contracted")
        return LogSurfaceModel(self.graph, self.contracted | set(vids), self.uniform_r)

    # -- exact intersection theory on the contracted model ----------------

    @cached_property
    def _neg_q(self) -> list[list[int]]:
        return self.graph.neg_q(self.contracted_order)

    def _solve(self, rhs: list[Fraction]) -> list[Fraction]:
        try:
            return solve_int(self._neg_q, rhs)
        except ValueError as exc:  # pragma: no cover - guarded at construction
            raise NotNegativeDefinite(str(exc)) from exc

    def _contact(self, A: Mapping[str, Fraction]) -> list[Fraction]:
        return [
            sum((c * self.graph.mult(u, e) for u, c in A.items()), ZERO)
            for e in self.contracted_order
        ]

    def pullback(self, A: Mapping[str, Fraction]) -> dict[str, Fraction]:
        """Mumford pullback: A plus the correction supported on the contracted
        set that kills all intersections with contracted curves."""
        for u in A:
            if u in self.contracted:
                raise UnknownVertex(f"{u!r} is contracted; pull back its image instead")
        corr = self._solve(self._contact(A))
        out = {u: Fraction(c) for u, c in A.items() if c != 0}
        for e, c in zip(self.contracted_order, corr):
            if c != 0:
                out[e] = c
        return out

    def intersect(self, A: Mapping[str, Fraction], B: Mapping[str, Fraction]) -> Fraction:
        """Intersection of the images of A and B on the contracted model."""
        return self.graph.pairing(self.pullback(A), B)

    def self_int(self, vid: str) -> Fraction:
        return self.intersect({vid: ONE}, {vid: ONE})

    @cached_property
    def _k_correction(self) -> dict[str, Fraction]:
        # pullback of the image of K: K + sum u_i E_i with (K + sum)/E_j = 0,
        # i.e. sum_i u_i (-E_i.E_j) = K.E_j
        rhs = [Fraction(self.graph.k_dot(e)) for e in self.contracted_order]
        sol = self._solve(rhs)
        return dict(zip(self.contracted_order, sol))

    def canonical_intersect(self, A: Mapping[str, Fraction]) -> Fraction:
        """A . K on the contracted model (K from adjunction plus Mumford
        correction on the contracted block)."""
        total = ZERO
        for u, c in A.items():
            if u in self.contracted:
                raise UnknownVertex(f"{u!r} is contracted")
            total += c * self.graph.k_dot(u)
            for e, uc in self._k_correction.items():
                total += c * uc * self.graph.mult(u, e)
        return total

    def k_dot_vertex(self, vid: str) -> Fraction:
        return self.canonical_intersect({vid: ONE})

    @cached_property
    def boundary_divisor(self) -> dict[str, Fraction]:
        return {v: self.coeff(v) for v in self.boundary_support}

    @cached_property
    def coefficients(self) -> dict[str, Fraction]:
        """cf(E; current model) for every contracted vertex E: the unique
        solution of sum_i cf_i (-E_i.E_j) = K.E_j + theta_j + B.E_j."""
        rhs = []
        for e in self.contracted_order:
            k = Fraction(self.graph.k_dot(e)) + self.graph.vertex(e).decoration
            for b, c in self.boundary_divisor.items():
                k += c * self.graph.mult(b, e)
            rhs.append(k)
        return dict(zip(self.contracted_order, self._solve(rhs)))

    def lk_pairing(self, vid: str) -> Fraction:
        """image(v) . (K + D) on the contracted model.  Decorations count as
        reduced boundary contact."""
        if vid in self.contracted:
            raise UnknownVertex(f"{vid!r} is contracted")
        v = self.graph.vertex(vid)
        total = Fraction(self.graph.k_dot(vid)) + v.decoration
        for b, c in self.boundary_divisor.items():
            total += c * self.graph.mult(vid, b)
        for e, c in self.coefficients.items():
            total += c * self.graph.mult(vid, e)
        return total
