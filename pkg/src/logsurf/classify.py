"""Classification of germs and subdivisors: log terminal / log canonical
shapes, du Val types, epsilon-lc and epsilon-dlt predicates, and the germ
taxonomy for boundary coefficient one half."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import NotApplicable, NotLogTerminal, NotMinimal
from .graph import DualGraph, Fork, LogSurfaceModel, ZERO, find_shapes
from .invariants import (
    GermGraph,
    chain_data,
    fork_delta,
    is_admissible_chain,
    total_coefficient,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GermClass:
    tag: str
    payload: dict = field(default_factory=dict, compare=False)


def _theta_contacts(germ: GermGraph) -> dict[str, Fraction]:
    return {
        v.id: v.decoration for v in germ.graph.vertices if v.decoration > 0
    }


def _is_chain_graph(graph: DualGraph) -> Optional[tuple[str, ...]]:
    shapes = find_shapes(graph, graph.ids)
    if len(shapes.rods) == 1 and len(graph.ids) == len(shapes.rods[0]):
        return shapes.rods[0]
    return None


def _whole_fork(graph: DualGraph) -> Optional[Fork]:
    shapes = find_shapes(graph, graph.ids)
    for f in shapes.forks:
        if 1 + sum(len(t) for t in f.twigs) == len(graph.ids):
            return f
    return None


def classify_germ(germ: GermGraph, has_boundary: Optional[bool] = None) -> GermClass:
    """Classify a minimal resolution germ by shape.

    Tags follow the log terminal / log canonical taxonomy; decorations encode
    the reduced-boundary contacts.  The degenerate (non-snc) cycle and segment
    variants cannot be encoded on this substrate, so the corresponding tags
    only ever describe their snc forms.
    """
    graph = germ.graph
    if len(graph.connected_components(graph.ids)) != 1:
        raise NotApplicable("germ classification expects a connected graph")
    if not germ.is_minimal():
        raise NotMinimal("germ has a smooth rational (-1)-vertex")
    theta = _theta_contacts(germ)
    if has_boundary is None:
        has_boundary = bool(theta)
    if has_boundary != bool(theta):
        raise NotApplicable("has_boundary flag contradicts the decorations")
    if any(t != int(t) for t in theta.values()):
        raise NotApplicable("germ contacts must be integral (reduced boundary)")
    contact = sum(int(t) for t in theta.values())

    if not has_boundary:
        if len(graph.ids) == 1 and graph.vertices[0].genus == 1:
            return GermClass("LC-EllipticCurve", {"vertex": graph.ids[0]})
        if any(v.genus != 0 for v in graph.vertices):
            return GermClass("NotLC")
        shapes = find_shapes(graph, graph.ids)
        if shapes.circular:
            # only a cycle filling the whole germ is on the log canonical list
            if len(shapes.circular) == 1 and shapes.circular[0] == frozenset(graph.ids):
                return GermClass("LC-Cycle", {"cycle": tuple(sorted(shapes.circular[0]))})
            return GermClass("NotLC")
        order = _is_chain_graph(graph)
        if order is not None:
            return GermClass("LT-NoBoundary-Rod", {"chain": order})
        f = _whole_fork(graph)
        if f is not None:
            delta = fork_delta(graph, f)
            if delta > 1:
                return GermClass("LT-NoBoundary-Fork", _fork_payload(graph, f, delta))
            if delta == 1 and not _all_minus_two(graph, graph.ids):
                return GermClass("LC-Fork", _fork_payload(graph, f, delta))
            return GermClass("NotLC")
        for b in shapes.benches:
            if len(b.central_chain) + 4 == len(graph.ids):
                if not _all_minus_two(graph, b.central_chain):
                    return GermClass(
                        "LC-Bench", {"central_chain": b.central_chain, "feet": b.feet}
                    )
        return GermClass("NotLC")

    # boundary present: twig / half-bench / segment shapes
    if any(v.genus != 0 for v in graph.vertices):
        return GermClass("NotLC")
    order = _is_chain_graph(graph)
    if contact == 1 and order is not None:
        (vid,) = [v for v, t in theta.items() if t > 0]
        if vid in (order[0], order[-1]):
            if vid == order[0]:
                order = tuple(reversed(order))
            return GermClass("LT-Twig", {"chain": order})
    hb = _germ_half_bench(germ)
    if hb is not None:
        return GermClass("LC-HalfBench", hb)
    if contact == 2 and order is not None:
        ends_contact = sum(int(theta.get(v, 0)) for v in {order[0], order[-1]})
        interior_contact = contact - ends_contact
        if interior_contact == 0:
            return GermClass("LC-Segment", {"chain": order})
    return GermClass("NotLC")


def _all_minus_two(graph: DualGraph, ids: Iterable[str]) -> bool:
    return all(graph.vertex(v).weight == 2 and graph.vertex(v).genus == 0 for v in ids)


def _fork_payload(graph: DualGraph, f: Fork, delta: Fraction) -> dict:
    return {
        "center": f.center,
        "twigs": f.twigs,
        "delta": delta,
        "twig_d": tuple(chain_data(graph, t).d for t in f.twigs),
    }


def _germ_half_bench(germ: GermGraph) -> Optional[dict]:
    """E of type <b;2,2,t> or [2,b,2], reduced-boundary contact 1 at the far
    end of the central chain."""
    graph = germ.graph
    theta = _theta_contacts(germ)
    if sum(theta.values()) != 1:
        return None
    (cv,) = [v for v, t in theta.items() if t == 1]
    order = _is_chain_graph(graph)
    if order is not None and len(order) == 3:
        a, b, c = order
        if (
            graph.vertex(a).weight == 2
            and graph.vertex(c).weight == 2
            and cv == b
        ):
            return {"central_chain": (b,), "feet": (a, c)}
        return None
    f = _whole_fork(graph)
    if f is None:
        return None
    short = [t for t in f.twigs if len(t) == 1 and graph.vertex(t[0]).weight == 2]
    long = [t for t in f.twigs if t not in short]
    if len(short) < 2:
        return None
    if len(short) == 3:
        # pick the contact twig as the long one if decorated
        long = [t for t in short if t[0] == cv]
        short = [t for t in short if t[0] != cv]
        if not long:
            return None
    if len(long) != 1:
        return None
    chain = (f.center, *reversed(long[0]))
    if cv != chain[-1]:
        return None
    if not is_admissible_chain(graph, chain):
        return None
    return {"central_chain": chain, "feet": (short[0][0], short[1][0])}


# ---------------------------------------------------------------------------
# du Val types


def duval_type(graph: DualGraph) -> Optional[str]:
    """Dynkin label of a connected all-(-2) undecorated configuration."""
    if not graph.ids:
        return None
    if len(graph.connected_components(graph.ids)) != 1:
        return None
    if not _all_minus_two(graph, graph.ids):
        return None
    if any(v.decoration != 0 for v in graph.vertices):
        return None
    n = len(graph.ids)
    order = _is_chain_graph(graph)
    if order is not None:
        return f"A_{n}"
    f = _whole_fork(graph)
    if f is None:
        return None
    lengths = sorted(len(t) for t in f.twigs)
    if lengths[:2] == [1, 1]:
        return f"D_{n}"
    if lengths == [1, 2, 2]:
        return "E_6"
    if lengths == [1, 2, 3]:
        return "E_7"
    if lengths == [1, 2, 4]:
        return "E_8"
    return None


def is_du_val_germ(germ: GermGraph) -> bool:
    return all(
        duval_type(germ.graph.without(set(germ.graph.ids) - comp)) is not None
        for comp in germ.graph.connected_components(germ.graph.ids)
    )


# ---------------------------------------------------------------------------
# epsilon-lc / epsilon-dlt


@dataclass(frozen=True)
class EpsVerdict:
    eps: Fraction
    is_lc: bool
    is_dlt: bool
    witness: str
    witness_cf: Fraction
    tcf: Fraction
    exact: bool  # False when the eps = 0 supremum may exceed the reported tcf


def eps_check(model: LogSurfaceModel, eps: Fraction) -> EpsVerdict:
    """(X, D) is eps-lc when tcf <= 1 - eps, and eps-dlt when additionally
    every exceptional coefficient of this resolution is < 1 - eps.

    For eps > 0 any log resolution computes the same answer; at eps = 0 a
    negative dlt verdict is relative to the given resolution.
    """
    eps = Fraction(eps)
    tc = total_coefficient(model)
    bound = 1 - eps
    is_lc = tc.value <= bound
    exc = model.coefficients
    is_dlt = is_lc and all(c < bound for c in exc.values())
    if tc.witness:
        witness, witness_cf = tc.witness, tc.value
    else:
        witness, witness_cf = "", ZERO
    exact = not (eps == 0 and tc.may_underreport_at_eps0)
    return EpsVerdict(eps, is_lc, is_dlt, witness, witness_cf, tc.value, exact)


# ---------------------------------------------------------------------------
# germs with coefficient at most one half


@dataclass(frozen=True)
class HalfClass:
    tag: str  # (1a) | (1b) | (2a) | (2b) per the cf <= 1/2 germ list
    formula: str  # (1a)..(2d) per the closed-form list
    coefficients: dict[str, Fraction] = field(compare=False)


def _germ_shape_half(germ: GermGraph, r: Fraction) -> Optional[tuple[str, str, dict[str, Fraction]]]:
    """Match the germ against the cf <= 1/2 case list; return
    (tag, formula, closed-form coefficients) or None."""
    graph = germ.graph
    theta = _theta_contacts(germ)
    boundary = bool(theta)
    ids = graph.ids
    n = len(ids)

    if not boundary:
        if _all_minus_two(graph, ids):
            order = _is_chain_graph(graph)
            f = _whole_fork(graph)
            if order is not None or (f is not None and fork_delta(graph, f) > 1):
                return "(1a)", "(1a)", {v: ZERO for v in ids}
            return None
        order = _is_chain_graph(graph)
        if order is not None:
            ws = [graph.vertex(v).weight for v in order]
            if ws[0] == 3 and all(w == 2 for w in ws[1:]):
                k = n
                return (
                    "(1a)",
                    "(1b)",
                    {v: Fraction(k - i, 2 * k + 1) for i, v in enumerate(order)},
                )
            if ws[-1] == 3 and all(w == 2 for w in ws[:-1]):
                k = n
                rev = tuple(reversed(order))
                return (
                    "(1a)",
                    "(1b)",
                    {v: Fraction(k - i, 2 * k + 1) for i, v in enumerate(rev)},
                )
            if ws == [4]:
                return "(2a)", "(2a)", {order[0]: HALF}
            if (
                n >= 2
                and ws[0] == 3
                and ws[-1] == 3
                and all(w == 2 for w in ws[1:-1])
            ):
                return "(2a)", "(2a)", {v: HALF for v in order}
            if ws == [2, 3, 2]:
                return (
                    "(2a)",
                    "(2b)",
                    {order[0]: Fraction(1, 4), order[1]: HALF, order[2]: Fraction(1, 4)},
                )
            return None
        f = _whole_fork(graph)
        if f is not None and graph.vertex(f.center).weight == 2:
            short = [t for t in f.twigs if len(t) == 1 and graph.vertex(t[0]).weight == 2]
            rest = [t for t in f.twigs if t not in short[:2]]
            if len(short) >= 2 and len(rest) == 1:
                t = rest[0]
                ws = [graph.vertex(v).weight for v in t]
                if ws[0] == 3 and all(w == 2 for w in ws[1:]):
                    vals = {v: HALF for v in ids}
                    for s in short[:2]:
                        vals[s[0]] = Fraction(1, 4)
                    return "(2a)", "(2b)", vals
        return None

    # boundary present
    order = _is_chain_graph(graph)
    if order is None:
        return None
    contact = {v: int(t) for v, t in theta.items()}
    total = sum(contact.values())
    ws = [graph.vertex(v).weight for v in order]
    if total == 1:
        (cv,) = [v for v, t in contact.items() if t == 1]
        if cv == order[0]:
            order = tuple(reversed(order))
            ws.reverse()
        if cv != order[-1]:
            return None
        if all(w == 2 for w in ws):
            k = n
            return (
                "(1b)",
                "(1c)",
                {v: Fraction(i + 1, k + 1) * r for i, v in enumerate(order)},
            )
        if ws[0] == 3 and all(w == 2 for w in ws[1:]):
            # closed form only at r = 1/2; below that only the bound cf >= rE holds
            vals = {v: HALF for v in order} if r == HALF else {}
            return "(2b)", "(2d)", vals
        return None
    if total == 2 and all(w == 2 for w in ws):
        ends = {order[0], order[-1]}
        if all(contact.get(v, 0) == 0 for v in order if v not in ends):
            if sum(contact.get(v, 0) for v in ends) == 2:
                return "(2b)", "(2c)", {v: r for v in order}
    return None


def classify_half(
    germ: GermGraph, has_boundary: Optional[bool] = None, strict: bool = True, r: Fraction = HALF
) -> HalfClass:
    """Taxonomy of germs with coefficient function bounded by one half.

    ``strict`` selects the cf < 1/2 list (cases (1a)/(1b)); otherwise the
    cf = 1/2 list (cases (2a)/(2b)).  The returned coefficients are the
    closed forms evaluated at the germ's boundary coefficient ``r``.
    """
    theta = _theta_contacts(germ)
    if has_boundary is None:
        has_boundary = bool(theta)
    if has_boundary != bool(theta):
        raise NotApplicable("has_boundary flag contradicts the decorations")
    matched = _germ_shape_half(germ, Fraction(r))
    if matched is None:
        raise NotApplicable("germ is not on the coefficient <= 1/2 case list")
    tag, formula, values = matched
    if strict and not tag.startswith("(1"):
        raise NotApplicable("germ has coefficient exactly 1/2, not below")
    if not strict and not tag.startswith("(2"):
        raise NotApplicable("germ has coefficient below 1/2")
    return HalfClass(tag, formula, values)


# ---------------------------------------------------------------------------
# subgraph comparison of log terminal germs


@dataclass(frozen=True)
class CompareVerdict:
    strict: bool
    du_val: bool
    values_sub: dict[str, Fraction] = field(compare=False)
    values_super: dict[str, Fraction] = field(compare=False)


def alexeev_compare(
    sub: GermGraph, sup: GermGraph, embedding: Mapping[str, str]
) -> CompareVerdict:
    """Verify the subgraph monotonicity cf_F <= cf_G pointwise for log
    terminal germs, strict unless the bigger germ is du Val.

    ``embedding`` maps vertices of ``sub`` into vertices of ``sup``; weights,
    decorations and edge multiplicities must not exceed the originals.
    """
    gf, gg = sub.graph, sup.graph
    img = dict(embedding)
    if set(img) != set(gf.ids):
        raise NotApplicable("embedding must cover every vertex of the subgraph")
    if len(set(img.values())) != len(img):
        raise NotApplicable("embedding must be injective")
    for v in gf.ids:
        w = img[v]
        gg.vertex(w)
        if gf.vertex(v).weight > gg.vertex(w).weight:
            raise NotApplicable(f"weight of {v!r} exceeds its image")
        if gf.vertex(v).decoration > gg.vertex(w).decoration:
            raise NotApplicable(f"decoration of {v!r} exceeds its image")
    for u in gf.ids:
        for v in gf.ids:
            if u < v and gf.mult(u, v) > gg.mult(img[u], img[v]):
                raise NotApplicable(f"edge {u}-{v} exceeds its image")
    cf_f = sub.coefficients
    cf_g = sup.coefficients
    if any(c >= 1 for c in cf_f.values()) or any(c >= 1 for c in cf_g.values()):
        raise NotLogTerminal("both germs must be log terminal")
    diffs = [cf_g[img[v]] - cf_f[v] for v in gf.ids]
    if any(d < 0 for d in diffs):
        # cannot happen for valid inputs; report loudly if it ever does
        raise AssertionError("monotonicity violated")
    strict = all(d > 0 for d in diffs)
    duval = is_du_val_germ(sup)
    return CompareVerdict(strict=strict, du_val=duval, values_sub=cf_f, values_super=cf_g)
