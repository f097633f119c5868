import itertools
import random
from fractions import Fraction as F

import pytest

from logsurf import (
    CoeffOutOfRange,
    DanglingEdge,
    DualGraph,
    DuplicateId,
    Edge,
    NotNegativeDefinite,
    SelfLoop,
    Vertex,
    blow_up,
    branching_number,
    discriminant,
    find_shapes,
    is_negative_definite,
    validate,
)
from logsurf.linalg import bareiss_det

from conftest import chain_graph, fork_graph, model


# -- validation -------------------------------------------------------------


def test_single_vertex_valid():
    g = chain_graph(2)
    assert validate(g) is g


def test_duplicate_id():
    with pytest.raises(DuplicateId):
        DualGraph((Vertex("a", 2), Vertex("a", 3)), ())


def test_dangling_edge():
    with pytest.raises(DanglingEdge):
        DualGraph((Vertex("a", 2),), (Edge("a", "E9"),))


def test_self_loop():
    with pytest.raises(SelfLoop):
        Edge("a", "a")


def test_coeff_out_of_range():
    with pytest.raises(CoeffOutOfRange):
        Vertex("a", 2, boundary=F(3, 2))


def test_contracted_must_be_negative_definite():
    g = chain_graph(0)
    with pytest.raises(NotNegativeDefinite):
        model(g, contracted=("v0",))


# -- intersections ----------------------------------------------------------


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (4, 4), (5, 3)])
def test_middle_curve_image_self_intersection(n, m):
    g = chain_graph(n, 1, m)
    mod = model(g, contracted=("v0", "v2"))
    assert mod.self_int("v1") == -1 + F(1, n) + F(1, m)
    assert mod.canonical_intersect({"v1": F(1)}) == 1 - F(2, n) - F(2, m)


def test_intersect_no_correction():
    mod = model(chain_graph(2))
    assert mod.self_int("v0") == -2


def test_intersect_half_correction():
    # curve A with A^2 = -1 meeting a contracted (-2)-curve once
    g = chain_graph(2, 1)
    mod = model(g, contracted=("v0",))
    assert mod.self_int("v1") == F(-1, 2)


def test_hirzebruch_adjunction():
    g = DualGraph((Vertex("C", 4), Vertex("Fb", 0)), (Edge("C", "Fb"),))
    mod = model(g)
    assert mod.canonical_intersect({"C": F(1)}) == 4 - 2
    assert mod.canonical_intersect({"Fb": F(1)}) == -2


def test_lone_minus_one():
    mod = model(chain_graph(1))
    assert mod.canonical_intersect({"v0": F(1)}) == -1


def test_pullback_meets_contracted_trivially():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 6)
        g = chain_graph(*[rng.randint(2, 5) for _ in range(n)])
        contracted = tuple(f"v{i}" for i in range(n - 1))
        mod = model(g, contracted=contracted)
        free = f"v{n-1}"
        pb = mod.pullback({free: F(1)})
        for e in contracted:
            assert g.pairing(pb, {e: F(1)}) == 0


def test_intersect_symmetric_bilinear():
    g = chain_graph(3, 1, 4, 2)
    mod = model(g, contracted=("v0", "v3"))
    A = {"v1": F(2), "v2": F(-1, 3)}
    B = {"v1": F(1, 2), "v2": F(5)}
    C = {"v2": F(1)}
    assert mod.intersect(A, B) == mod.intersect(B, A)
    AplusC = {"v1": A.get("v1", F(0)), "v2": A["v2"] + C["v2"]}
    assert mod.intersect(AplusC, B) == mod.intersect(A, B) + mod.intersect(C, B)


def test_projection_formula():
    g = chain_graph(3, 1, 4, 2)
    mod = model(g, contracted=("v0", "v3"))
    A = {"v1": F(1)}
    B = {"v2": F(1)}
    assert mod.intersect(A, B) == g.pairing(mod.pullback(A), B)


# -- branching numbers and negative definiteness -----------------------------


def test_branching_numbers_chain():
    g = chain_graph(2, 2, 2)
    assert branching_number(g, ["v0"]) == 1
    assert branching_number(g, ["v1"]) == 2


def test_branching_number_d4():
    g = fork_graph(2, (2,), (2,), (2,))
    assert branching_number(g, ["c"]) == 3


def test_negative_definite_examples():
    assert is_negative_definite(chain_graph(2, 2), ["v0", "v1"])
    d4 = fork_graph(2, (2,), (2,), (2,))
    assert is_negative_definite(d4, d4.ids)
    # a (-2)-bench: discriminant vanishes
    bench = fork_graph(2, (2,), (2,), (2, 2))  # D~4 affine-type shape
    vs = list(bench.vertices) + [Vertex("x1", 2), Vertex("x2", 2)]
    es = list(bench.edges) + [Edge("t2_0", "x1"), Edge("t2_0", "x2")]
    bench2 = DualGraph(tuple(vs), tuple(es))
    assert not is_negative_definite(bench2, bench2.ids)


def test_negative_definite_matches_minor_oracle():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(1, 7)
        vs = [Vertex(f"v{i}", rng.randint(1, 5)) for i in range(n)]
        es = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.35:
                    es.append(Edge(f"v{i}", f"v{j}", rng.randint(1, 2)))
        g = DualGraph(tuple(vs), tuple(es))
        ids = list(g.ids)
        # oracle: ALL principal minors of -Q positive (Sylvester on every
        # principal submatrix, order-independent)
        def minor(sub):
            m = g.neg_q(sub)
            return bareiss_det(m)

        oracle = all(
            minor(sub) > 0
            for k in range(1, n + 1)
            for sub in itertools.combinations(ids, k)
        )
        assert is_negative_definite(g, ids) == oracle


# -- shapes -------------------------------------------------------------------


def test_find_shapes_rod():
    g = chain_graph(3, 2)
    rep = find_shapes(g, g.ids)
    assert rep.rods == (("v0", "v1"),)
    assert set(rep.tips) == {"v0", "v1"}
    assert rep.maximal_twigs == ()


def test_find_shapes_fork():
    g = fork_graph(2, (2,), (2,), (2,))
    rep = find_shapes(g, g.ids)
    assert len(rep.forks) == 1
    assert rep.forks[0].center == "c"
    assert all(len(t) == 1 for t in rep.forks[0].twigs)


def test_find_shapes_superfluous():
    # [2,1,2] inside a larger boundary, the (-1)-curve meeting nothing else
    g = chain_graph(2, 1, 2, 0)
    rep = find_shapes(g, {"v0", "v1", "v2", "v3"})
    assert "v1" in rep.superfluous


def test_find_shapes_twig_orientation():
    # a chain component is reported as a rod, not a twig
    g = chain_graph(3, 2, 0)
    rep = find_shapes(g, g.ids)
    assert rep.rods == (("v0", "v1", "v2"),)
    # a branch vertex turns the [3,2] arm into a maximal twig, tip of D first
    g2 = fork_graph(0, (3, 2), (0,), (0,))
    rep2 = find_shapes(g2, g2.ids)
    assert ("t0_1", "t0_0") in rep2.maximal_twigs
    weights = [g2.vertex(v).weight for v in ("t0_1", "t0_0")]
    assert weights == [3, 2]


def test_find_shapes_segment_and_bench():
    # segment: a (-2)-pair strung between two branch vertices
    vs = (
        Vertex("h1", 0),
        Vertex("s1", 2),
        Vertex("s2", 2),
        Vertex("h2", 0),
        Vertex("x1", 0),
        Vertex("x2", 0),
        Vertex("y1", 0),
        Vertex("y2", 0),
    )
    es = (
        Edge("h1", "s1"),
        Edge("s1", "s2"),
        Edge("s2", "h2"),
        Edge("h1", "x1"),
        Edge("h1", "x2"),
        Edge("h2", "y1"),
        Edge("h2", "y2"),
    )
    g = DualGraph(vs, es)
    rep = find_shapes(g, g.ids)
    assert ("s1", "s2") in rep.segments or ("s2", "s1") in rep.segments
    # bench
    bench = fork_graph(3, (2,), (2,))
    vs = list(bench.vertices) + [Vertex("u1", 2), Vertex("u2", 2)]
    es = list(bench.edges) + [Edge("c", "u1"), Edge("c", "u2")]
    g2 = DualGraph(tuple(vs), tuple(es))
    rep2 = find_shapes(g2, g2.ids)
    assert len(rep2.benches) == 1
    assert rep2.benches[0].central_chain == ("c",)


def test_find_shapes_circular():
    vs = (Vertex("a", 2), Vertex("b", 2), Vertex("c", 3))
    es = (Edge("a", "b"), Edge("b", "c"), Edge("a", "c"))
    g = DualGraph(vs, es)
    rep = find_shapes(g, g.ids)
    assert rep.circular == (frozenset({"a", "b", "c"}),)
    two = DualGraph((Vertex("a", 3), Vertex("b", 2)), (Edge("a", "b", 2),))
    assert find_shapes(two, two.ids).circular == (frozenset({"a", "b"}),)


def test_half_bench_shapes():
    # [2,b,2] with external contact at b
    vs = (Vertex("f1", 2), Vertex("b", 3), Vertex("f2", 2), Vertex("r", 0))
    es = (Edge("f1", "b"), Edge("b", "f2"), Edge("b", "r"))
    g = DualGraph(vs, es)
    rep = find_shapes(g, g.ids)
    assert any(h.central_chain == ("b",) and set(h.feet) == {"f1", "f2"} for h in rep.half_benches)
    # fork of type (b;2,2,t) with contact at the far end of the central chain
    g2 = fork_graph(3, (2,), (2,), (2, 2))
    vs2 = list(g2.vertices) + [Vertex("r", 0)]
    es2 = list(g2.edges) + [Edge("t2_1", "r")]  # t2_1 is the outer end
    g2 = DualGraph(tuple(vs2), tuple(es2))
    rep2 = find_shapes(g2, g2.ids)
    assert any(len(h.central_chain) == 3 for h in rep2.half_benches)


# -- blowups ------------------------------------------------------------------


def test_blow_up_edge():
    g = chain_graph(2, 2)
    g2 = blow_up(g, ("edge", "v0", "v1"), new_id="e")
    assert g2.vertex("v0").weight == 3
    assert g2.vertex("v1").weight == 3
    assert g2.vertex("e").weight == 1
    assert g2.mult("v0", "v1") == 0
    assert g2.mult("v0", "e") == 1 and g2.mult("v1", "e") == 1


def test_blow_up_free_point():
    g = chain_graph(1)
    g2 = blow_up(g, ("free", "v0"), new_id="e")
    assert g2.vertex("v0").weight == 2
    assert g2.mult("v0", "e") == 1


def test_blow_up_chain_1_1():
    g = chain_graph(1, 1)
    g2 = blow_up(g, ("edge", "v0", "v1"), new_id="e")
    assert [g2.vertex(v).weight for v in ("v0", "e", "v1")] == [2, 1, 2]


def test_blow_up_preserves_total_transform_discriminant():
    rng = random.Random(17)
    for _ in range(60):
        n = rng.randint(1, 5)
        g = chain_graph(*[rng.randint(1, 4) for _ in range(n)])
        if rng.random() < 0.5 or n == 1:
            site = ("free", f"v{rng.randrange(n)}")
        else:
            i = rng.randrange(n - 1)
            site = ("edge", f"v{i}", f"v{i+1}")
        g2 = blow_up(g, site, new_id="e")
        assert discriminant(g2, g2.ids) == discriminant(g, g.ids)


def test_find_shapes_embedded_cycle():
    # a cycle with a tail: the cycle itself is reported as a circular subgraph
    vs = (Vertex("a", 3), Vertex("b", 2), Vertex("c", 2), Vertex("t", 2))
    es = (Edge("a", "b"), Edge("b", "c"), Edge("a", "c"), Edge("a", "t"))
    g = DualGraph(vs, es)
    rep = find_shapes(g, g.ids)
    assert rep.circular == (frozenset({"a", "b", "c"}),)
    assert ("t",) in rep.maximal_twigs
