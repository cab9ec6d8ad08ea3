from __future__ import annotations

import pytest

from gkmtools.classify import CP_TYPE, SPHERE_TYPE, UNRECOGNIZED, chi_consistent, classify, cpn_realizable
from gkmtools.errors import NotComplete, PreconditionFailed
from gkmtools.graph import Edge, GKMGraph, check_gkm_k, disjoint_union, isomorphic
from gkmtools.models import ModelSpec, cpn_graph, sphere_graph


def cp5():
    return ModelSpec.generic("cpn", 5, 3).build()


def s10():
    return ModelSpec.generic("sphere", 5, 3).build()


def corrupted_k6():
    # v0-v1 label (1,1,1) becomes (2,1,1); the graph stays GKM_3
    g = cp5()
    edges = list(g.edges)
    e = edges[0]
    edges[0] = Edge(e.u, e.v, (2, 1, 1))
    return GKMGraph.build(3, 5, g.vertices, edges)


def test_cp5_is_cp_type_with_revalidating_weights():
    (v,) = classify(cp5())
    assert v.tag == CP_TYPE and v.failed is None
    a = dict(v.weights)
    assert a == {f"v{i}": (i, i * i, i ** 3) for i in range(6)}
    assert isomorphic(cpn_graph([a[x] for x in v.vertices]), cp5()) is not None
    assert v.triangle == ("v0", "v1", "v2")


def test_spheres():
    verdicts = classify(disjoint_union([s10()] * 3))
    assert [v.tag for v in verdicts] == [SPHERE_TYPE] * 3
    assert chi_consistent(verdicts, disjoint_union([s10()] * 3))


def test_mixed_union():
    g = disjoint_union([cp5(), s10()])
    tags = sorted(v.tag for v in classify(g))
    assert tags == [CP_TYPE, SPHERE_TYPE]
    assert chi_consistent(classify(g), g)


def test_corrupted_label_is_unrecognized():
    g = corrupted_k6()
    assert check_gkm_k(g, 3)
    (v,) = classify(g)
    assert v.tag == UNRECOGNIZED and v.failed == "cpn_realizable"
    assert "cpn_realizable" in v.summary()
    assert not chi_consistent([v], g)


def test_realizability_small_cases():
    tri = cpn_graph([(0, 0), (1, 0), (0, 1)])
    a = cpn_realizable(tri)
    assert a is not None
    for e in tri.edges:
        diff = tuple(p - q for p, q in zip(a[e.v], a[e.u]))
        assert e.alpha_at_u in (diff, tuple(-x for x in diff))
    bad = GKMGraph.build(2, 2, ["a", "b", "c"], [Edge("a", "b", (1, 0)), Edge("b", "c", (0, 1)), Edge("a", "c", (1, 2))])
    assert cpn_realizable(bad) is None


def test_not_complete():
    with pytest.raises(NotComplete):
        cpn_realizable(s10())
    g = cp5()
    h = GKMGraph.build(3, 5, g.vertices, g.edges[1:])
    with pytest.raises(NotComplete):
        cpn_realizable(h)


def test_preconditions():
    with pytest.raises(PreconditionFailed):
        classify(ModelSpec.generic("cpn", 4, 3).build())
    with pytest.raises(PreconditionFailed):
        classify(sphere_graph([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1)]))
    g = cp5()
    with pytest.raises(PreconditionFailed):
        classify(GKMGraph.build(3, 5, g.vertices, g.edges[1:]))
