"""Sphere-type versus complex-projective-type components of 10-dimensional GKM_3 graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import NotComplete, PreconditionFailed
from .graph import GKMGraph, SubtorusSpec, check_gkm_k, fixed_subgraph, isomorphic, validate
from .models import cpn_graph

SPHERE_TYPE = "SphereType"
CP_TYPE = "CPType"
UNRECOGNIZED = "Unrecognized"


def _neg(v):
    return tuple(-x for x in v)


def _is_complete_simple(g: GKMGraph) -> bool:
    n = len(g.vertices)
    pairs = {(e.u, e.v) for e in g.edges}
    return len(g.edges) == n * (n - 1) // 2 == len(pairs)


def cpn_realizable(g: GKMGraph) -> dict[str, tuple[int, ...]] | None:
    """Weights a_v with every label equal to +-(a_v - a_u), or None.

    Gauge: a of the first vertex is 0 and the first spanning-tree edge is taken
    with its label as given.
    """
    if not _is_complete_simple(g):
        raise NotComplete(f"{len(g.vertices)} vertices, {len(g.edges)} edges: not a complete simple graph")
    if not g.vertices:
        return None
    root = g.vertices[0]
    tree, seen, queue = [], {root}, deque([root])
    while queue:
        x = queue.popleft()
        for i, y, lab in g.incident(x):
            if y not in seen:
                seen.add(y)
                tree.append((x, y, lab, i))
                queue.append(y)
    tree_ids = {i for *_, i in tree}
    others = [e for i, e in enumerate(g.edges) if i not in tree_ids]
    zero = (0,) * g.torus_rank
    for signs in product((1, -1), repeat=max(len(tree) - 1, 0)):
        signs = (1,) + signs if tree else ()
        a = {root: zero}
        for s, (x, y, lab, _) in zip(signs, tree):
            a[y] = tuple(p + s * q for p, q in zip(a[x], lab))
        ok = True
        for e in others:
            diff = tuple(p - q for p, q in zip(a[e.v], a[e.u]))
            if e.alpha_at_u != diff and e.alpha_at_u != _neg(diff):
                ok = False
                break
        if ok:
            return a
    return None


@dataclass(frozen=True)
class Verdict:
    tag: str
    vertices: tuple[str, ...]
    edge_count: int
    weights: tuple[tuple[str, tuple[int, ...]], ...] | None = None
    triangle: tuple[str, ...] | None = None
    failed: str | None = None
    detail: str = field(default="", compare=False)

    def summary(self) -> str:
        head = f"{self.tag}: {len(self.vertices)} vertices, {self.edge_count} edges"
        if self.weights:
            head += "; weights " + ", ".join(f"{v}={list(w)}" for v, w in self.weights)
        if self.triangle:
            head += "; triangle " + "-".join(self.triangle)
        if self.failed:
            head += f"; failed check: {self.failed}"
            if self.detail:
                head += f" ({self.detail})"
        return head


def _triangle_witness(g: GKMGraph) -> tuple[str, ...] | None:
    """Three vertices forming a whole component of a codimension-two fixed subgraph."""
    root = g.vertices[0]
    inc = g.incident(root)
    for (_, _, a), (_, _, b) in ((p, q) for k, p in enumerate(inc) for q in inc[k + 1:]):
        for comp in fixed_subgraph(g, SubtorusSpec((a, b))).components:
            if root in comp.vertices and len(comp.vertices) == 3 and len(comp.edge_ids) == 3:
                return comp.vertices
    return None


def _classify_component(comp: GKMGraph) -> Verdict:
    verts, ne = tuple(comp.vertices), len(comp.edges)
    if len(verts) == 2 and ne == 5:
        return Verdict(SPHERE_TYPE, verts, ne)
    if len(verts) != 6:
        return Verdict(UNRECOGNIZED, verts, ne, failed="vertex_count",
                       detail=f"expected 2 or 6 vertices, found {len(verts)}")
    try:
        a = cpn_realizable(comp)
    except NotComplete as exc:
        return Verdict(UNRECOGNIZED, verts, ne, failed="not_complete", detail=str(exc))
    if a is None:
        return Verdict(UNRECOGNIZED, verts, ne, failed="cpn_realizable",
                       detail="labels are not differences of vertex weights")
    rebuilt = cpn_graph([a[v] for v in verts])
    if isomorphic(rebuilt, comp, match_labels=True) is None:
        return Verdict(UNRECOGNIZED, verts, ne, failed="revalidation",
                       detail="rebuilt model is not isomorphic to the component")
    weights = tuple((v, a[v]) for v in verts)
    return Verdict(CP_TYPE, verts, ne, weights=weights, triangle=_triangle_witness(comp))


def classify(g: GKMGraph) -> list[Verdict]:
    """One verdict per connected component, in order of smallest vertex id."""
    problems = validate(g)
    if problems:
        raise PreconditionFailed("invalid graph: " + "; ".join(str(p) for p in problems))
    if g.half_dim != 5:
        raise PreconditionFailed(f"half_dim must be 5, got {g.half_dim}")
    if g.torus_rank < 3 or not check_gkm_k(g, 3):
        raise PreconditionFailed("graph is not GKM_3")
    return [_classify_component(c) for c in g.components()]


def chi_consistent(verdicts: Sequence[Verdict], g: GKMGraph) -> bool:
    size = {SPHERE_TYPE: 2, CP_TYPE: 6}
    if any(v.tag not in size for v in verdicts):
        return False
    return sum(size[v.tag] for v in verdicts) == len(g.vertices)
