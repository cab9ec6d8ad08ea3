"""GKM graphs of linear torus actions on spheres and projective spaces."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Sequence

from .graph import Edge, GKMGraph, Weight, check_gkm_k

FAMILIES = ("sphere", "complex_projective", "quaternionic_projective")
ALIASES = {"cpn": "complex_projective", "hpn": "quaternionic_projective", "sphere": "sphere"}


def _vec(w) -> tuple[int, ...]:
    return w.components if isinstance(w, Weight) else tuple(int(x) for x in w)


def _ids(count_: int) -> list[str]:
    width = len(str(count_ - 1))
    return [f"v{i:0{width}d}" for i in range(count_)]


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sphere_graph(weights: Sequence) -> GKMGraph:
    """Two poles joined by one edge per weight; S^{2n} with n = len(weights)."""
    ws = [_vec(w) for w in weights]
    if not ws:
        raise ValueError("need at least one weight")
    if len({len(w) for w in ws}) != 1:
        raise ValueError("weights must share a length")
    if any(not any(w) for w in ws):
        raise ValueError("zero weight")
    n = len(ws)
    edges = [Edge("p+", "p-", w) for w in ws]
    return GKMGraph.build(len(ws[0]), n, ["p+", "p-"], edges, {"p+": 1, "p-": (-1) ** (n + 1)})


def cpn_graph(weights: Sequence) -> GKMGraph:
    """Complete graph on n+1 vertices, edge (i, j) labelled a_j - a_i at i."""
    a = [_vec(w) for w in weights]
    if len(a) < 1:
        raise ValueError("need at least one weight")
    if len({len(w) for w in a}) != 1:
        raise ValueError("weights must share a length")
    if len(set(a)) != len(a):
        raise ValueError("repeated weight")
    n = len(a) - 1
    ids = _ids(n + 1)
    edges = [Edge(ids[i], ids[j], _sub(a[j], a[i])) for i in range(n + 1) for j in range(i + 1, n + 1)]
    return GKMGraph.build(len(a[0]), n, ids, edges, {v: (-1) ** n for v in ids})


def hpn_graph(weights: Sequence) -> GKMGraph:
    """n+1 vertices, each pair joined by edges labelled a_j - a_i and a_j + a_i at i."""
    a = [_vec(w) for w in weights]
    if len(a) < 1:
        raise ValueError("need at least one weight")
    if len({len(w) for w in a}) != 1:
        raise ValueError("weights must share a length")
    n = len(a) - 1
    ids = _ids(n + 1)
    edges = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            minus, plus = _sub(a[j], a[i]), _add(a[j], a[i])
            if not any(minus) or not any(plus):
                raise ValueError(f"degenerate weights at pair ({i}, {j})")
            edges += [Edge(ids[i], ids[j], minus), Edge(ids[i], ids[j], plus)]
    # the a_j + a_i label flips sign once per smaller neighbour
    return GKMGraph.build(len(a[0]), 2 * n, ids, edges, {v: (-1) ** i for i, v in enumerate(ids)})


def _moment(i: int, d: int, start: int = 1) -> tuple[int, ...]:
    return tuple(i ** k for k in range(start, start + d))


def generic_weights(family: str, n: int, d: int) -> list[tuple[int, ...]]:
    """Deterministic integer weights making the model GKM_3 (when d >= 3).

    Complex projective: a_i = (i, i^2, ..., i^d). Sphere: w_i = (1, i, ..., i^(d-1)).
    Quaternionic projective: shifted moment curve, shift searched until GKM_3 holds.
    """
    family = ALIASES.get(family, family)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if family == "complex_projective":
        return [_moment(i, d) for i in range(n + 1)]
    if family == "sphere":
        return [_moment(i, d, start=0) for i in range(1, n + 1)]
    for shift in count(1):
        a = [_moment(i + shift, d) for i in range(n + 1)]
        if d < 3 or check_gkm_k(hpn_graph(a), 3):
            return a
        if shift > 64:
            raise RuntimeError("no GKM_3 weights found")


@dataclass(frozen=True)
class ModelSpec:
    family: str
    parameters: tuple[tuple[int, ...], ...]
    torus_rank: int

    def __post_init__(self):
        family = ALIASES.get(self.family, self.family)
        if family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", family)
        params = tuple(_vec(w) for w in self.parameters)
        if any(len(w) != self.torus_rank for w in params):
            raise ValueError("parameter length must equal the torus rank")
        object.__setattr__(self, "parameters", params)

    @classmethod
    def generic(cls, family: str, n: int, d: int) -> "ModelSpec":
        return cls(family, tuple(generic_weights(family, n, d)), d)

    @property
    def half_dim(self) -> int:
        k = len(self.parameters)
        if self.family == "sphere":
            return k
        if self.family == "complex_projective":
            return k - 1
        return 2 * (k - 1)

    def build(self) -> GKMGraph:
        if self.family == "sphere":
            return sphere_graph(self.parameters)
        if self.family == "complex_projective":
            return cpn_graph(self.parameters)
        return hpn_graph(self.parameters)
