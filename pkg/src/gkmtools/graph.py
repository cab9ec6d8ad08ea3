"""Labelled GKM multigraphs: weights, validity, subtorus fixed loci, two-skeleta,
isomorphism and localisation-set membership.

Edges carry the tangent weight at their first endpoint; the weight read at the
other endpoint is its negative.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .algebra import integer_rank, lattice_coordinates, saturation
from .errors import Gkm3Required


def _canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Representative of {v, -v} whose first nonzero entry is positive."""
    v = tuple(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


@dataclass(frozen=True)
class Weight:
    components: tuple[int, ...]
    signed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(int(x) for x in self.components))

    def __neg__(self):
        return Weight(tuple(-x for x in self.components), self.signed)

    def __len__(self):
        return len(self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def key(self) -> tuple[int, ...]:
        return self.components if self.signed else _canonical_sign(self.components)

    def __eq__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        if self.signed and other.signed:
            return self.components == other.components
        return _canonical_sign(self.components) == _canonical_sign(other.components)

    def __hash__(self):
        return hash(_canonical_sign(self.components))


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    alpha_at_u: tuple[int, ...]

    def alpha_at(self, vertex: str) -> tuple[int, ...]:
        if vertex == self.u:
            return self.alpha_at_u
        if vertex == self.v:
            return tuple(-x for x in self.alpha_at_u)
        raise KeyError(vertex)

    def other(self, vertex: str) -> str:
        return self.v if vertex == self.u else self.u


@dataclass(frozen=True)
class GKMGraph:
    """A GKM graph in canonical form.

    Vertices are sorted, each edge is stored with ``u <= v`` (the label is
    negated when the endpoints are swapped) and the edge list is sorted, so
    equality is structural.
    """

    torus_rank: int
    half_dim: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    orientation_signs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        signs = tuple(self.orientation_signs) or (1,) * len(verts)
        if len(signs) != len(verts):
            raise ValueError("one orientation sign per vertex")
        by_vertex = dict(zip(verts, signs)) if len(set(verts)) == len(verts) else None
        order = sorted(range(len(verts)), key=lambda i: verts[i])
        object.__setattr__(self, "vertices", tuple(verts[i] for i in order))
        object.__setattr__(self, "orientation_signs", tuple(signs[i] for i in order))
        edges = []
        for e in self.edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            alpha = tuple(int(x) for x in e.alpha_at_u)
            u, v = str(e.u), str(e.v)
            if v < u:
                u, v, alpha = v, u, tuple(-x for x in alpha)
            edges.append(Edge(u, v, alpha))
        edges.sort(key=lambda e: (e.u, e.v, e.alpha_at_u))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_sign", by_vertex)

    # -- construction helpers ---------------------------------------------

    @classmethod
    def build(cls, torus_rank, half_dim, vertices, edges, orientation_signs=None) -> "GKMGraph":
        vertices = list(vertices)
        if isinstance(orientation_signs, Mapping):
            signs = tuple(int(orientation_signs.get(v, 1)) for v in vertices)
        elif orientation_signs is None:
            signs = ()
        else:
            signs = tuple(orientation_signs)
        return cls(int(torus_rank), int(half_dim), tuple(vertices), tuple(edges), signs)

    def with_signs(self, signs: Mapping[str, int]) -> "GKMGraph":
        return GKMGraph.build(self.torus_rank, self.half_dim, self.vertices, self.edges,
                              {v: signs.get(v, self.sign(v)) for v in self.vertices})

    # -- queries ------------------------------------------------------------

    def sign(self, vertex: str) -> int:
        return self._sign[vertex]

    def incident(self, vertex: str) -> list[tuple[int, str, tuple[int, ...]]]:
        """``(edge_index, neighbour, label read at vertex)`` for each incident edge."""
        return self._incidence().get(vertex, [])

    def _incidence(self):
        cache = self.__dict__.get("_inc")
        if cache is None:
            cache = defaultdict(list)
            for i, e in enumerate(self.edges):
                cache[e.u].append((i, e.v, e.alpha_at_u))
                cache[e.v].append((i, e.u, e.alpha_at(e.v)))
            cache = dict(cache)
            object.__setattr__(self, "_inc", cache)
        return cache

    def valence(self, vertex: str) -> int:
        return len(self.incident(vertex))

    def labels(self) -> list[tuple[int, ...]]:
        return [e.alpha_at_u for e in self.edges]

    def components(self) -> list["GKMGraph"]:
        """Connected components as graphs (same torus rank and half dimension)."""
        seen: set = set()
        out = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = _bfs(self, start, range(len(self.edges)))
            seen |= comp
            out.append(self.subgraph(comp, [i for i, e in enumerate(self.edges) if e.u in comp],
                                   half_dim=self.half_dim))
        return out

    def subgraph(self, vertices: Iterable[str], edge_ids: Iterable[int], half_dim: int | None = None) -> "GKMGraph":
        vs = sorted(set(vertices))
        es = [self.edges[i] for i in sorted(set(edge_ids))]
        if half_dim is None:
            counts = defaultdict(int)
            for e in es:
                counts[e.u] += 1
                counts[e.v] += 1
            half_dim = max(counts.values(), default=0)
        return GKMGraph.build(self.torus_rank, half_dim, vs, es, {v: self.sign(v) for v in vs})

    # -- serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "torus_rank": self.torus_rank,
            "half_dim": self.half_dim,
            "vertices": list(self.vertices),
            "orientation_signs": {v: s for v, s in zip(self.vertices, self.orientation_signs)},
            "edges": [{"u": e.u, "v": e.v, "alpha_at_u": list(e.alpha_at_u)} for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "GKMGraph":
        if not isinstance(data, Mapping):
            raise ValueError("graph document must be an object")
        allowed = {"torus_rank", "half_dim", "vertices", "edges", "orientation_signs"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown graph fields: {sorted(unknown)}")
        missing = allowed - {"orientation_signs"} - set(data)
        if missing:
            raise ValueError(f"missing graph fields: {sorted(missing)}")
        edges = []
        for e in data["edges"]:
            if not isinstance(e, Mapping) or set(e) != {"u", "v", "alpha_at_u"}:
                raise ValueError(f"edge must have exactly u, v, alpha_at_u: {e!r}")
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in e["alpha_at_u"]):
                raise ValueError(f"edge label must be a list of integers: {e!r}")
            edges.append(Edge(str(e["u"]), str(e["v"]), tuple(e["alpha_at_u"])))
        signs = data.get("orientation_signs")
        if signs is not None:
            if not isinstance(signs, Mapping):
                raise ValueError("orientation_signs must be an object")
            extra = set(signs) - set(map(str, data["vertices"]))
            if extra:
                raise ValueError(f"orientation_signs for unknown vertices: {sorted(extra)}")
        for key in ("torus_rank", "half_dim"):
            if not isinstance(data[key], int) or isinstance(data[key], bool):
                raise ValueError(f"{key} must be an integer")
        return cls.build(data["torus_rank"], data["half_dim"], [str(v) for v in data["vertices"]],
                         edges, signs)

    @classmethod
    def from_json(cls, text: str) -> "GKMGraph":
        return cls.from_dict(json.loads(text))


def disjoint_union(graphs: Sequence[GKMGraph], prefixes: Sequence[str] | None = None) -> GKMGraph:
    if not graphs:
        raise ValueError("need at least one graph")
    d, n = graphs[0].torus_rank, graphs[0].half_dim
    prefixes = prefixes or [f"c{i}." for i in range(len(graphs))]
    verts, edges, signs = [], [], {}
    for g, pre in zip(graphs, prefixes):
        if (g.torus_rank, g.half_dim) != (d, n):
            raise ValueError("graphs must share torus rank and half dimension")
        for v in g.vertices:
            verts.append(pre + v)
            signs[pre + v] = g.sign(v)
        edges += [Edge(pre + e.u, pre + e.v, e.alpha_at_u) for e in g.edges]
    return GKMGraph.build(d, n, verts, edges, signs)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


def validate(g: GKMGraph) -> list[Violation]:
    out = []
    if len(set(g.vertices)) != len(g.vertices):
        dups = sorted({v for v in g.vertices if g.vertices.count(v) > 1})
        out += [Violation("duplicate_vertex", v, "vertex id used more than once") for v in dups]
    known = set(g.vertices)
    for s, v in zip(g.orientation_signs, g.vertices):
        if s not in (1, -1):
            out.append(Violation("orientation", v, f"sign {s} is not +1 or -1"))
    for i, e in enumerate(g.edges):
        where = f"edge {i} ({e.u},{e.v})"
        for end in (e.u, e.v):
            if end not in known:
                out.append(Violation("unknown_vertex", where, f"endpoint {end!r} is not a vertex"))
        if e.u == e.v:
            out.append(Violation("loop", where, "edge joins a vertex to itself"))
        if len(e.alpha_at_u) != g.torus_rank:
            out.append(Violation("label_length", where, f"label has length {len(e.alpha_at_u)}, torus rank is {g.torus_rank}"))
        if not any(e.alpha_at_u):
            out.append(Violation("zero_label", where, "label is the zero weight"))
    for v in g.vertices:
        k = g.valence(v)
        if k != g.half_dim:
            out.append(Violation("valence", v, f"valence {k}, expected {g.half_dim}"))
    return out


@dataclass(frozen=True)
class GkmCheck:
    passed: bool
    vertex: str | None = None
    edge_ids: tuple[int, ...] | None = None

    def __bool__(self):
        return self.passed


def check_gkm_k(g: GKMGraph, k: int) -> GkmCheck:
    """Every k-subset of labels at every vertex must be linearly independent."""
    if not 2 <= k <= g.torus_rank:
        raise ValueError(f"k={k} outside 2..{g.torus_rank}")
    for v in g.vertices:
        inc = g.incident(v)
        for subset in combinations(inc, k):
            if integer_rank([lab for _, _, lab in subset]) < k:
                return GkmCheck(False, v, tuple(i for i, _, _ in subset))
    return GkmCheck(True)


def euler_characteristic(g: GKMGraph) -> int:
    return len(g.vertices)


# ---------------------------------------------------------------------------
# Subtori and fixed loci
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubtorusSpec:
    """Identity component of the joint kernel of ``generators``."""

    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in (g.components if isinstance(g, Weight) else g))
                     for g in self.generators)
        if not gens:
            raise ValueError("a subtorus needs at least one generator")
        object.__setattr__(self, "generators", gens)

    @property
    def codim(self) -> int:
        return integer_rank(self.generators)

    def lattice(self) -> list[tuple[int, ...]]:
        """Canonical basis of the saturated character lattice vanishing on the subtorus."""
        return saturation(self.generators, len(self.generators[0]))

    def annihilates(self, label: Sequence[int]) -> bool:
        return lattice_coordinates(label, self.generators) is not None


@dataclass(frozen=True)
class Component:
    vertices: tuple[str, ...]
    edge_ids: tuple[int, ...]
    graph: GKMGraph


@dataclass(frozen=True)
class FixedLocus:
    components: tuple[Component, ...]
    isolated: tuple[str, ...]


def _bfs(g: GKMGraph, start: str, allowed: Iterable[int]) -> set:
    allowed = set(allowed)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i, y, _ in g.incident(x):
            if i in allowed and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def fixed_subgraph(g: GKMGraph, t: SubtorusSpec) -> FixedLocus:
    keep = [i for i, e in enumerate(g.edges) if t.annihilates(e.alpha_at_u)]
    touched = set()
    for i in keep:
        touched |= {g.edges[i].u, g.edges[i].v}
    comps, seen = [], set()
    for v in g.vertices:
        if v in touched and v not in seen:
            verts = _bfs(g, v, keep)
            seen |= verts
            eids = tuple(i for i in keep if g.edges[i].u in verts)
            comps.append(Component(tuple(sorted(verts)), eids, g.subgraph(verts, eids)))
    isolated = tuple(v for v in g.vertices if v not in touched)
    return FixedLocus(tuple(comps), isolated)


@dataclass(frozen=True)
class SkeletonPiece:
    lattice: tuple[tuple[int, ...], ...]
    components: tuple[Component, ...]


def restrict_to_lattice(g: GKMGraph, basis: Sequence[Sequence[int]], half_dim: int | None = None) -> GKMGraph:
    """Re-express every label in coordinates of ``basis`` (which must contain them)."""
    edges = []
    for e in g.edges:
        coords = lattice_coordinates(e.alpha_at_u, basis)
        if coords is None:
            raise ValueError(f"label {e.alpha_at_u} is not in the lattice")
        if any(Fraction(c).denominator != 1 for c in coords):
            raise ValueError(f"label {e.alpha_at_u} is not in the saturated lattice")
        edges.append(Edge(e.u, e.v, tuple(int(c) for c in coords)))
    return GKMGraph.build(len(basis), g.half_dim if half_dim is None else half_dim,
                          g.vertices, edges, {v: g.sign(v) for v in g.vertices})


def two_skeleton_components(g: GKMGraph) -> list[SkeletonPiece]:
    """Fixed loci of the codimension-two subtori cut out by pairs of labels at a vertex."""
    required = min(3, g.torus_rank)
    if required < 2:
        return []
    if not check_gkm_k(g, required):
        raise Gkm3Required(f"graph is not GKM_{required}")
    seen: dict = {}
    for v in g.vertices:
        for (_, _, a), (_, _, b) in combinations(g.incident(v), 2):
            lat = tuple(saturation([a, b], g.torus_rank))
            if len(lat) == 2 and lat not in seen:
                locus = fixed_subgraph(g, SubtorusSpec(lat))
                seen[lat] = SkeletonPiece(lat, locus.components)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict
    edge_map: dict


def isomorphic(g1: GKMGraph, g2: GKMGraph, match_labels: bool = True) -> Isomorphism | None:
    """Backtracking search for a vertex/edge bijection preserving incidence.

    With ``match_labels`` each edge label must agree with its image up to sign,
    in the fixed coordinates of Z^d.
    """
    if match_labels and g1.torus_rank != g2.torus_rank:
        raise ValueError("label matching needs equal torus ranks")
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None

    def edge_key(e):
        return _canonical_sign(e.alpha_at_u) if match_labels else ()

    def between(g):
        table = defaultdict(list)
        for i, e in enumerate(g.edges):
            table[frozenset((e.u, e.v))].append(i)
        return table

    b1, b2 = between(g1), between(g2)

    def profile(g, v):
        return sorted(edge_key(g.edges[i]) for i, _, _ in g.incident(v))

    prof2 = {v: profile(g2, v) for v in g2.vertices}
    order = []
    for start in g1.vertices:
        if start not in order:
            for x in sorted(_bfs(g1, start, range(len(g1.edges))),
                            key=lambda x: (x != start, x)):
                if x not in order:
                    order.append(x)
    candidates = {v: [w for w in g2.vertices if prof2[w] == profile(g1, v)] for v in g1.vertices}

    def bundle(g, table, a, b):
        return sorted(edge_key(g.edges[i]) for i in table.get(frozenset((a, b)), []))

    mapping: dict = {}
    used: set = set()

    def consistent(v, w):
        for x, y in mapping.items():
            if bundle(g1, b1, v, x) != bundle(g2, b2, w, y):
                return False
        return True

    def search(pos):
        if pos == len(order):
            return True
        v = order[pos]
        for w in candidates[v]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if search(pos + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not search(0):
        return None
    edge_map = {}
    for pair, ids in b1.items():
        a, b = tuple(pair)
        targets = list(b2[frozenset((mapping[a], mapping[b]))])
        for i in sorted(ids, key=lambda i: edge_key(g1.edges[i])):
            j = next(j for j in targets if edge_key(g2.edges[j]) == edge_key(g1.edges[i]))
            targets.remove(j)
            edge_map[i] = j
    return Isomorphism(dict(mapping), edge_map)


# ---------------------------------------------------------------------------
# Localisation sets
# ---------------------------------------------------------------------------


def _components(w) -> tuple[int, ...]:
    return w.components if isinstance(w, Weight) else tuple(int(x) for x in w)


def s0_membership(ws: Iterable) -> bool:
    """Is the product of these degree-two classes in S_0 (all factors nonzero)?"""
    return all(any(_components(w)) for w in ws)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def sp_membership(ws: Iterable, p: int) -> bool:
    """Is the product in S_p, i.e. does no factor vanish mod p?"""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return all(any(x % p for x in _components(w)) for w in ws)
