"""Graph equivariant cohomology of a GKM graph, degree by degree.

A class of cohomological degree 2j assigns to every vertex a homogeneous
polynomial of degree j in t1..td such that, across every edge, the difference
of the endpoint values is divisible by the edge label. Divisibility by a
linear form is tested by restricting to its kernel hyperplane.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import (
    BettiProfile,
    PoincareSeries,
    Polynomial,
    expand_free_module,
    homogeneous_basis,
    kernel_basis_sparse,
    restrict_to_hyperplane,
    series_shape_divide,
)
from .errors import GKMError, NotFormal, WrongFamily
from .graph import GKMGraph, _canonical_sign

FORMALITY_HYPOTHESIS = (
    "assumes vanishing odd Betti numbers (equivariant formality); "
    "Betti numbers are read off the graph cohomology as a free module"
)


@dataclass(frozen=True)
class EquivariantClass:
    degree: int
    values: tuple[tuple[str, Polynomial], ...]

    def __post_init__(self):
        if self.degree % 2:
            raise ValueError("equivariant classes live in even degree")
        vals = self.values.items() if isinstance(self.values, Mapping) else self.values
        vals = tuple(sorted(vals))
        for v, p in vals:
            if not p.is_homogeneous(self.degree // 2):
                raise ValueError(f"value at {v} is not homogeneous of degree {self.degree // 2}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, degree: int, values: Mapping[str, Polynomial]) -> "EquivariantClass":
        return cls(degree, tuple(values.items()))

    def __getitem__(self, vertex: str) -> Polynomial:
        return dict(self.values)[vertex]

    def as_dict(self) -> dict[str, Polynomial]:
        return dict(self.values)

    def vertices(self) -> list[str]:
        return [v for v, _ in self.values]

    def _zip(self, other):
        a, b = self.as_dict(), other.as_dict()
        if set(a) != set(b):
            raise ValueError("classes live on different vertex sets")
        return a, b

    def __add__(self, other: "EquivariantClass") -> "EquivariantClass":
        if other.degree != self.degree:
            raise ValueError("cannot add classes of different degrees")
        a, b = self._zip(other)
        return EquivariantClass(self.degree, tuple((v, a[v] + b[v]) for v in a))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if isinstance(other, EquivariantClass):
            a, b = self._zip(other)
            return EquivariantClass(self.degree + other.degree, tuple((v, a[v] * b[v]) for v in a))
        if isinstance(other, Polynomial):
            deg = other.degree()
            if not other.is_homogeneous():
                raise ValueError("only homogeneous polynomials act on classes")
            deg = 0 if deg < 0 else deg
            return EquivariantClass(self.degree + 2 * deg, tuple((v, p * other) for v, p in self.values))
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "EquivariantClass":
        return EquivariantClass(self.degree, tuple((v, p.scale(c)) for v, p in self.values))

    def __pow__(self, k: int) -> "EquivariantClass":
        if k < 0:
            raise ValueError("negative power")
        nvars = self.values[0][1].nvars if self.values else 0
        out = unit_class_from(self.vertices(), nvars)
        for _ in range(k):
            out = out * self
        return out

    def to_dict(self) -> dict:
        return {"degree": self.degree, "values": {v: p.to_json() for v, p in self.values}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping, nvars: int) -> "EquivariantClass":
        if not isinstance(data, Mapping) or set(data) != {"degree", "values"}:
            raise ValueError("class document must have exactly 'degree' and 'values'")
        values = {str(v): Polynomial.from_json(nvars, terms) for v, terms in data["values"].items()}
        return cls(int(data["degree"]), tuple(values.items()))


def unit_class_from(vertices: Sequence[str], nvars: int) -> EquivariantClass:
    return EquivariantClass(0, tuple((v, Polynomial.constant(nvars, 1)) for v in vertices))


def unit_class(g: GKMGraph) -> EquivariantClass:
    return unit_class_from(g.vertices, g.torus_rank)


def constant_class(g: GKMGraph, p: Polynomial) -> EquivariantClass:
    """The pullback of p from H*(BT): the same polynomial at every vertex."""
    return unit_class(g) * p


def class_violations(g: GKMGraph, f: EquivariantClass) -> list[int]:
    """Indices of edges across which divisibility fails."""
    vals = f.as_dict()
    missing = set(g.vertices) - set(vals)
    if missing:
        raise ValueError(f"class has no value at {sorted(missing)}")
    bad = []
    for i, e in enumerate(g.edges):
        diff = vals[e.u] - vals[e.v]
        if diff and restrict_to_hyperplane(diff, e.alpha_at_u):
            bad.append(i)
    return bad


def is_class(g: GKMGraph, f: EquivariantClass) -> bool:
    return not class_violations(g, f)


@lru_cache(maxsize=None)
def _restriction_table(label: tuple[int, ...], j: int) -> tuple[dict, ...]:
    d = len(label)
    return tuple(restrict_to_hyperplane(Polynomial.monomial(m), label).terms
                 for m in homogeneous_basis(d, j))


def _constraint_rows(g: GKMGraph, j: int) -> tuple[list[dict], int]:
    d = g.torus_rank
    nb = len(homogeneous_basis(d, j))
    index = {v: k * nb for k, v in enumerate(g.vertices)}
    rows = []
    for e in g.edges:
        table = _restriction_table(_canonical_sign(e.alpha_at_u), j)
        by_target: dict = {}
        for m, image in enumerate(table):
            for mu, c in image.items():
                by_target.setdefault(mu, {})[m] = c
        ou, ov = index[e.u], index[e.v]
        for mu in sorted(by_target):
            row = {}
            for m, c in by_target[mu].items():
                row[ou + m] = row.get(ou + m, 0) + c
                row[ov + m] = row.get(ov + m, 0) - c
            row = {k: c for k, c in row.items() if c}
            if row:
                rows.append(row)
    return rows, nb * len(g.vertices)


@lru_cache(maxsize=256)
def _basis_vectors(g: GKMGraph, j: int) -> tuple[tuple, ...]:
    rows, ncols = _constraint_rows(g, j)
    return tuple(kernel_basis_sparse(rows, ncols))


def equivariant_dim(g: GKMGraph, j: int) -> int:
    """Dimension over Q of the degree-2j part of the graph cohomology."""
    if j < 0:
        return 0
    return len(_basis_vectors(g, j))


def equivariant_basis(g: GKMGraph, j: int) -> list[EquivariantClass]:
    """A Q-basis of the degree-2j part, deterministic for the fixed monomial order."""
    if j < 0:
        return []
    d = g.torus_rank
    monos = homogeneous_basis(d, j)
    nb = len(monos)
    out = []
    for vec in _basis_vectors(g, j):
        values = []
        for k, v in enumerate(g.vertices):
            chunk = vec[k * nb:(k + 1) * nb]
            values.append((v, Polynomial(d, {m: c for m, c in zip(monos, chunk) if c})))
        out.append(EquivariantClass(2 * j, tuple(values)))
    return out


def equivariant_series(g: GKMGraph, top: int) -> PoincareSeries:
    """Equivariant Poincare series up to cohomological degree 2*top."""
    return PoincareSeries.from_even([equivariant_dim(g, j) for j in range(top + 1)])


def ordinary_betti(g: GKMGraph, check_beyond: int = 1) -> BettiProfile:
    """Ordinary Betti numbers b_0..b_2n of a graph, assuming equivariant formality.

    Raises :class:`NotFormal` when the graph cohomology is not shaped like a free
    module over H*(BT): a negative or non-integral coefficient, Betti numbers
    implied above 2n (checked for ``check_beyond`` extra degrees), or a total
    rank different from the number of fixed points.
    """
    n, d = g.half_dim, g.torus_rank
    series = equivariant_series(g, n + check_beyond)
    try:
        profile = series_shape_divide(series, d, n)
    except GKMError as exc:
        raise NotFormal(str(exc)) from exc
    expected = expand_free_module(profile.entries, d, series.truncation_degree)
    for deg in range(2 * n + 1, series.truncation_degree + 1):
        if expected[deg] != series[deg]:
            raise NotFormal(f"nonzero Betti number implied in degree {deg} > {2 * n}")
    if profile.total() != len(g.vertices):
        raise NotFormal(f"total Betti number {profile.total()} differs from {len(g.vertices)} fixed points")
    return profile


def formality_check(g: GKMGraph) -> bool:
    try:
        ordinary_betti(g)
    except NotFormal:
        return False
    return True


@dataclass(frozen=True)
class BettiReport:
    equivariant_dims: tuple[int, ...]
    betti: BettiProfile | None
    euler_characteristic: int
    failure: str | None
    hypothesis: str = FORMALITY_HYPOTHESIS


def betti_report(g: GKMGraph) -> BettiReport:
    dims = tuple(equivariant_dim(g, j) for j in range(g.half_dim + 1))
    try:
        profile, failure = ordinary_betti(g), None
    except NotFormal as exc:
        profile, failure = None, str(exc)
    return BettiReport(dims, profile, len(g.vertices), failure)


def cpn_weights(g: GKMGraph) -> dict[str, tuple[int, ...]]:
    """Recover a_i from a complex-projective model in the gauge a_{first vertex} = 0.

    Requires alpha_at_u(uv) = a_v - a_u exactly on every edge.
    """
    if not g.vertices:
        raise WrongFamily("empty graph")
    root = g.vertices[0]
    a = {root: (0,) * g.torus_rank}
    for _, w, lab in g.incident(root):
        if w in a:
            raise WrongFamily("parallel edges: not a complex projective model")
        a[w] = lab
    if set(a) != set(g.vertices):
        raise WrongFamily("first vertex is not adjacent to every other vertex")
    n = len(g.vertices) - 1
    if len(g.edges) != n * (n + 1) // 2:
        raise WrongFamily("not a complete simple graph")
    for e in g.edges:
        if e.alpha_at_u != tuple(x - y for x, y in zip(a[e.v], a[e.u])):
            raise WrongFamily(f"edge ({e.u},{e.v}) label is not a difference of vertex weights")
    return a


def generator_class(g: GKMGraph, weights: Mapping[str, Sequence[int]] | Sequence | None = None) -> EquivariantClass:
    """Equivariant lift x of the degree-two generator: x(v_i) = a_i as a linear form.

    Without explicit weights they are recovered from the labels with a_{v_0} = 0,
    which differs from the constructor's choice only by adding a constant class.
    """
    if weights is None:
        a = cpn_weights(g)
    elif isinstance(weights, Mapping):
        a = {v: tuple(weights[v]) for v in g.vertices}
    else:
        a = dict(zip(g.vertices, (tuple(w) for w in weights)))
    x = EquivariantClass(2, tuple((v, Polynomial.linear(a[v])) for v in g.vertices))
    if not is_class(g, x):
        raise WrongFamily("weights do not give a class on this graph")
    return x
