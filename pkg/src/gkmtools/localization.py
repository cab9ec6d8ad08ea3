"""Integration over the fiber by fixed-point localisation, and the coordinates of
a class in the free module with basis 1, x, ..., x^n over a complex projective
model.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence

from .algebra import Polynomial, divide_by_linear_form
from .cohomology import (
    EquivariantClass,
    class_violations,
    equivariant_basis,
    generator_class,
)
from .errors import NonIntegralCoefficient, NonPolynomialResult, ResidualNonzero
from .graph import GKMGraph, _canonical_sign, is_prime


def _split(label: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """label = scalar * primitive, primitive with positive leading entry."""
    g = 0
    for x in label:
        g = gcd(g, x)
    prim = tuple(x // g for x in label)
    canon = _canonical_sign(prim)
    return (g if canon == prim else -g), canon


@dataclass(frozen=True)
class _Denominators:
    forms: tuple[tuple[tuple[int, ...], int], ...]
    scale: int
    cofactors: tuple[tuple[str, Polynomial], ...]
    euler: tuple[tuple[str, Polynomial], ...]


@lru_cache(maxsize=128)
def _denominators(g: GKMGraph) -> _Denominators:
    d = g.torus_rank
    per_vertex = {}
    top: Counter = Counter()
    for v in g.vertices:
        scalar, forms = 1, Counter()
        for _, _, lab in g.incident(v):
            c, p = _split(lab)
            scalar *= c
            forms[p] += 1
        per_vertex[v] = (scalar, forms)
        for p, k in forms.items():
            top[p] = max(top[p], k)
    scale = 1
    for scalar, _ in per_vertex.values():
        scale = scale * abs(scalar) // gcd(scale, abs(scalar))
    cofactors, euler = [], []
    for v in g.vertices:
        scalar, forms = per_vertex[v]
        q = Polynomial.constant(d, g.sign(v) * (scale // scalar))
        for p in sorted(top):
            for _ in range(top[p] - forms[p]):
                q = q * Polynomial.linear(p)
        cofactors.append((v, q))
        e = Polynomial.constant(d, 1)
        for _, _, lab in g.incident(v):
            e = e * Polynomial.linear(lab)
        euler.append((v, e))
    return _Denominators(tuple(sorted(top.items())), scale, tuple(cofactors), tuple(euler))


@dataclass(frozen=True)
class PushforwardReport:
    degree: int
    result: Polynomial
    contributions: tuple[tuple[str, Polynomial, Polynomial], ...]


def pushforward(g: GKMGraph, f: EquivariantClass) -> PushforwardReport:
    """Sum of sign(v) * f(v) / e(v) over fixed points, cleared to a polynomial.

    ``e(v)`` is the product of the tangent weights at ``v``. The sum is taken
    over the least common multiple of the Euler classes; a nonzero remainder
    raises :class:`NonPolynomialResult`.
    """
    den = _denominators(g)
    vals = f.as_dict()
    d = g.torus_rank
    numerator = Polynomial.zero(d)
    for v, q in den.cofactors:
        numerator = numerator + vals[v] * q
    j, n = f.degree // 2, g.half_dim
    if j < n and numerator:
        raise NonPolynomialResult(f"degree {f.degree} class pushes forward to a nonzero rational function")
    quotient = numerator
    for form, mult in den.forms:
        for _ in range(mult):
            if not quotient:
                break
            quotient, rem = divide_by_linear_form(quotient, form)
            if rem:
                raise NonPolynomialResult(f"sum of contributions is not divisible by {form}")
    result = quotient.scale(1) if den.scale == 1 else quotient * _inverse(den.scale)
    if result and not result.is_homogeneous(j - n):
        raise NonPolynomialResult("pushforward has the wrong degree")
    contributions = tuple((v, vals[v] * g.sign(v), e) for v, e in den.euler)
    return PushforwardReport(f.degree, result, contributions)


def _inverse(k: int):
    from fractions import Fraction

    return Fraction(1, k)


def integrate(g: GKMGraph, f: EquivariantClass) -> Polynomial:
    return pushforward(g, f).result


@dataclass(frozen=True)
class OrientationCertificate:
    ok: bool
    classes_checked: int
    failure: tuple[int, int, str] | None = None

    def __bool__(self):
        return self.ok


def validate_orientation_signs(g: GKMGraph) -> OrientationCertificate:
    """Every basis class of degree below 2n must integrate to zero."""
    checked = 0
    for j in range(g.half_dim):
        for idx, f in enumerate(equivariant_basis(g, j)):
            checked += 1
            try:
                res = integrate(g, f)
            except NonPolynomialResult as exc:
                return OrientationCertificate(False, checked, (j, idx, str(exc)))
            if res:
                return OrientationCertificate(False, checked, (j, idx, f"integrates to {res}"))
    return OrientationCertificate(True, checked)


# ---------------------------------------------------------------------------
# Module coordinates on complex projective models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleCoordinates:
    """f = sum_i coefficients[i] * x^i, with coefficients in H*(BT)."""

    degree: int
    coefficients: tuple[Polynomial, ...]

    @property
    def gamma(self) -> int:
        return self.degree // 2


@lru_cache(maxsize=64)
def _power_table(g: GKMGraph, x: EquivariantClass, top: int) -> tuple[Polynomial, ...]:
    out, xk = [], None
    for k in range(top + 1):
        xk = x ** 0 if k == 0 else xk * x
        out.append(integrate(g, xk))
    return tuple(out)


def assemble(g: GKMGraph, coords: ModuleCoordinates, weights=None) -> EquivariantClass:
    x = generator_class(g, weights).as_dict()
    values = []
    for v in g.vertices:
        total = Polynomial.zero(g.torus_rank)
        for i, c in enumerate(coords.coefficients):
            if c:
                total = total + c * x[v] ** i
        values.append((v, total))
    return EquivariantClass(coords.degree, tuple(values))


def module_coordinates(g: GKMGraph, f: EquivariantClass, weights: Mapping | Sequence | None = None) -> ModuleCoordinates:
    """Coordinates of ``f`` in the basis 1, x, ..., x^n by descending pushforwards.

    c_n = pi(f), and c_{n-m} = pi(f x^m) - sum_{i > n-m} c_i pi(x^{i+m}).
    """
    if class_violations(g, f):
        raise ResidualNonzero("input is not a class on this graph")
    n = g.half_dim
    x = generator_class(g, weights)
    table = _power_table(g, x, 2 * n)
    coeffs: dict[int, Polynomial] = {}
    fx = f
    for m in range(n + 1):
        if m:
            fx = fx * x
        c = integrate(g, fx)
        for i in range(n - m + 1, n + 1):
            c = c - coeffs[i] * table[i + m]
        coeffs[n - m] = c
    mc = ModuleCoordinates(f.degree, tuple(coeffs[i] for i in range(n + 1)))
    if assemble(g, mc, weights).as_dict() != f.as_dict():
        raise ResidualNonzero("coordinates do not reassemble the class")
    return mc


def modp_divisibility(mc: ModuleCoordinates, p: int) -> tuple[bool, ...]:
    """Per coefficient: are all its integer coefficients divisible by p?"""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    out = []
    for i, c in enumerate(mc.coefficients):
        if not c.is_integral():
            raise NonIntegralCoefficient(f"coefficient c_{i} = {c} is not integral")
        out.append(all(v % p == 0 for _, v in c.items()))
    return tuple(out)


def divide_coordinates(mc: ModuleCoordinates, p: int) -> ModuleCoordinates:
    """The correction term sum (c_i / p) x^i, once every c_i is divisible by p."""
    if not all(modp_divisibility(mc, p)):
        raise NonIntegralCoefficient(f"not every coordinate is divisible by {p}")
    return ModuleCoordinates(mc.degree, tuple(c * _inverse(p) for c in mc.coefficients))
