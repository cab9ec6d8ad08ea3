"""Exact arithmetic: rationals, homogeneous polynomials, rational matrices,
integer lattices and Poincare series bookkeeping.

Everything here is exact. Coefficients are stored as ``int`` whenever they
are integral and as :class:`fractions.Fraction` otherwise, so the common
integer-labelled case never pays for rational normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd
from typing import Iterable, Mapping, Sequence, Union

from .errors import NegativeCoefficient, NonIntegral

Rational = Union[int, Fraction]
Exponent = tuple


def as_rational(x) -> Rational:
    """Coerce ints, Fractions and ``"p/q"`` strings; integral values come back as int."""
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"not an exact rational: {x!r}")


def _norm(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _div(a, b):
    if type(a) is int and type(b) is int and a % b == 0:
        return a // b
    return _norm(Fraction(a) / b)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable polynomial in ``nvars`` variables t1..td with exact coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = as_rational(c)
            if c:
                clean[exp] = _norm(clean.get(exp, 0) + c)
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(nvars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def linear(cls, form: Sequence) -> "Polynomial":
        """The degree-one polynomial sum form[i]*t_{i+1}."""
        d = len(form)
        terms = {}
        for i, c in enumerate(form):
            c = as_rational(c)
            if c:
                exp = [0] * d
                exp[i] = 1
                terms[tuple(exp)] = c
        return cls._raw(d, terms)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in descending lexicographic order of exponents."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exp: Sequence[int]) -> Rational:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._terms.values())

    def content_denominator(self) -> int:
        """Least common multiple of the coefficient denominators."""
        den = 1
        for c in self._terms.values():
            if type(c) is Fraction:
                den = den * c.denominator // gcd(den, c.denominator)
        return den

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: _norm(v * c) for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.nvars, {e: _norm(c) for e, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            return self == Polynomial.constant(self.nvars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def substitute_linear(self, columns: Sequence[Sequence]) -> "Polynomial":
        """Substitute t_i -> sum_k columns[k][i] * s_k, giving a polynomial in len(columns) variables."""
        m = len(columns)
        images = []
        for i in range(self.nvars):
            images.append(Polynomial.linear([col[i] for col in columns]) if m else Polynomial.zero(0))
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        out = Polynomial.zero(m)
        for exp, c in self._terms.items():
            term = Polynomial.constant(m, c)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Rational:
        total = 0
        for exp, c in self._terms.items():
            v = c
            for x, k in zip(point, exp):
                if k:
                    v = v * as_rational(x) ** k
            total += v
        return _norm(total) if isinstance(total, Fraction) else total

    # -- text / json -------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"t{i + 1}" for i in range(self.nvars)]
        parts = []
        for exp, c in self.items():
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(exp) if k
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_text()!r})"

    def to_json(self) -> list:
        return [{"c": str(Fraction(c)), "exp": list(e)} for e, c in self.items()]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable[Mapping]) -> "Polynomial":
        terms: dict = {}
        for item in data:
            if set(item) != {"c", "exp"}:
                raise ValueError(f"polynomial term must have exactly 'c' and 'exp': {item!r}")
            exp = tuple(item["exp"])
            c = as_rational(item["c"])
            terms[exp] = _norm(terms.get(exp, 0) + c)
        return cls(nvars, terms)


def homogeneous_basis(d: int, r: int) -> list[tuple]:
    """All exponent vectors of length ``d`` and total degree ``r``, descending lex."""
    if d < 1 or r < 0:
        raise ValueError("need d >= 1 and r >= 0")
    out = []
    for combo in combinations_with_replacement(range(d), r):
        exp = [0] * d
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return out


def divide_by_linear_form(p: Polynomial, form: Sequence[int]) -> tuple[Polynomial, Polynomial]:
    """Long division of ``p`` by the linear form, pivoting on its first nonzero variable.

    Returns ``(quotient, remainder)``; the remainder does not involve the pivot
    variable, and is zero exactly when the form divides ``p``.
    """
    form = [as_rational(c) for c in form]
    if len(form) != p.nvars:
        raise ValueError("form length must equal the variable count")
    piv = next((i for i, c in enumerate(form) if c), None)
    if piv is None:
        raise ValueError("zero linear form")
    lead = form[piv]
    rem = dict(p._terms)
    quo: dict = {}
    while True:
        hits = [e for e in rem if e[piv] > 0]
        if not hits:
            break
        e = max(hits, key=lambda x: (x[piv], x))
        c = _div(rem[e], lead)
        qe = e[:piv] + (e[piv] - 1,) + e[piv + 1:]
        quo[qe] = _norm(quo.get(qe, 0) + c)
        for i, f in enumerate(form):
            if not f:
                continue
            te = qe[:i] + (qe[i] + 1,) + qe[i + 1:]
            v = rem.get(te, 0) - c * f
            if v:
                rem[te] = _norm(v)
            else:
                rem.pop(te, None)
    quo = {e: c for e, c in quo.items() if c}
    return Polynomial._raw(p.nvars, quo), Polynomial._raw(p.nvars, rem)


def restrict_to_hyperplane(p: Polynomial, form: Sequence[int]) -> Polynomial:
    """Pull ``p`` back along an integer parametrisation of ker(form).

    The result lives in ``d - 1`` variables and vanishes exactly when the
    linear form divides ``p``.
    """
    form = tuple(int(c) for c in form)
    if len(form) != p.nvars:
        raise ValueError("form length must equal the variable count")
    if not any(form):
        raise ValueError("zero linear form")
    return p.substitute_linear(hyperplane_basis(form))


_HYPERPLANE_CACHE: dict = {}


def hyperplane_basis(form: Sequence[int]) -> list[tuple[int, ...]]:
    """Hermite-reduced Z-basis of the integer vectors orthogonal to ``form``."""
    key = tuple(int(c) for c in form)
    if key not in _HYPERPLANE_CACHE:
        _HYPERPLANE_CACHE[key] = hermite_normal_form(integer_kernel_basis([key], len(key)))
    return _HYPERPLANE_CACHE[key]


# ---------------------------------------------------------------------------
# Matrices over Q
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [tuple(as_rational(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(_norm(sum((a * b for a, b in zip(r, v)), 0)) for r in self.entries)

    def sparse_rows(self) -> list[dict]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.entries]


def _integral_row(raw: Mapping[int, object]) -> dict[int, int]:
    row = {j: as_rational(x) for j, x in raw.items() if x}
    den = 1
    for x in row.values():
        if type(x) is Fraction:
            den = den * x.denominator // gcd(den, x.denominator)
    return _primitive({j: int(x * den) for j, x in row.items()})


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    return {j: x // g for j, x in row.items()} if g > 1 else row


def _eliminate(target: dict[int, int], pivot_row: dict[int, int], pc: int) -> dict[int, int]:
    f, lead = target[pc], pivot_row[pc]
    g = gcd(f, lead)
    a, b = lead // g, f // g
    if lead < 0:
        a, b = -a, -b
    out = {j: a * x for j, x in target.items()} if a != 1 else dict(target)
    for j, x in pivot_row.items():
        v = out.get(j, 0) - b * x
        if v:
            out[j] = v
        else:
            out.pop(j, None)
    return _primitive(out)


def rref_sparse(rows: Iterable[Mapping[int, object]]) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows ``{col: value}``.

    Elimination runs fraction-free on content-normalised integer rows; only the
    final normalisation to unit pivots introduces rationals. Returns
    ``(reduced_rows, pivot_columns)`` ordered by pivot column.
    """
    pivots: dict[int, dict] = {}
    for raw in rows:
        row = _integral_row(raw)
        for pc in sorted(pivots):
            if pc in row:
                row = _eliminate(row, pivots[pc], pc)
        if not row:
            continue
        pc = min(row)
        for k, other in pivots.items():
            if pc in other:
                pivots[k] = _eliminate(other, row, pc)
        pivots[pc] = row
    order = sorted(pivots)
    reduced = []
    for pc in order:
        row = pivots[pc]
        lead = row[pc]
        reduced.append({j: _div(x, lead) for j, x in row.items()})
    return reduced, order


def rank(m: Matrix) -> int:
    return len(rref_sparse(m.sparse_rows())[1])


def kernel_basis_sparse(rows: Iterable[Mapping[int, object]], ncols: int) -> list[tuple]:
    reduced, pivots = rref_sparse(rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(reduced, pivots):
            if f in r:
                v[pc] = _norm(-r[f])
        basis.append(tuple(v))
    return basis


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the right kernel, one vector per free column (in column order)."""
    return kernel_basis_sparse(m.sparse_rows(), m.cols)


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return rank(Matrix.from_rows(vectors))


# ---------------------------------------------------------------------------
# Integer lattices
# ---------------------------------------------------------------------------


def integer_kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^ncols : A x = 0} by unimodular column reduction.

    Columns are reduced row by row with a Euclid step on the smallest nonzero
    entry; the pivot order is fixed, so the output is reproducible.
    """
    a = [list(map(int, r)) for r in rows]
    if any(len(r) != ncols for r in a):
        raise ValueError("row length mismatch")
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    mats = (a, u)

    def col_addmul(dst, src, q):
        for m in mats:
            for r in m:
                r[dst] -= q * r[src]

    def col_swap(i, j):
        for m in mats:
            for r in m:
                r[i], r[j] = r[j], r[i]

    def col_neg(i):
        for m in mats:
            for r in m:
                r[i] = -r[i]

    s = 0
    for row in a:
        if s >= ncols:
            break
        while True:
            nz = [c for c in range(s, ncols) if row[c]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda c: (abs(row[c]), c))
            for c in nz:
                if c != p:
                    col_addmul(c, p, row[c] // row[p])
        nz = [c for c in range(s, ncols) if row[c]]
        if not nz:
            continue
        if nz[0] != s:
            col_swap(nz[0], s)
        if row[s] < 0:
            col_neg(s)
        s += 1
    return [tuple(u[i][c] for i in range(ncols)) for c in range(s, ncols)]


def hermite_normal_form(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Zero rows are dropped; the result is the canonical basis of the lattice.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(rows[i][c]), i))
            others = [i for i in nz if i != p]
            if not others:
                rows[r], rows[p] = rows[p], rows[r]
                break
            for i in others:
                q = rows[i][c] // rows[p][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[p])]
        if not any(rows[i][c] for i in range(r, len(rows))):
            continue
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        piv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // piv
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return [tuple(v) for v in rows[:r] if any(v)]


def saturation(generators: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """Canonical basis of (Q-span of generators) intersected with Z^d."""
    gens = [tuple(map(int, g)) for g in generators if any(g)]
    if not gens:
        return []
    orth = integer_kernel_basis(gens, d)
    if not orth:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return hermite_normal_form(integer_kernel_basis(orth, d))


def lattice_coordinates(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple | None:
    """Rational coordinates of ``v`` in ``basis``, or None if ``v`` is outside the span."""
    k = len(basis)
    d = len(v)
    rows = [{j: basis[j][i] for j in range(k) if basis[j][i]} | ({k: v[i]} if v[i] else {}) for i in range(d)]
    reduced, pivots = rref_sparse(rows)
    if k in pivots:
        return None
    coords = [0] * k
    for r, pc in zip(reduced, pivots):
        coords[pc] = r.get(k, 0)
    return tuple(coords)


# ---------------------------------------------------------------------------
# Poincare series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoincareSeries:
    """Coefficients indexed by degree, known up to ``truncation_degree`` inclusive."""

    coefficients: tuple
    truncation_degree: int

    def __post_init__(self):
        if len(self.coefficients) != self.truncation_degree + 1:
            raise ValueError("need exactly one coefficient per degree up to the truncation")

    @classmethod
    def from_even(cls, values: Sequence, truncation_degree: int | None = None) -> "PoincareSeries":
        """Build from coefficients at degrees 0, 2, 4, ...; odd degrees are zero."""
        top = 2 * (len(values) - 1) if truncation_degree is None else truncation_degree
        coeffs = [0] * (top + 1)
        for j, v in enumerate(values):
            if 2 * j <= top:
                coeffs[2 * j] = v
        return cls(tuple(coeffs), top)

    def __getitem__(self, degree: int):
        if degree < 0:
            return 0
        if degree > self.truncation_degree:
            raise IndexError(f"degree {degree} beyond truncation {self.truncation_degree}")
        return self.coefficients[degree]


@dataclass(frozen=True)
class BettiProfile:
    """Degree-indexed Betti numbers (ints, or affine expressions in a chase)."""

    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        if 0 <= i < len(self.entries):
            return self.entries[i]
        return 0

    def __iter__(self):
        return iter(self.entries)

    def total(self):
        return sum(self.entries)

    def line(self) -> str:
        return " ".join(str(x) for x in self.entries)


def series_shape_divide(pt: PoincareSeries, d: int, n: int) -> BettiProfile:
    """Recover ordinary Betti numbers from an equivariant Poincare series of a free module.

    Multiplies ``pt`` by (1 - q^2)^d and truncates at degree 2n. Raises
    :class:`NegativeCoefficient` or :class:`NonIntegral` if the result is not a
    sequence of nonnegative integers.
    """
    if pt.truncation_degree < 2 * n:
        raise ValueError(f"series truncated at {pt.truncation_degree}, need {2 * n}")
    out = []
    for m in range(2 * n + 1):
        total = 0
        for i in range(d + 1):
            if m - 2 * i < 0:
                break
            c = pt[m - 2 * i]
            if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
                raise TypeError(f"degree {m - 2 * i} coefficient {c!r} is not a concrete number")
            total += (-1) ** i * comb(d, i) * c
        total = as_rational(total) if isinstance(total, (int, Fraction)) else total
        if type(total) is not int:
            raise NonIntegral(f"degree {m}: coefficient {total} is not an integer")
        if total < 0:
            raise NegativeCoefficient(f"degree {m}: coefficient {total} is negative")
        out.append(total)
    return BettiProfile(tuple(out))


def expand_free_module(b: Sequence[int], d: int, truncation_degree: int) -> PoincareSeries:
    """Poincare series of (free module with Betti numbers b) over Q[t1..td], deg t_i = 2."""
    coeffs = []
    for m in range(truncation_degree + 1):
        total = 0
        for k, bk in enumerate(b):
            rest = m - k
            if rest < 0 or rest % 2:
                continue
            total += bk * comb(rest // 2 + d - 1, d - 1)
        coeffs.append(total)
    return PoincareSeries(tuple(coeffs), truncation_degree)
