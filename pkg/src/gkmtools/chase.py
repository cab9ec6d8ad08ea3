"""Betti numbers of quotients by almost-free circle actions, from two-row Gysin data.

For a circle acting almost freely on X with quotient Q, write B_i = b_i(Q) and
rho_i for the rank of the differential H^{i-2}(Q) -> H^i(Q). Then

    t_i = b_i(X) = (B_i - rho_i) + (B_{i-1} - rho_{i+1}),
    0 <= rho_i <= min(B_{i-2}, B_i),   B_i = 0 above the cutoff.

Totals may be affine expressions in named nonnegative integer parameters.
The solver finds every value forced by these constraints: equalities are
eliminated exactly and the nonnegativity constraints that hold with equality
on the whole solution set are detected by exact rational linear programming.
What remains undetermined is reported as a fresh parameter.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import BettiProfile, _norm, as_rational, rref_sparse
from .errors import Inconsistent

# ---------------------------------------------------------------------------
# Affine expressions
# ---------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*)?\s*([A-Za-z_][\w@]*)?\s*")


@dataclass(frozen=True)
class AffineExpr:
    """constant + sum coeff * name, over nonnegative integer parameters."""

    constant: object = 0
    coeffs: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        merged: dict[str, object] = {}
        for name, c in self.coeffs:
            merged[name] = merged.get(name, 0) + as_rational(c)
        object.__setattr__(self, "coeffs", tuple(sorted((n, _norm(c)) for n, c in merged.items() if c)))
        object.__setattr__(self, "constant", _norm(as_rational(self.constant)))

    @classmethod
    def const(cls, c) -> "AffineExpr":
        return cls(c)

    @classmethod
    def var(cls, name: str, c=1) -> "AffineExpr":
        return cls(0, ((name, c),))

    @classmethod
    def parse(cls, text) -> "AffineExpr":
        """Parse forms like ``"k+1"``, ``"2k"``, ``"3*k - c + 1"``, ``"m6"``, ``"B5@1"``."""
        if isinstance(text, AffineExpr):
            return text
        if isinstance(text, (int, Fraction)):
            return cls(text)
        s = str(text).strip()
        if not s:
            raise ValueError("empty expression")
        pos, const, coeffs, first = 0, Fraction(0), [], True
        while pos < len(s):
            m = _TERM.match(s, pos)
            sign, num, star, name = m.groups()
            if m.end() == pos or (sign is None and not first) or (num is None and name is None) \
                    or (star and (num is None or name is None)):
                raise ValueError(f"cannot parse affine expression {text!r}")
            c = Fraction(num) if num else Fraction(1)
            if sign == "-":
                c = -c
            if name:
                coeffs.append((name, c))
            else:
                const += c
            pos, first = m.end(), False
        return cls(const, tuple(coeffs))

    def names(self) -> set[str]:
        return {n for n, _ in self.coeffs}

    def coefficient(self, name: str):
        return dict(self.coeffs).get(name, 0)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = AffineExpr.parse(other)
        return AffineExpr(self.constant + other.constant, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-AffineExpr.parse(other))

    def __rsub__(self, other):
        return AffineExpr.parse(other) - self

    def scale(self, c) -> "AffineExpr":
        c = as_rational(c)
        return AffineExpr(self.constant * c, tuple((n, x * c) for n, x in self.coeffs))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def substitute(self, values: Mapping[str, "AffineExpr | int"]) -> "AffineExpr":
        out = AffineExpr(self.constant)
        for n, c in self.coeffs:
            out = out + (AffineExpr.parse(values[n]).scale(c) if n in values else AffineExpr.var(n, c))
        return out

    def evaluate(self, values: Mapping[str, object]):
        total = as_rational(self.constant)
        for n, c in self.coeffs:
            total += c * as_rational(values[n])
        return _norm(total)

    def sign_class(self) -> str:
        """'zero', 'nonneg', 'nonpos' (valid for all nonnegative parameters) or 'mixed'."""
        vals = [self.constant] + [c for _, c in self.coeffs]
        if all(v == 0 for v in vals):
            return "zero"
        if all(v >= 0 for v in vals):
            return "nonneg"
        if all(v <= 0 for v in vals):
            return "nonpos"
        return "mixed"

    def dominated_by(self, other) -> bool:
        """Coefficient-wise dominance: self <= other for every parameter value."""
        return (AffineExpr.parse(other) - self).sign_class() in ("zero", "nonneg")

    def compare(self, other) -> str:
        """One of '=', '<=', '>=', 'incomparable' under the dominance order."""
        diff = (AffineExpr.parse(other) - self).sign_class()
        return {"zero": "=", "nonneg": "<=", "nonpos": ">="}.get(diff, "incomparable")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str)):
            try:
                other = AffineExpr.parse(other)
            except ValueError:
                return NotImplemented
        if not isinstance(other, AffineExpr):
            return NotImplemented
        return self.constant == other.constant and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.constant, self.coeffs))

    def __str__(self):
        parts = []
        for n, c in self.coeffs:
            mag = abs(c)
            body = n if mag == 1 else f"{mag}{n}" if type(mag) is int else f"{mag}*{n}"
            parts.append(("-" if c < 0 else "+", body))
        if self.constant or not parts:
            parts.append(("-" if self.constant < 0 else "+", str(abs(self.constant))))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"AffineExpr({str(self)!r})"


def parse_relation(text: str) -> tuple[AffineExpr, str, AffineExpr]:
    m = re.fullmatch(r"\s*(.+?)\s*(<=|>=|==|=)\s*(.+?)\s*", text)
    if not m:
        raise ValueError(f"cannot parse relation {text!r}")
    op = "=" if m.group(2) == "==" else m.group(2)
    return AffineExpr.parse(m.group(1)), op, AffineExpr.parse(m.group(3))


# ---------------------------------------------------------------------------
# Exact simplex over x >= 0, A x = b
# ---------------------------------------------------------------------------


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows, self.rhs, self.basis = rows, rhs, basis
        self.z: dict[int, Fraction] = {}
        self.zval = Fraction(0)

    def copy(self) -> "_Tableau":
        t = _Tableau([dict(r) for r in self.rows], list(self.rhs), list(self.basis))
        return t

    def set_objective(self, c: Mapping[int, Fraction]):
        z = {j: Fraction(v) for j, v in c.items() if v}
        zval = Fraction(0)
        for r, bj in enumerate(self.basis):
            cb = c.get(bj, 0)
            if cb:
                zval += cb * self.rhs[r]
                for j, a in self.rows[r].items():
                    z[j] = z.get(j, 0) - cb * a
        basic = set(self.basis)
        self.z = {j: v for j, v in z.items() if v and j not in basic}
        self.zval = zval

    def pivot(self, r: int, c: int):
        row = self.rows[r]
        a = row[c]
        if a != 1:
            row = {j: v / a for j, v in row.items()}
            self.rhs[r] /= a
            self.rows[r] = row
        br = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r or c not in other:
                continue
            f = other[c]
            for j, v in row.items():
                w = other.get(j, 0) - f * v
                if w:
                    other[j] = w
                else:
                    other.pop(j, None)
            self.rhs[i] -= f * br
        f = self.z.get(c, 0)
        if f:
            for j, v in row.items():
                w = self.z.get(j, 0) - f * v
                if w:
                    self.z[j] = w
                else:
                    self.z.pop(j, None)
            self.zval += f * br
        self.basis[r] = c

    def optimise(self, stop_above: Fraction | None = None) -> str:
        """Maximise with Bland's rule. Returns 'optimal', 'unbounded' or 'reached'."""
        while True:
            if stop_above is not None and self.zval > stop_above:
                return "reached"
            entering = min((j for j, v in self.z.items() if v > 0), default=None)
            if entering is None:
                return "optimal"
            best = None
            for r, row in enumerate(self.rows):
                a = row.get(entering, 0)
                if a > 0:
                    key = (self.rhs[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def solution(self) -> dict[int, Fraction]:
        return {bj: self.rhs[r] for r, bj in enumerate(self.basis) if self.rhs[r]}


def _feasible_tableau(rows: Sequence[Mapping[int, object]], rhs: Sequence, n: int) -> _Tableau | None:
    """Phase one. Returns a feasible tableau over columns < n, or None."""
    trows, trhs = [], []
    for r, b in zip(rows, rhs):
        b = Fraction(b)
        row = {j: Fraction(v) for j, v in r.items() if v}
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        trows.append(row)
        trhs.append(b)
    m = len(trows)
    for r in range(m):
        trows[r][n + r] = Fraction(1)
    t = _Tableau(trows, trhs, [n + r for r in range(m)])
    t.set_objective({n + r: Fraction(-1) for r in range(m)})
    t.optimise()
    if t.zval < 0:
        return None
    keep = []
    for r in range(m):
        if t.basis[r] >= n:
            col = min((j for j in t.rows[r] if j < n), default=None)
            if col is None:
                continue
            t.pivot(r, col)
        keep.append(r)
    t.rows = [{j: v for j, v in t.rows[r].items() if j < n} for r in keep]
    t.rhs = [t.rhs[r] for r in keep]
    t.basis = [t.basis[r] for r in keep]
    t.z, t.zval = {}, Fraction(0)
    return t


# ---------------------------------------------------------------------------
# Constraint system
# ---------------------------------------------------------------------------

_PLACEHOLDER = re.compile(r"[A-Za-z]+\d+")


def _var_kind(name: str) -> str:
    if name.startswith("~"):
        return "slack"
    if re.fullmatch(r"B\d+@\d+", name):
        return "betti"
    if re.fullmatch(r"rho\d+@\d+", name):
        return "rank"
    return "param"


def _priority(name: str):
    """Column order for elimination: slacks, ranks, later/higher Betti unknowns,
    placeholder parameters (letters then digits), then parameters alphabetically."""
    kind = _var_kind(name)
    if kind == "slack":
        return (0, int(name[2:]), "")
    if kind in ("rank", "betti"):
        idx, step = name.lstrip("Brho").split("@")
        return (1 if kind == "rank" else 2, -int(step), -int(idx), name)
    if _PLACEHOLDER.fullmatch(name):
        return (3, 0, 0, name)
    return (4, 0, 0, name)


@dataclass
class _Equation:
    expr: AffineExpr  # expr == 0
    tag: tuple


class _System:
    """Nonnegative variables tied by affine equalities ``expr = 0``."""

    def __init__(self, equations: Sequence[_Equation], extra_names: Iterable[str] = ()):
        self.equations = list(equations)
        names = set(extra_names)
        for eq in self.equations:
            names |= eq.expr.names()
        self.names = sorted(names, key=_priority)
        self.index = {n: i for i, n in enumerate(self.names)}

    def _rows(self, equations):
        rows, rhs = [], []
        for eq in equations:
            rows.append({self.index[n]: c for n, c in eq.expr.coeffs})
            rhs.append(-eq.expr.constant)
        return rows, rhs

    def feasible(self, equations=None) -> _Tableau | None:
        rows, rhs = self._rows(self.equations if equations is None else equations)
        return _feasible_tableau(rows, rhs, len(self.names))

    def implicit_zeros(self, tableau: _Tableau) -> set[int]:
        n = len(self.names)
        positive = set(tableau.solution())
        zeros = set()
        for j in range(n):
            if j in positive:
                continue
            t = tableau.copy()
            t.set_objective({j: Fraction(1)})
            status = t.optimise(stop_above=Fraction(0))
            if status == "optimal" and t.zval == 0:
                zeros.add(j)
            else:
                positive |= set(t.solution())
                positive.add(j)
        return zeros

    def maximise(self, objective: Mapping[str, object], tableau: _Tableau):
        t = tableau.copy()
        t.set_objective({self.index[n]: Fraction(c) for n, c in objective.items()})
        if t.optimise() == "unbounded":
            return None
        return t.zval


@dataclass(frozen=True)
class _Hull:
    """Affine hull of the solution set in reduced row echelon form."""

    system: _System
    tableau: _Tableau
    zeros: frozenset
    rows: tuple
    pivots: tuple

    @classmethod
    def build(cls, system: _System, tableau: _Tableau, extra: Sequence[AffineExpr] = ()) -> "_Hull":
        zeros = frozenset(system.implicit_zeros(tableau))
        n = len(system.names)
        raw = []
        for eq in system.equations:
            row = {system.index[name]: c for name, c in eq.expr.coeffs}
            if eq.expr.constant:
                row[n] = eq.expr.constant
            raw.append(row)
        raw += [{j: 1} for j in sorted(zeros)]
        for e in extra:
            row = {system.index[name]: c for name, c in e.coeffs}
            if e.constant:
                row[n] = e.constant
            raw.append(row)
        reduced, pivots = rref_sparse(raw)
        return cls(system, tableau, zeros, tuple(reduced), tuple(pivots))

    def expression(self, name: str) -> AffineExpr:
        """The variable as an affine function of the free variables."""
        if name not in self.system.index:
            return AffineExpr.var(name)
        j = self.system.index[name]
        n = len(self.system.names)
        for row, pc in zip(self.rows, self.pivots):
            if pc == j:
                const = -row.get(n, 0)
                terms = tuple((self.system.names[k], -c) for k, c in row.items() if k != j and k != n)
                return AffineExpr(const, terms)
        return AffineExpr.var(name)

    def reduce(self, e: AffineExpr) -> AffineExpr:
        out = AffineExpr(e.constant)
        for name, c in e.coeffs:
            out = out + self.expression(name).scale(c)
        return out

    def free_names(self) -> list[str]:
        pivots = set(self.pivots)
        return [n for j, n in enumerate(self.system.names) if j not in pivots]

    def parameter_relations(self) -> list[str]:
        out = []
        for name in self.system.names:
            if _var_kind(name) == "param":
                e = self.expression(name)
                if e != AffineExpr.var(name):
                    out.append(f"{name} = {e}")
        return out


# ---------------------------------------------------------------------------
# Problems and results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChaseProblem:
    """Betti numbers of the total space, cutoff(s) for the quotients, and pins.

    Pins map ``"t{i}"`` to a replacement total, or ``"B{i}@{step}"`` (or a
    parameter name) to a value imposed as an extra equality.
    """

    totals: tuple[AffineExpr, ...]
    cutoff: int | None = None
    pins: tuple[tuple[str, AffineExpr], ...] = ()
    cutoffs: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "totals", tuple(AffineExpr.parse(t) for t in self.totals))
        pins = self.pins.items() if isinstance(self.pins, Mapping) else self.pins
        object.__setattr__(self, "pins", tuple(sorted((str(k), AffineExpr.parse(v)) for k, v in pins)))
        if self.cutoffs is not None:
            object.__setattr__(self, "cutoffs", tuple(int(c) for c in self.cutoffs))
        for k, _ in self.pins:
            param = re.fullmatch(r"[A-Za-z_]\w*", k) and not re.fullmatch(r"(B|rho)\d+", k)
            if not (re.fullmatch(r"t\d+", k) or re.fullmatch(r"B\d+@\d+", k) or param):
                raise ValueError(f"cannot pin {k!r}")

    @property
    def dimension(self) -> int:
        return len(self.totals) - 1

    def effective_totals(self) -> tuple[AffineExpr, ...]:
        totals = list(self.totals)
        for k, v in self.pins:
            if re.fullmatch(r"t\d+", k):
                i = int(k[1:])
                totals += [AffineExpr()] * (i + 1 - len(totals))
                totals[i] = v
        return tuple(totals)

    def default_cutoffs(self, steps: int = 3) -> tuple[int, ...]:
        if self.cutoffs is not None:
            return self.cutoffs
        return tuple(self.dimension - s for s in range(1, steps + 1))

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChaseProblem":
        allowed = {"totals", "cutoff", "cutoffs", "pins"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)}")
        if "totals" not in data:
            raise ValueError("problem needs 'totals'")
        return cls(tuple(data["totals"]), data.get("cutoff"), dict(data.get("pins", {})), data.get("cutoffs"))


@dataclass(frozen=True)
class ChaseResult:
    step: int
    cutoff: int
    betti: tuple[AffineExpr, ...]
    ranks: tuple[tuple[int, AffineExpr], ...]
    equalities: tuple[str, ...]
    inequalities: tuple[str, ...]
    branches: tuple[str, ...]
    fresh: tuple[str, ...]
    unique: bool
    _hull: _Hull = field(repr=False, compare=False, default=None)

    @property
    def profile(self) -> BettiProfile:
        return BettiProfile(self.betti)

    def rank(self, i: int) -> AffineExpr:
        return dict(self.ranks).get(i, AffineExpr())

    def report(self) -> str:
        lines = [f"step {self.step} (cutoff {self.cutoff}):"]
        lines.append("  b: " + ", ".join(f"b{i}={e}" for i, e in enumerate(self.betti)))
        nz = [f"rho{i}={e}" for i, e in self.ranks if e != 0]
        lines.append("  ranks: " + (", ".join(nz) if nz else "all zero"))
        for r in self.equalities:
            lines.append(f"  relation: {r}")
        for r in self.inequalities:
            lines.append(f"  constraint: {r}")
        if self.fresh:
            lines.append("  undetermined: " + ", ".join(self.fresh))
        lines.append(f"  unique: {'yes' if self.unique else 'no'}")
        return "\n".join(lines)


def _step_equations(totals: Sequence[AffineExpr], cutoff: int, step: int) -> list[_Equation]:
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    B = lambda i: AffineExpr.var(f"B{i}@{step}") if 0 <= i <= cutoff else AffineExpr()  # noqa: E731
    R = lambda i: AffineExpr.var(f"rho{i}@{step}") if 2 <= i <= cutoff else AffineExpr()  # noqa: E731
    eqs = []
    top = max(len(totals) - 1, cutoff + 1)
    for i in range(top + 1):
        t = totals[i] if i < len(totals) else AffineExpr()
        eqs.append(_Equation(B(i) - R(i) + B(i - 1) - R(i + 1) - t, ("gysin", step, i)))
    slack = 0
    for i in range(2, cutoff + 1):
        for bound in (i, i - 2):
            name = f"~{step:03d}{slack:04d}"
            slack += 1
            eqs.append(_Equation(R(i) - B(bound) + AffineExpr.var(name), ("bound", step, i, bound)))
    return eqs


def _tower_equations(problem: ChaseProblem, cutoffs: Sequence[int]) -> list[list[_Equation]]:
    per_step = []
    totals = list(problem.effective_totals())
    for s, cut in enumerate(cutoffs, start=1):
        per_step.append(_step_equations(totals, cut, s))
        totals = [AffineExpr.var(f"B{i}@{s}") for i in range(cut + 1)]
    for k, v in problem.pins:
        if k.startswith("t"):
            continue
        if "@" in k:
            i, s = (int(x) for x in k[1:].split("@"))
            if not 1 <= s <= len(cutoffs):
                continue
            lhs = AffineExpr.var(k) if i <= cutoffs[s - 1] else AffineExpr()
            per_step[s - 1].append(_Equation(lhs - v, ("pin", k)))
        else:
            per_step[0].append(_Equation(AffineExpr.var(k) - v, ("pin", k)))
    return per_step


def _describe(eq: _Equation) -> str:
    if eq.tag[0] == "gysin":
        return f"degree {eq.tag[2]} Gysin relation"
    if eq.tag[0] == "pin":
        return f"pin {eq.tag[1]}"
    return f"bound rho{eq.tag[2]} <= B{eq.tag[3]}"


def _diagnose(earlier: list[_Equation], current: list[_Equation], step: int) -> Inconsistent:
    """Add the current step's relations in ascending order until infeasibility."""
    base = list(earlier) + [e for e in current if e.tag[0] != "gysin"]
    names = set()
    for e in earlier + current:
        names |= e.expr.names()
    system = _System(base, names)
    tab = system.feasible()
    if tab is None:
        return Inconsistent("pins and bounds admit no nonnegative solution", step=step)
    accepted = list(base)
    for eq in sorted((e for e in current if e.tag[0] == "gysin"), key=lambda e: e.tag[2]):
        trial = _System(accepted + [eq], names)
        t2 = trial.feasible()
        if t2 is None:
            hull = _Hull.build(_System(accepted, names), tab)
            residual = hull.reduce(eq.expr)
            return Inconsistent(f"{_describe(eq)} forces {residual} = 0, which has no nonnegative solution",
                                relation=f"{residual} = 0", step=step)
        accepted.append(eq)
        tab = t2
    return Inconsistent("no nonnegative solution", step=step)


def _is_concrete(system: _System) -> bool:
    return all(_var_kind(n) != "param" for n in system.names)


def _pin_unique_integer(system: _System, hull: _Hull, bound: int) -> list[AffineExpr] | None:
    """For parameter-free systems, search integer values of the free unknowns.

    Returns the extra equalities fixing them when exactly one integer point exists.
    """
    free = [n for n in hull.free_names() if _var_kind(n) != "slack"]
    if not free or (bound + 1) ** len(free) > 200_000:
        return None
    exprs = {n: hull.expression(n) for n in system.names}
    found = None
    for values in itertools.product(range(bound + 1), repeat=len(free)):
        point = dict(zip(free, values))
        for n in hull.free_names():
            point.setdefault(n, 0) if _var_kind(n) != "slack" else None
        ok = True
        for n, e in exprs.items():
            if e.names() - set(point):
                ok = False
                break
            v = e.evaluate(point)
            if v < 0 or type(v) is not int:
                ok = False
                break
        if ok:
            if found is not None:
                return None
            found = point
    if found is None:
        return None
    return [AffineExpr.var(n) - found[n] for n in free]


def _result(hull: _Hull, step: int, cutoff: int) -> ChaseResult:
    betti = tuple(hull.expression(f"B{i}@{step}") for i in range(cutoff + 1))
    ranks = tuple((i, hull.expression(f"rho{i}@{step}")) for i in range(2, cutoff + 1))
    unknown = set()
    for e in betti + tuple(e for _, e in ranks):
        unknown |= {n for n in e.names() if _var_kind(n) != "param"}
    candidates = []
    for name in hull.system.names:
        e = hull.expression(name)
        if e.sign_class() not in ("zero", "nonneg") and e not in candidates:
            candidates.append(e)
    # drop constraints implied by a stronger one under dominance
    kept = [e for e in candidates
            if not any(f != e and (e - f).sign_class() in ("zero", "nonneg") for f in candidates)]
    inequalities = [f"{e} >= 0" for e in kept]
    branches = [f"{e} >= 0" for e in kept if e.sign_class() == "mixed"]
    return ChaseResult(step, cutoff, betti, ranks, tuple(hull.parameter_relations()),
                       tuple(inequalities), tuple(branches), tuple(sorted(unknown, key=_priority)),
                       not unknown, hull)


def _total_bound(problem: ChaseProblem) -> int:
    total = 0
    for t in problem.effective_totals():
        if t.is_constant():
            total += abs(t.constant)
    return int(total)


def chase_tower(problem: ChaseProblem, cutoffs: Sequence[int] | None = None, steps: int = 3) -> list[ChaseResult]:
    """Iterate the quotient step, feeding each quotient profile in as the next total.

    Relations found at one step constrain all later ones. Raises
    :class:`Inconsistent` with the 1-based step index on failure.
    """
    cutoffs = tuple(cutoffs) if cutoffs is not None else problem.default_cutoffs(steps)
    per_step = _tower_equations(problem, cutoffs)
    results = []
    accepted: list[_Equation] = []
    bound = _total_bound(problem)
    for s, cut in enumerate(cutoffs, start=1):
        current = per_step[s - 1]
        system = _System(accepted + current)
        tab = system.feasible()
        if tab is None:
            raise _diagnose(accepted, current, s)
        hull = _Hull.build(system, tab)
        if _is_concrete(system) and not _result(hull, s, cut).unique:
            extra = _pin_unique_integer(system, hull, bound)
            if extra is not None:
                hull = _Hull.build(system, tab, extra)
                current = current + [_Equation(e, ("integer",)) for e in extra]
        res = _result(hull, s, cut)
        settled = []
        for prev in results:
            for name in prev.fresh:
                e = hull.expression(name)
                if e != AffineExpr.var(name):
                    settled.append(f"{name} = {e}")
        if settled:
            res = replace(res, equalities=tuple(settled) + res.equalities)
        results.append(res)
        accepted += current
    return results


def gysin_step(problem: ChaseProblem) -> ChaseResult:
    """One quotient step with ``problem.cutoff`` (default: dimension - 1)."""
    cutoff = problem.cutoff if problem.cutoff is not None else problem.dimension - 1
    return chase_tower(problem, (max(cutoff, 0),))[0]


def _qualify(e: AffineExpr, step: int) -> AffineExpr:
    out = AffineExpr(e.constant)
    for name, c in e.coeffs:
        if re.fullmatch(r"(B|rho)\d+", name):
            name = f"{name}@{step}"
        out = out + AffineExpr.var(name, c)
    return out


def entails(result: ChaseResult, relation) -> bool:
    """Does the relation hold for every solution of the result's constraints?

    ``relation`` is text like ``"k+10=c"`` or ``"B4 <= k+6"`` (``B4`` means the
    result's own step; ``B4@1`` names a step explicitly), or a parsed triple.
    """
    lhs, op, rhs = parse_relation(relation) if isinstance(relation, str) else relation
    hull = result._hull
    diff = _qualify(lhs - rhs, result.step)
    # Betti unknowns above a cutoff are zero
    zeroed = {}
    for name in diff.names():
        m = re.fullmatch(r"(B|rho)(\d+)@(\d+)", name)
        if m and name not in hull.system.index:
            zeroed[name] = 0
    diff = diff.substitute(zeroed)
    if op == "=":
        return hull.reduce(diff) == AffineExpr()
    if op == ">=":
        diff = -diff
    known = {n: c for n, c in diff.coeffs if n in hull.system.index}
    for n, c in diff.coeffs:
        if n not in hull.system.index and c > 0:
            return False
    best = hull.system.maximise(known, hull.tableau)
    return best is not None and best + diff.constant <= 0
