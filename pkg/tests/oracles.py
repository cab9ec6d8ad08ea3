"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra or cohomology code.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product


def nullity(rows: list[list], ncols: int) -> int:
    """Dense Gaussian elimination over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / p
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return ncols - rank


def monomials(d: int, j: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(d), j):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def class_dim_by_division(vertices, edges, d: int, j: int) -> int:
    """dim of {(f_v)} with f_u - f_v = alpha * q_e for some polynomial q_e.

    Unknowns are the coefficients of every f_v and of every quotient q_e; the
    quotient is unique when it exists, so the nullity equals the class dimension.
    """
    mons = monomials(d, j)
    qmons = monomials(d, j - 1) if j >= 1 else []
    nf = len(mons) * len(vertices)
    nq = len(qmons)
    ncols = nf + nq * len(edges)
    vidx = {v: k for k, v in enumerate(vertices)}
    rows = []
    for e_i, (u, v, alpha) in enumerate(edges):
        for m_i, mon in enumerate(mons):
            row = [0] * ncols
            row[vidx[u] * len(mons) + m_i] += 1
            row[vidx[v] * len(mons) + m_i] -= 1
            # subtract alpha * q: coefficient of mon in alpha * q
            for q_i, qm in enumerate(qmons):
                for k in range(d):
                    if alpha[k] == 0:
                        continue
                    shifted = list(qm)
                    shifted[k] += 1
                    if tuple(shifted) == mon:
                        row[nf + e_i * nq + q_i] -= alpha[k]
            rows.append(row)
    return nullity(rows, ncols)


def divided_difference(ys: list, m: int):
    """sum_i y_i^m / prod_{j != i} (y_i - y_j)."""
    total = Fraction(0)
    for i, yi in enumerate(ys):
        den = Fraction(1)
        for j, yj in enumerate(ys):
            if j != i:
                den *= yi - yj
        total += Fraction(yi) ** m / den
    return total


def complete_homogeneous(ys: list, r: int):
    if r < 0:
        return Fraction(0)
    total = Fraction(0)
    for combo in combinations_with_replacement(range(len(ys)), r):
        p = Fraction(1)
        for i in combo:
            p *= ys[i]
        total += p
    return total


def det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum((-1) ** c * m[0][c] * det([row[:c] + row[c + 1:] for row in m[1:]]) for c in range(n))


def independent(vectors: list[tuple[int, ...]]) -> bool:
    """Rank test by brute force over all maximal minors."""
    k, d = len(vectors), len(vectors[0])
    if k > d:
        return False
    for cols in combinations(range(d), k):
        if det([[v[c] for c in cols] for v in vectors]) != 0:
            return True
    return False


def gkm_k_by_minors(graph, k: int) -> bool:
    for v in graph.vertices:
        labels = [lab for _, _, lab in graph.incident(v)]
        for subset in combinations(labels, k):
            if not independent(list(subset)):
                return False
    return True


def chase_by_enumeration(totals: list[int], cutoff: int, bound: int | None = None):
    """All (B, rho) solving the Gysin relations, by enumerating rho.

    Given rho, B_i = t_i + rho_i + rho_{i+1} - B_{i-1} is forced degree by degree.
    """
    bound = sum(totals) if bound is None else bound
    top = max(len(totals) - 1, cutoff + 1)
    t = list(totals) + [0] * (top + 2 - len(totals))
    free = list(range(2, cutoff + 1))
    solutions = []
    for values in product(range(bound + 1), repeat=len(free)):
        rho = {i: 0 for i in range(top + 3)}
        rho.update(dict(zip(free, values)))
        B = {}
        ok = True
        for i in range(top + 2):
            prev = B.get(i - 1, 0)
            B[i] = t[i] + rho[i] + rho[i + 1] - prev
            if B[i] < 0 or (i > cutoff and B[i] != 0):
                ok = False
                break
        if not ok:
            continue
        for i in range(2, cutoff + 1):
            if rho[i] > min(B[i], B[i - 2]):
                ok = False
                break
        if ok:
            solutions.append((tuple(B[i] for i in range(cutoff + 1)),
                              tuple(rho[i] for i in range(2, cutoff + 1))))
    return solutions
