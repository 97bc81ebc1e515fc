"""Exact rational linear programming and integer equality elimination.

Small dense two-phase simplex over ``Fraction`` with Bland's rule, used as
the relaxation inside branch and bound, plus a column-style Hermite
reduction that parametrizes the integer solutions of an equality system.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def lp_minimize(rows: Sequence[tuple[Sequence[int], int]], n: int, upper: Sequence[int | None],
                objective: Sequence[int]):
    """Minimize ``objective . y`` subject to ``a . y >= b`` and ``0 <= y <= upper``.

    Returns ``(value, point)`` with Fractions, or INFEASIBLE / UNBOUNDED.
    """
    cons = [([Fraction(a) for a in row], Fraction(b)) for row, b in rows]
    for j in range(n):
        if upper[j] is not None:
            coeffs = [Fraction(0)] * n
            coeffs[j] = Fraction(-1)
            cons.append((coeffs, Fraction(-upper[j])))
    m = len(cons)
    if m == 0:
        if any(c < 0 for c in objective):
            return UNBOUNDED
        return Fraction(0), [Fraction(0)] * n
    # Columns: y (n), surplus (m), artificial (m); row i: a.y - s_i + art_i = b_i with b_i >= 0.
    width = n + 2 * m
    art0 = n + m
    tab = []
    basis = []
    for i, (coeffs, b) in enumerate(cons):
        row = [Fraction(0)] * (width + 1)
        sign = 1 if b >= 0 else -1
        for j in range(n):
            if coeffs[j]:
                row[j] = coeffs[j] * sign
        row[n + i] = Fraction(-sign)
        if sign < 0 :
            # Surplus column already has +1 here, so it can start in the basis.
            basis.append(n + i)
        else:
            row[art0 + i] = Fraction(1)
            basis.append(art0 + i)
        row[width] = b * sign
        tab.append(row)
    allowed = [True] * width
    for i in range(m):
        if basis[i] != art0 + i:
            allowed[art0 + i] = False
    # Phase one: minimize the sum of artificials.
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        if basis[i] >= art0:
            for j in range(width + 1):
                obj[j] -= tab[i][j]
            obj[basis[i]] = Fraction(0)
    for i in range(m):
        if basis[i] >= art0:
            obj[basis[i]] = Fraction(0)
    obj = _simplex(tab, basis, obj, width, allowed)
    if obj is None or obj[width] != 0:
        return INFEASIBLE
    # Drive artificials out of the basis where possible, then forbid them.
    for i in range(m):
        if basis[i] >= art0:
            for j in range(art0):
                if tab[i][j] != 0:
                    _pivot(tab, basis, None, i, j, width)
                    break
    for j in range(art0, width):
        allowed[j] = False
    obj = [Fraction(0)] * (width + 1)
    for j in range(n):
        obj[j] = Fraction(objective[j])
    for i, bv in enumerate(basis):
        cb = obj[bv] if bv < n else Fraction(0)
        if cb:
            row = tab[i]
            obj = [a - cb * r for a, r in zip(obj, row)]
    obj = _simplex(tab, basis, obj, width, allowed)
    if obj is None:
        return UNBOUNDED
    point = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            point[bv] = tab[i][width]
    return -obj[width], point


def _pivot(tab, basis, obj, piv: int, enter: int, width: int):
    prow = tab[piv]
    pv = prow[enter]
    if pv != 1:
        prow = [v / pv for v in prow]
        tab[piv] = prow
    for i in range(len(tab)):
        if i != piv:
            f = tab[i][enter]
            if f:
                tab[i] = [a - f * b for a, b in zip(tab[i], prow)]
    basis[piv] = enter
    if obj is not None:
        f = obj[enter]
        if f:
            obj = [a - f * b for a, b in zip(obj, prow)]
    return obj


def _simplex(tab, basis, obj, width: int, allowed):
    """Bland's-rule iterations; returns the final objective row or None if unbounded."""
    m = len(tab)
    while True:
        enter = -1
        for j in range(width):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return obj
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                key = (tab[i][width] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return None
        obj = _pivot(tab, basis, obj, best[1], enter, width)


def integer_lattice(E: Sequence[Sequence[int]], e: Sequence[int], n: int):
    """Integer solutions of ``E x = e`` as ``x0 + K t`` with ``t`` in ``Z^d``.

    Returns ``(x0, K)`` with ``K`` given as a list of ``d`` column vectors, or
    None when there is no integer solution.
    """
    M = [list(row) for row in E]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # columns of U as rows here

    def col_op(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for row in M:
            row[dst] -= q * row[src]
        for k in range(n):
            U[dst][k] -= q * U[src][k]

    def swap(a: int, b: int) -> None:
        for row in M:
            row[a], row[b] = row[b], row[a]
        U[a], U[b] = U[b], U[a]

    r = 0
    pivots: list[tuple[int, int]] = []
    for i, row in enumerate(M):
        if r >= n:
            break
        for j in range(r + 1, n):
            while row[j] != 0:
                if row[r] == 0:
                    swap(r, j)
                    continue
                q = row[j] // row[r]
                col_op(j, r, q)
                if row[j] != 0:
                    swap(r, j)
        if row[r] != 0:
            pivots.append((i, r))
            r += 1
    # Forward substitution for the pivot coordinates of y, where x = U y.
    y = [0] * n
    pivot_of_row = dict(pivots)
    for i, row in enumerate(M):
        acc = e[i] - sum(row[q] * y[q] for q in range(r) if (i, q) not in pivots)
        p = pivot_of_row.get(i)
        if p is None:
            if acc != 0:
                return None
            continue
        if acc % row[p]:
            return None
        y[p] = acc // row[p]
    # Re-check rows without pivots after every pivot value is known.
    for i, row in enumerate(M):
        if sum(row[q] * y[q] for q in range(n)) != e[i]:
            return None
    x0 = [sum(U[q][k] * y[q] for q in range(r)) for k in range(n)]
    K = [list(U[q]) for q in range(r, n)]
    return x0, K
