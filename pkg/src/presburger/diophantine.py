"""Systems ``A x >= c`` over the naturals: feasibility and solution sets.

Feasibility is a depth-first branch and bound with interval propagation and
an exact rational LP relaxation.  Complete solution sets come from the
minimal solutions of the slack-augmented system (a Contejean-Devie frontier
search); Pottier's bound ``(n|A| + |c| + 2)^(m+n)`` limits both searches and
is re-checked on every emitted generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from ._lp import INFEASIBLE, UNBOUNDED, integer_lattice, lp_minimize
from .errors import GeneratorBoundExceeded, PreconditionViolated

Vector = tuple[int, ...]


@dataclass(frozen=True)
class DiophantineSystem:
    """``A x >= c`` with ``x`` ranging over ``N^n``."""

    A: tuple[tuple[int, ...], ...]
    c: tuple[int, ...]
    n: int

    def __init__(self, A: Iterable[Sequence[int]], c: Iterable[int], n: int | None = None):
        A = tuple(tuple(int(x) for x in row) for row in A)
        c = tuple(int(x) for x in c)
        if n is None:
            n = len(A[0]) if A else 0
        if len(A) != len(c):
            raise ValueError(f"{len(A)} rows but {len(c)} right-hand sides")
        for row in A:
            if len(row) != n:
                raise ValueError(f"row {row} does not have {n} columns")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "n", n)

    @property
    def m(self) -> int:
        return len(self.A)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return all(x_i >= 0 for x_i in x) and all(
            sum(a * v for a, v in zip(row, x)) >= b for row, b in zip(self.A, self.c)
        )

    @property
    def norm_A(self) -> int:
        return max((abs(a) for row in self.A for a in row), default=0)

    @property
    def norm_c(self) -> int:
        return max((abs(b) for b in self.c), default=0)


@dataclass(frozen=True)
class LinearSet:
    """``L(b; P) = { b + sum of natural multiples of P }``."""

    base: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "periods", tuple(tuple(p) for p in self.periods))
        for p in self.periods:
            if len(p) != len(self.base):
                raise ValueError("period and base dimensions differ")
            if not any(p):
                raise ValueError("periods must be nonzero")

    def contains(self, x: Sequence[int]) -> bool:
        """Membership by bounded search over period multiplicities."""
        d = [xi - bi for xi, bi in zip(x, self.base)]
        if any(v < 0 for v in d):
            return False
        return _representable(tuple(d), self.periods)

    def members_within(self, bound: int) -> set[Vector]:
        """Every member with all coordinates at most ``bound``.

        Periods are nonnegative, so each member of the box is reached from
        the base through points of the box only.
        """
        if max(self.base, default=0) > bound:
            return set()
        found = {self.base}
        stack = [self.base]
        while stack:
            v = stack.pop()
            for p in self.periods:
                w = tuple(a + b for a, b in zip(v, p))
                if max(w) <= bound and w not in found:
                    found.add(w)
                    stack.append(w)
        return found


def _representable(target: Vector, periods: tuple[Vector, ...]) -> bool:
    """Is ``target`` a natural combination of ``periods`` (all nonnegative)?"""
    if not any(target):
        return True
    # Periods touching a coordinate where the target is 0 can never be used.
    usable = tuple(p for p in periods if any(p) and all(b == 0 or a > 0 for a, b in zip(target, p)))
    if not usable:
        return False
    # Reachability only depends on the remaining target, so at most
    # prod(target_i + 1) states are visited.
    seen = {target}
    stack = [target]
    while stack:
        t = stack.pop()
        for p in usable:
            nt = tuple(a - b for a, b in zip(t, p))
            if min(nt) < 0 or nt in seen:
                continue
            if not any(nt):
                return True
            seen.add(nt)
            stack.append(nt)
    return False


@dataclass(frozen=True)
class SemilinearSet:
    components: tuple[LinearSet, ...] = ()

    def contains(self, x: Sequence[int]) -> bool:
        return any(ls.contains(x) for ls in self.components)

    def members_within(self, bound: int) -> set[Vector]:
        out: set[Vector] = set()
        for ls in self.components:
            out |= ls.members_within(bound)
        return out

    @property
    def is_empty(self) -> bool:
        return not self.components


def pottier_bound(S: DiophantineSystem) -> int:
    return (S.n * S.norm_A + S.norm_c + 2) ** (S.m + S.n)


# ---------------------------------------------------------------------------
# Presolve helpers


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _tighten_rows(A, c):
    """Divide each row by the gcd of its coefficients, rounding the bound up.

    Returns None when a constant row is violated.
    """
    rows = []
    for row, b in zip(A, c):
        g = 0
        for a in row:
            g = gcd(g, a)
        if g == 0:
            if b > 0:
                return None
            continue
        if g > 1:
            row = tuple(a // g for a in row)
            b = _ceil_div(b, g)
        rows.append((tuple(row), b))
    return rows


def _propagate_box(rows, lo, hi, max_rounds: int = 64) -> bool:
    """Interval tightening of ``lo <= x <= hi`` against ``rows``; False on conflict."""
    return kernels.propagate_rows(rows, lo, hi, max_rounds)


# ---------------------------------------------------------------------------
# Feasibility


def _split_equalities(rows):
    """Separate row pairs ``a >= b``, ``-a >= -b`` (equalities) from the rest."""
    rows = list(dict.fromkeys(rows))
    index = {}
    for idx, r in enumerate(rows):
        index.setdefault(r, idx)
    eqs = []
    ineqs = []
    used = set()
    for idx, (row, b) in enumerate(rows):
        if idx in used:
            continue
        partner = index.get((tuple(-a for a in row), -b))
        if partner is not None and partner not in used and partner != idx:
            used.update((idx, partner))
            eqs.append((row, b))
        else:
            ineqs.append((row, b))
    return eqs, ineqs


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def is_feasible(S: DiophantineSystem) -> bool:
    return find_solution(S) is not None


def find_solution(S: DiophantineSystem) -> Vector | None:
    """Some ``x`` in ``N^n`` with ``A x >= c``.

    The box ``[0, cap]^n`` is searched for growing caps ``16, 256, 65536, ...``
    up to Pottier's bound, so small solutions are found in small boxes.
    """
    rows = _tighten_rows(S.A, S.c)
    if rows is None:
        return None
    n = S.n
    if not rows:
        return (0,) * n
    bound = pottier_bound(S)
    cap = 16
    while True:
        cap = min(cap, bound)
        got = _solve_in_box(rows, n, cap)
        if got is not None or cap == bound:
            return got
        cap *= cap


def _substitute_row(row: dict, b: int, v: int, expr: dict, const: int) -> tuple[dict, int]:
    """Replace ``x_v`` by ``const + expr`` in ``row . x (>= or =) b``."""
    a = row.pop(v, 0)
    if a:
        for u, c in expr.items():
            val = row.get(u, 0) + a * c
            if val:
                row[u] = val
            else:
                row.pop(u, None)
        b -= a * const
    return row, b


def _solve_in_box(rows, n: int, cap: int) -> Vector | None:
    """Branch and bound for a solution in ``[0, cap]^n``.

    Equalities with a unit coefficient are eliminated by substitution, the
    remaining ones are solved over the integers (``x = x0 + K t``), and the
    inequalities left over are searched by branch and bound whose LP
    relaxation minimizes ``sum x``.
    """
    lo = [0] * n
    hi = [cap] * n
    if not _propagate_box(rows, lo, hi):
        return None
    eqs, ineqs = _split_equalities(rows)
    # Rows as sparse dicts with fixed variables folded in.
    E = []
    I = []
    for target, source in ((E, eqs), (I, ineqs)):
        for row, b in source:
            d = {}
            for j, a in enumerate(row):
                if a:
                    if lo[j] == hi[j]:
                        b -= a * lo[j]
                    else:
                        d[j] = a
            target.append((d, b))
    subs: list[tuple[int, dict, int]] = []
    while True:
        pick = None
        for idx, (d, b) in enumerate(E):
            for v, a in d.items():
                if a in (1, -1):
                    pick = (idx, v)
                    break
            if pick:
                break
        if pick is None:
            break
        idx, v = pick
        d, b = E.pop(idx)
        a = d.pop(v)
        # x_v = a*b - sum a*c x_u
        expr = {u: -a * c for u, c in d.items()}
        const = a * b
        E = [_substitute_row(r, rb, v, expr, const) for r, rb in E]
        I = [_substitute_row(r, rb, v, expr, const) for r, rb in I]
        I.append((dict(expr), lo[v] - const))
        I.append(({u: -c for u, c in expr.items()}, const - hi[v]))
        subs.append((v, expr, const))
    for d, b in E:
        if not d and b != 0:
            return None
    E = [(d, b) for d, b in E if d]
    for d, b in I:
        if not d and b > 0:
            return None
    I = [(d, b) for d, b in I if d]
    gone = {v for v, _, _ in subs}
    R = sorted({v for d, _ in E + I for v in d} - gone)
    pos = {v: k for k, v in enumerate(R)}

    def dense(d):
        out = [0] * len(R)
        for v, a in d.items():
            out[pos[v]] = a
        return tuple(out)

    def complete(values) -> Vector:
        x = list(lo)
        for v, val in zip(R, values):
            x[v] = val
        for v, expr, const in reversed(subs):
            x[v] = const + sum(c * x[u] for u, c in expr.items())
        return tuple(x)

    rrows = _tighten_rows([dense(d) for d, _ in I], [b for _, b in I])
    if rrows is None:
        return None
    rlo = [lo[v] for v in R]
    rhi = [hi[v] for v in R]
    if not E:
        return _branch_and_bound(rrows, rlo, rhi, [1] * len(R), complete, cap)
    lattice = integer_lattice([dense(d) for d, _ in E], [b for _, b in E], len(R))
    if lattice is None:
        return None
    x0, K = lattice
    k = len(R)
    d = len(K)
    trows = []
    for row, b in rrows:
        trows.append((tuple(_dot(row, col) for col in K), b - _dot(row, x0)))
    for i in range(k):
        coeffs = tuple(col[i] for col in K)
        trows.append((coeffs, rlo[i] - x0[i]))
        trows.append((tuple(-a for a in coeffs), x0[i] - rhi[i]))
    live = _tighten_rows([r for r, _ in trows], [b for _, b in trows])
    if live is None:
        return None
    if d == 0:
        return complete(x0)
    tlo, thi = _lattice_box(live, d)
    if tlo is None:
        return None

    def to_x(t):
        return complete([x0[i] + sum(col[i] * tj for col, tj in zip(K, t)) for i in range(k)])

    return _branch_and_bound(live, tlo, thi, [sum(col) for col in K], to_x, None)


def _lattice_box(rows, d):
    """Integer bounds on free variables ``t`` from the bounded region ``rows``."""
    split = [(tuple(row) + tuple(-a for a in row), b) for row, b in rows]
    tlo = []
    thi = []
    for j in range(d):
        bounds = []
        for sign in (1, -1):
            obj = [0] * (2 * d)
            obj[j] = sign
            obj[d + j] = -sign
            got = lp_minimize(split, 2 * d, [None] * (2 * d), obj)
            if got == INFEASIBLE:
                return None, None
            if got == UNBOUNDED:
                raise AssertionError("lattice parameters must be bounded")
            bounds.append(got[0] * sign)
        low = _ceil_div(bounds[0].numerator, bounds[0].denominator)
        high = bounds[1].numerator // bounds[1].denominator
        if low > high:
            return None, None
        tlo.append(low)
        thi.append(high)
    return tlo, thi


def _branch_and_bound(rows, lo0, hi0, objective, to_x, cap) -> Vector | None:
    """Depth-first branch and bound over the integer box ``[lo0, hi0]``.

    Single-variable rows and upper bounds still equal to ``cap`` stay out of
    the LP relaxation; propagation enforces the former, and the latter are
    added back only if the relaxed optimum leaves the box.
    """
    n = len(lo0)
    lp_rows = [(row, b) for row, b in rows if sum(1 for a in row if a) > 1]
    stack = [(list(lo0), list(hi0))]
    while stack:
        lo, hi = stack.pop()
        if not _propagate_box(rows, lo, hi):
            continue
        if all(_dot(row, lo) >= b for row, b in rows):
            return to_x(lo)
        shifted = [(row, b - _dot(row, lo)) for row, b in lp_rows]
        upper = [None if h == cap else h - l for l, h in zip(lo, hi)]
        got = lp_minimize(shifted, n, upper, objective)
        if got == UNBOUNDED or (got != INFEASIBLE and any(l + v > h for l, v, h in zip(lo, got[1], hi))):
            got = lp_minimize(shifted, n, [h - l for l, h in zip(lo, hi)], objective)
        if got == INFEASIBLE:
            continue
        point = [l + v for l, v in zip(lo, got[1])]
        frac = [j for j, v in enumerate(point) if v.denominator != 1]
        if not frac:
            return to_x([int(v) for v in point])
        j = min(frac, key=lambda k: (hi[k] - lo[k], k))
        down = point[j].numerator // point[j].denominator
        left_hi = list(hi)
        left_hi[j] = down
        right_lo = list(lo)
        right_lo[j] = down + 1
        # The "<=" branch is explored first.
        stack.append((right_lo, list(hi)))
        stack.append((list(lo), left_hi))
    return None


# ---------------------------------------------------------------------------
# Complete solution sets


def minimal_solutions(M: Sequence[Sequence[int]], ncols: int, cap_col: int | None = None, cap: int | None = None,
                      bound: int | None = None, bound_cols: int = 0) -> list[Vector]:
    """Minimal nonzero natural solutions of ``M y = 0`` (Contejean-Devie).

    ``cap_col``/``cap`` restrict one coordinate to at most ``cap``; ``bound``
    discards candidates whose first ``bound_cols`` coordinates exceed it
    (sound when every minimal solution is known to respect it).
    """
    cols = [tuple(row[j] for row in M) for j in range(ncols)]
    return kernels.cd_minimal(cols, ncols, -1 if cap_col is None else cap_col,
                              0 if cap is None else cap, 0 if bound is None else bound, bound_cols)


def semilinear_of(S: DiophantineSystem) -> SemilinearSet:
    """Exact ``L(b; P)`` decomposition of the solution set of ``S``."""
    n = S.n
    rows = _tighten_rows(S.A, S.c)
    if rows is None or find_solution(S) is None:
        return SemilinearSet(())
    bound = pottier_bound(S)
    lo = [0] * n
    hi: list = [None] * n
    _propagate_box(rows, lo, hi)
    fixed = {j for j in range(n) if lo[j] == hi[j]}
    free = [j for j in range(n) if j not in fixed]
    # Shift by lo and drop fixed columns.
    shifted = []
    for row, b in rows:
        nb = b - sum(a * l for a, l in zip(row, lo))
        nrow = tuple(row[j] for j in free)
        if not any(nrow):
            if nb > 0:
                return SemilinearSet(())
            continue
        shifted.append((nrow, nb))
    equalities, inequalities = _split_equalities(shifted)
    k = len(free)
    s = len(inequalities)
    ncols = k + s + 1
    z0 = k + s
    M = []
    for row, b in equalities:
        M.append(list(row) + [0] * s + [-b])
    for i, (row, b) in enumerate(inequalities):
        slack = [0] * s
        slack[i] = -1
        M.append(list(row) + slack + [-b])
    sols = minimal_solutions(M, ncols, cap_col=z0, cap=1, bound=bound, bound_cols=k)
    periods = []
    bases = []
    for y in sols:
        x = y[:k]
        if y[z0] == 0:
            if any(x):
                periods.append(x)
        else:
            bases.append(x)
    periods = sorted(set(periods))

    def embed(x, shift):
        out = list(lo) if shift else [0] * n
        for pos, j in enumerate(free):
            out[j] += x[pos]
        return tuple(out)

    full_periods = tuple(embed(p, False) for p in periods)
    comps = []
    for b in sorted(set(bases)):
        vec = embed(b, True)
        comps.append(LinearSet(vec, full_periods))
    for g in [c.base for c in comps] + list(full_periods):
        if max(g, default=0) > bound:
            raise GeneratorBoundExceeded(f"generator {g} exceeds the norm bound {bound}")
    return SemilinearSet(tuple(comps))


# ---------------------------------------------------------------------------
# One-dimensional projection


def frobenius_number(gens: Iterable[int]) -> int:
    """Largest natural not representable by ``gens`` (sieve up to ``a^2 + a``)."""
    gens = sorted(set(gens))
    if not gens:
        raise PreconditionViolated("need at least one generator")
    if gens[0] <= 1:
        raise PreconditionViolated("generators must exceed 1")
    g = 0
    for a in gens:
        g = gcd(g, a)
    if g != 1:
        raise PreconditionViolated(f"generators have gcd {g}, not 1")
    limit = gens[-1] ** 2 + gens[-1]
    rep = _semigroup_table(gens, limit)
    for v in range(limit, -1, -1):
        if not rep[v]:
            return v
    return -1


def _semigroup_table(gens: Sequence[int], limit: int) -> bytearray:
    rep = bytearray(limit + 1)
    rep[0] = 1
    for a in gens:
        for v in range(a, limit + 1):
            if rep[v - a]:
                rep[v] = 1
    return rep


def project_first(L: LinearSet):
    """First coordinates of ``L`` as an ultimately periodic set."""
    from .upset import UPSet, normalize

    b1 = L.base[0]
    G = sorted({p[0] for p in L.periods if p[0] != 0})
    if not G:
        return normalize(UPSet(b1 + 1, 1, frozenset({b1}), frozenset()))
    g = 0
    for a in G:
        g = gcd(g, a)
    scaled = [a // g for a in G]
    if 1 in scaled:
        return normalize(UPSet(b1, g, frozenset(), frozenset({0})))
    f = frobenius_number(scaled)
    rep = _semigroup_table(scaled, f)
    t = b1 + g * (f + 1)
    B = frozenset(b1 + g * v for v in range(f + 1) if rep[v])
    return normalize(UPSet(t, g, B, frozenset({0})))
