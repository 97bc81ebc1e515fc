"""Ultimately periodic sets ``U(t, p, B, R) = B | { t + r + k p : r in R, k >= 0 }``.

``R`` holds offsets relative to the threshold ``t``.  Together with the
one-dimensional projection of linear sets this gives the extraction of the
set defined by a one-variable existential formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from math import gcd

from .errors import NotSigmaOne
from .formula import Exists, Formula, Forall, is_quantifier_free


@dataclass(frozen=True)
class UPSet:
    t: int
    p: int
    B: frozenset[int]
    R: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "B", frozenset(self.B))
        object.__setattr__(self, "R", frozenset(self.R))
        if self.t < 0 or self.p < 1:
            raise ValueError("need t >= 0 and p >= 1")
        if any(not 0 <= b < self.t for b in self.B):
            raise ValueError(f"base elements must lie in [0, {self.t})")
        if any(not 0 <= r < self.p for r in self.R):
            raise ValueError(f"residue offsets must lie in [0, {self.p})")

    def __contains__(self, a: int) -> bool:
        return member(self, a)

    def __str__(self) -> str:
        return format_upset(self)


EMPTY = UPSet(0, 1, frozenset(), frozenset())


def member(u: UPSet, a: int) -> bool:
    if a < u.t:
        return a in u.B
    return (a - u.t) % u.p in u.R


def _table(u: UPSet, start: int, stop: int) -> bytes:
    return bytes(1 if member(u, a) else 0 for a in range(start, stop))


def _tail_table(u: UPSet) -> bytearray:
    row = bytearray(u.p)
    for r in u.R:
        row[r] = 1
    return row


def normalize(u: UPSet) -> UPSet:
    """Canonical form: smallest period, then smallest threshold."""
    if not u.R:
        if not u.B:
            return EMPTY
        t = max(u.B) + 1
        return UPSet(t, 1, u.B, frozenset())
    tail = bytes(_tail_table(u))
    p = u.p
    best = p
    for d in _divisors(p):
        if d < best and tail[d:] + tail[:d] == tail:
            best = d
            break
    p = best
    tail = tail[:p]
    # Walk the threshold down while the element just below it follows the tail pattern.
    t = u.t
    # Offsets of the tail are relative to t; rotate as t decreases.
    while t > 0:
        cand = t - 1
        # With threshold cand, residue pattern is tail rotated by one.
        expected = tail[(cand - u.t) % p]
        if (1 if cand in u.B else 0) != expected:
            break
        t = cand
    shift = (t - u.t) % p
    R = frozenset(r for r in range(p) if tail[(r + shift) % p])
    B = frozenset(b for b in u.B if b < t)
    return UPSet(t, p, B, R)


def _divisors(p: int) -> list[int]:
    small = []
    large = []
    d = 1
    while d * d <= p:
        if p % d == 0:
            small.append(d)
            if d * d != p:
                large.append(p // d)
        d += 1
    return small + large[::-1]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def union(u1: UPSet, u2: UPSet) -> UPSet:
    """Set union, normalized."""
    return union_all([u1, u2])


def union_all(us) -> UPSet:
    us = [u for u in us if u.B or u.R]
    if not us:
        return EMPTY
    t = max(u.t for u in us)
    p = reduce(lcm, (u.p for u in us if u.R), 1)
    base = bytearray(t)
    tail = bytearray(p)
    for u in us:
        for b in u.B:
            base[b] = 1
        if not u.R:
            continue
        for a in range(u.t, t):
            if (a - u.t) % u.p in u.R:
                base[a] = 1
        # Mark t + off for off in [0, p) with off == r - (t - u.t) (mod u.p).
        shift = (t - u.t) % u.p
        for r in u.R:
            start = (r - shift) % u.p
            tail[start::u.p] = b"\x01" * len(range(start, p, u.p))
    B = frozenset(i for i in range(t) if base[i])
    R = frozenset(i for i in range(p) if tail[i])
    return normalize(UPSet(t, p, B, R))


def equal(u1: UPSet, u2: UPSet) -> bool:
    """Equality of denotations by comparing membership on a long enough prefix."""
    horizon = max(u1.t, u2.t) + 2 * lcm(u1.p, u2.p)
    return all(member(u1, a) == member(u2, a) for a in range(horizon))


def lcm_range(lo: int, hi: int) -> int:
    if lo < 1 or lo > hi:
        raise ValueError("need 1 <= lo <= hi")
    return reduce(lcm, range(lo, hi + 1), 1)


# ---------------------------------------------------------------------------
# Text form


def format_upset(u: UPSet) -> str:
    def fmt(s):
        return "{" + ",".join(str(v) for v in sorted(s)) + "}"

    return f"U(t={u.t}, p={u.p}, B={fmt(u.B)}, R={fmt(u.R)})"


_UPSET_RE = re.compile(
    r"\s*U\(\s*t\s*=\s*(\d+)\s*,\s*p\s*=\s*(\d+)\s*,\s*B\s*=\s*\{([^}]*)\}\s*,\s*R\s*=\s*\{([^}]*)\}\s*\)\s*\Z"
)


def parse_upset(text: str) -> UPSet:
    m = _UPSET_RE.match(text)
    if not m:
        raise ValueError(f"not an ultimately periodic set: {text!r}")

    def items(s):
        s = s.strip()
        return frozenset(int(v) for v in s.split(",")) if s else frozenset()

    return UPSet(int(m.group(1)), int(m.group(2)), items(m.group(3)), items(m.group(4)))


# ---------------------------------------------------------------------------
# Extraction from formulas


def upset_of(phi: Formula, x: str, dnf_cap: int | None = None) -> UPSet:
    """The set ``{a : phi(a)}`` of a one-variable existential formula.

    The matrix goes to DNF with ``x`` as column 0; each clause becomes a
    linear system whose solution set is decomposed into linear sets, each of
    which is projected onto ``x``; the projections are then united.
    """
    from .diophantine import project_first, semilinear_of
    from .normalize import DEFAULT_DNF_CAP, clause_to_system, to_dnf, to_prenex

    if phi.free_vars - {x}:
        raise NotSigmaOne(f"free variables other than {x}: {sorted(phi.free_vars - {x})}")
    prenex = to_prenex(phi)
    block: list[str] = []
    body = prenex
    while isinstance(body, Exists):
        block.extend(body.block)
        body = body.body
    if isinstance(body, Forall) or not is_quantifier_free(body):
        raise NotSigmaOne("formula is not existential")
    if x in block:
        raise NotSigmaOne(f"{x} must be free")
    order = [x] + [v for v in block if v in body.free_vars]
    dnf = to_dnf(body, DEFAULT_DNF_CAP if dnf_cap is None else dnf_cap, order=order)
    parts = []
    for clause in dnf.clauses:
        system = clause_to_system(clause, {}, order)
        for ls in semilinear_of(system).components:
            parts.append(project_first(ls))
    return union_all(parts)
