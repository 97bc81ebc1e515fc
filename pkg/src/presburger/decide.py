"""Validity of Presburger sentences.

The innermost quantifier block is decided exactly: its matrix is split into
clauses, each clause becomes a linear system over the block variables and
is tested for a natural solution.  Outer blocks are instantiated with every
value up to a bound, which by default is the Weispfenning bound
``2^(c |phi|^((3j)^i))`` and can be overridden.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from ._search import Matrix, Search
from .diophantine import DiophantineSystem, is_feasible
from .errors import BoundTooLarge, PreconditionViolated
from .formula import Exists, Formula, Not, bounded_eval, prenex_prefix, size, substitute
from .normalize import DEFAULT_DNF_CAP, to_prenex

DEFAULT_BOUND_CAP_BITS = 1 << 31


@dataclass(frozen=True)
class DecideConfig:
    weispfenning_c: int = 1
    bound_override: int | None = None
    dnf_cap: int = DEFAULT_DNF_CAP
    bound_cap_bits: int = DEFAULT_BOUND_CAP_BITS

    def __post_init__(self):
        if self.weispfenning_c < 1:
            raise ValueError("weispfenning_c must be at least 1")
        if self.dnf_cap < 1 or self.bound_cap_bits < 1:
            raise ValueError("caps must be positive")
        if self.bound_override is not None and self.bound_override < 0:
            raise ValueError("bound_override must be a natural number")


@dataclass(frozen=True)
class Verdict:
    """Outcome of ``decide_with_info``.

    ``relative`` is set when outer blocks were enumerated up to an overridden
    bound, in which case ``valid`` is only claimed relative to ``bound``.
    ``bound_bits`` is the exponent ``E`` of the default bound ``2^E``.
    """

    valid: bool
    blocks: int
    bound: int | None = None
    bound_bits: int | None = None
    relative: bool = False


def weispfenning_exponent(i: int, j: int, size_: int, c: int, cap_bits: int) -> int:
    """``c * size^((3j)^i)``, raising BoundTooLarge once it exceeds ``cap_bits``."""
    if i < 1 or j < 1 or size_ < 1:
        raise PreconditionViolated("need i, j, size >= 1")
    if size_ == 1:
        return c
    # Estimate before computing so that absurd exponents are never built.
    power = (3 * j) ** i if i * (3 * j).bit_length() < 64 else None
    # size^power has at least power*(bits(size)-1) bits; past 4096 bits the
    # exponent is far beyond any cap, so report it symbolically.
    if power is None or power * (size_.bit_length() - 1) > max(4096, cap_bits.bit_length()):
        raise BoundTooLarge(None, cap_bits, f"{c}*{size_}^({3 * j}^{i})")
    e = c * size_ ** power
    if e > cap_bits:
        raise BoundTooLarge(e, cap_bits)
    return e


def weispfenning_bound(i: int, j: int, size_: int, c: int = 1, cap_bits: int = DEFAULT_BOUND_CAP_BITS) -> int:
    """Exact ``2^(c * size^((3j)^i))``; only sensible for small exponents."""
    return 1 << weispfenning_exponent(i, j, size_, c, cap_bits)


# ---------------------------------------------------------------------------
# Innermost block


class InnermostChecker:
    """Exact test of ``exists vars. matrix`` for varying values of the other variables."""

    def __init__(self, matrix: Formula, vars: Sequence[str], dnf_cap: int = DEFAULT_DNF_CAP):
        self.vars = tuple(vars)
        self.m = Matrix(matrix, [v for v in sorted(matrix.free_vars) if v not in self.vars] + list(self.vars))
        self.dnf_cap = dnf_cap
        self.outer = set(matrix.free_vars) - set(self.vars)

    def __call__(self, a: Mapping[str, int]) -> bool:
        missing = self.outer - a.keys()
        if missing:
            raise ValueError(f"assignment misses {sorted(missing)}")
        fixed = {self.m.index[v]: val for v, val in a.items() if v in self.m.index and v not in self.vars}
        search = Search(self.m, fixed, max_leaves=self.dnf_cap)
        for clause in search.leaves():
            res = search.residual(clause)
            if res is None:
                continue
            rows, free = res
            if not rows:
                return True
            col = {v: i for i, v in enumerate(free)}
            A = []
            c = []
            for row, b in rows:
                line = [0] * len(free)
                for v, coef in row.items():
                    line[col[v]] = coef
                A.append(line)
                c.append(b)
            if is_feasible(DiophantineSystem(A, c, len(free))):
                return True
        return False


def decide_innermost_exists(matrix: Formula, a: Mapping[str, int], vars: Sequence[str],
                            dnf_cap: int = DEFAULT_DNF_CAP) -> bool:
    """Is there a natural assignment to ``vars`` satisfying ``matrix`` under ``a``?"""
    return InnermostChecker(matrix, vars, dnf_cap)(a)


# ---------------------------------------------------------------------------
# Full sentences


class Decider:
    """Validity of ``phi`` under many assignments to its free variables.

    Prenexing and the innermost matrix are prepared once; each call fixes
    the free variables and runs the block enumeration.
    """

    def __init__(self, phi: Formula, cfg: DecideConfig | None = None):
        self.cfg = cfg or DecideConfig()
        self.phi = phi
        self.free = phi.free_vars
        prenex = to_prenex(phi)
        self.blocks, self.matrix = prenex_prefix(prenex)
        self.checker = None
        if self.blocks:
            kind, inner_vars = self.blocks[-1]
            self.inner_exists = kind is Exists
            body = self.matrix if self.inner_exists else Not(self.matrix)
            self.checker = InnermostChecker(body, inner_vars, self.cfg.dnf_cap)

    def info(self, a: Mapping[str, int] | None = None) -> Verdict:
        a = dict(a or {})
        missing = self.free - a.keys()
        if missing:
            raise PreconditionViolated(f"sentence has free variables {sorted(missing)}")
        cfg = self.cfg
        blocks = self.blocks
        if not blocks:
            return Verdict(bounded_eval(self.matrix, a, 0), 0)
        bound = cfg.bound_override
        bits = None
        outer = blocks[:-1]
        if outer and bound is None:
            j = max(len(b) for _, b in blocks)
            sz = size(substitute(self.phi, a)) if a else size(self.phi)
            bits = weispfenning_exponent(len(blocks), j, sz, cfg.weispfenning_c, cfg.bound_cap_bits)
        checker = self.checker
        inner_exists = self.inner_exists

        def run(level: int) -> bool:
            if level == len(outer):
                got = checker(a)
                return got if inner_exists else not got
            k, vs = outer[level]
            want = k is Exists
            if bound is not None:
                combos = itertools.product(range(bound + 1), repeat=len(vs))
            else:
                combos = _lazy_product(len(vs), bits)
            for combo in combos:
                a.update(zip(vs, combo))
                if run(level + 1) == want:
                    return want
            return not want

        valid = run(0)
        return Verdict(valid, len(blocks), bound if outer else None, bits, relative=bool(outer) and bound is not None)

    def __call__(self, a: Mapping[str, int] | None = None) -> bool:
        return self.info(a).valid


def decide_with_info(phi: Formula, cfg: DecideConfig | None = None) -> Verdict:
    if phi.free_vars:
        raise PreconditionViolated(f"sentence has free variables {sorted(phi.free_vars)}")
    return Decider(phi, cfg).info()


def _lazy_product(k: int, bits: int) -> Iterator[tuple[int, ...]]:
    """All k-tuples over ``0..2^bits`` in order of increasing maximum entry."""
    m = 0
    while True:
        for combo in itertools.product(range(m + 1), repeat=k):
            if max(combo) == m:
                yield combo
        if m.bit_length() > bits:
            return
        m += 1


def decide(phi: Formula, cfg: DecideConfig | None = None) -> bool:
    return decide_with_info(phi, cfg).valid
