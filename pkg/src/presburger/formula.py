"""Presburger formula AST over the naturals.

Atoms are ``p(x) < b`` (and, inside normal forms, ``p(x) >= b``) where ``p``
is a linear term without constant part.  Every other comparison is sugar and
is expanded by the helpers at the bottom of this module, which the parser and
the formula generators share.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping, NamedTuple, Union

from .errors import NotPrenex, SubstitutionOfBoundVariable

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"exists", "forall"})

LT = "<"
GE = ">="


def check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name) or name in KEYWORDS:
        raise ValueError(f"invalid variable name {name!r}")
    return name


def bit_length(k: int) -> int:
    """Binary length of an integer constant; zero still costs one symbol."""
    return max(1, abs(k).bit_length())


@dataclass(frozen=True)
class LinearTerm:
    """Sum of ``coefficient * variable`` with no constant part.

    Stored as a tuple of ``(name, coefficient)`` pairs sorted by name, with
    zero coefficients dropped, so structural equality is semantic equality.
    """

    coeffs: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        prev = None
        for name, c in self.coeffs:
            check_name(name)
            if not isinstance(c, int) or c == 0:
                raise ValueError(f"bad coefficient {c!r} for {name}")
            if prev is not None and name <= prev:
                raise ValueError("coefficients must be sorted by variable name without repeats")
            prev = name

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "LinearTerm":
        return cls(tuple(sorted((v, c) for v, c in mapping.items() if c != 0)))

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def __neg__(self) -> "LinearTerm":
        return LinearTerm(tuple((v, -c) for v, c in self.coeffs))

    def __add__(self, other: "LinearTerm") -> "LinearTerm":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinearTerm.of(d)

    def __sub__(self, other: "LinearTerm") -> "LinearTerm":
        return self + (-other)

    def evaluate(self, env: Mapping[str, int]) -> int:
        return sum(c * env[v] for v, c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)


class Formula:
    """Base class of formula nodes; nodes are immutable and hashable."""

    __slots__ = ()

    @cached_property
    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    @cached_property
    def bound_vars(self) -> frozenset[str]:
        raise NotImplementedError

    # Boolean sugar for building formulas in code.
    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        from .parsing import print_formula

        return print_formula(self)


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    term: LinearTerm
    bound: int
    rel: str = LT

    def __post_init__(self):
        if self.rel not in (LT, GE):
            raise ValueError(f"atoms only carry '<' or '>=', got {self.rel!r}")
        if not isinstance(self.bound, int):
            raise TypeError("atom bound must be an int")

    @cached_property
    def free_vars(self):
        return self.term.variables

    @cached_property
    def bound_vars(self):
        return frozenset()

    def holds(self, env: Mapping[str, int]) -> bool:
        value = self.term.evaluate(env)
        return value < self.bound if self.rel == LT else value >= self.bound


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula

    @cached_property
    def free_vars(self):
        return self.arg.free_vars

    @cached_property
    def bound_vars(self):
        return self.arg.bound_vars


class _Junction(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError(f"{type(self).__name__} needs at least two operands")

    @cached_property
    def free_vars(self):
        return frozenset().union(*(a.free_vars for a in self.args))

    @cached_property
    def bound_vars(self):
        return frozenset().union(*(a.bound_vars for a in self.args))


@dataclass(frozen=True, eq=True)
class And(_Junction):
    args: tuple[Formula, ...]


@dataclass(frozen=True, eq=True)
class Or(_Junction):
    args: tuple[Formula, ...]


class _Quantifier(Formula):
    block: tuple[str, ...]
    body: Formula

    def __post_init__(self):
        if not isinstance(self.block, tuple):
            object.__setattr__(self, "block", tuple(self.block))
        if not self.block:
            raise ValueError("quantifier block must be nonempty")
        for v in self.block:
            check_name(v)
        if len(set(self.block)) != len(self.block):
            raise ValueError(f"variable repeated in quantifier block {self.block}")
        clash = set(self.block) & self.body.bound_vars
        if clash:
            raise ValueError(f"variables {sorted(clash)} bound twice on one path")

    @cached_property
    def free_vars(self):
        return self.body.free_vars - set(self.block)

    @cached_property
    def bound_vars(self):
        return self.body.bound_vars | set(self.block)


@dataclass(frozen=True, eq=True)
class Exists(_Quantifier):
    block: tuple[str, ...]
    body: Formula


@dataclass(frozen=True, eq=True)
class Forall(_Quantifier):
    block: tuple[str, ...]
    body: Formula


Assignment = Mapping[str, int]

TRUE = Atom(LinearTerm(), 1)
FALSE = Atom(LinearTerm(), 0)


# ---------------------------------------------------------------------------
# Measures


def size(phi: Formula) -> int:
    """Symbol count of ``phi`` with binary-length integer constants.

    An atom costs one symbol per variable plus the binary length of its
    coefficient, one for the relation and the binary length of the bound
    (a variable-free atom pays one more for its ``0`` left-hand side).
    Each connective occurrence costs one, a quantifier costs one plus one per
    bound variable.  Parentheses are not counted.
    """
    total = 0
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            total += 1 + bit_length(f.bound)
            if f.term:
                total += sum(1 + bit_length(c) for _, c in f.term.coeffs)
            else:
                total += 1
        elif isinstance(f, Not):
            total += 1
            stack.append(f.arg)
        elif isinstance(f, _Junction):
            total += len(f.args) - 1
            stack.extend(f.args)
        elif isinstance(f, _Quantifier):
            total += 1 + len(f.block)
            stack.append(f.body)
        else:
            raise TypeError(f"not a formula: {f!r}")
    return total


def norm(phi: Formula) -> int:
    """Largest absolute value of any coefficient or atom bound (0 if none)."""
    best = 0
    for a in atoms(phi):
        best = max(best, abs(a.bound), *(abs(c) for _, c in a.term.coeffs))
    return best


def atoms(phi: Formula) -> Iterator[Atom]:
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            yield f
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, _Junction):
            stack.extend(reversed(f.args))
        else:
            stack.append(f.body)


def is_quantifier_free(phi: Formula) -> bool:
    return not phi.bound_vars


# ---------------------------------------------------------------------------
# Substitution and evaluation


def substitute(phi: Formula, a: Assignment) -> Formula:
    """Replace variables by natural numbers, folding them into atom bounds."""
    if not a:
        return phi
    clash = phi.bound_vars & set(a)
    if clash:
        raise SubstitutionOfBoundVariable(f"cannot substitute bound variables {sorted(clash)}")
    for v, val in a.items():
        if val < 0:
            raise ValueError(f"value {val} for {v} is not a natural number")
    return _subst(phi, a)


def _subst(phi: Formula, a: Assignment) -> Formula:
    if not (phi.free_vars & a.keys()):
        return phi
    if isinstance(phi, Atom):
        keep = {}
        shift = 0
        for v, c in phi.term.coeffs:
            if v in a:
                shift += c * a[v]
            else:
                keep[v] = c
        return Atom(LinearTerm.of(keep), phi.bound - shift, phi.rel)
    if isinstance(phi, Not):
        return Not(_subst(phi.arg, a))
    if isinstance(phi, _Junction):
        return type(phi)(tuple(_subst(x, a) for x in phi.args))
    return type(phi)(phi.block, _subst(phi.body, a))


def compile_bounded(phi: Formula, order: tuple[str, ...], bound: int) -> Callable[[list], bool]:
    """Compile ``phi`` to a predicate over an environment list.

    ``order`` fixes the slots of the free variables; quantified variables get
    fresh slots past them and range over ``0..bound``.
    """
    slots = {v: i for i, v in enumerate(order)}
    width = [len(order)]

    def build(f: Formula, slots: dict[str, int]):
        if isinstance(f, Atom):
            pairs = [(slots[v], c) for v, c in f.term.coeffs]
            b = f.bound
            if f.rel == LT:
                if not pairs:
                    r = 0 < b
                    return lambda env: r
                if len(pairs) == 1:
                    (s, c), = pairs
                    return lambda env: c * env[s] < b
                if len(pairs) == 2:
                    (s, c), (t, d) = pairs
                    return lambda env: c * env[s] + d * env[t] < b
                return lambda env: sum(c * env[s] for s, c in pairs) < b
            if not pairs:
                r = 0 >= b
                return lambda env: r
            return lambda env: sum(c * env[s] for s, c in pairs) >= b
        if isinstance(f, Not):
            g = build(f.arg, slots)
            return lambda env: not g(env)
        if isinstance(f, And):
            gs = [build(x, slots) for x in f.args]
            return lambda env: all(g(env) for g in gs)
        if isinstance(f, Or):
            gs = [build(x, slots) for x in f.args]
            return lambda env: any(g(env) for g in gs)
        inner = dict(slots)
        mine = []
        for v in f.block:
            inner[v] = width[0]
            mine.append(width[0])
            width[0] += 1
        body = build(f.body, inner)
        values = range(bound + 1)
        want = isinstance(f, Exists)

        def quant(env):
            for combo in itertools.product(values, repeat=len(mine)):
                for s, val in zip(mine, combo):
                    env[s] = val
                if body(env) == want:
                    return want
            return not want

        return quant

    pred = build(phi, slots)
    total = width[0]

    def run(values: list) -> bool:
        env = list(values) + [0] * (total - len(values))
        return pred(env)

    return run


def bounded_eval(phi: Formula, a: Assignment, bound: int) -> bool:
    """Brute-force truth value with every quantifier ranging over ``0..bound``.

    This is the reference oracle for the decision procedure; its running time
    is exponential in the number of quantified variables.
    """
    missing = phi.free_vars - a.keys()
    if missing:
        raise ValueError(f"assignment misses free variables {sorted(missing)}")
    order = tuple(sorted(phi.free_vars))
    return compile_bounded(phi, order, bound)([a[v] for v in order])


# ---------------------------------------------------------------------------
# Prefix classification


class Fragment(NamedTuple):
    """Quantifier prefix shape: ``i`` blocks of width at most ``j``."""

    i: int
    j: int
    leading_universal: bool = False


def prenex_prefix(phi: Formula) -> tuple[list[tuple[type, list[str]]], Formula]:
    """Split a prenex formula into maximal quantifier blocks and its matrix."""
    blocks: list[tuple[type, list[str]]] = []
    f = phi
    while isinstance(f, _Quantifier):
        kind = type(f)
        if blocks and blocks[-1][0] is kind:
            blocks[-1][1].extend(f.block)
        else:
            blocks.append((kind, list(f.block)))
        f = f.body
    if not is_quantifier_free(f):
        raise NotPrenex("formula has quantifiers below its prefix")
    return blocks, f


def classify(phi: Formula) -> Fragment:
    blocks, _ = prenex_prefix(phi)
    if not blocks:
        return Fragment(0, 0, False)
    return Fragment(len(blocks), max(len(b) for _, b in blocks), blocks[0][0] is Forall)


# ---------------------------------------------------------------------------
# Builders: affine expressions and desugared comparisons


class Expr:
    """Affine expression used while building formulas (``coeffs`` + ``const``)."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[str, int] | None = None, const: int = 0):
        self.coeffs = {v: c for v, c in (coeffs or {}).items() if c}
        self.const = const

    @staticmethod
    def lift(x: "ExprLike") -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, str):
            return Expr({x: 1})
        if isinstance(x, int):
            return Expr({}, x)
        raise TypeError(f"cannot use {x!r} as a term")

    def __add__(self, other):
        o = Expr.lift(other)
        d = dict(self.coeffs)
        for v, c in o.coeffs.items():
            d[v] = d.get(v, 0) + c
        return Expr(d, self.const + o.const)

    __radd__ = __add__

    def __neg__(self):
        return Expr({v: -c for v, c in self.coeffs.items()}, -self.const)

    def __sub__(self, other):
        return self + (-Expr.lift(other))

    def __rsub__(self, other):
        return Expr.lift(other) - self

    def __mul__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("Presburger terms only scale by integer constants")
        return Expr({v: c * k for v, c in self.coeffs.items()}, self.const * k)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Expr({self.coeffs!r}, {self.const})"


ExprLike = Union[Expr, str, int]


def var(name: str) -> Expr:
    return Expr({check_name(name): 1})


def linsum(terms) -> Expr:
    """Sum of ``(coefficient, variable)`` pairs or expressions."""
    out = Expr()
    for t in terms:
        if isinstance(t, tuple):
            c, v = t
            out = out + Expr({v: c})
        else:
            out = out + t
    return out


def _diff(lhs: ExprLike, rhs: ExprLike) -> tuple[LinearTerm, int]:
    if isinstance(lhs, str) and isinstance(rhs, int):
        return LinearTerm(((lhs, 1),)), rhs
    d = Expr.lift(lhs) - Expr.lift(rhs)
    return LinearTerm.of(d.coeffs), -d.const


def lt(lhs: ExprLike, rhs: ExprLike) -> Atom:
    term, k = _diff(lhs, rhs)
    return Atom(term, k)


def le(lhs: ExprLike, rhs: ExprLike) -> Atom:
    term, k = _diff(lhs, rhs)
    return Atom(term, k + 1)


def gt(lhs: ExprLike, rhs: ExprLike) -> Atom:
    return lt(rhs, lhs)


def ge(lhs: ExprLike, rhs: ExprLike) -> Atom:
    term, k = _diff(lhs, rhs)
    return Atom(term, k, GE)


def eq(lhs: ExprLike, rhs: ExprLike) -> Formula:
    """``p = q`` as ``p < q + 1 /\\ q < p + 1``."""
    return And((le(lhs, rhs), le(rhs, lhs)))


def conj(*fs: Formula) -> Formula:
    """Flattening conjunction; the empty conjunction is ``0 < 1``."""
    parts: list[Formula] = []
    for f in fs:
        if isinstance(f, And):
            parts.extend(f.args)
        elif f != TRUE:
            parts.append(f)
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*fs: Formula) -> Formula:
    parts: list[Formula] = []
    for f in fs:
        if isinstance(f, Or):
            parts.extend(f.args)
        elif f != FALSE:
            parts.append(f)
    if not parts:
        return FALSE
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(implies(a, b), implies(b, a))


def exists(block, body: Formula) -> Formula:
    block = tuple(block)
    return Exists(block, body) if block else body


def forall(block, body: Formula) -> Formula:
    block = tuple(block)
    return Forall(block, body) if block else body


def rename(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename variables everywhere (free and bound occurrences alike)."""
    if isinstance(phi, Atom):
        return Atom(LinearTerm.of({mapping.get(v, v): c for v, c in phi.term.coeffs}), phi.bound, phi.rel)
    if isinstance(phi, Not):
        return Not(rename(phi.arg, mapping))
    if isinstance(phi, _Junction):
        return type(phi)(tuple(rename(x, mapping) for x in phi.args))
    return type(phi)(tuple(mapping.get(v, v) for v in phi.block), rename(phi.body, mapping))
