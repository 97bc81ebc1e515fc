"""Prenex form, DNF over ``>=`` literals and compilation to linear systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ._search import Matrix, Search
from .diophantine import DiophantineSystem
from .formula import (
    GE,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    LinearTerm,
    Not,
    Or,
    _Junction,
    _Quantifier,
    is_quantifier_free,
    prenex_prefix,
)
from .errors import NotPrenex

DEFAULT_DNF_CAP = 1 << 20


# ---------------------------------------------------------------------------
# Prenex form


def is_prenex(phi: Formula) -> bool:
    try:
        prenex_prefix(phi)
    except NotPrenex:
        return False
    return True


def _fresh(name: str, used: set[str]) -> str:
    k = 1
    while f"{name}_{k}" in used:
        k += 1
    return f"{name}_{k}"


def _rename_apart(phi: Formula, env: dict[str, str], used: set[str]) -> Formula:
    """Give every quantifier its own variable names, distinct from free ones."""
    if isinstance(phi, Atom):
        if not any(v in env for v, _ in phi.term.coeffs):
            return phi
        return Atom(LinearTerm.of({env.get(v, v): c for v, c in phi.term.coeffs}), phi.bound, phi.rel)
    if isinstance(phi, Not):
        return Not(_rename_apart(phi.arg, env, used))
    if isinstance(phi, _Junction):
        return type(phi)(tuple(_rename_apart(a, env, used) for a in phi.args))
    inner = dict(env)
    block = []
    for v in phi.block:
        new = v if v not in used else _fresh(v, used)
        used.add(new)
        inner[v] = new
        block.append(new)
    return type(phi)(tuple(block), _rename_apart(phi.body, inner, used))


Prefix = list[tuple[type, list[str]]]


def _merge(prefixes: list[Prefix], first: type) -> Prefix:
    """Interleave sibling prefixes greedily, starting with quantifier ``first``."""
    queues = [list(p) for p in prefixes if p]
    out: Prefix = []
    kind = first
    while queues:
        block: list[str] = []
        for q in queues:
            if q and q[0][0] is kind:
                block.extend(q.pop(0)[1])
        queues = [q for q in queues if q]
        if block:
            out.append((kind, block))
        kind = Forall if kind is Exists else Exists
    return out


def _pull(phi: Formula, parent: type | None) -> tuple[Prefix, Formula]:
    if isinstance(phi, Atom) or is_quantifier_free(phi):
        return [], phi
    if isinstance(phi, Not):
        prefix, m = _pull(phi.arg, None if parent is None else (Forall if parent is Exists else Exists))
        flipped = [((Forall if k is Exists else Exists), b) for k, b in prefix]
        return flipped, Not(m)
    if isinstance(phi, _Quantifier):
        kind = type(phi)
        prefix, m = _pull(phi.body, kind)
        if prefix and prefix[0][0] is kind:
            prefix[0] = (kind, list(phi.block) + prefix[0][1])
        else:
            prefix.insert(0, (kind, list(phi.block)))
        return prefix, m
    parts = [_pull(a, parent) for a in phi.args]
    prefixes = [p for p, _ in parts]
    options = []
    for start in (parent or Exists, Forall if (parent or Exists) is Exists else Exists):
        options.append(_merge(prefixes, start))
    best = min(options, key=len)
    return best, type(phi)(tuple(m for _, m in parts))


def to_prenex(phi: Formula) -> Formula:
    """Equivalent prenex formula with as few quantifier blocks as the greedy merge allows.

    Bound variables that clash with other bound or free variables are renamed
    to ``name_1``, ``name_2``, ...; an input that is already prenex is
    returned unchanged.
    """
    if is_prenex(phi):
        return phi
    used = set(phi.free_vars)
    phi = _rename_apart(phi, {}, used)
    prefix, matrix = _pull(phi, None)
    out = matrix
    for kind, block in reversed(prefix):
        out = kind(tuple(block), out)
    return out


# ---------------------------------------------------------------------------
# DNF


@dataclass(frozen=True)
class Clause:
    """Conjunction of literals ``p >= b``."""

    literals: tuple[Atom, ...]

    def __post_init__(self):
        for lit in self.literals:
            if lit.rel != GE:
                raise ValueError("clause literals must use '>='")

    def holds(self, env: Mapping[str, int]) -> bool:
        return all(lit.holds(env) for lit in self.literals)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset().union(*(lit.term.variables for lit in self.literals))


@dataclass(frozen=True)
class DNFMatrix:
    clauses: tuple[Clause, ...]
    variables: tuple[str, ...]

    def holds(self, env: Mapping[str, int]) -> bool:
        return any(c.holds(env) for c in self.clauses)


def _clause_of(m: Matrix, lit_ids: Iterable[int]) -> Clause:
    atoms = []
    for lid in lit_ids:
        vs, cs, b = m.lits[lid]
        atoms.append(Atom(LinearTerm.of({m.names[v]: c for v, c in zip(vs, cs)}), b, GE))
    atoms.sort(key=lambda a: (a.term.coeffs, a.bound))
    return Clause(tuple(dict.fromkeys(atoms)))


def to_dnf(matrix: Formula, cap: int = DEFAULT_DNF_CAP, order: Sequence[str] = ()) -> DNFMatrix:
    """Disjunction of ``>=``-clauses equivalent to ``matrix`` over the naturals.

    Strict atoms ``p < b`` become ``-p >= -b + 1`` and negated atoms
    ``!(p < b)`` become ``p >= b``.  Clauses are enumerated by a search that
    drops branches with no natural solution, so the result can be smaller
    than the syntactic distribution of the matrix.
    """
    if not is_quantifier_free(matrix):
        raise ValueError("to_dnf expects a quantifier-free matrix")
    m = Matrix(matrix, order)
    search = Search(m, max_leaves=cap)
    seen: dict[Clause, None] = {}
    for lits in search.leaves():
        seen.setdefault(_clause_of(m, lits), None)
        if len(seen) > cap:
            from .errors import DnfSizeExceeded

            raise DnfSizeExceeded(cap)
    variables = tuple(list(order) + sorted(set(matrix.free_vars) - set(order)))
    return DNFMatrix(tuple(seen), variables)


def clause_to_system(c: Clause, a: Mapping[str, int], free_order: Sequence[str]) -> DiophantineSystem:
    """One row per literal over ``free_order``; variables in ``a`` are folded into ``c``."""
    col = {v: i for i, v in enumerate(free_order)}
    A = []
    rhs = []
    for lit in c.literals:
        row = [0] * len(free_order)
        b = lit.bound
        for v, coef in lit.term.coeffs:
            if v in col:
                row[col[v]] += coef
            elif v in a:
                b -= coef * a[v]
            else:
                raise ValueError(f"variable {v} is neither free nor assigned")
        A.append(row)
        rhs.append(b)
    return DiophantineSystem(A, rhs, len(free_order))


def system_of_conjunction(phi: Formula, order: Sequence[str] | None = None) -> tuple[tuple[str, ...], DiophantineSystem]:
    """Rows of a quantifier-free conjunction of (possibly negated) atoms.

    Variables are columns in ``order`` (default: sorted names).  Raises
    PreconditionViolated for anything that is not such a conjunction.
    """
    from .errors import PreconditionViolated

    literals: list[tuple[LinearTerm, int]] = []

    def walk(f: Formula, neg: bool) -> None:
        if isinstance(f, Atom):
            strict = f.rel != GE
            if strict != neg:
                literals.append((-f.term, -f.bound + 1))
            else:
                literals.append((f.term, f.bound))
        elif isinstance(f, Not) and isinstance(f.arg, Atom):
            walk(f.arg, not neg)
        elif isinstance(f, And) and not neg:
            for a in f.args:
                walk(a, False)
        else:
            raise PreconditionViolated("expected a conjunction of atoms and negated atoms")

    walk(phi, False)
    names = tuple(order) if order is not None else tuple(sorted(phi.free_vars))
    col = {v: i for i, v in enumerate(names)}
    A = []
    rhs = []
    for term, b in literals:
        row = [0] * len(names)
        for v, c in term.coeffs:
            if v not in col:
                raise PreconditionViolated(f"variable {v} missing from the column order")
            row[col[v]] = c
        A.append(row)
        rhs.append(b)
    return names, DiophantineSystem(A, rhs, len(names))
