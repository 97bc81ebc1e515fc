"""Seeded random sentences and circuits for tests and benchmarks."""

from __future__ import annotations

import random
from typing import Sequence

from .formula import Expr, Formula, Not, conj, disj, eq, exists, forall, ge, gt, le, lt

_RELATIONS = (lt, le, eq, gt, ge)


def random_atom(rng: random.Random, vs: Sequence[str], max_coef: int, max_const: int) -> Formula:
    """``sum c v  rel  k`` over one or two distinct variables of ``vs``."""
    picked = rng.sample(list(vs), k=min(len(vs), rng.randint(1, 2)))
    coeffs = {}
    for v in picked:
        c = 0
        while c == 0:
            c = rng.randint(-max_coef, max_coef)
        coeffs[v] = c
    rel = rng.choice(_RELATIONS)
    return rel(Expr(coeffs), rng.randint(-max_const, max_const))


def random_matrix(rng: random.Random, vs: Sequence[str], max_coef: int, max_const: int, depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.35:
        return random_atom(rng, vs, max_coef, max_const)
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return Not(random_matrix(rng, vs, max_coef, max_const, depth - 1))
    parts = [random_matrix(rng, vs, max_coef, max_const, depth - 1) for _ in range(rng.randint(2, 3))]
    return conj(*parts) if op == "and" else disj(*parts)


def random_sentence(rng: random.Random, blocks: int, width: int, max_coef: int = 3, max_const: int = 3,
                    leading: str | None = None) -> Formula:
    """Prenex sentence with ``blocks`` alternating blocks of 1..``width`` variables."""
    names = []
    sizes = [rng.randint(1, width) for _ in range(blocks)]
    for b, k in enumerate(sizes):
        names.append([f"{'xyzuvw'[b % 6]}{m}" for m in range(1, k + 1)])
    body = random_matrix(rng, [v for block in names for v in block], max_coef, max_const)
    first = leading or rng.choice(("exists", "forall"))
    kinds = []
    for b in range(blocks):
        kinds.append(first if b % 2 == 0 else ("forall" if first == "exists" else "exists"))
    for kind, block in reversed(list(zip(kinds, names))):
        body = exists(block, body) if kind == "exists" else forall(block, body)
    return body


def pa22_corpus(seed: int, count: int = 200) -> list[Formula]:
    """Closed PA(2,2) sentences with coefficients and constants of magnitude at most 3."""
    rng = random.Random(seed)
    return [random_sentence(rng, 2, 2, 3, 3) for _ in range(count)]


def sigma1_corpus(seed: int, count: int = 100) -> list[Formula]:
    """Existential sentences with at most 3 variables and coefficients of magnitude at most 4."""
    rng = random.Random(seed)
    return [random_sentence(rng, 1, 3, 4, 4, leading="exists") for _ in range(count)]
