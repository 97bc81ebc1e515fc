import random

import pytest

from presburger.corpus import random_matrix
from presburger.errors import NotPrenex, SubstitutionOfBoundVariable
from presburger.formula import (
    FALSE,
    And,
    Atom,
    Exists,
    LinearTerm,
    Not,
    bounded_eval,
    classify,
    conj,
    norm,
    rename,
    size,
    substitute,
)
from presburger.parsing import parse_formula as P


def test_size_of_atom():
    # x, <, the 1-bit constant and the variable's unit coefficient
    assert size(P("x < 1")) == 4


def test_size_grows_with_constant_bits():
    # 8 takes 4 bits where 1 takes 1
    assert size(P("x < 8")) - size(P("x < 1")) == 3


def test_size_monotone_under_and():
    a, b = P("x < 3"), P("2*y >= 5")
    assert size(And((a, b))) >= size(a) + size(b)


def test_size_counts_quantifier_blocks():
    body = P("x + y < 3")
    assert size(P("exists x y. x + y < 3")) == size(body) + 1 + 2


def test_norm():
    assert norm(P("2*x + -3*y < 5")) == 5
    assert norm(P("x < 0")) == 1
    phi = P("3*x - y >= 7 \\/ x < 2")
    assert norm(Not(phi)) == norm(phi) == 7
    assert norm(Atom(LinearTerm(), 0)) == 0


def test_substitute_folds_constants():
    assert substitute(P("x + y < 5"), {"x": 2}) == P("y < 3")
    phi = P("exists y. x < y")
    assert substitute(phi, {}) == phi
    got = substitute(P("2*x < 5"), {"x": 3})
    assert got == Atom(LinearTerm(), -1)
    assert not bounded_eval(got, {}, 0)


def test_substitute_bound_variable_rejected():
    with pytest.raises(SubstitutionOfBoundVariable):
        substitute(P("exists x. x < y"), {"x": 1})


def test_bounded_eval_examples():
    assert bounded_eval(P("exists x. x = 2"), {}, 5)
    assert not bounded_eval(P("exists x. x = 7"), {}, 5)
    assert not bounded_eval(P("forall y. exists x. x > y"), {}, 4)


def test_bounded_eval_requires_assignment():
    with pytest.raises(ValueError):
        bounded_eval(P("x < 1"), {}, 3)


def test_classify():
    assert tuple(classify(P("exists x y. forall z. x + y < z")))[:2] == (2, 2)
    assert tuple(classify(P("x < 1")))[:2] == (0, 0)
    frag = classify(P("forall x. x >= 0"))
    assert (frag.i, frag.j, frag.leading_universal) == (1, 1, True)
    with pytest.raises(NotPrenex):
        classify(P("(exists x. x < 1) /\\ y < 2"))


def test_block_invariants():
    with pytest.raises(ValueError):
        Exists((), P("x < 1"))
    with pytest.raises(ValueError):
        Exists(("x",), P("exists x. x < 1"))


def test_conj_of_nothing_is_true():
    assert bounded_eval(conj(), {}, 0)
    assert not bounded_eval(FALSE, {}, 0)


def _random_qf(rng):
    return random_matrix(rng, ["x", "y", "z"], 3, 4, depth=3)


def test_quantifier_free_eval_is_bound_independent():
    rng = random.Random(11)
    for _ in range(200):
        phi = _random_qf(rng)
        a = {v: rng.randint(0, 6) for v in phi.free_vars}
        assert bounded_eval(phi, a, 0) == bounded_eval(phi, a, 9)


def test_substitute_then_eval_matches_merged_assignment():
    rng = random.Random(12)
    for _ in range(200):
        phi = P("exists w. w < 3 /\\ (" + _print(_random_qf(rng)) + ")")
        a = {v: rng.randint(0, 5) for v in phi.free_vars}
        part = dict(list(a.items())[: len(a) // 2])
        rest = {v: a[v] for v in a if v not in part}
        assert bounded_eval(substitute(phi, part), rest, 3) == bounded_eval(phi, a, 3)
        bits = sum(max(1, v.bit_length()) for v in part.values())
        assert size(substitute(phi, part)) <= size(phi) + bits


def test_measures_invariant_under_renaming():
    rng = random.Random(13)
    for _ in range(100):
        phi = _random_qf(rng)
        renamed = rename(phi, {"x": "alpha", "y": "beta", "z": "gamma"})
        assert size(renamed) == size(phi)
        assert norm(renamed) == norm(phi)


def _print(phi):
    from presburger.parsing import print_formula

    return print_formula(phi)
