import random

import pytest

from presburger.circuits import AND, CONST1, NOT, OR, Circuit, describer_from_circuit, evaluate, evaluate_numbers, random_circuit
from presburger.decide import DecideConfig, Decider, decide_with_info
from presburger.encodings import (
    PI,
    SIGMA,
    ReductionParams,
    crt_encode,
    gen_bin,
    gen_bit_predicates,
    gen_circuit_formula,
    gen_hard_family,
    gen_mod,
    gen_prime,
    gen_reduction,
    gen_succinct_suite,
    gen_valid,
)
from presburger.errors import PreconditionViolated, WidthCapExceeded
from presburger.formula import bounded_eval, classify, is_quantifier_free, size
from presburger.normalize import to_prenex
from presburger.upset import EMPTY, upset_of


def test_gen_bin():
    phi = gen_bin(3)
    assert is_quantifier_free(phi)
    assert bounded_eval(phi, {"x": 5, "x0": 1, "x1": 0, "x2": 1}, 0)
    assert not bounded_eval(phi, {"x": 5, "x0": 1, "x1": 1, "x2": 0}, 0)
    assert not bounded_eval(phi, {"x": 8, "x0": 2, "x1": 1, "x2": 1}, 0)


@pytest.mark.parametrize("variant", [SIGMA, PI])
def test_gen_mod_small(variant):
    d = Decider(gen_mod(2, variant))
    for a in range(13):
        for b in range(6):
            want = b < 4 and ((b > 0 and a % b == 0) or (b == 0 and a == 0))
            assert d({"x": a, "y": b}) == want


def test_gen_mod_shapes():
    assert classify(to_prenex(gen_mod(3, SIGMA)))[::2] == (1, False)
    assert classify(to_prenex(gen_mod(3, PI)))[::2] == (1, True)
    with pytest.raises(ValueError):
        gen_mod(2, "delta")


def test_circuit_formula_matches_evaluation():
    rng = random.Random(81)
    for _ in range(10):
        c = random_circuit(rng, 8, 3)
        for variant in (SIGMA, PI):
            d = Decider(gen_circuit_formula(c, variant))
            for a in range(10):
                want = a < (1 << c.n) and evaluate_numbers(c, [a], [c.n]) == 1
                assert d({"x": a}) == want


def test_gen_prime_width_one():
    primes = {2, 3, 5, 7}
    for variant in (SIGMA, PI):
        d = Decider(gen_prime(1, variant))
        for b in range(2):
            for a in range(64):
                assert d({"x": a, "y": b}) == (a in primes and b**3 <= a < (b + 1) ** 3)


def test_prime_cap():
    with pytest.raises(WidthCapExceeded):
        gen_prime(5)
    with pytest.raises(WidthCapExceeded):
        gen_valid(4)
    with pytest.raises(PreconditionViolated):
        gen_prime(0)


def test_crt_encode():
    assert crt_encode([0, 0]) == 0
    assert crt_encode([1, 1]) == 1
    a = crt_encode([1, 0])
    assert all(a % p == 1 for p in (2, 3, 5, 7)) and all(a % p == 0 for p in (11, 13, 17, 19, 23))


def test_gen_valid_width_one():
    d = Decider(gen_valid(1))
    for bits in ([0, 0], [1, 0], [0, 1], [1, 1]):
        assert d({"x": crt_encode(bits)})
    assert not d({"x": 2})
    assert not d({"x": crt_encode([1, 0]) + 1})


def test_bit_predicates():
    bp = gen_bit_predicates(ReductionParams(1, 1, 1))
    a = crt_encode([1, 0])
    for variant in (SIGMA, PI):
        zero = Decider(bp.zero.variant(variant))
        one = Decider(bp.one.variant(variant))
        assert [zero({"x": a, "y": y}) for y in (0, 1)] == [False, True]
        assert [one({"x": a, "y": y}) for y in (0, 1)] == [True, False]


TRUE1 = Circuit(1, 0, ((CONST1, 0, 0),))
FALSE2 = Circuit(2, 0, ((CONST1, 0, 0), (NOT, 0, 0)))


def test_gates_formula_single_gate():
    suite = gen_succinct_suite(describer_from_circuit(TRUE1, 1), ReductionParams(1, 0, 1))
    d = Decider(suite.gates)
    assert not d({"x1": crt_encode([0, 0])})
    assert d({"x1": crt_encode([1, 1])})


@pytest.mark.slow
def test_gates_formula_four_gates():
    c = Circuit(4, 0, ((CONST1, 0, 0), (NOT, 0, 0), (OR, 0, 1), (AND, 2, 0)))
    out, trace = evaluate(c, [])
    assert (out, trace) == (1, [1, 0, 1, 1])
    suite = gen_succinct_suite(describer_from_circuit(c, 2), ReductionParams(1, 2, 2))
    d = Decider(suite.gates)
    assert d({"x1": crt_encode(trace)})
    flipped = list(trace)
    flipped[1] ^= 1
    assert not d({"x1": crt_encode(flipped)})


@pytest.mark.slow
@pytest.mark.parametrize("circuit, want", [(TRUE1, True), (FALSE2, False)])
def test_reduction_single_alternation(circuit, want):
    phi = gen_reduction(describer_from_circuit(circuit, 1), ReductionParams(1, 0, 1))
    assert classify(to_prenex(phi)).i == 2
    v = decide_with_info(phi, DecideConfig(bound_override=1))
    assert v.valid == want and v.relative


def test_reduction_alternations():
    d = describer_from_circuit(TRUE1, 1)
    for i in (1, 2):
        assert classify(to_prenex(gen_reduction(d, ReductionParams(i, 0, 1)))).i == i + 1


def test_reduction_rejects_mismatched_width():
    with pytest.raises(PreconditionViolated):
        gen_reduction(describer_from_circuit(TRUE1, 2), ReductionParams(1, 0, 1))


def test_hard_family():
    assert upset_of(gen_hard_family(1), "x") == EMPTY
    sizes = [size(gen_hard_family(n)) for n in (2, 4, 8)]
    assert all(b / a <= 5 for a, b in zip(sizes, sizes[1:]))
