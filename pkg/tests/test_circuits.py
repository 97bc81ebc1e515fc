import random

import pytest

from presburger.circuits import (
    AND,
    CONST1,
    INPUT,
    NOT,
    OR,
    Circuit,
    SuccinctCircuit,
    CircuitBuilder,
    described_gates,
    describer_from_circuit,
    evaluate,
    evaluate_batch,
    evaluate_numbers,
    expand_succinct,
    prime_circuit,
    primes_below,
    random_circuit,
    truth_table,
)
from presburger.errors import IllFormedDescriber, InvalidCircuit, SizeExceeded, WidthCapExceeded, WidthOverflow

AND2 = Circuit(3, 2, ((INPUT, 0, 0), (INPUT, 0, 0), (AND, 0, 1)))
GE3 = Circuit(7, 4, ((INPUT, 0, 0),) * 4 + ((AND, 0, 1), (AND, 2, 3), (OR, 4, 5)))


def _sieve(limit):
    is_p = [False, False] + [True] * (limit - 2)
    for p in range(2, int(limit**0.5) + 1):
        if is_p[p]:
            for q in range(p * p, limit, p):
                is_p[q] = False
    return is_p


def test_evaluate_examples():
    assert evaluate(AND2, "11") == (1, [1, 1, 1])
    assert evaluate(AND2, [1, 0])[0] == 0
    assert evaluate(Circuit(1, 0, ((CONST1, 0, 0),)), [])[0] == 1
    with pytest.raises(InvalidCircuit):
        evaluate(AND2, "1")
    with pytest.raises(ValueError):
        evaluate(AND2, "12")


def test_invalid_circuits():
    assert not Circuit(2, 1, ((INPUT, 0, 0), (AND, 0, 1))).is_valid
    assert not Circuit(2, 1, ((INPUT, 0, 0), (NOT, 0, 1))).is_valid
    assert not Circuit(1, 1, ((AND, 0, 0),)).is_valid
    assert not Circuit(0, 0, ()).is_valid


def test_evaluate_numbers():
    # bits of (2, 2) at widths (2, 2), LSB first, are 0101: (0 and 1) or (0 and 1)
    assert evaluate_numbers(GE3, [2, 2], [2, 2]) == 0
    assert evaluate_numbers(GE3, [3, 0], [2, 2]) == 1
    with pytest.raises(WidthOverflow):
        evaluate_numbers(GE3, [4, 0], [2, 2])


def test_batch_matches_single_evaluation():
    rng = random.Random(61)
    for _ in range(200):
        c = random_circuit(rng, 10, 4)
        table = truth_table(c)
        for a in range(1 << c.n):
            bits = [(a >> i) & 1 for i in range(c.n)]
            assert (table >> a) & 1 == evaluate(c, bits)[0]


def test_evaluate_batch_columns_checked():
    with pytest.raises(InvalidCircuit):
        evaluate_batch(AND2, [1], 1)


def test_builder_comparisons():
    cb = CircuitBuilder(4)
    bits = cb.inputs()
    out = cb.and_(cb.ge_const(bits, 5), cb.lt_const(bits, 11))
    c = cb.finish(out)
    for a in range(16):
        assert evaluate_numbers(c, [a], [4]) == (5 <= a < 11)


def test_prime_circuit_exhaustive_small():
    is_p = _sieve(1 << 12)
    for n in (1, 2):
        c = prime_circuit(n)
        m = 3 * (n + 1)
        table = truth_table(c)
        for b in range(1 << n):
            for a in range(1 << m):
                want = is_p[a] and b**3 <= a < (b + 1) ** 3
                assert (table >> (a | (b << m))) & 1 == want


def test_prime_circuit_sampled_width_three():
    c = prime_circuit(3)
    is_p = _sieve(1 << 12)
    rng = random.Random(62)
    for _ in range(10_000):
        b = rng.randrange(8)
        a = rng.randrange(b**3, (b + 1) ** 3) if rng.random() < 0.5 else rng.randrange(1 << 12)
        want = is_p[a] and b**3 <= a < (b + 1) ** 3
        assert evaluate_numbers(c, [a, b], [12, 3]) == want


def test_prime_circuit_cap():
    with pytest.raises(WidthCapExceeded):
        prime_circuit(5)


def test_primes_below():
    assert primes_below(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_below(2) == []


def test_expand_succinct_round_trip():
    tree = Circuit(4, 0, ((CONST1, 0, 0), (NOT, 0, 0), (OR, 0, 1), (AND, 2, 0)))
    d = describer_from_circuit(tree, 2)
    assert expand_succinct(d, 4) == tree
    assert d.query(AND, 3, 2, 0) == 1 and d.query(OR, 3, 2, 0) == 0


def test_expand_succinct_pads_with_output_copies():
    d = describer_from_circuit(AND2, 2)
    c = expand_succinct(d, 8)
    assert c.r == 4 and c.gates[3] == (OR, 2, 2)
    for w in ("00", "01", "10", "11"):
        assert evaluate(c, w)[0] == evaluate(AND2, w)[0]


def test_expand_succinct_errors():
    d = describer_from_circuit(AND2, 2)
    with pytest.raises(SizeExceeded):
        expand_succinct(d, 3)
    # A describer that accepts everything describes no gate uniquely.
    cb = CircuitBuilder(9)
    everything = SuccinctCircuit(cb.finish(cb.one()), 2)
    with pytest.raises(IllFormedDescriber):
        described_gates(everything, 4)
    with pytest.raises(InvalidCircuit):
        SuccinctCircuit(AND2, 2)
