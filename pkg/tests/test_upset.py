import random

import pytest

from presburger.decide import Decider
from presburger.encodings import gen_hard_family
from presburger.errors import NotSigmaOne
from presburger.parsing import parse_formula as P
from presburger.upset import (
    EMPTY,
    UPSet,
    equal,
    lcm_range,
    member,
    normalize,
    parse_upset,
    union,
    union_all,
    upset_of,
)

EVENS = UPSet(0, 2, set(), {0})


def test_member_examples():
    u = UPSet(8, 1, {0, 3, 5, 6}, {0})
    assert not member(u, 4)
    assert member(EVENS, 10)
    assert not any(member(EMPTY, a) for a in range(50))


def test_invariants_enforced():
    with pytest.raises(ValueError):
        UPSet(0, 1, {0}, set())
    with pytest.raises(ValueError):
        UPSet(2, 3, set(), {3})
    with pytest.raises(ValueError):
        UPSet(0, 0, set(), set())


def test_normalize_examples():
    assert normalize(UPSet(0, 12, set(), {0, 2, 4, 6, 8, 10})) == EVENS
    assert normalize(UPSet(5, 3, {0, 1, 2, 3, 4}, {0, 1, 2})) == UPSet(0, 1, set(), {0})
    assert normalize(UPSet(0, 1, set(), set())) == EMPTY


def _random_upset(rng):
    t = rng.randint(0, 8)
    p = rng.randint(1, 12)
    return UPSet(t, p, {b for b in range(t) if rng.random() < 0.4}, {r for r in range(p) if rng.random() < 0.4})


def test_normalize_properties():
    rng = random.Random(51)
    for _ in range(300):
        u = _random_upset(rng)
        n = normalize(u)
        assert normalize(n) == n
        assert equal(u, n)
        assert n.p <= u.p or not u.R


def test_union_examples():
    thirds = UPSet(0, 3, set(), {0})
    assert union(EVENS, thirds) == UPSet(0, 6, set(), {0, 2, 3, 4})
    assert union(EVENS, EMPTY) == normalize(EVENS)
    got = union(UPSet(3, 1, set(), {0}), UPSet(1, 1, {0}, set()))
    assert [a for a in range(10) if member(got, a)] == [0, 3, 4, 5, 6, 7, 8, 9]


def test_union_algebra():
    rng = random.Random(52)
    for _ in range(200):
        a, b, c = (_random_upset(rng) for _ in range(3))
        assert equal(union(a, b), union(b, a))
        assert equal(union(union(a, b), c), union(a, union(b, c)))
        assert equal(union(a, a), a)
        for x in range(60):
            assert member(union(a, b), x) == (member(a, x) or member(b, x))


def test_equal_examples():
    assert equal(EVENS, UPSet(2, 2, {0}, {0}))
    assert not equal(EVENS, UPSet(0, 2, set(), {1}))


def test_text_form_round_trip():
    u = UPSet(8, 1, {0, 3, 5, 6}, {0})
    assert str(u) == "U(t=8, p=1, B={0,3,5,6}, R={0})"
    assert parse_upset(str(u)) == u
    assert parse_upset(str(EMPTY)) == EMPTY
    with pytest.raises(ValueError):
        parse_upset("U(8, 1)")


def test_lcm_range():
    assert lcm_range(1, 9) == 2520
    assert 2**9 <= lcm_range(1, 9) <= 2**18
    assert lcm_range(1, 7) == 420
    assert lcm_range(5, 5) == 5


def test_upset_of_examples():
    assert upset_of(P("exists y. x = 2*y"), "x") == EVENS
    assert upset_of(P("x >= 3"), "x") == UPSet(3, 1, set(), {0})
    assert upset_of(gen_hard_family(2), "x") == UPSet(0, 6, set(), {0, 2, 3, 4})


def test_upset_of_rejects_other_shapes():
    with pytest.raises(NotSigmaOne):
        upset_of(P("forall y. x < y"), "x")
    with pytest.raises(NotSigmaOne):
        upset_of(P("x < y"), "x")
    with pytest.raises(NotSigmaOne):
        upset_of(P("exists y. forall z. x + y < z"), "x")


PIPELINE = [
    "exists y. x = 2*y",
    "exists y z. x = 3*y + 5*z",
    "exists y. x = 4*y + 1 \\/ x = 6*y + 3",
    "exists y. x < 7 /\\ x = 2*y + 1",
    "exists y z. x = 6*y + 10*z + 1 /\\ x > 20",
    "exists y. 2*x = 3*y + 1",
    "x > 4 /\\ !(x = 9)",
    "exists y. 3*x + 2 = 7*y \\/ x < 2",
]


@pytest.mark.parametrize("text", PIPELINE)
def test_pipeline_soundness(text):
    phi = P(text)
    u = upset_of(phi, "x")
    check = Decider(phi)
    for a in range(u.t + 3 * u.p + 5):
        assert member(u, a) == check({"x": a})


def test_union_all_empty():
    assert union_all([]) == EMPTY
