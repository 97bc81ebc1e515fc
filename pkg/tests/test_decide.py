import itertools
import random

import pytest

from presburger.corpus import random_matrix, random_sentence
from presburger.decide import (
    DecideConfig,
    Decider,
    decide,
    decide_innermost_exists,
    decide_with_info,
    weispfenning_bound,
    weispfenning_exponent,
)
from presburger.errors import BoundTooLarge, PreconditionViolated
from presburger.formula import Not, bounded_eval
from presburger.normalize import to_prenex
from presburger.parsing import parse_formula as P


def test_weispfenning_values():
    assert weispfenning_bound(1, 1, 2, 1) == 256
    assert weispfenning_bound(1, 1, 1, 1) == 2
    with pytest.raises(BoundTooLarge) as info:
        weispfenning_bound(2, 2, 10, 1)
    assert info.value.bits == 10**36
    assert weispfenning_exponent(1, 2, 3, 2, 1 << 20) == 2 * 3**6


def test_weispfenning_absurd_exponent_is_described():
    with pytest.raises(BoundTooLarge) as info:
        weispfenning_bound(6, 5, 500, 1)
    assert info.value.bits is None and "500^(15^6)" in str(info.value)


def test_config_validation():
    with pytest.raises(ValueError):
        DecideConfig(weispfenning_c=0)
    with pytest.raises(ValueError):
        DecideConfig(dnf_cap=0)
    with pytest.raises(ValueError):
        DecideConfig(bound_override=-1)


def test_innermost_examples():
    assert decide_innermost_exists(P("x < 3 /\\ !(x < 1)"), {}, ["x"])
    assert not decide_innermost_exists(P("x + x = 5"), {}, ["x"])
    assert not decide_innermost_exists(P("x < y"), {"y": 0}, ["x"])
    with pytest.raises(ValueError):
        decide_innermost_exists(P("x < y"), {}, ["x"])


def test_innermost_witnesses_are_unbounded():
    assert decide_innermost_exists(P("x = 1000003*y + 17 /\\ x > 5000000"), {}, ["x", "y"])


def test_decide_examples():
    assert decide(P("exists x. forall y. x <= y"))
    assert not decide(P("exists x. forall y. y < x"), DecideConfig(bound_override=8))
    assert decide(P("forall x. exists y. y = x + 1"), DecideConfig(bound_override=8))


def test_verdict_metadata():
    v = decide_with_info(P("forall x. exists y. y = x + 1"), DecideConfig(bound_override=5))
    assert (v.valid, v.blocks, v.bound, v.relative) == (True, 2, 5, True)
    v = decide_with_info(P("exists x. 2*x = 6"))
    assert (v.valid, v.blocks, v.relative) == (True, 1, False)
    v = decide_with_info(P("exists x. forall y. x <= y"))
    assert v.valid and v.bound_bits is not None and not v.relative


def test_decide_requires_sentence():
    with pytest.raises(PreconditionViolated):
        decide(P("x < 1"))


def test_default_bound_too_large():
    with pytest.raises(BoundTooLarge):
        decide(P("exists x. forall y. exists z. x + y < z /\\ 3*z < 7*x + 11*y"))


def test_decider_reuses_preparation():
    d = Decider(P("exists y. x = 3*y"))
    assert [a for a in range(12) if d({"x": a})] == [0, 3, 6, 9]
    with pytest.raises(PreconditionViolated):
        d({})


def test_innermost_agrees_with_enumeration():
    # Coefficients and constants are small, so witnesses lie in a small box.
    rng = random.Random(41)
    for _ in range(600):
        phi = random_matrix(rng, ["u", "x", "y"], 3, 5, depth=3)
        a = {"u": rng.randint(0, 5)}
        inner = ["x", "y"]
        got = decide_innermost_exists(phi, a, inner)
        want = any(
            bounded_eval(phi, {**a, "x": x, "y": y}, 0) for x, y in itertools.product(range(40), repeat=2)
        )
        assert got == want


def test_duality():
    rng = random.Random(42)
    cfg = DecideConfig(bound_override=6)
    for _ in range(100):
        phi = random_sentence(rng, 2, 2)
        neg = to_prenex(Not(phi))
        assert decide(phi, cfg) != decide(neg, cfg)


def test_sigma1_results_do_not_depend_on_the_bound():
    rng = random.Random(43)
    for _ in range(60):
        phi = random_sentence(rng, 1, 3, 4, 4, leading="exists")
        assert decide(phi, DecideConfig(bound_override=0)) == decide(phi, DecideConfig(bound_override=50))
