import itertools
import random

import pytest

from presburger.diophantine import (
    DiophantineSystem,
    LinearSet,
    find_solution,
    frobenius_number,
    is_feasible,
    minimal_solutions,
    pottier_bound,
    project_first,
    semilinear_of,
)
from presburger.errors import PreconditionViolated
from presburger.upset import UPSet, equal, member


def test_pottier_bound_values():
    assert pottier_bound(DiophantineSystem([[1]], [2])) == 25
    assert pottier_bound(DiophantineSystem([[0]], [0])) == 4


def test_pottier_bound_monotone():
    base = DiophantineSystem([[1, 2]], [3])
    assert pottier_bound(DiophantineSystem([[1, 3]], [3])) > pottier_bound(base)
    assert pottier_bound(DiophantineSystem([[1, 2]], [4])) > pottier_bound(base)
    assert pottier_bound(DiophantineSystem([[1, 2], [0, 1]], [3, 0])) > pottier_bound(base)


def test_feasibility_examples():
    assert is_feasible(DiophantineSystem([[2]], [3]))
    assert not is_feasible(DiophantineSystem([[1], [-1]], [1, 0]))
    S = DiophantineSystem([[1, 1], [-1, -1]], [3, -3])
    x = find_solution(S)
    assert x is not None and S.satisfied_by(x)


def test_feasibility_needs_integrality():
    # 2x - 2y = 1 has rational but no integer solutions
    assert not is_feasible(DiophantineSystem([[2, -2], [-2, 2]], [1, -1]))
    # x = 3y + 1 with 10 <= x <= 12 forces x = 10
    S = DiophantineSystem([[1, -3], [-1, 3], [1, 0], [-1, 0]], [1, -1, 10, -12])
    assert find_solution(S) == (10, 3)


def test_feasibility_with_large_coefficients():
    p = 1_000_003
    S = DiophantineSystem([[p, -p - 2], [-p, p + 2], [1, 0]], [1, -1, 1])
    x = find_solution(S)
    assert x is not None and S.satisfied_by(x)


def test_semilinear_examples():
    sl = semilinear_of(DiophantineSystem([[1]], [2]))
    assert [(ls.base, ls.periods) for ls in sl.components] == [((2,), ((1,),))]
    sl = semilinear_of(DiophantineSystem([[1, -2], [-1, 2]], [0, 0]))
    assert [(ls.base, set(ls.periods)) for ls in sl.components] == [((0, 0), {(2, 1)})]
    assert semilinear_of(DiophantineSystem([[1], [-1]], [1, 0])).is_empty


def test_members_within_matches_contains():
    ls = LinearSet((1, 0), ((2, 1), (0, 3)))
    inside = ls.members_within(9)
    assert inside == {x for x in itertools.product(range(10), repeat=2) if ls.contains(x)}
    assert LinearSet((11,), ((1,),)).members_within(10) == set()


def _random_system(rng, max_n=3, max_m=3, k=4):
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    A = [[rng.randint(-k, k) for _ in range(n)] for _ in range(m)]
    c = [rng.randint(-k, k) for _ in range(m)]
    return DiophantineSystem(A, c)


def test_semilinear_matches_direct_check():
    rng = random.Random(31)
    for _ in range(120):
        S = _random_system(rng)
        sl = semilinear_of(S)
        bound = pottier_bound(S)
        for ls in sl.components:
            for g in (ls.base,) + ls.periods:
                assert max(g, default=0) <= bound
        assert is_feasible(S) == (not sl.is_empty)
        for x in itertools.product(range(7), repeat=S.n):
            assert sl.contains(x) == S.satisfied_by(x)


def test_find_solution_matches_brute_force():
    rng = random.Random(32)
    for _ in range(400):
        S = _random_system(rng, 3, 4, 6)
        x = find_solution(S)
        if x is not None:
            assert S.satisfied_by(x)
        else:
            assert not any(S.satisfied_by(v) for v in itertools.product(range(12), repeat=S.n))


def test_minimal_solutions_of_equation():
    # x + y = 2z: minimal solutions (2,0,1), (1,1,1), (0,2,1)
    sols = minimal_solutions([[1, 1, -2]], 3)
    assert set(sols) == {(2, 0, 1), (1, 1, 1), (0, 2, 1)}


def test_project_first_examples():
    assert project_first(LinearSet((0,), ((3,), (5,)))) == UPSet(8, 1, {0, 3, 5, 6}, {0})
    got = project_first(LinearSet((0,), ((4,), (6,))))
    assert equal(got, UPSet(4, 2, {0}, {0}))
    assert project_first(LinearSet((7,), ())) == UPSet(8, 1, {7}, set())


def test_project_first_matches_enumeration():
    rng = random.Random(33)
    for _ in range(150):
        dim = rng.randint(1, 3)
        base = tuple(rng.randint(0, 6) for _ in range(dim))
        periods = tuple(
            p for p in (tuple(rng.randint(0, 7) for _ in range(dim)) for _ in range(rng.randint(0, 3))) if any(p)
        )
        u = project_first(LinearSet(base, periods))
        horizon = 3 * max(u.t, 1) + 3 * u.p + 20
        reach = {base[0]}
        firsts = [p[0] for p in periods]
        for a in range(horizon):
            if a in reach:
                for f in firsts:
                    reach.add(a + f)
        for a in range(horizon):
            assert member(u, a) == (a in reach)


def test_frobenius_numbers():
    assert frobenius_number({3, 5}) == 7
    assert frobenius_number({2, 3}) == 1
    with pytest.raises(PreconditionViolated):
        frobenius_number({2})
    with pytest.raises(PreconditionViolated):
        frobenius_number({1, 3})
