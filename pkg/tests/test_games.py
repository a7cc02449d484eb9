from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transcost.errors import CapExceededError, ShapeMismatchError, SolverError, ValidationError
from transcost.games import BimatrixGame, best_response_slack, game_from_lists, mixed_equilibria, pure_equilibria


def brute_pure(A, B):
    n, m = len(A), len(A[0])
    out = []
    for i in range(n):
        for j in range(m):
            if all(A[i][j] <= A[k][j] for k in range(n)) and all(B[i][j] <= B[i][k] for k in range(m)):
                out.append((i, j))
    return out


def deviation_gain(A, B, p, q):
    n, m = len(A), len(A[0])
    v1 = sum(p[i] * q[j] * A[i][j] for i in range(n) for j in range(m))
    v2 = sum(p[i] * q[j] * B[i][j] for i in range(n) for j in range(m))
    r1 = min(sum(q[j] * A[i][j] for j in range(m)) for i in range(n))
    r2 = min(sum(p[i] * B[i][j] for i in range(n)) for j in range(m))
    return max(v1 - r1, v2 - r2)


@st.composite
def games(draw, max_n=6, max_m=6, hi=6):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    cell = st.integers(0, hi).map(Fraction)
    A = [[draw(cell) for _ in range(m)] for _ in range(n)]
    B = [[draw(cell) for _ in range(m)] for _ in range(n)]
    return A, B


def test_prisoners_dilemma_costs():
    A = [[1, 3], [0, 2]]
    B = [[1, 0], [3, 2]]
    assert pure_equilibria(game_from_lists(A, B)) == [(1, 1)]


def test_matching_pennies_has_only_mixed():
    A = [[0, 1], [1, 0]]
    B = [[1, 0], [0, 1]]
    g = game_from_lists(A, B)
    assert pure_equilibria(g) == []
    rep = mixed_equilibria(g)
    assert [(m.p, m.q) for m in rep.mixed] == [((Fraction(1, 2),) * 2, (Fraction(1, 2),) * 2)]


def test_one_by_one():
    g = game_from_lists([[Fraction(3)]], [[Fraction(4)]])
    rep = mixed_equilibria(g)
    assert rep.pure == ((0, 0),)
    (prof,) = rep.mixed
    assert prof.p == (1,) and prof.q == (1,) and prof.total == 7


def test_ties_are_all_equilibria():
    g = game_from_lists([[1, 1], [1, 1]], [[2, 2], [2, 2]])
    assert pure_equilibria(g) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_cap():
    g = game_from_lists([[0] * 9] * 2, [[0] * 9] * 2)
    with pytest.raises(CapExceededError):
        mixed_equilibria(g, cap=8)
    assert mixed_equilibria(g, cap=9).mixed


def test_masked_game_rejected_by_mixed_solver():
    g = BimatrixGame([[1, None]], [[1, None]], allowed={(0, 0)})
    assert pure_equilibria(g) == [(0, 0)]
    with pytest.raises(SolverError):
        mixed_equilibria(g)


def test_masked_best_replies_skip_disallowed():
    g = BimatrixGame([[5, None], [1, 0]], [[5, None], [2, 9]], allowed={(0, 0), (1, 0), (1, 1)})
    # row 0 has only column 0 available, so (0,0) is not beaten by Player 2
    assert pure_equilibria(g) == [(1, 0)]


@pytest.mark.parametrize(
    "A, B, exc",
    [
        ([[1, 2]], [[1]], ShapeMismatchError),
        ([], [], ShapeMismatchError),
        ([[float("inf")]], [[1]], ValidationError),
    ],
)
def test_game_validation(A, B, exc):
    with pytest.raises(exc):
        game_from_lists(A, B)


def test_degenerate_game_uses_lp_fallback():
    # Player 2 is indifferent everywhere; every support pair is singular or
    # degenerate, but equilibria still exist.
    A = [[0, 1], [1, 0]]
    B = [[0, 0], [0, 0]]
    rep = mixed_equilibria(game_from_lists(A, B))
    assert rep.mixed
    for prof in rep.mixed:
        assert deviation_gain(A, B, prof.p, prof.q) <= 0


@settings(max_examples=300, deadline=None)
@given(games())
def test_pure_matches_brute_force(ab):
    A, B = ab
    assert pure_equilibria(game_from_lists(A, B)) == brute_pure(A, B)


@settings(max_examples=200, deadline=None)
@given(games(max_n=4, max_m=4, hi=5))
def test_mixed_profiles_verify_independently(ab):
    A, B = ab
    g = game_from_lists(A, B)
    rep = mixed_equilibria(g)
    assert rep.mixed, "a finite game always has an equilibrium"
    for prof in rep.mixed:
        assert all(x >= 0 for x in prof.p + prof.q)
        assert sum(prof.p) == 1 and sum(prof.q) == 1
        assert deviation_gain(A, B, prof.p, prof.q) <= 0
        assert best_response_slack(g, prof) <= 0


@settings(max_examples=100, deadline=None)
@given(games(max_n=3, max_m=3, hi=5))
def test_mixed_includes_strict_pure_equilibria(ab):
    A, B = ab
    rep = mixed_equilibria(game_from_lists(A, B))
    n, m = len(A), len(A[0])
    for i, j in brute_pure(A, B):
        strict = all(A[i][j] < A[k][j] for k in range(n) if k != i) and all(B[i][j] < B[i][k] for k in range(m) if k != j)
        if strict:
            assert any(p.support == ((i,), (j,)) for p in rep.mixed)


@settings(max_examples=100, deadline=None)
@given(games(max_n=4, max_m=4))
def test_mixed_is_deterministic(ab):
    A, B = ab
    assert mixed_equilibria(game_from_lists(A, B)) == mixed_equilibria(game_from_lists(A, B))


def test_float_game_mixed_within_tolerance():
    A = [[0.1, 0.7], [0.3, 0.2]]
    B = [[0.4, 0.1], [0.2, 0.6]]
    rep = mixed_equilibria(game_from_lists(A, B))
    for prof in rep.mixed:
        assert deviation_gain(A, B, prof.p, prof.q) <= 1e-9
