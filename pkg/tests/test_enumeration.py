import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import F2, PENTAGON, Z
from rdlab import (BackendMismatch, BudgetExceeded, FreeGroup, WeightedAbelianGroup, ball,
                   product_set, sphere)
from rdlab.enumeration import ProductTable


def test_free_ball_examples():
    assert [str(g) for g in ball(F2, 0)] == ["1"]
    assert len(ball(F2, 2)) == 17


def test_weighted_ball_example():
    assert len(ball(WeightedAbelianGroup((3, 3, 3)), 9)) == 63


def test_sphere_examples():
    s1 = sphere(F2, 1)
    assert {str(g) for g in s1} == {"a1", "a1^-1", "a2", "a2^-1"}
    assert len(sphere(F2, 3)) == 36
    assert len(sphere(WeightedAbelianGroup((2,)), 3)) == 0


@pytest.mark.parametrize("rank,r", [(1, 6), (2, 5), (3, 3)])
def test_free_ball_matches_bfs(rank, r):
    G = FreeGroup(rank)
    B = ball(G, r)
    bfs = O.free_ball_bfs(rank, r)
    assert len(B) == len(bfs)
    assert sorted(B.lengths) == sorted(bfs.values())
    for k in range(r + 1):
        assert len(B.shell(k)) == O.free_sphere_size(rank, k)


@pytest.mark.parametrize("weights,r", [((1, 1), 7), ((3, 3, 3), 12), ((1, 2, 5), 11),
                                       (("3/2", 1), 6), ((2,), 3)])
def test_weighted_ball_matches_brute_force(weights, r):
    G = WeightedAbelianGroup(weights)
    assert sorted(g.payload for g in ball(G, r)) == sorted(O.weighted_ball_brute(G.weights, r))


@pytest.mark.parametrize("rho", range(8))
def test_uniform_weight_ball_is_l1_ball(rho):
    assert len(ball(WeightedAbelianGroup((3, 3, 3)), 3 * rho)) == O.l1_ball_formula(3, rho)


def test_graph_product_ball_is_exhaustive():
    # every element of ball(4) should come from words of at most 4 syllables with exponents <= 3
    B = ball(PENTAGON, 4)
    found = set()
    syls = [(v, (e,)) for v in range(5) for e in (-3, -2, -1, 1, 2, 3)]
    frontier = [()]
    for _ in range(2):
        frontier = [w + (s,) for w in frontier for s in syls]
        for w in frontier:
            x = PENTAGON.reduce(w)
            if PENTAGON.len(x) <= 4:
                found.add(x)
    for s in syls:
        x = PENTAGON.reduce([s])
        if PENTAGON.len(x) <= 4:
            found.add(x)
    found.add(())
    assert {g.payload for g in B} == found
    assert [len(ball(PENTAGON, r)) for r in range(7)] == [1, 1, 11, 21, 91, 221, 731]


@pytest.mark.parametrize("group,r", [(F2, 4), (PENTAGON, 5), (WeightedAbelianGroup((1, 2)), 6)])
def test_ball_invariants(group, r):
    B = ball(group, r)
    assert all(g.length <= r for g in B)
    assert all(g.length == lg for g, lg in zip(B.elements, B.lengths))
    keys = [(lg, g.payload) for g, lg in zip(B.elements, B.lengths)]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    shells = sum(len(B.shell(t)) for t in B.attained_lengths())
    assert shells == len(B)
    sizes = [len(ball(group, t)) for t in range(r + 1)]
    assert sizes == sorted(sizes)
    assert all(B.within(t).elements == ball(group, t).elements for t in range(r + 1))


def test_budget_names_cap():
    with pytest.raises(BudgetExceeded) as e:
        ball(F2, 6, cap=100)
    assert e.value.cap == 100 and "100" in str(e.value)
    with pytest.raises(BudgetExceeded):
        ball(WeightedAbelianGroup((1, 1, 1)), 10, cap=50)


def test_negative_radius():
    with pytest.raises(ValueError):
        ball(F2, -1)


def test_product_set_examples():
    X = list(ball(F2, 2))
    assert product_set([F2.identity], X) == set(X)
    assert len(product_set([Z.vector(0), Z.vector(1)], [Z.vector(0), Z.vector(1)])) == 3
    s1 = list(sphere(F2, 1))
    prod = product_set(s1, s1)
    assert len(prod) == 13 and F2.identity in prod


def test_product_set_mismatch():
    with pytest.raises(BackendMismatch):
        product_set([F2.identity], [Z.identity])


@given(st.lists(st.sampled_from(list(ball(F2, 2))), min_size=1, max_size=6),
       st.lists(st.sampled_from(list(ball(F2, 2))), min_size=1, max_size=6))
def test_product_set_bounds(S, X):
    prod = product_set(S, X)
    assert len(prod) <= len(set(S)) * len(set(X))
    assert prod == {s * x for s in S for x in X}


def test_product_table_agrees():
    left, right = list(ball(F2, 2)), list(ball(F2, 1))
    T = ProductTable(left, right)
    for i, g in enumerate(left):
        for j, h in enumerate(right):
            assert T.target(int(T.table[i, j])) == g * h
