import pytest
from hypothesis import given, strategies as st

from peanocurve.continuum import interval, is_connected, sierpinski_carpet, sierpinski_gasket, square
from peanocurve.covers import (SierpinskiTable, build_nested, exact_min_cover, greedy_cover,
                               packing_lower, raw_covers, sierpinski_table, star_saturate)
from peanocurve.errors import BudgetExceeded

import oracles


def test_spec_examples():
    assert len(greedy_cover(interval(5), 0.5)) == 2
    assert len(exact_min_cover(interval(5), 0.5)) == 2
    assert len(exact_min_cover(interval(3), 0.0)) == 3
    assert len(exact_min_cover(square(2), 0.71)) == 2
    assert len(greedy_cover(interval(5), 1.0)) == 1
    assert len(greedy_cover(interval(5), 0.0)) == 5


def test_budget():
    with pytest.raises(BudgetExceeded):
        exact_min_cover(interval(30), 0.5)


def _check_cover(X, cov, eps, closed):
    seen = set()
    for P in cov.parts:
        assert P and is_connected(X, P)
        assert oracles.set_diam(X, P) <= eps + 1e-12
        seen |= P
    assert seen == set(X.cells)
    if closed and cov.closed:
        for i, j in X.edges:
            assert any(i in P and j in P for P in cov.parts)


small = st.sampled_from([interval(4), interval(6), square(2), square(3),
                         sierpinski_carpet(1), sierpinski_gasket(2)])


@given(small, st.floats(0.0, 1.2), st.booleans())
def test_exact_matches_bruteforce(X, eps, closed):
    cov = exact_min_cover(X, eps, closed=closed)
    _check_cover(X, cov, eps, closed)
    expected = oracles.min_cover_size(X, eps, closed=closed and cov.closed)
    assert len(cov) == expected


@given(small, st.floats(0.0, 1.2), st.booleans())
def test_greedy_is_valid_upper_bound(X, eps, closed):
    cov = greedy_cover(X, eps, closed=closed)
    _check_cover(X, cov, eps, closed)
    assert len(cov) >= len(exact_min_cover(X, eps, closed=closed))
    assert packing_lower(X, eps) <= len(exact_min_cover(X, eps))


@given(small, st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_exact_monotone_in_eps(X, e1, e2):
    lo, hi = sorted((e1, e2))
    assert len(exact_min_cover(X, hi)) <= len(exact_min_cover(X, lo))


@pytest.mark.parametrize("X", [interval(5), interval(33), square(8), sierpinski_carpet(2)])
def test_table_invariants(X):
    tab = sierpinski_table(X, 6)
    assert tab.entries[0].upper == 1
    ups = [r.upper for r in tab.entries]
    assert ups == sorted(ups)
    for r in tab.entries:
        assert r.lower <= r.upper
        if r.exact:
            assert r.lower == r.upper
    assert SierpinskiTable.from_csv(tab.to_csv()) == tab
    assert tab.to_csv().splitlines()[0] == "n,epsilon,lower,upper,exact"


def test_table_interval5_level1_exact():
    row = sierpinski_table(interval(5), 3).entries[1]
    assert row.exact and row.upper == 2


def test_star_saturate_examples():
    X = interval(9)
    raw = raw_covers(X, 3)
    full = frozenset(X.cells)
    assert star_saturate(X, raw, full, 1) == full
    for n in range(1, 4):
        for a in X.cells:
            for b in range(a, min(a + 3, X.n)):
                A = frozenset(range(a, b + 1))
                R = star_saturate(X, raw, A, n)
                assert is_connected(X, R)
                assert oracles.set_diam(X, R) <= oracles.set_diam(X, A) + 4 * 2.0 ** -n + 1e-12


sat_space = st.sampled_from([interval(9), square(3), sierpinski_carpet(1), sierpinski_gasket(2)])


@given(sat_space, st.data())
def test_star_saturate_monotone_and_composes(X, data):
    N = 3
    raw = raw_covers(X, N)
    A = frozenset(data.draw(st.lists(st.integers(0, X.n - 1), min_size=1, max_size=3)))
    B = A | frozenset(data.draw(st.lists(st.integers(0, X.n - 1), max_size=3)))
    n = data.draw(st.integers(1, N))
    assert star_saturate(X, raw, A, n) <= star_saturate(X, raw, B, n)
    m = data.draw(st.integers(n + 1, N + 1))
    partial = star_saturate(X, raw[:m], A, n)  # levels n..m-1
    assert star_saturate(X, raw, partial, m) == star_saturate(X, raw, A, n)


@pytest.mark.parametrize("X", [interval(9), interval(17), square(4), sierpinski_carpet(1),
                               sierpinski_gasket(3)])
def test_build_nested_conditions(X):
    N = 4
    nest = build_nested(X, N)
    tab = sierpinski_table(X, N)
    assert nest.levels[0].parts == (frozenset(X.cells),)
    for n, C in enumerate(nest.levels):
        assert len(C) <= tab.upper(n)
        assert C.mesh <= 3 * 2.0 ** -n + 1e-12
        for P in C.parts:
            assert oracles.connected(X, P)
    for n in range(1, N + 1):
        for M, kids in zip(nest.levels[n - 1].parts, nest.refinement[n - 1]):
            assert frozenset().union(*(nest.levels[n].parts[k] for k in kids)) == M
