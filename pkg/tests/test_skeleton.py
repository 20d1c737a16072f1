import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from peanocurve.continuum import interval, sierpinski_carpet, sierpinski_gasket, square
from peanocurve.covers import raw_covers
from peanocurve.errors import DegenerateSpace
from peanocurve.skeleton import build_skeleton

import oracles


def make(X, N=None, base=3.0):
    N = N or X.resolution_level() + 1
    raw = raw_covers(X, N)
    eps = [base ** -n for n in range(N + 1)]
    return build_skeleton(X, raw, eps), raw


def test_degenerate():
    X = interval(1)
    with pytest.raises(DegenerateSpace):
        build_skeleton(X, raw_covers(X, 2), [1, 0.5, 0.25])


def test_length_and_endpoints():
    X = interval(17)
    sk, raw = make(X)
    assert sk.t[0] == 0.0 and sk.t[-1] == sk.s
    expected = sum(len(raw[n]) * sk.epsilons[n] for n in range(1, sk.N + 1))
    assert sk.s == pytest.approx(expected, rel=1e-12)
    assert np.all(np.diff(sk.t) > 0)
    assert len(sk.gaps()) == len(sk.t) - 1


def test_json_shape():
    sk, _ = make(sierpinski_carpet(1))
    doc = json.loads(sk.to_json())
    assert set(doc) >= {"points", "gaps", "s"}
    assert set(doc["gaps"][0]) == {"u", "v", "level", "connector_cells"}


@pytest.mark.parametrize("sk_space", [interval(9), sierpinski_carpet(1), square(4)])
def test_retractions(sk_space):
    sk, _ = make(sk_space, N=3)
    for node in sk.nodes:
        level = node[0]
        for n in range(level, sk.N + 1):
            assert sk.retraction(node, n) == sk.rep(node)
        for n in range(level):
            r = sk.retraction(node, n)
            walk = sk.lineage(node)[: level - n + 1]
            assert r == sk.rep(walk[-1])
            U = frozenset().union(*(sk.part(z) for z in walk))
            assert {r, sk.rep(node)} <= U and oracles.connected(sk_space, U)
            assert oracles.set_diam(sk_space, U) < 2 * 2.0 ** (-n + 1)


@pytest.mark.parametrize("X", [interval(9), interval(17), sierpinski_carpet(1), square(4),
                               sierpinski_gasket(3)])
def test_order_conditions(X):
    sk, _ = make(X)
    pos = {node: i for i, node in enumerate(sk.nodes)}
    for node in sk.nodes:
        if node[0] == 0:
            continue
        parent = sk.lineage(node)[1]
        assert pos[node] < pos[parent]  # x precedes its retraction
    # the children of a node are contiguous with their subtrees, right before it
    for node in sk.nodes:
        if node[0] == 0:
            continue
        parent = sk.lineage(node)[1]
        between = sk.nodes[pos[node] + 1:pos[parent]]
        assert all(parent in sk.lineage(z) for z in between)


spaces = st.sampled_from([interval(9), interval(17), sierpinski_carpet(1), square(4),
                          sierpinski_gasket(3), sierpinski_carpet(2)])


@given(spaces, st.sampled_from([2.0, 3.0, 5.0]))
def test_gap_bounds(X, base):
    sk, _ = make(X, base=base)
    eps = sk.epsilons
    assert not oracles.level_violations(X, sk.t, sk.cells, eps, 4, range(1, sk.N + 1))
    for g in sk.gaps():
        assert g.v - g.u == eps[g.level]
        assert set(g.endpoints) <= g.connector_set
        assert oracles.connected(X, g.connector_set)
        assert oracles.set_diam(X, g.connector_set) <= 8 * 2.0 ** -g.level + 1e-12
