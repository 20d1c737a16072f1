import numpy as np
import pytest
from hypothesis import given, strategies as st

from peanocurve.continuum import (diameter, generate, interval, is_connected, load_bitmap,
                                  neighborhood, shortest_path_within, sierpinski_carpet,
                                  sierpinski_gasket, square)
from peanocurve.errors import Disconnected, Empty
from peanocurve.pnm import parse_pnm, read_pnm, write_pgm

import oracles


def test_interval_shape():
    X = interval(5)
    assert X.n == 5 and len(X.edges) == 4
    assert diameter(X, X.cells) == pytest.approx(1.0, abs=1e-12)


def test_carpet_and_square():
    assert sierpinski_carpet(1).n == 8
    assert is_connected(sierpinski_carpet(1), range(8))
    X = square(2)
    assert X.n == 4 and len(X.edges) == 4
    assert diameter(X, X.cells) == pytest.approx(1.0)


@pytest.mark.parametrize("shape,param,count", [
    ("interval", 7, 7), ("square", 4, 16), ("carpet", 2, 64), ("gasket", 3, 27)])
def test_generated_diameter_is_one(shape, param, count):
    X = generate(shape, param)
    assert X.n == count
    assert diameter(X, X.cells) == pytest.approx(1.0, abs=1e-12)
    assert is_connected(X, X.cells)


def test_singleton():
    X = interval(1)
    assert X.n == 1 and diameter(X, [0]) == 0.0
    assert sierpinski_carpet(0).n == 1 and sierpinski_gasket(0).n == 1


def test_diameter_small_sets():
    X = interval(5)
    assert diameter(X, [2]) == 0.0
    assert diameter(X, []) == 0.0
    assert diameter(X, [1, 2]) == pytest.approx(0.25)


def test_neighborhood_examples():
    X = interval(5)
    assert neighborhood(X, {0}, 0.25) == {0, 1}
    assert neighborhood(X, {2}, 0.0) == {2}
    assert neighborhood(X, {0}, 0.25, closed=False) == {0}
    assert neighborhood(X, {3}, 1.0) == set(range(5))


def test_is_connected_cases():
    X = interval(5)
    assert is_connected(X, {3})
    assert not is_connected(X, {0, 2})
    assert not is_connected(X, set())


def test_bitmap_loading():
    X = load_bitmap(np.array([[255, 255, 255]]))
    assert X.n == 3 and len(X.edges) == 2
    with pytest.raises(Disconnected):
        load_bitmap(np.array([[255, 0, 255]]))
    with pytest.raises(Empty):
        load_bitmap(np.zeros((3, 3)))


def test_pnm_roundtrip(tmp_path):
    img = np.zeros((4, 5), dtype=np.uint8)
    img[1, :] = 200
    img[:, 2] = 200
    path = tmp_path / "cross.pgm"
    write_pgm(path, img)
    assert np.array_equal(read_pnm(path), img)
    X = load_bitmap(str(path))
    assert X.n == 8


def test_pbm_ascii():
    data = b"P1\n# comment\n3 2\n1 1 1\n0 1 0\n"
    arr = parse_pnm(data)
    assert arr.shape == (2, 3) and arr[0, 0] == 255 and arr[1, 0] == 0
    assert load_bitmap(arr).n == 4


def test_pbm_binary():
    data = b"P4\n3 1\n" + bytes([0b11100000])
    assert parse_pnm(data).tolist() == [[255, 255, 255]]


def test_shortest_path_within():
    X = interval(6)
    assert shortest_path_within(X, range(6), 1, 4) == [1, 2, 3, 4]
    with pytest.raises(Disconnected):
        shortest_path_within(X, {0, 1, 3}, 0, 3)


spaces = st.sampled_from([interval(9), square(4), sierpinski_carpet(1), sierpinski_gasket(3)])


@given(spaces, st.data())
def test_triangle_inequality(X, data):
    i, j, k = (data.draw(st.integers(0, X.n - 1)) for _ in range(3))
    assert X.dist(i, k) <= X.dist(i, j) + X.dist(j, k) + 1e-12


@given(spaces, st.data(), st.floats(0, 1), st.floats(0, 1))
def test_neighborhood_monotone(X, data, e1, e2):
    A = set(data.draw(st.lists(st.integers(0, X.n - 1), min_size=1, max_size=4)))
    lo, hi = sorted((e1, e2))
    assert neighborhood(X, A, lo) <= neighborhood(X, A, hi)
    assert neighborhood(X, A, lo, closed=False) <= neighborhood(X, A, lo)
    assert A <= neighborhood(X, A, 0.0)


@given(spaces, st.data())
def test_union_of_overlapping_connected_sets(X, data):
    a, b = data.draw(st.integers(0, X.n - 1)), data.draw(st.integers(0, X.n - 1))
    c = data.draw(st.integers(0, X.n - 1))
    P = set(shortest_path_within(X, X.cells, a, c))
    Q = set(shortest_path_within(X, X.cells, c, b))
    assert is_connected(X, P | Q)
    assert oracles.connected(X, P | Q)
