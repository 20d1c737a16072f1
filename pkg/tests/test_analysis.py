import numpy as np
import pytest
from hypothesis import given, strategies as st

from peanocurve.analysis import (box_dim, dimension_report, empirical_modulus, estimate_sdim,
                                 fit_power_law, holder_bound, verify_certificate)
from peanocurve.assembler import ModulusSpec, assemble
from peanocurve.continuum import interval, sierpinski_carpet, sierpinski_gasket, square
from peanocurve.covers import SierpinskiTable, TableRow, sierpinski_table
from peanocurve.errors import DivergentSeries, InsufficientLevels
from peanocurve.paths import ParamCurve

import oracles


def table(values):
    return SierpinskiTable(tuple(TableRow(n, v, v, False) for n, v in enumerate(values)))


def test_box_dim_interval():
    assert box_dim(interval(129), 6) == pytest.approx(1.0, abs=0.15)
    assert box_dim(interval(1), 4) == 0.0


def test_sdim_examples():
    X = interval(129)
    assert estimate_sdim(sierpinski_table(X, 6)) == pytest.approx(1.0, abs=0.15)
    assert estimate_sdim(table([1, 1, 1, 1])) == 0.0
    with pytest.raises(InsufficientLevels):
        estimate_sdim(table([1, 2]))


def test_sdim_duplicate_rows_stable():
    tab = table([1, 3, 8, 20, 55])
    dup = SierpinskiTable(tab.entries + (tab.entries[-1],) * 3)
    assert estimate_sdim(dup) == estimate_sdim(tab)


def test_holder_bound_closed_form():
    assert holder_bound(1, 1, 4) == pytest.approx(134217728 / 21, rel=1e-12)
    with pytest.raises(DivergentSeries):
        holder_bound(1, 1, 2)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.2, 2.0), st.floats(0.01, 3))
def test_holder_bound_monotone(C1, C2, r, gap):
    a = 2 * r + gap
    lo, hi = sorted((C1, C2))
    assert holder_bound(lo, r, a) <= holder_bound(hi, r, a)
    # the 2^(6 alpha) prefactor grows with alpha; the remaining series factor decreases
    assert holder_bound(lo, r, a + 0.5) / 2 ** (6 * (a + 0.5)) <= holder_bound(lo, r, a) / 2 ** (6 * a)


def test_empirical_modulus_simple():
    X = interval(5)
    const = ParamCurve(3.0, [0.0, 1.0, 3.0], [2, 2, 2])
    mt = empirical_modulus(const, X, [0.5, 1, 2, 3])
    assert mt.omega_hat.tolist() == [0, 0, 0, 0]
    two = ParamCurve(2.0, [0.0, 2.0], [0, 4])
    mt = empirical_modulus(two, X, [1.0, 1.9, 2.0, 5.0])
    assert mt.omega_hat.tolist() == [0, 0, 1.0, 1.0]
    assert "t,omega_hat,omega_allowed" in mt.to_csv(ModulusSpec.power(1))


@given(st.lists(st.floats(0.01, 5), min_size=1, max_size=25), st.data())
def test_empirical_modulus_matches_bruteforce(steps, data):
    X = square(4)
    t = np.concatenate([[0.0], np.cumsum(steps)])
    cells = data.draw(st.lists(st.integers(0, 15), min_size=len(t), max_size=len(t)))
    curve = ParamCurve(float(t[-1]), t, cells)
    grid = np.unique(np.round(np.linspace(0.01, t[-1] + 1, 30), 6))
    mt = empirical_modulus(curve, X, grid)
    for g, w in zip(grid, mt.omega_hat):
        exp = max((oracles.pair_dist(X, cells[i], cells[j]) for i in range(len(t))
                   for j in range(i + 1, len(t)) if t[j] - t[i] <= g), default=0.0)
        assert w == pytest.approx(exp)
    assert np.all(np.diff(mt.omega_hat) >= 0)


def test_verify_certificate_pass_and_fail():
    X = sierpinski_carpet(2)
    om = ModulusSpec.power(4)
    hc = assemble(X, om, 5)
    assert verify_certificate(hc.curve, X, om).passed
    assert verify_certificate(hc.curve, X, om, grid=np.linspace(0.5, 50, 200)).passed
    half = ModulusSpec.power(4, 0.5)
    assert verify_certificate(hc.curve, X, half).passed  # gaps are wide at this scale
    half = ModulusSpec.power(4, 0.01)
    rep = verify_certificate(hc.curve, X, half)
    assert not rep.passed and rep.worst_ratio > 1 and rep.worst_pair is not None
    rep = verify_certificate(hc.curve, X, half, grid=np.linspace(0.5, 50, 200))
    assert not rep.passed and rep.worst_pair["distance"] > rep.worst_pair["omega"]
    const = ParamCurve(1.0, [0.0, 1.0], [3, 3])
    assert verify_certificate(const, X, half).passed


@pytest.mark.parametrize("X", [interval(129), square(16), sierpinski_carpet(2),
                               sierpinski_carpet(3), sierpinski_gasket(4), sierpinski_gasket(5)],
                         ids=lambda X: X.name)
def test_box_below_sdim(X):
    rep = dimension_report(X)
    assert rep.box_dim <= rep.s_dim + 0.1
    assert rep.holder_upper == 2 * rep.s_dim


def test_power_law_fit_dominates_table():
    tab = sierpinski_table(sierpinski_carpet(2), 4)
    C, r = fit_power_law(tab)
    for n in range(1, 5):
        assert tab.upper(n) <= C * 2 ** (r * n) * (1 + 1e-12)
