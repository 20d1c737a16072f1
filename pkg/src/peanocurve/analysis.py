"""Dimension estimates, empirical moduli and the closed-form parameter-length bound."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .continuum import TOL, Continuum
from .covers import SierpinskiTable, sierpinski_table
from .errors import DivergentSeries, InsufficientLevels
from .paths import ParamCurve

MAX_GRID = 100_000


def _trailing_fit(n: np.ndarray, y: np.ndarray):
    """Least-squares slope of y against n*ln2 over the trailing half of the rows."""
    k = max(2, (len(n) + 1) // 2)
    xs, ys = n[-k:] * math.log(2), y[-k:]
    A = np.column_stack([xs, np.ones_like(xs)])
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - ys) ** 2)))
    return float(coef[0]), resid, (int(n[-k]), int(n[-1]))


def box_counts(X: Continuum, n_max: int) -> list[int]:
    """Occupied grid boxes of side 2**-n for n = 0..n_max."""
    out = []
    for n in range(n_max + 1):
        keys = np.floor(X.coords * 2.0 ** n + 1e-9).astype(np.int64)
        out.append(len(np.unique(keys, axis=0)))
    return out


def box_dim(X: Continuum, n_max: int) -> float:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    counts = box_counts(X, n_max)
    slope, _, _ = _trailing_fit(np.arange(n_max + 1, dtype=float), np.log(counts))
    return max(slope, 0.0)


def sdim_fit(table: SierpinskiTable):
    """(slope, residual, window) for ln(upper) against n ln 2."""
    rows = {}
    for r in table.entries:
        rows.setdefault(r.n, r.upper)
    if len(rows) < 3:
        raise InsufficientLevels(f"need at least 3 levels, got {len(rows)}")
    n = np.array(sorted(rows), dtype=float)
    y = np.log([rows[k] for k in sorted(rows)])
    return _trailing_fit(n, y)


def estimate_sdim(table: SierpinskiTable) -> float:
    slope, _, _ = sdim_fit(table)
    return max(slope, 0.0)


@dataclass
class DimensionReport:
    box_dim: float
    s_dim: float
    s_dim_window: tuple[int, int]
    holder_upper: float
    residual: float

    def to_dict(self):
        d = asdict(self)
        d["s_dim_window"] = list(self.s_dim_window)
        d["format_version"] = 1
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def dimension_report(X: Continuum, n_max: int | None = None,
                     table: SierpinskiTable | None = None) -> DimensionReport:
    """Box and S-dimension estimates over levels 0..n_max (default: resolution level)."""
    if n_max is None:
        n_max = max(2, X.resolution_level())
    if table is None:
        table = sierpinski_table(X, n_max)
    slope, resid, window = sdim_fit(table)
    s = max(slope, 0.0)
    return DimensionReport(box_dim=box_dim(X, max(n_max, 2)), s_dim=s, s_dim_window=window,
                           holder_upper=2 * s, residual=resid)


# -- empirical modulus ------------------------------------------------------

@dataclass
class ModulusTable:
    t: np.ndarray
    omega_hat: np.ndarray
    # witness pair (breakpoint indices) realizing omega_hat at each grid point
    witness: np.ndarray
    exact: bool = True

    def to_csv(self, omega=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "omega_hat", "omega_allowed"])
        allowed = omega(self.t) if omega is not None else np.full(len(self.t), np.nan)
        for t, o, a in zip(self.t, self.omega_hat, np.atleast_1d(allowed)):
            w.writerow([repr(float(t)), repr(float(o)), repr(float(a))])
        return buf.getvalue()


def default_grid(curve: ParamCurve, seed: int = 0, cap: int = MAX_GRID) -> np.ndarray:
    """Distinct breakpoint gaps up to s, uniformly subsampled to ``cap`` values."""
    t = curve.t
    if len(t) < 2:
        return np.array([max(curve.s, 1.0)])
    B = len(t)
    if B * (B - 1) // 2 <= 4 * cap:
        gaps = np.unique(np.abs(t[:, None] - t[None, :])[np.triu_indices(B, 1)])
    else:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, B, 8 * cap)
        j = rng.integers(0, B, 8 * cap)
        gaps = np.unique(np.abs(t[i] - t[j]))
        gaps = np.union1d(gaps, np.diff(t))
    gaps = gaps[gaps > 0]
    if len(gaps) > cap:
        rng = np.random.default_rng(seed)
        gaps = np.sort(rng.choice(gaps, cap, replace=False))
    return gaps


def _pairs_upto(t: np.ndarray, T: float):
    """Yield (i, j) with i < j and t[j] - t[i] <= T, offset by offset."""
    for k in range(1, len(t)):
        g = t[k:] - t[:-k]
        hit = np.flatnonzero(g <= T)
        if len(hit) == 0:
            break
        yield hit, hit + k


def empirical_modulus(curve: ParamCurve, X: Continuum, grid=None, seed: int = 0) -> ModulusTable:
    """omega_hat(t) = max distance over breakpoint pairs with parameter gap <= t."""
    grid = default_grid(curve, seed) if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    acc = np.zeros(len(grid))
    wit = np.full((len(grid), 2), -1, dtype=np.int64)
    if len(grid) == 0 or len(curve.t) < 2:
        return ModulusTable(grid, acc, wit)
    pts = X.coords[curve.cells]
    for i, j in _pairs_upto(curve.t, float(grid[-1])):
        g = curve.t[j] - curve.t[i]
        d = np.sqrt(((pts[i] - pts[j]) ** 2).sum(1))
        b = np.searchsorted(grid, g, side="left")
        order = np.lexsort((d, b))  # per bin the largest distance comes last
        b, d, i, j = b[order], d[order], i[order], j[order]
        last = np.r_[b[1:] != b[:-1], True]
        bb, dd = b[last], d[last]
        keep = (bb < len(grid)) & (dd > acc[np.minimum(bb, len(grid) - 1)])
        acc[bb[keep]] = dd[keep]
        wit[bb[keep]] = np.column_stack([i[last][keep], j[last][keep]])
    # cumulative max over the grid carries the witness along
    for k in range(1, len(grid)):
        if acc[k - 1] > acc[k]:
            acc[k], wit[k] = acc[k - 1], wit[k - 1]
    return ModulusTable(grid, acc, wit)


@dataclass
class CertificateReport:
    passed: bool
    worst_ratio: float
    worst_pair: dict | None
    checked: int

    def to_dict(self):
        return {"format_version": 1, **asdict(self)}


def verify_certificate(curve: ParamCurve, X: Continuum, omega, grid=None) -> CertificateReport:
    """Check omega_hat <= Omega, exactly over all pairs or on a given grid."""
    t, cells = curve.t, curve.cells
    pts = X.coords[cells]
    if grid is not None:
        mt = empirical_modulus(curve, X, grid)
        allowed = np.atleast_1d(omega(mt.t))
        ratio = np.where(allowed > 0, mt.omega_hat / np.where(allowed > 0, allowed, 1),
                         np.where(mt.omega_hat > 0, np.inf, 0.0))
        ok = bool(np.all(mt.omega_hat <= allowed + TOL))
        if len(ratio) == 0 or ratio.max() <= 0:
            return CertificateReport(ok, 0.0, None, len(mt.t))
        k = int(np.argmax(ratio))
        i, j = mt.witness[k]
        pair = {"t": [float(t[i]), float(t[j])], "cells": [int(cells[i]), int(cells[j])],
                "distance": float(mt.omega_hat[k]), "grid_t": float(mt.t[k]),
                "omega": float(allowed[k])}
        return CertificateReport(ok, float(ratio[k]), pair, len(mt.t))
    # exact: every breakpoint pair, so worst_ratio is the true maximum
    ok, worst, pair, checked = True, 0.0, None, 0
    for i, j in _pairs_upto(t, math.inf):
        g = t[j] - t[i]
        d = np.sqrt(((pts[i] - pts[j]) ** 2).sum(1))
        om = np.atleast_1d(omega(g))
        checked += len(g)
        if np.any(d > om + TOL):
            ok = False
        r = np.where(om > 0, d / np.where(om > 0, om, 1), np.where(d > 0, np.inf, 0.0))
        k = int(np.argmax(r))
        if r[k] > worst:
            worst = float(r[k])
            pair = {"t": [float(t[i[k]]), float(t[j[k]])],
                    "cells": [int(cells[i[k]]), int(cells[j[k]])],
                    "distance": float(d[k]), "omega": float(om[k])}
    return CertificateReport(ok, worst, pair, checked)


# -- closed-form bound ------------------------------------------------------

def holder_bound(C: float, r: float, alpha: float) -> float:
    """2^(6a) C^2 2^(2r-a) / ((1 - 2^(r-a)) (1 - 2^(2r-a))) for a = alpha."""
    if not (C > 0 and r > 0 and alpha > 0):
        raise ValueError("C, r and alpha must be positive")
    if alpha <= 2 * r:
        raise DivergentSeries(f"alpha = {alpha} must exceed 2r = {2 * r}")
    return (2.0 ** (6 * alpha) * C * C * 2.0 ** (2 * r - alpha)
            / ((1 - 2.0 ** (r - alpha)) * (1 - 2.0 ** (2 * r - alpha))))


def fit_power_law(table: SierpinskiTable, levels=None, r: float | None = None):
    """(C, r) with upper(n) <= C * 2**(r n) on the given levels (default 1..n_max).

    r defaults to the S-dimension estimate; C is the smallest constant that
    makes the inequality hold on every listed level.
    """
    if r is None:
        r = estimate_sdim(table)
    if levels is None:
        levels = range(1, table.n_max + 1)
    C = max(table.upper(n) * 2.0 ** (-n * r) for n in levels)
    return float(C), float(r)
