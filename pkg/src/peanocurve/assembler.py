"""End-to-end construction of a surjection [0, s] -> X with modulus at most Omega.

Pipeline: cover table -> weights delta_n and eps_n -> nested covers ->
skeleton -> one path per skeleton gap -> spliced step curve, followed by an
exhaustive pair scan that certifies the level-wise bounds and Omega itself.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .continuum import TOL, Continuum
from .covers import (DEFAULT_BUDGET, NestedCovers, SierpinskiTable, build_nested, raw_covers,
                     table_from_covers)
from .errors import CertificateFailure, InverseUndefined
from .paths import ParamCurve, build_path
from .skeleton import GapRecord, Skeleton, build_skeleton

FORMAT_VERSION = 1

# Case labels and constants c such that distances stay within c * 2**-n.
CASES = ("both_in_D", "same_gap", "gap_to_D", "D_to_gap", "two_gaps")
CASE_BOUNDS = (4, 14, 18, 18, 32)


@dataclass(frozen=True)
class ModulusSpec:
    """Omega(t) = C * t**(1/alpha), or a tabulated increasing function."""

    kind: str = "power"
    alpha: float = 1.0
    C: float = 1.0
    ts: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "power":
            if not (self.alpha > 0 and self.C > 0):
                raise ValueError("power modulus needs alpha > 0 and C > 0")
        elif self.kind == "table":
            ts, vs = np.asarray(self.ts, float), np.asarray(self.values, float)
            if len(ts) < 2 or len(ts) != len(vs):
                raise ValueError("tabulated modulus needs matching ts and values")
            if np.any(np.diff(ts) <= 0) or np.any(np.diff(vs) <= 0):
                raise ValueError("tabulated modulus must be strictly increasing")
        else:
            raise ValueError(f"unknown modulus kind {self.kind!r}")

    @classmethod
    def power(cls, alpha: float, C: float = 1.0) -> "ModulusSpec":
        return cls("power", alpha=float(alpha), C=float(C))

    @classmethod
    def table(cls, ts, values) -> "ModulusSpec":
        return cls("table", ts=tuple(map(float, ts)), values=tuple(map(float, values)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            out = self.C * np.power(np.maximum(t, 0.0), 1.0 / self.alpha)
        else:
            ts, vs = self._knots()
            out = np.interp(t, ts, vs)
        return out if out.ndim else float(out)

    def inverse(self, y: float) -> float:
        if not y > 0:
            raise InverseUndefined(f"inverse requested at {y}")
        if self.kind == "power":
            return (y / self.C) ** self.alpha
        ts, vs = self._knots()
        if y > vs[-1] or y < vs[0]:
            raise InverseUndefined(f"{y} is outside the tabulated range [{vs[0]}, {vs[-1]}]")
        return float(np.interp(y, vs, ts))

    def _knots(self):
        """Tabulated knots, anchored at (0, 0) when the table starts later."""
        ts, vs = self.ts, self.values
        if ts[0] > 0 and vs[0] > 0:
            ts, vs = (0.0,) + ts, (0.0,) + vs
        return ts, vs

    def to_dict(self):
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha, "C": self.C}
        return {"kind": "table", "ts": list(self.ts), "values": list(self.values)}


def delta_sequence(omega: ModulusSpec, N: int) -> list[float]:
    """delta_n = Omega^-1(min(1, 2**(6-n))) for n = 0..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [omega.inverse(min(1.0, 2.0 ** (6 - n))) for n in range(N + 1)]


def epsilon_sequence(table: SierpinskiTable, deltas: Sequence[float]) -> list[float]:
    """eps_n = sum_{m=n..N} S(2**-m) * delta_m, with S read from the table's upper bounds."""
    N = len(deltas) - 1
    terms = [table.upper(m) * deltas[m] for m in range(N + 1)]
    out = [0.0] * (N + 1)
    acc = 0.0
    for n in range(N, -1, -1):
        acc += terms[n]
        out[n] = acc
    return out


def fill_gap(X: Continuum, nested: NestedCovers, gap: GapRecord, deltas, N: int) -> ParamCurve:
    """Path from phi(u) to phi(v) around the gap's connecting set, laid out on [u, v]."""
    a, b = gap.endpoints
    p = build_path(X, nested, gap.connector_set, a, b, gap.level, deltas, N)
    return p.affine(gap.u, gap.v)


@dataclass
class CertRow:
    n: int
    delta: float
    allowed: float
    observed: float

    @property
    def ok(self) -> bool:
        return self.observed <= self.allowed + TOL


@dataclass
class HolderCurve:
    curve: ParamCurve
    certificate: list[CertRow]
    coverage: float
    s: float
    omega: ModulusSpec
    N: int
    s_theory: float = 0.0
    omega_check: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    skeleton: Skeleton | None = None
    deltas: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    table: SierpinskiTable | None = None
    # per breakpoint: index of the gap it belongs to and whether it lies in D
    segment: np.ndarray | None = None
    in_D: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        levels_ok = all(r.ok for r in self.certificate)
        cases_ok = all(c["observed"] <= c["allowed"] + TOL for c in self.cases)
        return levels_ok and cases_ok and self.omega_check.get("passed", True) \
            and self.coverage == 1.0

    def certificate_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "levels": [{"n": r.n, "delta": r.delta, "allowed": r.allowed,
                        "observed": r.observed} for r in self.certificate],
            "coverage": self.coverage,
            "s": self.s,
            "s_theory": self.s_theory,
            "N": self.N,
            "valid_levels": [1, self.N],
            "modulus": self.omega.to_dict(),
            "omega_check": self.omega_check,
            "cases": self.cases,
            "passed": self.passed,
        }

    def certificate_json(self) -> str:
        return json.dumps(self.certificate_dict(), indent=1)


# -- pair scans -------------------------------------------------------------

def window_pairs(t: np.ndarray, T: float):
    """Yield (i, j) index arrays of all pairs i < j with t[j] - t[i] < T."""
    n = len(t)
    for k in range(1, n):
        gap = t[k:] - t[:-k]
        hit = np.flatnonzero(gap < T)
        if len(hit) == 0:
            break
        yield hit, hit + k


def _classify(seg: np.ndarray, inD: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    both = inD[i] & inD[j]
    same = (seg[i] == seg[j]) | (inD[j] & (seg[j] == seg[i] + 1))
    case = np.full(len(i), 4)
    case[~inD[i] & inD[j]] = 2
    case[inD[i] & ~inD[j]] = 3
    case[same] = 1
    case[both] = 0
    return case


def certify(X: Continuum, curve: ParamCurve, deltas: Sequence[float], omega: ModulusSpec,
            seg=None, inD=None):
    """Level rows, Omega check and (when segments are known) the five-case ledger."""
    N = len(deltas) - 1
    t, cells = curve.t, curve.cells
    dl = np.asarray(deltas[1:], dtype=float)          # delta_1..delta_N, nonincreasing
    try:
        t_one = omega.inverse(1.0)
    except InverseUndefined:
        t_one = math.inf
    T = max(float(dl.max()) if len(dl) else 0.0, min(t_one, curve.s + 1.0))
    level_max = np.zeros(N + 1)
    case_max = np.zeros((5, N + 1))
    worst = {"ratio": 0.0, "pair": None}
    om_ok = True
    asc = dl[::-1]
    for i, j in window_pairs(t, T):
        g = t[j] - t[i]
        d = np.sqrt(((X.coords[cells[i]] - X.coords[cells[j]]) ** 2).sum(1))
        # L = number of levels n >= 1 with delta_n > g
        L = len(dl) - np.searchsorted(asc, g, side="right")
        np.maximum.at(level_max, L, d)
        if seg is not None:
            np.maximum.at(case_max, (_classify(seg, inD, i, j), L), d)
        sel = g < t_one
        if sel.any():
            om = np.asarray(omega(g[sel]))
            ratio = np.where(om > 0, d[sel] / np.where(om > 0, om, 1), np.where(d[sel] > 0, np.inf, 0))
            k = int(np.argmax(ratio))
            if ratio[k] > worst["ratio"]:
                ii, jj = int(i[sel][k]), int(j[sel][k])
                worst = {"ratio": float(ratio[k]),
                         "pair": {"t": [float(t[ii]), float(t[jj])],
                                  "cells": [int(cells[ii]), int(cells[jj])],
                                  "distance": float(d[sel][k]), "omega": float(om[k])}}
            if np.any(d[sel] > om + TOL):
                om_ok = False
    # a pair with L levels counts for every n <= L
    suffix = np.maximum.accumulate(level_max[::-1])[::-1]
    case_suffix = np.maximum.accumulate(case_max[:, ::-1], axis=1)[:, ::-1]
    rows = [CertRow(n, float(deltas[n]), 32 * 2.0 ** -n, float(suffix[n])) for n in range(1, N + 1)]
    cases = []
    if seg is not None:
        for c, (name, const) in enumerate(zip(CASES, CASE_BOUNDS)):
            for n in range(1, N + 1):
                cases.append({"case": name, "n": n, "allowed": const * 2.0 ** -n,
                              "observed": float(case_suffix[c, n])})
    check = {"passed": om_ok, "scanned_below": float(min(t_one, T)),
             "worst_ratio": worst["ratio"], "worst_pair": worst["pair"]}
    return rows, check, cases


# -- assembly ---------------------------------------------------------------

def default_N(X: Continuum) -> int:
    """First level whose covers are singletons: every cell becomes a representative."""
    return X.resolution_level() + 1


def _splice(skel: Skeleton, segments: list[ParamCurve]):
    ts, cs, seg, inD = [], [], [], []
    for k, p in enumerate(segments):
        m = max(len(p) - 1, 1)
        ts.append(p.t[:m])
        cs.append(p.cells[:m])
        seg.append(np.full(m, k))
        flag = np.zeros(m, dtype=bool)
        flag[0] = True
        inD.append(flag)
    ts.append([skel.s])
    cs.append([skel.cells[-1]])
    seg.append([len(segments)])
    inD.append([True])
    return (np.concatenate(ts), np.concatenate(cs).astype(int),
            np.concatenate(seg).astype(int), np.concatenate(inD).astype(bool))


def assemble(X: Continuum, omega: ModulusSpec, N: int | None = None,
             budget: int = DEFAULT_BUDGET, strict: bool = False,
             deltas: Sequence[float] | None = None) -> HolderCurve:
    """Build and certify a surjection [0, s] -> X with modulus at most omega.

    ``deltas`` (indexed by level 0..N) overrides the weights derived from
    omega; the level rows and the case ledger remain valid for any
    nonincreasing choice, the omega check only for the derived one.
    """
    if N is None:
        N = default_N(X) if deltas is None else len(deltas) - 1
    if N < 1:
        raise ValueError("N must be >= 1")
    if deltas is None:
        deltas = delta_sequence(omega, N)
    else:
        deltas = [float(d) for d in deltas[: N + 1]]
        if len(deltas) != N + 1 or any(b > a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("deltas must be nonincreasing and indexed 0..N")
    if X.n == 1:
        curve = ParamCurve(0.0, [0.0], [0])
        rows = [CertRow(n, deltas[n], 32 * 2.0 ** -n, 0.0) for n in range(1, N + 1)]
        return HolderCurve(curve, rows, 1.0, 0.0, omega, N,
                           omega_check={"passed": True, "worst_ratio": 0.0, "worst_pair": None},
                           deltas=deltas)
    raw = raw_covers(X, N, budget=budget)
    table = table_from_covers(X, raw, exact=X.n <= budget)
    eps = epsilon_sequence(table, deltas)
    nested = build_nested(X, N, raw)
    skel = build_skeleton(X, raw, eps)
    segments = [fill_gap(X, nested, g, deltas, N) for g in skel.gaps()]
    t, cells, seg, inD = _splice(skel, segments)
    curve = ParamCurve(skel.s, t, cells)
    coverage = len(np.unique(cells)) / X.n
    rows, check, cases = certify(X, curve, deltas, omega, seg, inD)
    s_theory = sum(table.upper(n) * eps[n] for n in range(1, N + 1))
    hc = HolderCurve(curve, rows, coverage, skel.s, omega, N, s_theory=s_theory,
                     omega_check=check, cases=cases, skeleton=skel, deltas=deltas,
                     epsilons=list(skel.epsilons), table=table, segment=seg, in_D=inD)
    if strict and not hc.passed:
        raise CertificateFailure(f"certificate failed for {X.name}")
    return hc
