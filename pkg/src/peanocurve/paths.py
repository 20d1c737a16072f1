"""Weighted chain refinement: paths from a to b with level-wise modulus control.

Starting from a minimal ({a},{b})-chain at level m, each chain is refined by
running a minimal connector inside every link against the next nested cover.
Every part of every level gets a representative cell of weight delta_n; the
representatives are laid out on [0, s] in the order of the finest chain.
"""
from __future__ import annotations

import csv
import io
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .connectors import Chain, minimal_connector
from .continuum import Continuum, is_connected, shortest_path_within
from .covers import Cover, NestedCovers
from .errors import (EndpointOutsideF, FDisconnected, NoPath, NotAConnector,
                     OutOfDomain, RefinementFailure)


@dataclass
class ParamCurve:
    """Step curve: constant on [t_k, t_{k+1}) with value cells[k]."""

    s: float
    t: np.ndarray
    cells: np.ndarray
    weightlog: list = field(default_factory=list)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.cells = np.asarray(self.cells, dtype=int)

    def __len__(self):
        return len(self.t)

    @property
    def breakpoints(self) -> list[tuple[float, int]]:
        return list(zip(self.t.tolist(), self.cells.tolist()))

    def eval(self, t: float) -> int:
        if not (0.0 <= t <= self.s) or np.isnan(t):
            raise OutOfDomain(f"t = {t} outside [0, {self.s}]")
        k = bisect_right(self.t.tolist(), t) - 1
        return int(self.cells[max(k, 0)])

    __call__ = eval

    def to_csv(self, X: Continuum) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "cell_id", "x", "y"])
        for t, c in zip(self.t, self.cells):
            x, y = X.coords[c]
            w.writerow([repr(float(t)), int(c), repr(float(x)), repr(float(y))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ParamCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        t = [float(r["t"]) for r in rows]
        cells = [int(r["cell_id"]) for r in rows]
        return cls(s=t[-1] if t else 0.0, t=t, cells=cells)

    def affine(self, u: float, v: float) -> "ParamCurve":
        """Same step sequence laid out on [u, v]."""
        if self.s == 0:
            return ParamCurve(0.0, [u], self.cells[:1], list(self.weightlog))
        t = u + (self.t / self.s) * (v - u)
        t[-1] = v
        return ParamCurve(v - u, t, self.cells, list(self.weightlog))


@dataclass
class RefinementLevels:
    m: int
    chains: list[Chain]
    # mu[k][j] = index in chains[k] of the parent of part j of chains[k+1]
    mu: list[list[int]]
    # per level transition: the boundary sets (A_i, B_i) used inside each parent
    boundaries: list[list[tuple[frozenset, frozenset]]]

    @property
    def top(self) -> int:
        return self.m + len(self.chains) - 1

    def chain(self, n: int) -> Chain:
        return self.chains[n - self.m]


def _children(nested: NestedCovers, n: int, M: frozenset) -> list[frozenset]:
    """Parts of C_{n+1} contained in M."""
    C = nested.levels[n + 1]
    return [C.parts[k] for k in C.contained_in(M)]


def refine_chain(parent: Chain, next_parts, a: int, b: int) -> tuple[Chain, list[int], list]:
    """Refine a ({a},{b})-chain one level down.

    ``next_parts`` is a cover whose parts inside each link cover that link,
    or a callable mapping a link to that list of parts.
    """
    if isinstance(next_parts, Cover):
        cov = next_parts
        sub = lambda M: [cov.parts[k] for k in cov.contained_in(M)]  # noqa: E731
    else:
        sub = next_parts
    M = list(parent.parts)
    k = len(M)
    parts, mu, bounds = [], [], []
    prev_max = None
    for i in range(k):
        A_i = frozenset({a}) if i == 0 else M[i] & prev_max
        B_i = frozenset({b}) if i == k - 1 else M[i] & M[i + 1]
        bounds.append((A_i, B_i))
        try:
            block = minimal_connector(sub(M[i]), A_i, B_i)
        except (NotAConnector, NoPath) as exc:
            raise RefinementFailure(f"link {i}: {exc}") from exc
        blk = list(block.parts)
        # the last part of one block may reappear as the first of the next
        if parts and blk[0] == parts[-1]:
            blk = blk[1:]
        parts.extend(blk)
        mu.extend([i] * len(blk))
        prev_max = block.parts[-1]
    return Chain(tuple(parts), frozenset({a}), frozenset({b})), mu, bounds


def refine_levels(nested: NestedCovers, F, a: int, b: int, m: int, top: int) -> RefinementLevels:
    C = nested.levels[m]
    family = [C.parts[k] for k in C.meeting(F)]
    try:
        chain = minimal_connector(family, {a}, {b})
    except (NotAConnector, NoPath) as exc:
        raise RefinementFailure(str(exc)) from exc
    chains, mus, bounds = [chain], [], []
    for n in range(m, top):
        chain, mu, bd = refine_chain(chains[-1], lambda M, n=n: _children(nested, n, M), a, b)
        chains.append(chain)
        mus.append(mu)
        bounds.append(bd)
    return RefinementLevels(m=m, chains=chains, mu=mus, boundaries=bounds)


def _pick_reps(levels: RefinementLevels, a: int, b: int):
    """One representative per part of every chain, with its sort key and tier."""
    top = len(levels.chains) - 1
    finest = levels.chains[top].parts
    # lineage[k][j]: index at level k of the ancestor of finest part j
    lineage = [None] * (top + 1)
    lineage[top] = list(range(len(finest)))
    for k in range(top - 1, -1, -1):
        lineage[k] = [levels.mu[k][j] for j in lineage[k + 1]]
    picked: set[int] = set()
    reps = []
    for k, chain in enumerate(levels.chains):
        owners: dict[int, int] = {}
        for idx, P in enumerate(chain.parts):
            for c in P:
                owners[c] = owners.get(c, 0) + 1
        desc: list[list[int]] = [[] for _ in chain.parts]
        for j, anc in enumerate(lineage[k]):
            desc[anc].append(j)
        for idx, P in enumerate(chain.parts):
            first_desc: dict[int, int] = {}
            for j in desc[idx]:
                for c in finest[j]:
                    first_desc.setdefault(c, j)
            pool = sorted(first_desc)
            excl = [c for c in pool if owners[c] == 1]
            tiers = (
                [c for c in excl if c not in (a, b) and c not in picked],
                [c for c in excl if c not in (a, b)],
                excl,
                pool,
            )
            tier = next(t for t, cand in enumerate(tiers) if cand)
            c = tiers[tier][0]
            picked.add(c)
            reps.append((first_desc[c], k, c, tier))
    reps.sort()
    return reps


def build_path(X: Continuum, nested: NestedCovers, F, a: int, b: int, m: int,
               deltas: Sequence[float], N: int | None = None) -> ParamCurve:
    """Path from a to b through the saturated covers around F.

    ``deltas[n]`` is the weight used for level n.  Refinement stops at the
    last level whose covers are closed; when even level m is below that, the
    path is a graph geodesic inside F with steps of length deltas[m].
    """
    F = frozenset(F)
    if a not in F or b not in F:
        raise EndpointOutsideF(f"endpoint {a if a not in F else b} not in F")
    if a == b:
        return ParamCurve(0.0, [0.0], [a], [])
    if not is_connected(X, F):
        raise FDisconnected("F does not induce a connected subgraph")
    N = nested.N if N is None else min(N, nested.N)
    top = min(N, nested.closed_depth)
    if m > top:
        path = shortest_path_within(X, F, a, b)
        d = float(deltas[m])
        t = np.arange(len(path)) * d
        log = [(m, d, 0)] * (len(path) - 2)
        return ParamCurve(float(t[-1]), t, path, log)

    levels = refine_levels(nested, F, a, b, m, top)
    reps = _pick_reps(levels, a, b)
    w = np.array([deltas[m + k] for _, k, _, _ in reps], dtype=float)
    pos = np.cumsum(w)
    total = float(pos[-1])
    # the last representative's slot is taken by b
    t = np.concatenate([[0.0], pos[:-1], [total]])
    cells = [a] + [c for _, _, c, _ in reps[:-1]] + [b]
    log = [(m + k, float(deltas[m + k]), tier) for _, k, _, tier in reps[:-1]]
    return ParamCurve(total, t, cells, log)
