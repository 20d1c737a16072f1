"""Cantor-style skeleton: a finite parameter set D in [0, s] mapped onto representatives.

Nodes are the parts of the covers F_1..F_N together with a root for level 0.
Each part picks a parent (lowest-index intersecting part one level up), and
the nodes are ordered so that the children of a node form a contiguous block
right before it.  A level-n node weighs eps_n and sits at the total weight of
its predecessors, so consecutive points are exactly eps_n apart when the left
one has level n.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .continuum import Continuum, diameter
from .covers import Cover
from .errors import DegenerateSpace


@dataclass(frozen=True)
class GapRecord:
    u: float
    v: float
    level: int
    connector_set: frozenset
    endpoints: tuple[int, int]

    def to_dict(self):
        return {"u": self.u, "v": self.v, "level": self.level,
                "connector_cells": sorted(int(c) for c in self.connector_set)}


@dataclass
class Skeleton:
    s: float
    t: np.ndarray                  # positions in D, increasing, t[0] = 0, t[-1] = s
    cells: np.ndarray              # image cell of each point
    nodes: list[tuple[int, int]]   # (level, part index) of each point, in order
    covers: tuple[Cover, ...]      # covers[n] for n = 0..N (covers[0] is {X})
    epsilons: tuple[float, ...]    # epsilons[n] for n = 0..N
    parent_pick: list[list[int]]   # parent_pick[n][k]: parent in level n-1 of part k of level n
    reps: list[list[int]]          # reps[n][k]: representative cell of part k of level n
    fallbacks: list = field(default_factory=list)
    _gaps: list | None = None

    @property
    def N(self) -> int:
        return len(self.covers) - 1

    @property
    def points(self) -> list[tuple[float, int]]:
        return list(zip(self.t.tolist(), self.cells.tolist()))

    def lineage(self, node: tuple[int, int]) -> list[tuple[int, int]]:
        """node, its parent, grandparent, ... down to the root (level 0)."""
        n, k = node
        out = [node]
        while n > 0:
            k = self.parent_pick[n][k]
            n -= 1
            out.append((n, k))
        return out

    def retraction(self, node: tuple[int, int], n: int) -> int:
        """r_n: image of a node's representative after retracting to level n."""
        level, _ = node
        if level <= n:
            return self.rep(node)
        return self.rep(self.lineage(node)[level - n])

    def rep(self, node: tuple[int, int]) -> int:
        return self.reps[node[0]][node[1]]

    def part(self, node: tuple[int, int]) -> frozenset:
        return self.covers[node[0]].parts[node[1]]

    def gaps(self) -> list[GapRecord]:
        if self._gaps is None:
            self._gaps = gap_records(self)
        return self._gaps

    def to_json(self) -> str:
        doc = {
            "format_version": 1,
            "s": self.s,
            "points": [{"t": t, "cell": c} for t, c in self.points],
            "gaps": [g.to_dict() for g in self.gaps()],
        }
        return json.dumps(doc, indent=1)


def _dyadic(epsilons, count: int) -> tuple[float, ...]:
    """Round weights up to a common power-of-two grid.

    With every weight a multiple of the grid step and the total below 2**50
    steps, all partial sums are exact in binary floating point, so each gap
    length equals its stored weight bit for bit.
    """
    total = float(sum(epsilons)) * max(count, 1)
    if total <= 0:
        return tuple(float(e) for e in epsilons)
    q = 2.0 ** (math.ceil(math.log2(total)) - 50)
    return tuple(math.ceil(e / q) * q for e in epsilons)


def build_skeleton(X: Continuum, covers: Sequence[Cover], epsilons: Sequence[float]) -> Skeleton:
    """Skeleton over covers[1..N] with weights epsilons[1..N].

    ``covers[0]`` and ``epsilons[0]`` are ignored; the root stands for X.
    """
    if X.n < 2:
        raise DegenerateSpace("a single cell admits only the constant map")
    N = len(covers) - 1
    if len(epsilons) < N + 1:
        raise ValueError("need epsilons[0..N]")
    root = Cover(level=0, epsilon=1.0, parts=(frozenset(range(X.n)),), mesh=1.0, closed=True)
    covers = (root,) + tuple(covers[1:])

    parent_pick = [[]]
    for n in range(1, N + 1):
        up = covers[n - 1]
        parent_pick.append([min(up.meeting(P)) for P in covers[n].parts])

    used: set[int] = set()
    reps, fallbacks = [], []
    for n, cov in enumerate(covers):
        row = []
        for k, P in enumerate(cov.parts):
            fresh = [c for c in sorted(P) if c not in used]
            c = fresh[0] if fresh else min(P)
            if not fresh:
                fallbacks.append((n, k))
            used.add(c)
            row.append(c)
        reps.append(row)

    children = [[[] for _ in cov.parts] for cov in covers]
    for n in range(1, N + 1):
        for k, p in enumerate(parent_pick[n]):
            children[n - 1][p].append(k)

    # post-order: children (by index, each preceded by its own subtree) then the node
    order: list[tuple[int, int]] = []
    stack = [((0, 0), False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        stack.append((node, True))
        n, k = node
        if n < N:
            for j in reversed(children[n][k]):
                stack.append(((n + 1, j), False))

    eps = _dyadic(epsilons[: N + 1], sum(len(c) for c in covers[1:]))
    w = np.array([eps[n] if n > 0 else 0.0 for n, _ in order])
    t = np.concatenate([[0.0], np.cumsum(w[:-1])])
    cells = np.array([reps[n][k] for n, k in order])
    return Skeleton(s=float(t[-1]), t=t, cells=cells, nodes=order, covers=covers,
                    epsilons=eps,
                    parent_pick=parent_pick, reps=reps, fallbacks=fallbacks)


def gap_records(sk: Skeleton) -> list[GapRecord]:
    """One record per pair of consecutive points of D.

    The connecting set joins the left node and its parent with the parent
    walk of the right node down to that same parent.
    """
    out = []
    for i in range(len(sk.nodes) - 1):
        x, y = sk.nodes[i], sk.nodes[i + 1]
        n = x[0]
        lx = sk.lineage(x)
        ly = sk.lineage(y)
        nodes = lx[:2] + ly[: y[0] - n + 2]
        F = frozenset().union(*(sk.part(z) for z in nodes))
        out.append(GapRecord(u=float(sk.t[i]), v=float(sk.t[i + 1]), level=n,
                             connector_set=F, endpoints=(int(sk.cells[i]), int(sk.cells[i + 1]))))
    return out


def gap_diameters(X: Continuum, gaps: Sequence[GapRecord]) -> list[float]:
    return [diameter(X, g.connector_set) for g in gaps]
