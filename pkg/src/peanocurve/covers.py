"""Connected covers, Sierpinski-function tables and nested cover sequences.

Two cover notions are supported:

* plain covers: every cell lies in some part;
* closed covers (``closed=True``): additionally every adjacent pair of cells
  lies inside a common part.  Parts are then the discrete counterpart of
  closed connected sets of the underlying cell complex, and two parts whose
  union is connected always share a cell.  The construction pipeline relies
  on this, so it always works with closed covers.

Closed covers exist only for scales at least the adjacent-cell spacing.
Below that resolution the covers degrade to singletons.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .continuum import TOL, Continuum, diameter, is_connected
from .errors import BudgetExceeded, NestingViolation

DEFAULT_BUDGET = 20


@dataclass(frozen=True)
class Cover:
    level: int | None
    epsilon: float
    parts: tuple[frozenset, ...]
    mesh: float
    closed: bool = False

    def __len__(self):
        return len(self.parts)

    @cached_property
    def index(self) -> dict[int, tuple[int, ...]]:
        """cell id -> indices of the parts containing it."""
        out: dict[int, list[int]] = {}
        for k, P in enumerate(self.parts):
            for c in P:
                out.setdefault(c, []).append(k)
        return {c: tuple(v) for c, v in out.items()}

    def meeting(self, A) -> list[int]:
        """Indices of parts that intersect A, ascending."""
        idx = set()
        for c in A:
            idx.update(self.index.get(c, ()))
        return sorted(idx)

    def contained_in(self, M) -> list[int]:
        M = M if isinstance(M, (set, frozenset)) else set(M)
        return [k for k in self.meeting(M) if self.parts[k] <= M]


def _make_cover(X, parts, eps, level, closed) -> Cover:
    parts = tuple(frozenset(p) for p in parts)
    mesh = max((diameter(X, p) for p in parts), default=0.0)
    return Cover(level=level, epsilon=eps, parts=parts, mesh=mesh, closed=closed)


def closed_feasible(X: Continuum, eps: float) -> bool:
    return X.edge_length <= eps + TOL


# -- greedy -----------------------------------------------------------------

def greedy_cover(X: Continuum, eps: float, closed: bool = False, level=None) -> Cover:
    """Grow connected parts of diameter <= eps until everything is covered.

    Each part starts from the lowest uncovered element (an edge for closed
    covers, else a cell) and accretes, breadth-first, the lowest-id adjacent
    cell that keeps the diameter within eps and covers something new.
    """
    if eps >= 1.0 - TOL or X.n == 1:
        return _make_cover(X, [range(X.n)], eps, level, closed=True)
    if closed and not closed_feasible(X, eps):
        closed = False
    coords = X.coords
    cell_done = np.zeros(X.n, dtype=bool)
    edge_done: set[tuple[int, int]] = set()
    edge_iter = 0
    edges = X.edges
    parts = []

    while True:
        seed = None
        if closed:
            while edge_iter < len(edges) and edges[edge_iter] in edge_done:
                edge_iter += 1
            if edge_iter < len(edges):
                seed = list(edges[edge_iter])
        if seed is None:
            left = np.flatnonzero(~cell_done)
            if len(left) == 0:
                break
            seed = [int(left[0])]
        part = list(seed)
        inside = set(part)
        pts = [coords[c] for c in part]

        def gain(v):
            if not cell_done[v]:
                return True
            if closed:
                for u in X.neighbors[v]:
                    if u in inside and (min(u, v), max(u, v)) not in edge_done:
                        return True
            return False

        frontier = sorted({u for c in part for u in X.neighbors[c]} - inside)
        while frontier:
            added = False
            for v in frontier:
                if not gain(v):
                    continue
                d = np.sqrt(((np.asarray(pts) - coords[v]) ** 2).sum(1)).max()
                if d <= eps + TOL:
                    part.append(v)
                    inside.add(v)
                    pts.append(coords[v])
                    added = True
                    break
            if not added:
                break
            frontier = sorted({u for c in part for u in X.neighbors[c]} - inside)
        for c in part:
            cell_done[c] = True
            for u in X.neighbors[c]:
                if u in inside:
                    edge_done.add((min(u, c), max(u, c)))
        parts.append(sorted(part))
    return _make_cover(X, parts, eps, level, closed)


# -- exact ------------------------------------------------------------------

def _feasible_sets(X: Continuum, eps: float) -> list[int]:
    """Bitmasks of all maximal connected subsets with diameter <= eps."""
    D = X.dmat
    ok = D <= eps + TOL
    nbmask = [sum(1 << u for u in X.neighbors[v]) for v in range(X.n)]
    okmask = [sum(1 << u for u in range(X.n) if ok[v, u]) for v in range(X.n)]
    seen: set[int] = set()
    stack = [1 << v for v in range(X.n)]
    maximal = []
    while stack:
        S = stack.pop()
        if S in seen:
            continue
        seen.add(S)
        allowed = -1
        frontier = 0
        bits = S
        while bits:
            low = bits & -bits
            v = low.bit_length() - 1
            allowed &= okmask[v]
            frontier |= nbmask[v]
            bits ^= low
        ext = frontier & allowed & ~S
        if not ext:
            maximal.append(S)
            continue
        while ext:
            low = ext & -ext
            ext ^= low
            T = S | low
            if T not in seen:
                stack.append(T)
    return maximal


def _min_set_cover(universe: int, sets: list[int]) -> list[int]:
    """Branch and bound for a minimum-cardinality cover of ``universe``."""
    sets = sorted(set(sets), key=lambda s: -bin(s).count("1"))
    best = None
    # greedy incumbent
    left, pick = universe, []
    while left:
        k = max(range(len(sets)), key=lambda i: bin(sets[i] & left).count("1"))
        pick.append(k)
        left &= ~sets[k]
    best = list(pick)
    maxsize = max(bin(s).count("1") for s in sets)
    by_elem: dict[int, list[int]] = {}
    bits = universe
    while bits:
        low = bits & -bits
        bits ^= low
        by_elem[low] = [i for i, s in enumerate(sets) if s & low]

    def search(left: int, chosen: list[int]):
        nonlocal best
        if not left:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        need = -(-bin(left).count("1") // maxsize)
        if len(chosen) + max(need, 1) >= len(best):
            return
        bits, elem, fewest = left, None, None
        while bits:
            low = bits & -bits
            bits ^= low
            cnt = len(by_elem[low])
            if fewest is None or cnt < fewest:
                elem, fewest = low, cnt
        for i in sorted(by_elem[elem], key=lambda i: -bin(sets[i] & left).count("1")):
            chosen.append(i)
            search(left & ~sets[i], chosen)
            chosen.pop()

    search(universe, [])
    return [sets[i] for i in best]


def exact_min_cover(X: Continuum, eps: float, budget: int = DEFAULT_BUDGET,
                    closed: bool = False, level=None) -> Cover:
    """Cover of provably minimal cardinality by exhaustive search."""
    if X.n > budget:
        raise BudgetExceeded(f"{X.n} cells exceed exhaustive-search budget {budget}")
    if eps >= 1.0 - TOL or X.n == 1:
        return _make_cover(X, [range(X.n)], eps, level, closed=True)
    if closed and not closed_feasible(X, eps):
        closed = False
    masks = _feasible_sets(X, eps)
    n = X.n
    elem_of = []
    for S in masks:
        m = S
        if closed:
            for k, (i, j) in enumerate(X.edges):
                if (S >> i) & 1 and (S >> j) & 1:
                    m |= 1 << (n + k)
        elem_of.append(m)
    universe = (1 << n) - 1
    if closed:
        universe |= ((1 << len(X.edges)) - 1) << n
    chosen = _min_set_cover(universe, elem_of)
    back = {m: S for m, S in zip(elem_of, masks)}
    parts = [[v for v in range(n) if (back[m] >> v) & 1] for m in chosen]
    parts.sort()
    return _make_cover(X, parts, eps, level, closed)


def packing_lower(X: Continuum, eps: float) -> int:
    """Size of a greedy farthest-point packing with pairwise distances > eps.

    A connected part of diameter <= eps holds at most one packing point, so
    this bounds every cover count from below.
    """
    if X.n == 1:
        return 1
    chosen = [0]
    dmin = np.sqrt(((X.coords - X.coords[0]) ** 2).sum(1))
    while True:
        k = int(np.argmax(dmin))
        if dmin[k] <= eps + TOL:
            return len(chosen)
        chosen.append(k)
        dmin = np.minimum(dmin, np.sqrt(((X.coords - X.coords[k]) ** 2).sum(1)))


# -- Sierpinski table -------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    n: int
    lower: int
    upper: int
    exact: bool

    @property
    def epsilon(self) -> float:
        return 2.0 ** -self.n


@dataclass(frozen=True)
class SierpinskiTable:
    entries: tuple[TableRow, ...]
    closed: bool = True

    def upper(self, n: int) -> int:
        return self.entries[n].upper

    @property
    def n_max(self) -> int:
        return self.entries[-1].n

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "epsilon", "lower", "upper", "exact"])
        for r in self.entries:
            w.writerow([r.n, repr(r.epsilon), r.lower, r.upper, int(r.exact)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, closed=True) -> "SierpinskiTable":
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(TableRow(int(rec["n"]), int(rec["lower"]), int(rec["upper"]),
                                 rec["exact"] in ("1", "True", "true")))
        return cls(tuple(rows), closed=closed)


def raw_covers(X: Continuum, N: int, closed: bool = True,
               budget: int = DEFAULT_BUDGET) -> list[Cover]:
    """Covers F_0..F_N at scales 2**-n (exact when X is small enough)."""
    exact = X.n <= budget
    out = []
    for n in range(N + 1):
        eps = 2.0 ** -n
        if exact:
            cov = exact_min_cover(X, eps, budget=budget, closed=closed, level=n)
        else:
            cov = greedy_cover(X, eps, closed=closed, level=n)
        out.append(cov)
    # a finer cover of the same kind with fewer parts is also a coarser cover
    for n in range(N - 1, 0, -1):
        fine = out[n + 1]
        if fine.closed == out[n].closed and len(fine) < len(out[n]):
            out[n] = replace(fine, level=n, epsilon=2.0 ** -n)
    return out


def table_from_covers(X: Continuum, covers: Sequence[Cover], exact: bool,
                      closed: bool = True) -> SierpinskiTable:
    rows = []
    running = 0
    for n, cov in enumerate(covers):
        running = max(running, len(cov))
        lower = packing_lower(X, 2.0 ** -n)
        is_exact = exact and running == len(cov)
        if is_exact:
            lower = running
        rows.append(TableRow(n=n, lower=min(lower, running), upper=running, exact=is_exact))
    return SierpinskiTable(tuple(rows), closed=closed)


def sierpinski_table(X: Continuum, n_max: int, closed: bool = True,
                     budget: int = DEFAULT_BUDGET) -> SierpinskiTable:
    """Bounds on S_X(2**-n) for n = 0..n_max."""
    covers = raw_covers(X, n_max, closed=closed, budget=budget)
    return table_from_covers(X, covers, exact=X.n <= budget, closed=closed)


# -- saturation and nesting -------------------------------------------------

def star(cover: Cover, A) -> frozenset:
    """A together with every part of ``cover`` meeting A."""
    out = set(A)
    for k in cover.meeting(A):
        out |= cover.parts[k]
    return frozenset(out)


def star_saturate(X: Continuum, raw_levels: Sequence[Cover], A, n: int) -> frozenset:
    """Iterated star of A through raw levels n, n+1, ..., N (N = top level).

    For n = N + 1 nothing is left to saturate with and A is returned.
    """
    cur = frozenset(A)
    for m in range(n, len(raw_levels)):
        cur = star(raw_levels[m], cur)
    return cur


@dataclass(frozen=True)
class NestedCovers:
    levels: tuple[Cover, ...]
    raw_levels: tuple[Cover, ...]
    refinement: tuple[tuple[tuple[int, ...], ...], ...]
    closed_depth: int = field(default=0)

    @property
    def N(self) -> int:
        return len(self.levels) - 1


def _closed_depth(raw: Sequence[Cover]) -> int:
    depth = 0
    for n in range(1, len(raw)):
        if not raw[n].closed:
            break
        depth = n
    return depth


def build_nested(X: Continuum, N: int, raw_levels: Sequence[Cover] | None = None,
                 budget: int = DEFAULT_BUDGET) -> NestedCovers:
    """Nested closed covers C_0..C_N with C_n = saturations of F_n from level n+1."""
    if raw_levels is None:
        raw_levels = raw_covers(X, N, closed=True, budget=budget)
    raw_levels = tuple(raw_levels[: N + 1])
    levels = []
    for n, F in enumerate(raw_levels):
        seen, parts = set(), []
        for P in F.parts:
            C = star_saturate(X, raw_levels, P, n + 1)
            if C not in seen:
                seen.add(C)
                parts.append(C)
        levels.append(_make_cover(X, parts, 2.0 ** -n, n, closed=F.closed))

    everything = frozenset(range(X.n))
    if levels[0].parts != (everything,):
        raise NestingViolation("C_0 is not {X}")
    refinement = []
    for n, C in enumerate(levels):
        if len(C) > len(raw_levels[n]):
            raise NestingViolation(f"|C_{n}| = {len(C)} exceeds |F_{n}| = {len(raw_levels[n])}")
        if C.mesh > 3 * 2.0 ** -n + TOL:
            raise NestingViolation(f"mesh(C_{n}) = {C.mesh} exceeds 3*2^-{n}")
        covered = set()
        for P in C.parts:
            if not P or not is_connected(X, P):
                raise NestingViolation(f"C_{n} has an empty or disconnected part")
            covered |= P
        if covered != everything:
            raise NestingViolation(f"C_{n} does not cover X")
        if n == 0:
            continue
        kids = []
        for M in levels[n - 1].parts:
            inside = C.contained_in(M)
            union = frozenset().union(*(C.parts[k] for k in inside)) if inside else frozenset()
            if union != M:
                raise NestingViolation(f"a part of C_{n - 1} is not the union of its C_{n} parts")
            kids.append(tuple(inside))
        refinement.append(tuple(kids))
    return NestedCovers(levels=tuple(levels), raw_levels=raw_levels,
                        refinement=tuple(refinement), closed_depth=_closed_depth(raw_levels))


def default_levels(X: Continuum) -> int:
    """Truncation level: the last scale at which closed covers exist."""
    return max(1, X.resolution_level())
