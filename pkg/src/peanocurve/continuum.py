"""Discretized Peano continua: connected cell graphs with a normalized metric.

A :class:`Continuum` is a finite set of cells (points in the plane) together
with a symmetric adjacency relation.  Coordinates are rescaled so that the
whole space has diameter exactly 1 (or 0 for a single cell), and a subset is
called connected when it induces a connected subgraph.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .errors import Disconnected, Empty

# Slack for float comparisons against dyadic thresholds such as 2**-n.
TOL = 1e-12

SHAPES = ("interval", "square", "carpet", "gasket")


def max_pairwise(points: np.ndarray) -> float:
    """Largest Euclidean distance between rows of ``points`` (0 for < 2 rows)."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0.0
    if len(pts) > 64:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except (QhullError, ValueError):
            # collinear input: the extreme pair lies among the coordinate extremes
            idx = np.unique(np.concatenate([pts.argmin(0), pts.argmax(0)]))
            order = np.lexsort(pts.T[::-1])
            idx = np.unique(np.concatenate([idx, order[[0, -1]]]))
            pts = pts[idx]
    return float(pdist(pts).max())


@dataclass(frozen=True, eq=False)
class Continuum:
    """Finite surrogate of a metric Peano continuum.

    ``coords`` are already normalized (divided by ``scale``) so that the
    diameter is 1 whenever there are at least two cells.
    """

    coords: np.ndarray
    neighbors: tuple[tuple[int, ...], ...]
    scale: float = 1.0
    name: str = "continuum"
    raw_origin: tuple[float, ...] = field(default=(0.0, 0.0))

    def __post_init__(self):
        self.coords.setflags(write=False)

    @classmethod
    def from_cells(cls, raw_coords, edges: Iterable[tuple[int, int]], name="continuum"):
        """Build and normalize a continuum; raises ``Disconnected`` for a split graph."""
        raw = np.asarray(raw_coords, dtype=float)
        if raw.ndim == 1:
            raw = raw[:, None]
        if raw.shape[1] == 1:
            raw = np.hstack([raw, np.zeros_like(raw)])
        n = len(raw)
        if n == 0:
            raise Empty("continuum has no cells")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                continue
            nbrs[i].add(j)
            nbrs[j].add(i)
        origin = raw.min(axis=0)
        scale = max_pairwise(raw)
        coords = raw - origin
        if scale > 0:
            coords = coords / scale
        else:
            scale = 1.0
        X = cls(coords=np.ascontiguousarray(coords),
                neighbors=tuple(tuple(sorted(s)) for s in nbrs),
                scale=float(scale), name=name, raw_origin=tuple(origin))
        if not X.is_connected(range(n)):
            raise Disconnected(f"{name}: adjacency graph has several components")
        return X

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def cells(self) -> range:
        return range(self.n)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.n) for j in self.neighbors[i] if i < j)

    @cached_property
    def edge_length(self) -> float:
        """Longest distance between adjacent cells (the resolution of the grid)."""
        if not self.edges:
            return 0.0
        e = np.array(self.edges)
        return float(np.linalg.norm(self.coords[e[:, 0]] - self.coords[e[:, 1]], axis=1).max())

    @cached_property
    def dmat(self) -> np.ndarray:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        d = np.sqrt((diff ** 2).sum(-1))
        d.setflags(write=False)
        return d

    def dist(self, i: int, j: int) -> float:
        return float(math.dist(self.coords[i], self.coords[j]))

    def dist_rows(self, rows, cols) -> np.ndarray:
        a = self.coords[np.asarray(rows, dtype=int)]
        b = self.coords[np.asarray(cols, dtype=int)]
        return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.coords.min(axis=0)
        hi = self.coords.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def resolution_level(self) -> int:
        """Largest n with 2**-n at least the adjacent-cell spacing.

        Below this level no connected part of diameter <= 2**-n can contain
        an adjacent pair, so covers degenerate to singletons.
        """
        h = self.edge_length
        if h <= 0:
            return 0
        return max(0, int(math.floor(-math.log2(h) + 1e-9)))

    def diameter(self, A) -> float:
        return diameter(self, A)

    def is_connected(self, A) -> bool:
        return is_connected(self, A)


def diameter(X: Continuum, A) -> float:
    """Max pairwise normalized distance; 0 for empty or singleton sets."""
    idx = np.fromiter(A, dtype=int) if not isinstance(A, np.ndarray) else A
    if len(idx) < 2:
        return 0.0
    return max_pairwise(X.coords[idx])


def neighborhood(X: Continuum, A, eps: float, closed: bool = True) -> frozenset[int]:
    """O[A; eps] (closed) or O(A; eps) (open) as a cell set."""
    idx = np.fromiter(A, dtype=int)
    if len(idx) == 0:
        return frozenset()
    d = X.dist_rows(idx, np.arange(X.n)).min(axis=0)
    mask = d <= eps if closed else d < eps
    return frozenset(np.flatnonzero(mask).tolist())


def is_connected(X: Continuum, A) -> bool:
    """True iff A induces a connected subgraph (empty -> False)."""
    A = set(A)
    if not A:
        return False
    start = next(iter(A))
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for u in X.neighbors[v]:
            if u in A and u not in seen:
                seen.add(u)
                todo.append(u)
    return len(seen) == len(A)


def shortest_path_within(X: Continuum, A, a: int, b: int) -> list[int]:
    """BFS path from a to b inside A, lowest-id neighbour first."""
    A = set(A)
    prev = {a: None}
    q = deque([a])
    while q:
        v = q.popleft()
        if v == b:
            break
        for u in X.neighbors[v]:
            if u in A and u not in prev:
                prev[u] = v
                q.append(u)
    if b not in prev:
        raise Disconnected(f"no path from {a} to {b} inside the given set")
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


# -- generators -------------------------------------------------------------

def _grid(mask: np.ndarray, name: str) -> Continuum:
    """Row-major cells of a boolean grid with 4-adjacency."""
    rows, cols = np.nonzero(mask)
    index = -np.ones(mask.shape, dtype=int)
    index[rows, cols] = np.arange(len(rows))
    edges = []
    h, w = mask.shape
    for k, (r, c) in enumerate(zip(rows, cols)):
        if c + 1 < w and mask[r, c + 1]:
            edges.append((k, index[r, c + 1]))
        if r + 1 < h and mask[r + 1, c]:
            edges.append((k, index[r + 1, c]))
    return Continuum.from_cells(np.column_stack([cols, rows]), edges, name=name)


def carpet_mask(depth: int) -> np.ndarray:
    mask = np.ones((1, 1), dtype=bool)
    for _ in range(depth):
        z = np.zeros_like(mask)
        mask = np.block([[mask, mask, mask], [mask, z, mask], [mask, mask, mask]])
    return mask


def interval(k: int) -> Continuum:
    if k < 1:
        raise ValueError("interval needs k >= 1")
    return Continuum.from_cells(np.arange(k, dtype=float), [(i, i + 1) for i in range(k - 1)],
                                name=f"interval({k})")


def square(k: int) -> Continuum:
    if k < 1:
        raise ValueError("square needs k >= 1")
    return _grid(np.ones((k, k), dtype=bool), f"square({k})")


def sierpinski_carpet(depth: int) -> Continuum:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return _grid(carpet_mask(depth), f"carpet({depth})")


def sierpinski_gasket(depth: int) -> Continuum:
    """Pascal's triangle mod 2 on 2**depth rows, on a triangular lattice."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rows = 2 ** depth
    cells = [(i, j) for i in range(rows) for j in range(i + 1) if (i & j) == j]
    index = {c: k for k, c in enumerate(cells)}
    edges = []
    for k, (i, j) in enumerate(cells):
        for nb in ((i, j + 1), (i + 1, j), (i + 1, j + 1)):
            if nb in index:
                edges.append((k, index[nb]))
    coords = [(j - i / 2.0, i * math.sqrt(3) / 2.0) for i, j in cells]
    return Continuum.from_cells(coords, edges, name=f"gasket({depth})")


def generate(shape: str, param: int) -> Continuum:
    """Named generator: interval(k), square(k), carpet(depth), gasket(depth)."""
    table = {
        "interval": interval,
        "square": square,
        "carpet": sierpinski_carpet,
        "sierpinski_carpet": sierpinski_carpet,
        "gasket": sierpinski_gasket,
        "sierpinski_gasket": sierpinski_gasket,
    }
    try:
        fn = table[shape]
    except KeyError:
        raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}") from None
    return fn(int(param))


def load_bitmap(image, threshold: float = 127) -> Continuum:
    """One cell per foreground pixel (value > threshold), 4-adjacency.

    ``image`` is a 2-D array or a path to a PGM/PBM file.
    """
    if isinstance(image, (str, bytes)) or hasattr(image, "__fspath__"):
        from .pnm import read_pnm
        image = read_pnm(image)
    raster = np.asarray(image)
    if raster.ndim != 2 or raster.size == 0:
        raise Empty("raster must be a nonempty 2-D array")
    mask = raster > threshold
    if not mask.any():
        raise Empty("raster has no foreground pixels")
    return _grid(mask, "bitmap")


def subset_coords(X: Continuum, A: Sequence[int]) -> np.ndarray:
    return X.coords[np.asarray(list(A), dtype=int)]
