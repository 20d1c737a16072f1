"""Minimal (A,B)-connectors and their chain order.

A family of sets is treated through its intersection graph: two parts are
adjacent when they share a cell.  A shortest path from a virtual source
(joined to the parts meeting A) to a virtual sink (joined to the parts
meeting B) is chordless and its interior avoids A and B, so the visited
parts, in path order, form a chain.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import NoPath, NotAConnector, NotInChain


@dataclass(frozen=True)
class Chain:
    parts: tuple[frozenset, ...]
    source: frozenset
    sink: frozenset
    # indices of the parts in the family the chain was extracted from
    index: tuple[int, ...] = ()

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def union(self) -> frozenset:
        return frozenset().union(*self.parts) if self.parts else frozenset()


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    condition: int | None = None
    witness: tuple[int, ...] = ()
    message: str = "ok"


def _graph(family):
    """Adjacency lists of the intersection graph, via a cell -> parts index."""
    where: dict = {}
    for k, P in enumerate(family):
        for c in P:
            where.setdefault(c, []).append(k)
    adj = [set() for _ in family]
    for ks in where.values():
        for i in ks:
            adj[i].update(ks)
    for i, s in enumerate(adj):
        s.discard(i)
    return [sorted(s) for s in adj]


def minimal_connector(family: Sequence, A, B) -> Chain:
    """Lexicographically least shortest (A,B)-chain through ``family``."""
    A, B = frozenset(A), frozenset(B)
    fam = [frozenset(P) for P in family]
    if not A or not B:
        raise NotAConnector("A and B must be nonempty")
    if A & B:
        raise NotAConnector("A and B must be disjoint")
    starts = [k for k, P in enumerate(fam) if P & A]
    ends = {k for k, P in enumerate(fam) if P & B}
    if not starts or not ends:
        raise NotAConnector("no part meets A" if not starts else "no part meets B")
    adj = _graph(fam)
    # distances to the virtual sink
    dist = {k: 1 for k in ends}
    q = deque(sorted(ends))
    while q:
        v = q.popleft()
        for u in adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    reach = [k for k in starts if k in dist]
    if not reach:
        raise NoPath("union of the family does not join A to B")
    best = min(dist[k] for k in reach)
    cur = min(k for k in reach if dist[k] == best)
    path = [cur]
    while dist[cur] > 1:
        cur = min(u for u in adj[cur] if dist.get(u) == dist[cur] - 1)
        path.append(cur)
    return Chain(parts=tuple(fam[k] for k in path), source=A, sink=B, index=tuple(path))


def validate_chain(chain: Chain) -> ChainReport:
    """Check the three chain conditions; report the first violation found."""
    parts, A, B = chain.parts, chain.source, chain.sink
    k = len(parts)
    if k == 0:
        return ChainReport(False, 1, (), "empty chain")
    for i, P in enumerate(parts):
        if bool(P & A) != (i == 0):
            return ChainReport(False, 1, (i,), f"part {i} {'misses' if i == 0 else 'meets'} A")
    for i, P in enumerate(parts):
        if bool(P & B) != (i == k - 1):
            return ChainReport(False, 2, (i,), f"part {i} {'misses' if i == k - 1 else 'meets'} B")
    for i in range(k):
        for j in range(i + 1, k):
            if bool(parts[i] & parts[j]) != (j - i <= 1):
                what = "disjoint" if j - i == 1 else "intersecting"
                return ChainReport(False, 3, (i, j), f"parts {i},{j} are {what}")
    return ChainReport(True)


def is_connector(family: Sequence, A, B) -> bool:
    """Union connected (through shared cells) and meeting both A and B."""
    fam = [frozenset(P) for P in family]
    if not fam:
        return False
    A, B = frozenset(A), frozenset(B)
    adj = _graph(fam)
    seen, todo = {0}, [0]
    while todo:
        v = todo.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    if len(seen) != len(fam):
        return False
    return any(P & A for P in fam) and any(P & B for P in fam)


def order_chain(parts, A, B) -> tuple[frozenset, ...] | None:
    """Re-derive the chain order of an unordered minimal connector, if any."""
    parts = [frozenset(P) for P in parts]
    A, B = frozenset(A), frozenset(B)
    first = [P for P in parts if P & A]
    if len(first) != 1:
        return None
    out = [first[0]]
    left = [P for P in parts if P is not first[0]]
    while left:
        nxt = [P for P in left if P & out[-1]]
        if len(nxt) != 1:
            return None
        out.append(nxt[0])
        left = [P for P in left if P is not nxt[0]]
    ch = Chain(tuple(out), A, B)
    return ch.parts if validate_chain(ch).ok else None


def canonical_compare(chain: Chain, i, j) -> int:
    """-1, 0 or 1 by chain position; parts may be given as sets or indices."""
    def pos(P):
        if isinstance(P, int):
            if 0 <= P < len(chain.parts):
                return P
            raise NotInChain(f"index {P} outside chain of length {len(chain)}")
        P = frozenset(P)
        try:
            return chain.parts.index(P)
        except ValueError:
            raise NotInChain("part does not belong to the chain") from None
    a, b = pos(i), pos(j)
    return (a > b) - (a < b)
