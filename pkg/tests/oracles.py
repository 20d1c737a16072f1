"""Brute-force reference implementations, written independently of the package code."""
from __future__ import annotations

import itertools
import math


def pair_dist(X, i, j):
    return math.dist(X.coords[i], X.coords[j])


def set_diam(X, S):
    S = list(S)
    return max((pair_dist(X, i, j) for i, j in itertools.combinations(S, 2)), default=0.0)


def connected(X, S):
    S = set(S)
    if not S:
        return False
    start = min(S)
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for u in X.neighbors[v]:
            if u in S and u not in seen:
                seen.add(u)
                frontier.append(u)
    return seen == S


def min_cover_size(X, eps, closed=False):
    """Smallest number of connected sets of diameter <= eps covering X.

    Enumerates every subset of cells (so only for tiny X) and tries covers of
    increasing size.
    """
    n = X.n
    cells = range(n)
    feasible = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(cells, r)
                if set_diam(X, c) <= eps + 1e-12 and connected(X, c)]
    # only maximal sets matter
    feasible = [S for S in feasible if not any(S < T for T in feasible)]
    edges = [(i, j) for i in cells for j in X.neighbors[i] if i < j]
    for k in range(1, n + 1):
        for combo in itertools.combinations(feasible, k):
            if set().union(*combo) != set(cells):
                continue
            if closed and not all(any(i in S and j in S for S in combo) for i, j in edges):
                continue
            return k
    return None


def nerve_connector(family, A, B):
    """Union joined through pairwise intersections, meeting both A and B."""
    fam = list(family)
    if not fam:
        return False
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in range(len(fam)):
            if u not in seen and fam[u] & fam[v]:
                seen.add(u)
                frontier.append(u)
    return len(seen) == len(fam) and any(P & A for P in fam) and any(P & B for P in fam)


def minimal_connectors(family, A, B):
    """All inclusion-minimal sub-connectors, as sets of family indices."""
    k = len(family)
    is_conn = [False] * (1 << k)
    for mask in range(1, 1 << k):
        is_conn[mask] = nerve_connector([family[i] for i in range(k) if mask >> i & 1], A, B)
    has_sub = [False] * (1 << k)
    out = []
    for mask in range(1, 1 << k):
        below = any(has_sub[mask ^ (1 << i)] for i in range(k) if mask >> i & 1)
        has_sub[mask] = is_conn[mask] or below
        if is_conn[mask] and not below:
            out.append(frozenset(i for i in range(k) if mask >> i & 1))
    return out


def chain_ok(parts, A, B):
    k = len(parts)
    if k == 0:
        return False
    for i, P in enumerate(parts):
        if bool(P & A) != (i == 0) or bool(P & B) != (i == k - 1):
            return False
    for i in range(k):
        for j in range(i + 1, k):
            if bool(parts[i] & parts[j]) != (j - i == 1):
                return False
    return True


def level_violations(X, t, cells, deltas, const, levels):
    """Pairs with |t - t'| < deltas[n] whose cells are farther than const * 2**-n."""
    bad = []
    for n in levels:
        lim = const * 2.0 ** -n
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                if t[j] - t[i] >= deltas[n]:
                    break
                if pair_dist(X, cells[i], cells[j]) > lim + 1e-12:
                    bad.append((n, i, j))
    return bad
