"""Exact independent-set and colouring routines on bitmask adjacency.

Graphs are given as a list ``adj`` where bit j of ``adj[i]`` is set iff i~j.
Vertex sets are ints used as bitsets.
"""
from __future__ import annotations



class BoundExceeded(ValueError):
    """Input larger than the configured ceiling of an exact solver."""


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _greedy_matching(P: int, adj) -> int:
    size = 0
    free = P
    while free:
        low = free & -free
        v = low.bit_length() - 1
        free ^= low
        nb = adj[v] & free
        if nb:
            free ^= nb & -nb
            size += 1
    return size


def _components(P: int, adj):
    while P:
        seed = P & -P
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & P & ~comp
            comp |= new
            frontier |= new
        P &= ~comp
        yield comp


def independence_number(P: int, adj) -> int:
    """Size of a maximum independent set of the subgraph induced by ``P``."""
    return _alpha(P, adj, {})


def _alpha(P: int, adj, memo) -> int:
    if P == 0:
        return 0
    if P in memo:
        return memo[P]
    taken = 0
    rest = P
    # forced moves: isolated vertices, then pendant vertices
    changed = True
    while changed and rest:
        changed = False
        for v in bits(rest):
            if not (rest >> v) & 1:
                continue
            nb = adj[v] & rest
            if nb == 0:
                taken += 1
                rest &= ~(1 << v)
                changed = True
            elif nb & (nb - 1) == 0:
                taken += 1
                rest &= ~((1 << v) | nb)
                changed = True
    if rest == 0:
        memo[P] = taken
        return taken
    comps = list(_components(rest, adj))
    if len(comps) > 1:
        result = taken + sum(_alpha(c, adj, memo) for c in comps)
        memo[P] = result
        return result
    result = taken + _alpha_connected(rest, adj, memo)
    memo[P] = result
    return result


def _alpha_connected(P: int, adj, memo) -> int:
    # branch on a vertex of maximum degree
    best_v, best_d = -1, -1
    for v in bits(P):
        d = popcount(adj[v] & P)
        if d > best_d:
            best_v, best_d = v, d
    v = best_v
    with_v = 1 + _alpha(P & ~(adj[v] | (1 << v)), adj, memo)
    upper = popcount(P) - 1 - _greedy_matching(P & ~(1 << v), adj)
    if with_v >= upper:
        return with_v
    without = _alpha(P & ~(1 << v), adj, memo)
    return max(with_v, without)


def max_independent_set(n: int, adj, bound: int | None = 200) -> list[int]:
    """Maximum independent set, lexicographically smallest among the maxima."""
    if bound is not None and n > bound:
        raise BoundExceeded(f"{n} vertices exceeds the exact MIS bound {bound}")
    memo: dict[int, int] = {}
    P = (1 << n) - 1
    target = _alpha(P, adj, memo)
    chosen = []
    for v in range(n):
        if not (P >> v) & 1:
            continue
        rest = P & ~(adj[v] | (1 << v))
        if 1 + _alpha(rest, adj, memo) == target:
            chosen.append(v)
            target -= 1
            P = rest
        else:
            P &= ~(1 << v)
    return chosen


def greedy_clique(n: int, adj) -> list[int]:
    best: list[int] = []
    for start in range(n):
        clique = [start]
        cand = adj[start]
        while cand:
            v = max(bits(cand), key=lambda x: popcount(adj[x] & cand))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def dsatur_coloring(n: int, adj) -> list[int]:
    colors = [-1] * n
    for _ in range(n):
        best, key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = {colors[w] for w in bits(adj[v]) if colors[w] >= 0}
            k = (len(sat), popcount(adj[v]), -v)
            if key is None or k > key:
                best, key = v, k
        used = {colors[w] for w in bits(adj[best]) if colors[w] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[best] = c
    return colors


def k_coloring(n: int, adj, k: int) -> list[int] | None:
    """A proper colouring with at most ``k`` colours, or None."""
    if n == 0:
        return []
    if k <= 0:
        return None
    colors = [-1] * n

    def pick():
        best, key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = len({colors[w] for w in bits(adj[v]) if colors[w] >= 0})
            kk = (sat, popcount(adj[v]))
            if key is None or kk > key:
                best, key = v, kk
        return best

    def solve(done, used):
        if done == n:
            return True
        v = pick()
        forbidden = {colors[w] for w in bits(adj[v]) if colors[w] >= 0}
        # symmetry breaking: at most one fresh colour is tried
        for c in range(min(used + 1, k)):
            if c in forbidden:
                continue
            colors[v] = c
            if solve(done + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    return list(colors) if solve(0, 0) else None


def chromatic_number(n: int, adj, bound: int | None = 40) -> tuple[int, list[int]]:
    if bound is not None and n > bound:
        raise BoundExceeded(f"{n} vertices exceeds the exact colouring bound {bound}")
    if n == 0:
        return 0, []
    lower = len(greedy_clique(n, adj))
    upper_coloring = dsatur_coloring(n, adj)
    upper = max(upper_coloring) + 1
    for k in range(lower, upper):
        coloring = k_coloring(n, adj, k)
        if coloring is not None:
            return k, coloring
    return upper, upper_coloring
