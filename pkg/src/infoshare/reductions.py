"""The 3-colouring -> 3CTPG -> stable bichromatic colouring -> matching-structure chain.

3CTPG: 3-colouring of a graph whose vertices come partitioned into triangles.
SCBG: stable colouring of a graph whose edges are red, blue, or both.
Plain graphs are passed around as ``Network`` objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .graphs import BoundExceeded, k_coloring
from .model import NEG_INF, Instance, Network, canonical_partition, components


def _pair(a, b):
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class BichromaticGraph:
    n: int
    red: frozenset
    blue: frozenset

    def __post_init__(self):
        for name in ("red", "blue"):
            edges = set()
            for a, b in getattr(self, name):
                if a == b:
                    raise ValueError(f"self-loop at {a}")
                if not (0 <= a < self.n and 0 <= b < self.n):
                    raise ValueError(f"edge ({a}, {b}) out of range")
                edges.add(_pair(a, b))
            object.__setattr__(self, name, frozenset(edges))

    def masks(self):
        red = [0] * self.n
        blue = [0] * self.n
        for a, b in self.red:
            red[a] |= 1 << b
            red[b] |= 1 << a
        for a, b in self.blue:
            blue[a] |= 1 << b
            blue[b] |= 1 << a
        return red, blue

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "red": [list(e) for e in sorted(self.red)],
            "blue": [list(e) for e in sorted(self.blue)],
        }


@dataclass(frozen=True)
class TrianglePartitionedGraph:
    graph: Network
    triples: tuple

    def __post_init__(self):
        seen = set()
        for t in self.triples:
            if len(t) != 3:
                raise ValueError(f"{t} is not a triple")
            seen.update(t)
            for a, b in combinations(t, 2):
                if _pair(a, b) not in self.graph.edges:
                    raise ValueError(f"triple {t} does not induce a triangle")
        if seen != set(range(self.graph.n)):
            raise ValueError("triples must partition the vertex set")

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in sorted(self.graph.edges)],
            "triples": [list(t) for t in self.triples],
        }


def graph_masks(g: Network) -> list[int]:
    adj = [0] * g.n
    for a, b in g.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return adj


def is_3_colorable(g: Network) -> bool:
    return k_coloring(g.n, graph_masks(g), 3) is not None


def reduce_3col_to_3ctpg(H: Network) -> TrianglePartitionedGraph:
    """Give every vertex v two private neighbours v', v'' forming a triangle.

    Vertex v of H becomes 3v; its new partners are 3v+1 and 3v+2.
    """
    n = H.n
    edges = {_pair(3 * a, 3 * b) for a, b in H.edges}
    triples = []
    for v in range(n):
        t = (3 * v, 3 * v + 1, 3 * v + 2)
        triples.append(t)
        edges.update(_pair(a, b) for a, b in combinations(t, 2))
    return TrianglePartitionedGraph(Network(3 * n, frozenset(edges)), tuple(triples))


def reduce_3ctpg_to_scbg(tpg: TrianglePartitionedGraph) -> BichromaticGraph:
    """Triangles of the partition get red and blue edges, all other edges blue only."""
    red = set()
    for t in tpg.triples:
        red.update(_pair(a, b) for a, b in combinations(t, 2))
    return BichromaticGraph(tpg.graph.n, frozenset(red), frozenset(tpg.graph.edges))


def _block_masks(K: BichromaticGraph, partition):
    block_of = [-1] * K.n
    masks = []
    for idx, b in enumerate(partition):
        m = 0
        for v in b:
            if block_of[v] >= 0:
                raise ValueError(f"vertex {v} in two blocks")
            block_of[v] = idx
            m |= 1 << v
        masks.append(m)
    if min(block_of, default=0) < 0:
        raise ValueError("partition does not cover every vertex")
    return block_of, masks


def _checked_pairs(K: BichromaticGraph, edges_only: bool):
    if edges_only:
        return sorted(K.red | K.blue)
    return list(combinations(range(K.n), 2))


def verify_stable_coloring(K: BichromaticGraph, partition, edges_only: bool = False) -> bool:
    """True iff every pair v in Si, w in Sj (i != j) sees at least three of:
    red v->Sj, blue v->Sj, red w->Si, blue w->Si.

    By default every cross-block pair is checked, which is what the
    matching-structure game enforces (any two agents in different
    components may pair up).  ``edges_only`` restricts the check to pairs
    joined in K.
    """
    red, blue = K.masks()
    block_of, masks = _block_masks(K, partition)
    for a, b in sorted(K.red | K.blue):
        if block_of[a] == block_of[b]:
            raise ValueError(f"block {block_of[a]} is not independent: edge ({a}, {b})")
    for a, b in _checked_pairs(K, edges_only):
        if block_of[a] == block_of[b]:
            continue
        Si, Sj = masks[block_of[a]], masks[block_of[b]]
        kinds = (
            bool(red[a] & Sj) + bool(blue[a] & Sj) + bool(red[b] & Si) + bool(blue[b] & Si)
        )
        if kinds < 3:
            return False
    return True


def stable_coloring_search(K: BichromaticGraph, bound: int | None = 15, edges_only: bool = False):
    """First stable colouring in canonical partition order, or None.

    Partial assignments are cut as soon as some placed pair cannot reach
    three kinds even if every unplaced vertex lands in the right block.
    """
    n = K.n
    if bound is not None and n > bound:
        raise BoundExceeded(f"{n} vertices exceeds the stable-colouring bound {bound}")
    red, blue = K.masks()
    adj = [red[v] | blue[v] for v in range(n)]
    block_of = [-1] * n
    masks: list[int] = []
    pairs = _checked_pairs(K, edges_only)
    # a pair is first checkable when its later end is placed, and its
    # optimistic count can only drop when a neighbour of either end is placed
    by_last = [[] for _ in range(n)]
    watch = [[] for _ in range(n)]
    for a, b in pairs:
        by_last[max(a, b)].append((a, b))
        for v in range(max(a, b) + 1, n):
            if (adj[a] | adj[b]) >> v & 1:
                watch[v].append((a, b))

    def feasible(a, b, placed):
        if block_of[a] == block_of[b]:
            return True
        Si, Sj = masks[block_of[a]], masks[block_of[b]]
        free = ~placed
        kinds = 0
        for col in (red, blue):
            if col[a] & (Sj | free):
                kinds += 1
            if col[b] & (Si | free):
                kinds += 1
        return kinds >= 3

    def rec(v, placed):
        if v == n:
            return True
        for idx in range(len(masks) + 1):
            if idx == len(masks):
                masks.append(0)
            elif masks[idx] & adj[v]:
                continue
            masks[idx] |= 1 << v
            block_of[v] = idx
            now = placed | (1 << v)
            if all(feasible(a, b, now) for a, b in by_last[v]) and all(
                feasible(a, b, now) for a, b in watch[v]
            ):
                if rec(v + 1, now):
                    return True
            masks[idx] &= ~(1 << v)
            block_of[v] = -1
            if masks[idx] == 0:
                masks.pop()
        return False

    if n == 0:
        return ()
    if rec(0, 0):
        return canonical_partition(
            [v for v in range(n) if block_of[v] == idx] for idx in range(len(masks))
        )
    return None


def reduce_scbg_to_matching_instance(K: BichromaticGraph) -> Instance:
    """x_v = v and y_v = n + v, tied with weight c = 2n + 1.

    Red (v, w) makes x_v, x_w enemies; blue (v, w) makes y_v, y_w enemies.
    """
    n = K.n
    c = 2 * n + 1
    u = [[0 if i == j else 1 for j in range(2 * n)] for i in range(2 * n)]
    for v in range(n):
        u[v][n + v] = u[n + v][v] = c
    for a, b in K.red:
        u[a][b] = u[b][a] = NEG_INF
    for a, b in K.blue:
        u[n + a][n + b] = u[n + b][n + a] = NEG_INF
    labels = [f"x{v}" for v in range(n)] + [f"y{v}" for v in range(n)]
    return Instance(2 * n, u, True, labels)


def matching_network_to_coloring(net: Network, n: int):
    """Read a colouring of K off a network of the matching instance.

    Returns None if some x_v, y_v pair is split across components.
    """
    out = []
    for b in components(net):
        xs = {v for v in b if v < n}
        ys = {v - n for v in b if v >= n}
        if xs != ys:
            return None
        out.append(sorted(xs))
    return canonical_partition(out)


def graphs_up_to_isomorphism(n: int) -> list[Network]:
    """One representative per isomorphism class of simple graphs on n vertices."""
    pairs = list(combinations(range(n), 2))
    index = {p: t for t, p in enumerate(pairs)}
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for code in range(1 << len(pairs)):
        if code in seen:
            continue
        edges = [pairs[t] for t in range(len(pairs)) if code >> t & 1]
        for p in perms:
            c = 0
            for a, b in edges:
                c |= 1 << index[_pair(p[a], p[b])]
            seen.add(c)
        out.append(Network(n, frozenset(edges)))
    return out


def chain(H: Network) -> dict:
    """Every intermediate artifact of the reduction chain for H."""
    tpg = reduce_3col_to_3ctpg(H)
    K = reduce_3ctpg_to_scbg(tpg)
    W = reduce_scbg_to_matching_instance(K)
    return {"3ctpg": tpg, "scbg": K, "matching": W}
