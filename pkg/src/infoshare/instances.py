"""Instance families: small named gadgets, extremal constructions and random games.

Each gadget is built to exhibit a handful of numeric properties (welfare,
component counts, which partitions are stable); the test-suite checks every
one of them against the exact oracles.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .construct import MoveSpec
from .model import NEG_INF, Instance, Network


def _from_friends(n: int, friends: Iterable[tuple[int, int]], labels=None) -> Instance:
    u = [[0 if i == j else NEG_INF for j in range(n)] for i in range(n)]
    for i, j in friends:
        u[i][j] = u[j][i] = 1
    return Instance(n, u, True, labels)


def _clique(members):
    members = list(members)
    return [(a, b) for x, a in enumerate(members) for b in members[x + 1 :]]


def gen_friends_enemies(n: int, enemy_pairs: Iterable[tuple[int, int]] = ()) -> Instance:
    u = [[0 if i == j else 1 for j in range(n)] for i in range(n)]
    for i, j in enemy_pairs:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bad enemy pair ({i}, {j})")
        u[i][j] = u[j][i] = NEG_INF
    return Instance(n, u, True)


def gen_Bn(n: int, literal: bool = False) -> Instance:
    """x_1..x_n are agents 0..n-1 and y_1..y_n are n..2n-1.

    x_i and y_j (and x_j, y_i) are enemies when 3j <= i + 1.  With
    ``literal`` the cut is 3j <= i, under which the top layer ties with
    other maximum independent sets (e.g. {x3..x9, y4..y8} for n = 9).
    """
    if n < 3:
        raise ValueError("B_n needs n >= 3")
    slack = 0 if literal else 1
    enemies = []
    for i in range(1, n + 1):
        for j in range(1, (i + slack) // 3 + 1):
            enemies.append((i - 1, n + j - 1))
            enemies.append((j - 1, n + i - 1))
    labels = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    inst = gen_friends_enemies(2 * n, set(enemies))
    return Instance(inst.n, inst.u, True, labels)


def bn_layer(n: int, level: int) -> tuple[int, ...]:
    """The agents x_i, y_i with n/3^level < i <= n/3^(level-1)."""
    lo, hi = 3**level, 3 ** (level - 1)
    idx = [i for i in range(1, n + 1) if n < i * lo and i * hi <= n]
    return tuple(sorted([i - 1 for i in idx] + [n + i - 1 for i in idx]))


def gen_grid(r: int, c: int) -> Instance:
    """Agent at (row, col) is row*c + col; friends share a row or a column."""
    if r < 2 or c < 2:
        raise ValueError("grid needs r, c >= 2")
    n = r * c
    friends = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if a // c == b // c or a % c == b % c
    ]
    labels = [f"r{a // c}c{a % c}" for a in range(n)]
    return _from_friends(n, friends, labels)


def grid_rows(r: int, c: int):
    return tuple(tuple(row * c + col for col in range(c)) for row in range(r))


def grid_columns(r: int, c: int):
    return tuple(tuple(row * c + col for row in range(r)) for col in range(c))


def gen_fig_pendant_k4() -> Instance:
    """K4 on a,b,c,d (0..3), each with one pendant friend a1..d1 (4..7)."""
    friends = _clique(range(4)) + [(i, i + 4) for i in range(4)]
    return _from_friends(8, friends, ["a", "b", "c", "d", "a1", "b1", "c1", "d1"])


def gen_fig_distinct_stable() -> Instance:
    """x1..x4 (0..3) and y1..y4 (4..7) form K4s; {x_i, y_i, z_i} are triangles."""
    friends = _clique(range(4)) + _clique(range(4, 8))
    for i in range(4):
        friends += _clique((i, 4 + i, 8 + i))
    labels = [f"{p}{i}" for p in "xyz" for i in range(1, 5)]
    return _from_friends(12, friends, labels)


def gen_fig_k4_triangles() -> Instance:
    """Triangles {a_i, b_i, c_i} plus a K4 on a1..a4 (agents 0..3)."""
    friends = _clique(range(4))
    for i in range(4):
        friends += _clique((i, 4 + i, 8 + i))
    labels = [f"{p}{i}" for p in "abc" for i in range(1, 5)]
    return _from_friends(12, friends, labels)


def gen_k3_pendants() -> Instance:
    """Triangle a,b,c (0..2) with pendants a1,b1,c1 (3..5)."""
    friends = _clique(range(3)) + [(i, i + 3) for i in range(3)]
    return _from_friends(6, friends, ["a", "b", "c", "a1", "b1", "c1"])


def gen_two_cliques_matching(n: int) -> Instance:
    """Two friendly cliques of n/2 joined by a matching missing one pair.

    A is 0..n/2-1, B is n/2..n-1; a_i ~ b_i for i >= 1 and a_0, b_0 unmatched.
    """
    if n < 4 or n % 2:
        raise ValueError("n must be even and at least 4")
    h = n // 2
    friends = _clique(range(h)) + _clique(range(h, n)) + [(i, h + i) for i in range(1, h)]
    return _from_friends(n, friends)


def two_cliques_matching_partition(n: int):
    h = n // 2
    return ((0,), (h,)) + tuple((i, h + i) for i in range(1, h))


@dataclass
class CycleGadget:
    instance: Instance
    start: Network
    schedule: list = field(default_factory=list)


def gen_best_response_cycle(s_size: int = 6) -> CycleGadget:
    """Clique s (0..s_size-1) plus a, b, c, d, e, and the six-move schedule."""
    if s_size < 2:
        raise ValueError("s_size must be at least 2")
    s = list(range(s_size))
    a, b, c, d, e = range(s_size, s_size + 5)
    friends = _clique(s) + [(e, x) for x in s] + [(a, x) for x in s] + [(c, x) for x in s]
    friends += [(e, a), (e, b), (e, c), (e, d), (a, b), (c, d)]
    labels = [f"s{i}" for i in s] + ["a", "b", "c", "d", "e"]
    inst = _from_friends(s_size + 5, friends, labels)
    start = Network(inst.n, frozenset(_clique(s + [e]) + [(a, e), (c, d)]))
    s0 = s[0]
    schedule = [
        MoveSpec((c, e), (s0, d)),  # e swaps a for c; c keeps d
        MoveSpec((d,), ()),  # d leaves the component holding s
        MoveSpec((a, b), ()),
        MoveSpec((a, e), (s0, b)),  # e swaps c for a; a keeps b
        MoveSpec((b,), ()),
        MoveSpec((c, d), ()),
    ]
    return CycleGadget(inst, start, schedule)


def gen_stable_marriage(men, women) -> Instance:
    """Men are agents 0..n-1, women n..2n-1; u = 1 + n - rank (rank from 1)."""
    n = len(men)
    for prefs in (men, women):
        if len(prefs) != n or any(sorted(p) != list(range(n)) for p in prefs):
            raise ValueError("preferences must be complete strict lists")
    u = [[0 if i == j else NEG_INF for j in range(2 * n)] for i in range(2 * n)]
    for m in range(n):
        for p, w in enumerate(men[m], start=1):
            u[m][n + w] = 1 + n - p
    for w in range(n):
        for p, m in enumerate(women[w], start=1):
            u[n + w][m] = 1 + n - p
    symmetric = all(u[i][j] == u[j][i] for i in range(2 * n) for j in range(2 * n))
    labels = [f"m{i}" for i in range(n)] + [f"w{i}" for i in range(n)]
    return Instance(2 * n, u, symmetric, labels)


def random_preferences(n: int, rng: random.Random):
    men = [rng.sample(range(n), n) for _ in range(n)]
    women = [rng.sample(range(n), n) for _ in range(n)]
    return men, women


def gen_strong_weak_ties() -> Instance:
    """Anna-Bob and Claire-Daniel strong ties of 5; Bob and Daniel are enemies."""
    A, B, C, D = range(4)
    u = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    u[A][B] = u[B][A] = 5
    u[C][D] = u[D][C] = 5
    u[B][D] = u[D][B] = NEG_INF
    return Instance(4, u, True, ["Anna", "Bob", "Claire", "Daniel"])


def gen_c_nonexistence(c: int = 5) -> Instance:
    """w1, w2, m1, m2 = 0..3 with u(w1,m1) = u(w2,m2) = c and m1, m2 enemies."""
    w1, w2, m1, m2 = range(4)
    u = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    u[w1][m1] = u[m1][w1] = c
    u[w2][m2] = u[m2][w2] = c
    u[m1][m2] = u[m2][m1] = NEG_INF
    return Instance(4, u, True, ["w1", "w2", "m1", "m2"])


def gen_asymmetric_nonexistence() -> Instance:
    """x, v1, v2, v3 = 0..3; v1 hates v2, v2 hates v3, v3 hates v1 (one way only)."""
    x, v1, v2, v3 = range(4)
    u = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    u[v1][v2] = u[v2][v3] = u[v3][v1] = NEG_INF
    return Instance(4, u, False, ["x", "v1", "v2", "v3"])


def gen_stability_test_gadget(L: Network, k: int) -> tuple[Instance, Network]:
    """Pad each vertex of L with k-2 private friends; test the (k-1)-cliques.

    Vertex x_i of L keeps index i; its helpers are L.n + i*(k-2) + t.
    Edges of L are enemy pairs, non-edges of L are friendly.
    """
    if k < 3:
        raise ValueError("gadget needs k >= 3")
    n = L.n
    total = n + n * (k - 2)
    owner = list(range(n)) + [i for i in range(n) for _ in range(k - 2)]
    u = [[0 if a == b else NEG_INF for b in range(total)] for a in range(total)]
    for a in range(total):
        for b in range(a + 1, total):
            if a < n and b < n:
                val = NEG_INF if (a, b) in L.edges else 1
            else:
                val = 1 if owner[a] == owner[b] else NEG_INF
            u[a][b] = u[b][a] = val
    blocks = [[i] + [n + i * (k - 2) + t for t in range(k - 2)] for i in range(n)]
    return Instance(total, u, True), Network.from_blocks(total, blocks)


def gen_random(n: int, enemy_probability: float, seed: int = 0) -> Instance:
    if not 0 <= enemy_probability <= 1:
        raise ValueError("enemy probability must lie in [0, 1]")
    rng = random.Random(seed)
    enemies = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < enemy_probability
    ]
    return gen_friends_enemies(n, enemies)


def random_graph(n: int, p: float, rng: random.Random) -> Network:
    return Network(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self):
        fn = FAMILIES[self.name]
        kwargs = dict(self.params)
        if self.seed is not None:
            kwargs["seed"] = self.seed
        return fn(**kwargs)


FAMILIES = {
    "friends-enemies": gen_friends_enemies,
    "bn": gen_Bn,
    "grid": gen_grid,
    "pendant-k4": gen_fig_pendant_k4,
    "distinct-stable": gen_fig_distinct_stable,
    "k4-triangles": gen_fig_k4_triangles,
    "k3-pendants": gen_k3_pendants,
    "two-cliques-matching": gen_two_cliques_matching,
    "cycle": gen_best_response_cycle,
    "stable-marriage": gen_stable_marriage,
    "strong-weak": gen_strong_weak_ties,
    "c-nonexist": gen_c_nonexistence,
    "asym-nonexist": gen_asymmetric_nonexistence,
    "gadget": gen_stability_test_gadget,
    "random": gen_random,
}
