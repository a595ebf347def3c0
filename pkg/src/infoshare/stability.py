"""Defection search and k-stability.

A k-defection by a set S is modelled by the components S ends up connected
to.  After S drops every incident edge, the rest of the network splits into
residual components; S may stay attached to any subset of those containing
an original neighbour of S.  Every outcome of "form all edges inside S and
delete any subset of your other edges" is such an attachment choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .graphs import BoundExceeded, independence_number, max_independent_set
from .model import (
    NEG_INF,
    Instance,
    Network,
    block_utility,
    canonical_partition,
    cliqueify,
    components,
    conflict_graph,
    is_clique_partition,
)
from .partitions import conflict_free_partitions

ORACLE_BOUND = 14


@dataclass(frozen=True)
class Defection:
    participants: tuple
    attached: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "participants", tuple(sorted(self.participants)))
        object.__setattr__(self, "attached", canonical_partition(self.attached) if self.attached else ())

    def to_dict(self) -> dict:
        return {
            "participants": list(self.participants),
            "attached": [list(c) for c in self.attached],
        }


@dataclass(frozen=True)
class DefectionReport:
    defection: Defection
    before: tuple
    after: tuple

    def gain(self):
        return sum(a - b for a, b in zip(self.after, self.before))

    def to_dict(self) -> dict:
        def tok(x):
            return "-inf" if x == NEG_INF else x

        doc = self.defection.to_dict()
        doc["utilities"] = [
            {"agent": s, "before": tok(b), "after": tok(a)}
            for s, b, a in zip(self.defection.participants, self.before, self.after)
        ]
        return doc


def residual_components(net: Network, S: Sequence[int]) -> list[tuple[int, ...]]:
    """Components of ``net`` minus every edge touching S, restricted to V \\ S."""
    S = set(S)
    if not S:
        raise ValueError("participant set must be nonempty")
    adj = net.neighbours()
    seen = set(S)
    out = []
    for v in range(net.n):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(tuple(sorted(comp)))
    return sorted(out, key=lambda c: c[0])


def apply_defection(net: Network, d: Defection, cliqueified: bool = False) -> Network:
    """Carry out a defection.

    The result keeps every untouched edge, adds all edges inside S, and keeps
    each original edge from S into an attached component.  Pass
    ``cliqueified=True`` to get the disjoint-clique form instead.
    """
    S = set(d.participants)
    if not S or any(not 0 <= s < net.n for s in S):
        raise ValueError(f"bad participant set {d.participants}")
    residual = set(residual_components(net, S))
    adj = net.neighbours()
    touched = set()
    for s in S:
        touched |= adj[s]
    attached = set()
    for comp in d.attached:
        if comp not in residual:
            raise ValueError(f"{list(comp)} is not a residual component")
        if not touched.intersection(comp):
            raise ValueError(f"component {list(comp)} has no original neighbour of the defectors")
        attached.update(comp)
    edges = {e for e in net.edges if e[0] not in S and e[1] not in S}
    edges.update(combinations(sorted(S), 2))
    edges.update(e for e in net.edges if (e[0] in S and e[1] in attached) or (e[1] in S and e[0] in attached))
    out = Network(net.n, frozenset(edges))
    return cliqueify(out) if cliqueified else out


class _Search:
    """Defection enumerator over a fixed instance and network."""

    def __init__(self, inst: Instance, blocks, adj=None):
        n = inst.n
        self.inst = inst
        self.u = inst.u
        self.blocks = blocks
        self.adj = adj  # None means the network is the disjoint cliques on blocks
        self.block_of = [0] * n
        for idx, b in enumerate(blocks):
            for v in b:
                self.block_of[v] = idx
        self.before = [block_utility(inst, blocks[self.block_of[i]], i) for i in range(n)]
        self.conflict = inst.conflict_masks()
        ceiling = [sum(max(0, x) for j, x in enumerate(self.u[i]) if j != i) for i in range(n)]
        # an agent already at its best possible utility never strictly improves
        self.movable = [i for i in range(n) if self.before[i] < ceiling[i]]

    def participant_sets(self, size: int) -> Iterator[tuple[int, ...]]:
        cands = self.movable
        conflict = self.conflict
        chosen: list[int] = []

        def rec(start, mask):
            if len(chosen) == size:
                yield tuple(chosen)
                return
            last = len(cands) - (size - len(chosen))
            for idx in range(start, last + 1):
                v = cands[idx]
                if conflict[v] & mask:
                    continue
                chosen.append(v)
                yield from rec(idx + 1, mask | (1 << v))
                chosen.pop()

        yield from rec(0, 0)

    def adjacent_residuals(self, S: tuple[int, ...]) -> list[tuple[int, ...]]:
        Sset = set(S)
        if self.adj is None:
            out = []
            for idx in sorted({self.block_of[s] for s in S}):
                rest = tuple(v for v in self.blocks[idx] if v not in Sset)
                if rest:
                    out.append(rest)
            out.sort(key=lambda c: c[0])
            return out
        adj = self.adj
        seen = set(Sset)
        out = []
        starts = sorted({y for s in S for y in adj[s]} - Sset)
        for v in starts:
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            stack = [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        out.sort(key=lambda c: c[0])
        return out

    def improving_for(self, S: tuple[int, ...]) -> Iterator[DefectionReport]:
        u = self.u
        comps = self.adjacent_residuals(S)
        base = [sum(u[s][t] for t in S if t != s) for s in S]
        weights = [[sum(u[s][j] for j in c) for c in comps] for s in S]
        before = [self.before[s] for s in S]
        for idx in range(len(S)):
            best = base[idx] + sum(max(0, w) for w in weights[idx])
            if not best > before[idx]:
                return
        m = len(comps)
        for r in range(m + 1):
            for pick in combinations(range(m), r):
                after = []
                ok = True
                for idx in range(len(S)):
                    val = base[idx]
                    w = weights[idx]
                    for c in pick:
                        val += w[c]
                    if not val > before[idx]:
                        ok = False
                        break
                    after.append(val)
                if ok:
                    d = Defection(S, tuple(comps[c] for c in pick))
                    yield DefectionReport(d, tuple(before), tuple(after))

    def improving(self, k: int) -> Iterator[DefectionReport]:
        for size in range(1, min(k, self.inst.n) + 1):
            for S in self.participant_sets(size):
                yield from self.improving_for(S)


def _search_for(inst: Instance, net: Network) -> _Search:
    if net.n != inst.n:
        raise ValueError("network and instance sizes differ")
    blocks = components(net)
    if is_clique_partition(net):
        return _Search(inst, blocks)
    return _Search(inst, blocks, net.neighbours())


def iter_improving_defections(inst: Instance, net: Network, k: int) -> Iterator[DefectionReport]:
    """All improving defections with at most k participants, in canonical order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return _search_for(inst, net).improving(k)


def find_improving_defection(inst: Instance, net: Network, k: int) -> DefectionReport | None:
    return next(iter_improving_defections(inst, net, k), None)


def is_k_stable(inst: Instance, net: Network, k: int) -> tuple[bool, DefectionReport | None]:
    witness = find_improving_defection(inst, net, k)
    return witness is None, witness


def partition_is_k_stable(inst: Instance, blocks, k: int) -> bool:
    """Stability of the disjoint-clique network on ``blocks``."""
    return next(_Search(inst, canonical_partition(blocks)).improving(k), None) is None


def best_unilateral_deviation(inst: Instance, net: Network, i: int) -> DefectionReport | None:
    """Best edge-deletion move for a single agent, or None if none improves.

    Each residual component next to i is kept exactly when it adds a
    strictly positive amount to i's utility.
    """
    if not 0 <= i < inst.n:
        raise IndexError(f"agent {i} out of range")
    search = _search_for(inst, net)
    comps = search.adjacent_residuals((i,))
    chosen = []
    total = 0
    for c in comps:
        w = sum(inst.u[i][j] for j in c)
        if w > 0:
            chosen.append(c)
            total += w
    before = search.before[i]
    if total > before:
        return DefectionReport(Defection((i,), tuple(chosen)), (before,), (total,))
    return None


def dominant_units(inst: Instance) -> list[tuple[int, ...]]:
    """Group agents that share a component in every 2-stable network.

    If u[i][j] exceeds everything else i could ever collect, and likewise
    for j, then whenever i and j are apart the pair {i, j} gains by dropping
    all edges and pairing up.
    """
    n = inst.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    pos = [sum(max(0, x) for j, x in enumerate(inst.u[i]) if j != i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = inst.u[i][j], inst.u[j][i]
            if a > 0 and b > 0 and a > pos[i] - a and b > pos[j] - b:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def candidate_partitions(inst: Instance, k: int, bound: int | None = ORACLE_BOUND):
    """Clique partitions that could be k-stable, in canonical order.

    Blocks holding a conflicting pair are skipped (someone there sits at
    -inf and would leave), and for k >= 2 dominant pairs are kept together.
    """
    units = dominant_units(inst) if k >= 2 else [(i,) for i in range(inst.n)]
    if bound is not None and len(units) > bound:
        raise BoundExceeded(
            f"{len(units)} enumeration units exceeds the oracle bound {bound}"
        )
    return conflict_free_partitions(inst.n, inst.conflict_masks(), units)


def _merge_pair_exists(inst: Instance, blocks) -> bool:
    """Some i in A and j in B both gain if they link and keep their blocks.

    That is one particular 2-defection, so finding it refutes 2-stability
    without running the full search.
    """
    u = inst.u
    gain = [[sum(u[i][b] for b in B) for B in blocks] for i in range(inst.n)]
    for x, A in enumerate(blocks):
        for y in range(x + 1, len(blocks)):
            B = blocks[y]
            if any(gain[i][y] > 0 for i in A) and any(gain[j][x] > 0 for j in B):
                return True
    return False


def iter_stable_partitions(inst: Instance, k: int, bound: int | None = ORACLE_BOUND):
    for blocks in candidate_partitions(inst, k, bound):
        if k >= 2 and _merge_pair_exists(inst, blocks):
            continue
        if next(_Search(inst, blocks).improving(k), None) is None:
            yield blocks


def exists_stable_network(inst: Instance, k: int, bound: int | None = ORACLE_BOUND) -> Network | None:
    """First k-stable clique network in canonical partition order, or None.

    Searching clique networks is enough: cliqueifying a network keeps all
    utilities and only removes defection options, so a k-stable network
    exists iff a k-stable clique partition does.
    """
    for blocks in iter_stable_partitions(inst, k, bound):
        return Network.from_blocks(inst.n, blocks)
    return None


def unique_max_block_is_forced(inst: Instance, block: Sequence[int], bound: int | None = None) -> bool:
    """Check that ``block`` must be a component of every |block|-stable network.

    Holds when the block is the unique maximum independent set of the
    conflict graph in a {-inf, 1} instance: any other placement leaves each
    member in a smaller friendly component, so the whole block defects.
    """
    if not inst.is_friends_enemies():
        raise ValueError("forced-block argument needs symmetric {-inf, 1} utilities")
    block = sorted(block)
    H = conflict_graph(inst)
    adj = H.adjacency_masks()
    mask = 0
    for v in block:
        mask |= 1 << v
    if any(adj[v] & mask for v in block):
        return False
    best = max_independent_set(inst.n, adj, bound)
    if len(best) != len(block):
        return False
    full = (1 << inst.n) - 1
    # unique: dropping any member strictly lowers the independence number
    return all(independence_number(full & ~(1 << v), adj) < len(block) for v in block)


__all__ = [
    "BoundExceeded",
    "Defection",
    "DefectionReport",
    "ORACLE_BOUND",
    "apply_defection",
    "best_unilateral_deviation",
    "candidate_partitions",
    "dominant_units",
    "exists_stable_network",
    "find_improving_defection",
    "is_k_stable",
    "iter_improving_defections",
    "iter_stable_partitions",
    "partition_is_k_stable",
    "residual_components",
    "unique_max_block_is_forced",
]
