"""Core game objects: instances, networks, components and utilities.

Utilities are Python ints, with ``NEG_INF`` (a float ``-inf``) standing in for
an enemy relation.  Mixing the two gives absorbing arithmetic for free:
``NEG_INF + 5 == NEG_INF`` and ``NEG_INF < x`` for every finite ``x``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

NEG_INF = float("-inf")
UTILITY_LIMIT = 2**31

ExtendedUtility = Union[int, float]
CliquePartition = tuple  # tuple[tuple[int, ...], ...], blocks sorted by smallest member


class FormatError(ValueError):
    """Raised for malformed instance or network documents."""


def check_utility(value) -> ExtendedUtility:
    if value == NEG_INF:
        return NEG_INF
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ValueError(f"utility must be an integer or -inf, got {value!r}")
    if abs(value) > UTILITY_LIMIT:
        raise OverflowError(f"utility {value} outside +/-2**31")
    return value


def canonical_partition(blocks: Iterable[Iterable[int]]) -> CliquePartition:
    out = [tuple(sorted(b)) for b in blocks]
    if any(not b for b in out):
        raise ValueError("empty block")
    out.sort(key=lambda b: b[0])
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """An information-sharing game on ``n`` agents.

    ``u[i][j]`` is what agent i gets from sharing a component with j.
    ``labels`` is cosmetic and ignored by equality.
    """

    n: int
    u: tuple
    symmetric: bool = True
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an instance needs at least one agent")
        rows = tuple(tuple(check_utility(x) for x in row) for row in self.u)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError("utility table must be n x n")
        for i in range(self.n):
            if rows[i][i] != 0:
                raise ValueError(f"diagonal entry u[{i}][{i}] must be 0")
        if self.symmetric:
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if rows[i][j] != rows[j][i]:
                        raise ValueError(f"asymmetric pair ({i}, {j}) in a symmetric instance")
        object.__setattr__(self, "u", rows)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise ValueError("need one label per agent")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_function(cls, n, fn, symmetric=True, labels=None):
        rows = [[0 if i == j else fn(i, j) for j in range(n)] for i in range(n)]
        return cls(n, rows, symmetric, labels)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def is_friends_enemies(self) -> bool:
        """Symmetric with every off-diagonal utility in {-inf, 1}."""
        if not self.symmetric:
            return False
        return all(
            self.u[i][j] in (1, NEG_INF)
            for i in range(self.n)
            for j in range(self.n)
            if i != j
        )

    def conflict_masks(self) -> list[int]:
        masks = [0] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if i != j and (self.u[i][j] == NEG_INF or self.u[j][i] == NEG_INF):
                    masks[i] |= 1 << j
        return masks


def require_friends_enemies(inst: Instance) -> None:
    if not inst.is_friends_enemies():
        raise ValueError("algorithm needs symmetric utilities in {-inf, 1}")


def _norm_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Network:
    """Undirected information-sharing network on agents ``0..n-1``."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            norm.add(_norm_edge(i, j))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Network":
        edges = []
        seen = set()
        for b in blocks:
            b = sorted(b)
            for x in b:
                if x in seen:
                    raise ValueError(f"agent {x} in two blocks")
                seen.add(x)
            edges.extend((b[a], b[c]) for a in range(len(b)) for c in range(a + 1, len(b)))
        return cls(n, frozenset(edges))

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n, frozenset())

    def neighbours(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


@dataclass(frozen=True)
class ConflictGraph:
    n: int
    enemies: frozenset

    def adjacency_masks(self) -> list[int]:
        masks = [0] * self.n
        for i, j in self.enemies:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks


def components(net: Network) -> CliquePartition:
    parent = list(range(net.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in net.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(net.n):
        groups.setdefault(find(v), []).append(v)
    return canonical_partition(groups.values())


def is_clique_partition(net: Network) -> bool:
    total = sum(len(b) * (len(b) - 1) // 2 for b in components(net))
    return total == len(net.edges)


def cliqueify(net: Network) -> Network:
    return Network.from_blocks(net.n, components(net))


def conflict_graph(inst: Instance) -> ConflictGraph:
    enemies = set()
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            if inst.u[i][j] == NEG_INF or inst.u[j][i] == NEG_INF:
                enemies.add((i, j))
    return ConflictGraph(inst.n, frozenset(enemies))


def block_utility(inst: Instance, block: Sequence[int], i: int) -> ExtendedUtility:
    row = inst.u[i]
    total = 0
    for j in block:
        if j != i:
            total += row[j]
    return total


def node_utility(inst: Instance, net: Network, i: int) -> ExtendedUtility:
    if not 0 <= i < inst.n:
        raise IndexError(f"agent {i} out of range")
    if net.n != inst.n:
        raise ValueError("network and instance sizes differ")
    for block in components(net):
        if i in block:
            return block_utility(inst, block, i)
    raise AssertionError("unreachable")


def partition_welfare(inst: Instance, blocks: Iterable[Sequence[int]]):
    doubled = 0
    for b in blocks:
        for i in b:
            doubled += block_utility(inst, b, i)
    if doubled == NEG_INF:
        return NEG_INF
    return Fraction(doubled, 2)


def total_welfare(inst: Instance, net: Network):
    """Sum of utilities with each co-component pair counted once.

    Returned as a ``Fraction`` (half-units can occur for asymmetric
    instances), or ``NEG_INF``.
    """
    return partition_welfare(inst, components(net))


# ---------------------------------------------------------------- serialization

def _util_to_json(x):
    return "-inf" if x == NEG_INF else x


def _util_from_json(x):
    if x == "-inf":
        return NEG_INF
    if isinstance(x, str) or isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"bad utility token {x!r}")
    try:
        return check_utility(x)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _check_agent(x, n):
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"agent index must be an integer, got {x!r}")
    if not 0 <= x < n:
        raise FormatError(f"agent index {x} out of range for n={n}")
    return x


def _default_utility(inst: Instance):
    counts = Counter(
        inst.u[i][j] for i in range(inst.n) for j in range(inst.n) if i != j
    )
    if not counts:
        return 1
    # most common value; ties resolved by the smaller value
    return min(counts, key=lambda v: (-counts[v], v))


def instance_to_dict(inst: Instance) -> dict:
    default = _default_utility(inst)
    pairs = []
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            a, b = inst.u[i][j], inst.u[j][i]
            if a == default and b == default:
                continue
            entry = {"i": i, "j": j, "u_ij": _util_to_json(a)}
            if a != b:
                entry["u_ji"] = _util_to_json(b)
            pairs.append(entry)
    doc = {
        "n": inst.n,
        "symmetric": inst.symmetric,
        "default": _util_to_json(default),
        "pairs": pairs,
    }
    if inst.labels is not None:
        doc["labels"] = list(inst.labels)
    return doc


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("instance document must be a JSON object")
    try:
        n = doc["n"]
        symmetric = doc.get("symmetric", True)
        default = _util_from_json(doc.get("default", 1))
        pairs = doc.get("pairs", [])
    except KeyError as exc:
        raise FormatError(f"missing key {exc}") from None
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError("n must be a positive integer")
    if not isinstance(symmetric, bool):
        raise FormatError("symmetric must be a boolean")
    u = [[0 if i == j else default for j in range(n)] for i in range(n)]
    seen = set()
    for p in pairs:
        if not isinstance(p, dict) or "u_ij" not in p:
            raise FormatError(f"bad pair entry {p!r}")
        i, j = _check_agent(p.get("i"), n), _check_agent(p.get("j"), n)
        if i == j:
            raise FormatError(f"pair entry with i == j == {i}")
        key = _norm_edge(i, j)
        if key in seen:
            raise FormatError(f"duplicate pair entry {key}")
        seen.add(key)
        a = _util_from_json(p["u_ij"])
        b = _util_from_json(p["u_ji"]) if "u_ji" in p else a
        if symmetric and a != b:
            raise FormatError(f"asymmetric entry for pair {key} in a symmetric instance")
        u[i][j], u[j][i] = a, b
    try:
        return Instance(n, u, symmetric, doc.get("labels"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def network_to_dict(net: Network, as_blocks: bool = False) -> dict:
    if as_blocks:
        if not is_clique_partition(net):
            raise ValueError("network is not a disjoint union of cliques")
        return {"n": net.n, "blocks": [list(b) for b in components(net)]}
    return {"n": net.n, "edges": [list(e) for e in sorted(net.edges)]}


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict) or "n" not in doc:
        raise FormatError("network document must be an object with 'n'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError("n must be a positive integer")
    if "blocks" in doc:
        seen = set()
        blocks = []
        for b in doc["blocks"]:
            members = [_check_agent(x, n) for x in b]
            for x in members:
                if x in seen:
                    raise FormatError(f"agent {x} appears in two blocks")
                seen.add(x)
            blocks.append(members)
        return Network.from_blocks(n, blocks)
    edges = set()
    for e in doc.get("edges", []):
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"bad edge {e!r}")
        i, j = _check_agent(e[0], n), _check_agent(e[1], n)
        if i == j:
            raise FormatError(f"self-loop at {i}")
        key = _norm_edge(i, j)
        if key in edges:
            raise FormatError(f"duplicate edge {key}")
        edges.add(key)
    return Network(n, frozenset(edges))


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_instance(text: str) -> Instance:
    return instance_from_dict(_load(text))


def serialize_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def parse_network(text: str) -> Network:
    return network_from_dict(_load(text))


def serialize_network(net: Network, as_blocks: bool = False) -> str:
    return dumps(network_to_dict(net, as_blocks))
