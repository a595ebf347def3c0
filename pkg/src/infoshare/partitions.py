"""Set-partition enumeration by restricted growth strings.

Blocks come out ordered by smallest member and partitions come out in
lexicographic order of their growth strings, which is the canonical order
used everywhere else in the package.
"""
from __future__ import annotations

from typing import Iterator, Sequence


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every partition of ``range(n)``, no pruning."""
    yield from conflict_free_partitions(n, [0] * n)


def conflict_free_partitions(
    n: int,
    conflict: Sequence[int],
    units: Sequence[Sequence[int]] | None = None,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions whose blocks contain no conflicting pair.

    ``conflict[i]`` is a bitmask of agents that may not share a block with i.
    ``units`` optionally glues agents together: each unit is placed as a
    whole.  Units must cover ``range(n)`` and be given in order of their
    smallest member.
    """
    if units is None:
        units = [(i,) for i in range(n)]
    unit_mask = []
    unit_conf = []
    for unit in units:
        m = 0
        c = 0
        for a in unit:
            m |= 1 << a
            c |= conflict[a]
        if c & m:
            return
        unit_mask.append(m)
        unit_conf.append(c)
    count = len(units)
    block_members: list[int] = []
    block_conf: list[int] = []

    def emit():
        out = []
        for m in block_members:
            members = []
            x = m
            while x:
                low = x & -x
                members.append(low.bit_length() - 1)
                x ^= low
            out.append(tuple(members))
        return tuple(out)

    def rec(t):
        if t == count:
            yield emit()
            return
        m, c = unit_mask[t], unit_conf[t]
        for b in range(len(block_members)):
            if block_conf[b] & m:
                continue
            block_members[b] |= m
            old = block_conf[b]
            block_conf[b] = old | c
            yield from rec(t + 1)
            block_members[b] &= ~m
            block_conf[b] = old
        block_members.append(m)
        block_conf.append(c)
        yield from rec(t + 1)
        block_members.pop()
        block_conf.pop()

    yield from rec(0)
