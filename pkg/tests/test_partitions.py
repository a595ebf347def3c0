from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from infoshare.partitions import bell, conflict_free_partitions, set_partitions


def test_bell_numbers():
    assert [bell(n) for n in range(11)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


def test_counts_and_uniqueness():
    for n in range(1, 9):
        parts = list(set_partitions(n))
        assert len(parts) == bell(n)
        assert len(set(parts)) == len(parts)


def test_canonical_order():
    parts = list(set_partitions(3))
    assert parts == [
        ((0, 1, 2),),
        ((0, 1), (2,)),
        ((0, 2), (1,)),
        ((0,), (1, 2)),
        ((0,), (1,), (2,)),
    ]
    for p in set_partitions(6):
        assert list(p) == sorted(p, key=min)
        assert all(list(b) == sorted(b) for b in p)


def _canon(p):
    return tuple(sorted(tuple(sorted(b)) for b in p))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 2**n - 1), min_size=n, max_size=n))))
def test_conflict_pruning_is_a_filter(case):
    n, raw = case
    conflict = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and raw[i] >> j & 1:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    got = {_canon(p) for p in conflict_free_partitions(n, conflict)}
    want = {
        _canon(p)
        for p in oracles.partitions(range(n))
        if all(not (conflict[a] >> b & 1) for blk in p for a in blk for b in blk)
    }
    assert got == want


def test_units_stay_together():
    units = [(0, 2), (1,), (3, 4)]
    parts = list(conflict_free_partitions(5, [0] * 5, units))
    assert len(parts) == bell(3)
    for p in parts:
        where = {a: idx for idx, blk in enumerate(p) for a in blk}
        assert where[0] == where[2] and where[3] == where[4]


def test_unit_with_internal_conflict_yields_nothing():
    conflict = [0b10, 0b01, 0]
    assert list(conflict_free_partitions(3, conflict, [(0, 1), (2,)])) == []
