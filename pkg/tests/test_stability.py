import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from conftest import fe_with_network, general_instances, networks
from infoshare.construct import greedy_mis_peeling, resolve_move
from infoshare.instances import (
    gen_asymmetric_nonexistence,
    gen_best_response_cycle,
    gen_c_nonexistence,
    gen_fig_k4_triangles,
    gen_fig_pendant_k4,
    gen_friends_enemies,
    gen_k3_pendants,
    gen_random,
    gen_strong_weak_ties,
)
from infoshare.model import NEG_INF, Network, components, node_utility
from infoshare.partitions import set_partitions
from infoshare.stability import (
    BoundExceeded,
    Defection,
    apply_defection,
    best_unilateral_deviation,
    dominant_units,
    exists_stable_network,
    find_improving_defection,
    is_k_stable,
    iter_improving_defections,
    iter_stable_partitions,
    partition_is_k_stable,
    residual_components,
)

slow = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_residual_components_examples():
    k5 = Network.from_blocks(5, [range(5)])
    assert residual_components(k5, {0}) == [(1, 2, 3, 4)]
    path = Network(3, frozenset({(0, 1), (1, 2)}))
    assert residual_components(path, {1}) == [(0,), (2,)]
    tri = Network.from_blocks(6, [[0, 1, 2], [3, 4, 5]])
    assert residual_components(tri, {0, 1, 2}) == [(3, 4, 5)]
    with pytest.raises(ValueError):
        residual_components(tri, set())


def test_apply_defection_examples():
    empty = Network.empty(4)
    out = apply_defection(empty, Defection((1, 3)))
    assert components(out) == ((0,), (1, 3), (2,))
    # j = 0 leaves J = {0, 1} and joins I = {2, 3, 4}
    net = Network.from_blocks(5, [[0, 1], [2, 3, 4]])
    out = apply_defection(net, Defection((0, 2), ((3, 4),)), cliqueified=True)
    assert components(out) == ((0, 2, 3, 4), (1,))
    g = gen_fig_k4_triangles()
    tri = Network.from_blocks(12, [[i, 4 + i, 8 + i] for i in range(4)])
    out = apply_defection(tri, Defection((0, 1, 2, 3)))
    assert components(out) == ((0, 1, 2, 3), (4, 8), (5, 9), (6, 10), (7, 11))
    assert find_improving_defection(g, tri, 4).defection.participants == (0, 1, 2, 3)


def test_apply_defection_rejects_bad_attachment():
    net = Network.from_blocks(5, [[0, 1], [2, 3], [4]])
    with pytest.raises(ValueError):
        apply_defection(net, Defection((0,), ((2, 3),)))
    with pytest.raises(ValueError):
        apply_defection(net, Defection((0,), ((1, 4),)))


def test_apply_defection_keeps_literal_edges():
    path = Network(4, frozenset({(0, 1), (1, 2), (2, 3)}))
    out = apply_defection(path, Defection((3, 0), ((1, 2),)))
    assert out.edges == frozenset({(0, 1), (1, 2), (2, 3), (0, 3)})


@slow
@given(fe_with_network(1, 5), st.integers(1, 3))
def test_search_matches_literal_brute_force(pair, k):
    inst, net = pair
    mine = find_improving_defection(inst, net, k)
    ref = oracles.improving_defection(inst.u, inst.n, net.edges, k)
    assert (mine is None) == (ref is None)
    if mine is not None:
        # both search by |S| ascending, then S lexicographically
        assert mine.defection.participants == ref[0]


@slow
@given(general_instances(1, 4).flatmap(lambda i: st.tuples(st.just(i), networks(i.n))), st.integers(1, 3))
def test_search_matches_brute_force_general_utilities(pair, k):
    inst, net = pair
    mine = find_improving_defection(inst, net, k)
    ref = oracles.improving_defection(inst.u, inst.n, net.edges, k)
    assert (mine is None) == (ref is None)


@slow
@given(fe_with_network(1, 6), st.integers(1, 3))
def test_reports_are_consistent_with_apply(pair, k):
    inst, net = pair
    for count, rep in enumerate(iter_improving_defections(inst, net, k)):
        if count > 20:
            break
        d = rep.defection
        after_net = apply_defection(net, d)
        S = set(d.participants)
        joined = S.union(*map(set, d.attached)) if d.attached else S
        assert set(next(c for c in components(after_net) if d.participants[0] in c)) == joined
        for s, b, a in zip(d.participants, rep.before, rep.after):
            assert b == node_utility(inst, net, s)
            assert a == node_utility(inst, after_net, s)
            assert a > b
        untouched = set(residual_components(net, S)) - set(d.attached)
        assert untouched <= set(components(after_net))
        assert components(apply_defection(net, d, cliqueified=True)) == components(after_net)


@slow
@given(fe_with_network(1, 7))
def test_stability_is_monotone_in_k(pair):
    inst, net = pair
    flags = [is_k_stable(inst, net, k)[0] for k in range(1, inst.n + 1)]
    for a, b in zip(flags, flags[1:]):
        assert a or not b


@slow
@given(general_instances(1, 6).flatmap(lambda i: st.tuples(st.just(i), networks(i.n))))
def test_best_unilateral_matches_k1(pair):
    inst, net = pair
    k1 = find_improving_defection(inst, net, 1)
    some = [best_unilateral_deviation(inst, net, i) for i in range(inst.n)]
    assert (k1 is None) == all(r is None for r in some)
    for i, r in enumerate(some):
        if r is not None:
            after = apply_defection(net, r.defection)
            assert node_utility(inst, after, i) == r.after[0] > r.before[0]
            # no single-agent move does better
            best = max(x.after[0] for x in iter_improving_defections(inst, net, 1) if x.defection.participants == (i,))
            assert r.after[0] == best


def test_find_examples():
    g = gen_k3_pendants()
    pairs = Network.from_blocks(6, [[0, 3], [1, 4], [2, 5]])
    rep = find_improving_defection(g, pairs, 3)
    assert rep.defection.participants == (0, 1, 2)
    assert rep.before == (1, 1, 1) and rep.after == (2, 2, 2)
    two = gen_friends_enemies(2)
    rep = find_improving_defection(two, Network.empty(2), 2)
    assert rep.defection.participants == (0, 1) and rep.before == (0, 0) and rep.after == (1, 1)


def test_is_k_stable_examples():
    g = gen_fig_pendant_k4()
    pairs = Network.from_blocks(8, [[i, i + 4] for i in range(4)])
    assert is_k_stable(g, pairs, 2)[0]
    k3 = gen_k3_pendants()
    ok, witness = is_k_stable(k3, Network.from_blocks(6, [[0, 3], [1, 4], [2, 5]]), 3)
    assert not ok and witness is not None


def test_cycle_intermediate_states_are_unstable():
    c = gen_best_response_cycle(6)
    net = c.start
    for spec in c.schedule:
        assert not is_k_stable(c.instance, net, 2)[0]
        net = apply_defection(net, resolve_move(net, spec))
    assert net == c.start


def test_best_unilateral_examples():
    inst = gen_friends_enemies(3, [(0, 2)])
    net = Network.from_blocks(3, [[0, 1, 2]])
    rep = best_unilateral_deviation(inst, net, 0)
    assert rep.before == (NEG_INF,) and rep.after[0] >= 0
    clique = Network.from_blocks(3, [[0, 1, 2]])
    assert best_unilateral_deviation(gen_friends_enemies(3), clique, 1) is None
    c = gen_best_response_cycle(6)
    net = apply_defection(c.start, resolve_move(c.start, c.schedule[0]))
    d = c.instance.n - 2
    rep = best_unilateral_deviation(c.instance, net, d)
    assert rep.before == (NEG_INF,) and rep.after == (0,)


def test_nonexistence_examples():
    assert exists_stable_network(gen_asymmetric_nonexistence(), 2) is None
    assert exists_stable_network(gen_c_nonexistence(5), 2) is None
    assert exists_stable_network(gen_strong_weak_ties(), 2) is None
    assert exists_stable_network(gen_c_nonexistence(1), 2) is not None


def test_asymmetric_nonexistence_moves():
    g = gen_asymmetric_nonexistence()
    x, v1, v2, v3 = range(4)
    net = Network.from_blocks(4, [[x, v1]])
    d = Defection((x, v2), ((v1,),))
    after = apply_defection(net, d)
    assert node_utility(g, after, x) > node_utility(g, net, x)
    assert node_utility(g, after, v2) > node_utility(g, net, v2)
    rep = find_improving_defection(g, Network.empty(4), 2)
    assert rep.defection.participants == (x, v1)


def test_fe_instances_always_have_stable_networks():
    for seed in range(20):
        inst = gen_random(7, 0.4, seed)
        for k in (1, 2, 3, 7):
            net = exists_stable_network(inst, k)
            assert net is not None and is_k_stable(inst, net, k)[0]


def test_oracle_bound():
    with pytest.raises(BoundExceeded):
        exists_stable_network(gen_friends_enemies(15), 2)
    assert exists_stable_network(gen_friends_enemies(15), 2, bound=None) is not None


@settings(max_examples=40, deadline=None)
@given(general_instances(1, 4), st.integers(1, 3))
def test_existence_matches_brute_force_over_all_networks(inst, k):
    n = inst.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    any_stable = False
    for code in range(1 << len(pairs)):
        edges = {p for t, p in enumerate(pairs) if code >> t & 1}
        if oracles.improving_defection(inst.u, n, edges, k) is None:
            any_stable = True
            break
    assert (exists_stable_network(inst, k) is not None) == any_stable


@settings(max_examples=60, deadline=None)
@given(general_instances(1, 6, values=(float("-inf"), -1, 0, 1, 2, 9, 20)), st.integers(1, 3))
def test_unit_merging_and_prefilter_lose_nothing(inst, k):
    plain = [p for p in set_partitions(inst.n) if partition_is_k_stable(inst, p, k)]
    assert list(iter_stable_partitions(inst, k)) == plain


def test_dominant_units():
    g = gen_c_nonexistence(5)
    assert dominant_units(g) == [(0, 2), (1, 3)]
    assert dominant_units(gen_friends_enemies(4)) == [(0,), (1,), (2,), (3,)]


def test_peeling_output_is_stable_for_all_k():
    for seed in range(10):
        inst = gen_random(9, 0.35, seed)
        net = greedy_mis_peeling(inst)
        assert all(is_k_stable(inst, net, k)[0] for k in range(1, 10))


def test_report_serialisation():
    g = gen_k3_pendants()
    rep = find_improving_defection(g, Network.from_blocks(6, [[0, 3], [1, 4], [2, 5]]), 3)
    doc = rep.to_dict()
    assert doc["participants"] == [0, 1, 2]
    assert doc["utilities"][0] == {"agent": 0, "before": 1, "after": 2}
    inst = gen_friends_enemies(2, [(0, 1)])
    doc = find_improving_defection(inst, Network.from_blocks(2, [[0, 1]]), 1).to_dict()
    assert doc["utilities"][0]["before"] == "-inf"
