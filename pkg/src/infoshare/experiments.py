"""The acceptance battery: twelve checks run against the exact oracles."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .construct import (
    NotOptimalError,
    best_response_run,
    f3,
    f3_recurrence,
    f4,
    f4_recurrence,
    gale_shapley,
    greedy_mis_peeling,
    mis_peeling_blocks,
    network_to_matching,
    potential_counterexample_check,
    stable_matchings_brute_force,
    sum_squares,
    three_stable_from_optimal,
    two_stable_dynamics,
)
from .instances import (
    bn_layer,
    gen_asymmetric_nonexistence,
    gen_best_response_cycle,
    gen_Bn,
    gen_c_nonexistence,
    gen_fig_distinct_stable,
    gen_fig_k4_triangles,
    gen_fig_pendant_k4,
    gen_k3_pendants,
    gen_random,
    gen_stability_test_gadget,
    gen_stable_marriage,
    gen_strong_weak_ties,
    random_graph,
    random_preferences,
)
from .model import Network, components, conflict_graph, partition_welfare, total_welfare
from .reductions import (
    graphs_up_to_isomorphism,
    is_3_colorable,
    matching_network_to_coloring,
    reduce_3col_to_3ctpg,
    reduce_3ctpg_to_scbg,
    reduce_scbg_to_matching_instance,
    stable_coloring_search,
    verify_stable_coloring,
)
from .stability import (
    ORACLE_BOUND,
    exists_stable_network,
    is_k_stable,
    iter_stable_partitions,
    partition_is_k_stable,
    unique_max_block_is_forced,
)
from .welfare import (
    COMPONENT_COUNT,
    chromatic_number,
    min_conflict_free_blocks,
    optimal_partitions,
    optimal_total_welfare,
    welfare_report,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def random_corpus(count: int, n_max: int, seed: int, n_min: int = 2):
    """Deterministic random {-inf, 1} instances with varied size and density."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        p = rng.choice((0.1, 0.25, 0.4, 0.6, 0.8))
        out.append(gen_random(n, p, rng.randrange(2**32)))
    return out


def check_existence(count=200, n_max=12, seed=1):
    failures = 0
    checks = 0
    for inst in random_corpus(count, n_max, seed):
        net = greedy_mis_peeling(inst)
        for k in range(1, inst.n + 1):
            checks += 1
            if not is_k_stable(inst, net, k)[0]:
                failures += 1
    return failures == 0, f"{checks} (instance, k) checks, {failures} unstable"


def check_two_stable_dynamics(count=200, n_max=12, seed=1):
    bad = []
    moves = 0
    for idx, inst in enumerate(random_corpus(count, n_max, seed)):
        traj = two_stable_dynamics(inst)
        vals = [sum_squares([len(b) for b in components(s)]) for s in traj.states]
        deltas = [b - a for a, b in zip(vals, vals[1:])]
        moves += len(deltas)
        if any(d < 2 for d in deltas):
            bad.append((idx, "delta"))
        if len(deltas) > inst.n**2 / 2:
            bad.append((idx, "moves"))
        if not is_k_stable(inst, traj.final, 2)[0]:
            bad.append((idx, "unstable"))
    return not bad, f"{moves} moves over {count} instances, problems: {bad[:5]}"


def check_best_response_cycle(s_size=6):
    g = gen_best_response_cycle(s_size)
    res = best_response_run(g.instance, g.start, g.schedule)
    moves = len(res.trajectory.moves)
    ok = res.cycle and res.cycle_start == 0 and moves == 6 and res.trajectory.final == g.start
    return ok, f"cycle={res.cycle} start={res.cycle_start} moves={moves}"


def check_potential_tables():
    rec3, rec4 = f3_recurrence(100), f4_recurrence(100)
    ok3 = rec3[:3] == [1, 3, 7] and all(f3(n) == rec3[n - 1] for n in range(1, 101))
    closed3 = all((n + 4) * (n - 1) // 2 == rec3[n - 1] for n in range(2, 101))
    ok4 = rec4[:4] == [1, 3, 7, 17] and all(f4(n) == rec4[n - 1] for n in range(1, 101))
    closed4 = all(
        17 * (n - 3) + (n - 5) * (n - 4) * (n - 3) // 6 + 7 * (n - 5) * (n - 4) // 2 == rec4[n - 1]
        for n in range(6, 101)
    )
    cx = potential_counterexample_check(15)
    ok_cx = (
        cx["sixth_power_before"] == 78126
        and cx["sixth_power_after"] == 67136
        and cx["minimal_chain_k5"][3] >= 17
        and cx["minimal_chain_k5"][4] >= 51
        and cx["chain_at_least_power_of_two"]
    )
    ok = ok3 and closed3 and ok4 and closed4 and ok_cx
    return ok, (
        f"F3 {rec3[:3]} closed(2..100)={closed3}; F4 {rec4[:4]} closed(6..100)={closed4}; "
        f"x^6 {cx['sixth_power_before']}->{cx['sixth_power_after']}; "
        f"chain F(4),F(5)={cx['minimal_chain_k5'][3]},{cx['minimal_chain_k5'][4]}"
    )


def check_optimal_is_two_stable(count=100, n_max=9, seed=5):
    checked = 0
    bad = 0
    for inst in random_corpus(count, n_max, seed):
        _, opts = optimal_partitions(inst)
        for blocks in opts:
            checked += 1
            if not partition_is_k_stable(inst, blocks, 2):
                bad += 1
    return bad == 0, f"{checked} optimal partitions, {bad} not 2-stable"


def check_price_of_stability_one(count=100, n_max=9, seed=6):
    bad = []
    for idx, inst in enumerate(random_corpus(count, n_max, seed)):
        best, witness = optimal_total_welfare(inst)
        try:
            net = three_stable_from_optimal(inst, witness)
        except (NotOptimalError, RuntimeError) as exc:
            bad.append((idx, str(exc)))
            continue
        if total_welfare(inst, net) != best or not is_k_stable(inst, net, 3)[0]:
            bad.append((idx, "repair"))
        rep = welfare_report(inst, 2, COMPONENT_COUNT)
        if rep.best_stable != rep.optimum:
            bad.append((idx, "chi"))
    return not bad, f"{count} instances, problems: {bad[:5]}"


def check_named_gadgets():
    notes = []
    ok = True

    g = gen_fig_distinct_stable()
    opt, _ = optimal_total_welfare(g)
    target = next(
        (b for b in iter_stable_partitions(g, 2) if partition_welfare(g, b) == 10 and len(b) == 5),
        None,
    )
    mc = min_conflict_free_blocks(g)
    part = opt == 12 and target is not None and mc == 4
    notes.append(f"distinct-stable opt={opt} stable(10,5)={target is not None} min_comp={mc}")
    ok &= part

    g = gen_fig_k4_triangles()
    rep = welfare_report(g, 4)
    notes.append(f"k4-triangles PoS={rep.pos}")
    ok &= rep.pos == Fraction(6, 5)

    g = gen_fig_pendant_k4()
    mc = min_conflict_free_blocks(g)
    _, witness = optimal_total_welfare(g)
    notes.append(f"pendant-k4 min_comp={mc} witness={witness}")
    ok &= mc == 4 and witness == ((0, 1, 2, 3), (4,), (5,), (6,), (7,))

    g = gen_k3_pendants()
    chi, _ = chromatic_number(conflict_graph(g))
    sizes = [len(b) for b in iter_stable_partitions(g, 3)]
    notes.append(f"k3-pendants chi={chi} 3-stable component counts={sorted(set(sizes))}")
    ok &= chi == 3 and bool(sizes) and min(sizes) >= 4
    return ok, "; ".join(notes)


def check_bn_fragmentation(sizes=(9, 27, 81)):
    notes = []
    ok = True
    for n in sizes:
        inst = gen_Bn(n)
        blocks = mis_peeling_blocks(inst)
        levels = []
        level = 1
        while True:
            layer = bn_layer(n, level)
            if not layer:
                break
            levels.append(layer)
            level += 1
        match = [tuple(sorted(b)) for b in blocks] == levels
        ok &= match
        notes.append(f"B_{n}: {len(blocks)} peeled blocks match layers={match}")
    # forced first block for n = 9, certificate over all networks
    inst = gen_Bn(9)
    s1 = bn_layer(9, 1)
    forced = unique_max_block_is_forced(inst, s1)
    ok &= forced
    notes.append(f"B_9 S1 forced={forced}")
    # direct enumeration at n = 3 with every agent allowed to defect
    small = gen_Bn(3)
    s1 = bn_layer(3, 1)
    stable = list(iter_stable_partitions(small, small.n))
    direct = bool(stable) and all(s1 in b for b in stable)
    ok &= direct
    notes.append(f"B_3: {len(stable)} stable partitions, all contain S1={direct}")
    return ok, "; ".join(notes)


def check_nonexistence():
    found = {
        "asym-nonexist": exists_stable_network(gen_asymmetric_nonexistence(), 2),
        "c-nonexist(5)": exists_stable_network(gen_c_nonexistence(5), 2),
        "strong-weak": exists_stable_network(gen_strong_weak_ties(), 2),
    }
    return all(v is None for v in found.values()), ", ".join(
        f"{k}: {'none' if v is None else 'found'}" for k, v in found.items()
    )


def check_reduction_chain(max_nodes=5, seeds=None):
    graphs_checked = 0
    bad = []
    for m in range(1, max_nodes + 1):
        for H in graphs_up_to_isomorphism(m):
            graphs_checked += 1
            tpg = reduce_3col_to_3ctpg(H)
            K = reduce_3ctpg_to_scbg(tpg)
            col = is_3_colorable(H)
            col2 = is_3_colorable(tpg.graph)
            sc = stable_coloring_search(K)
            good = sc is not None and verify_stable_coloring(K, sc) and len(sc) <= 3
            if not (col == col2 == (sc is not None)) or (sc is not None and not good):
                bad.append(sorted(H.edges))
    if seeds is None:
        seeds = {
            "triangle": Network(3, frozenset({(0, 1), (0, 2), (1, 2)})),
            "K4": Network(4, frozenset((a, b) for a in range(4) for b in range(a + 1, 4))),
        }
    seed_notes = []
    for name, H in seeds.items():
        K = reduce_3ctpg_to_scbg(reduce_3col_to_3ctpg(H))
        W = reduce_scbg_to_matching_instance(K)
        net = exists_stable_network(W, 2, ORACLE_BOUND)
        col = is_3_colorable(H)
        agree = (net is not None) == col
        if net is not None:
            decoded = matching_network_to_coloring(net, K.n)
            agree &= decoded is not None and verify_stable_coloring(K, decoded)
        if not agree:
            bad.append(name)
        seed_notes.append(f"{name}: 3col={col} stable={'yes' if net else 'no'}")
    return not bad, f"{graphs_checked} graphs; " + "; ".join(seed_notes) + f"; problems: {bad[:3]}"


def check_stable_marriage(count=50, n_max=4, seed=11):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        n = rng.randint(1, n_max)
        men, women = random_preferences(n, rng)
        inst = gen_stable_marriage(men, women)
        decoded = set()
        for blocks in iter_stable_partitions(inst, 2):
            m = network_to_matching(Network.from_blocks(inst.n, blocks), n)
            decoded.add(m)
        brute = set(stable_matchings_brute_force(men, women))
        gs = tuple(gale_shapley(men, women))
        if decoded != brute or gs not in decoded:
            bad += 1
    return bad == 0, f"{count} profiles, {bad} mismatches"


def _has_independent_set(L: Network, k: int) -> bool:
    from itertools import combinations

    return any(
        all((a, b) not in L.edges for a, b in combinations(c, 2))
        for c in combinations(range(L.n), k)
    )


def check_stability_gadget(count=20, n_max=8, seed=13):
    rng = random.Random(seed)
    bad = 0
    checks = 0
    for _ in range(count):
        n = rng.randint(3, n_max)
        L = random_graph(n, rng.choice((0.3, 0.5, 0.7)), rng)
        for k in (3, 4):
            inst, cand = gen_stability_test_gadget(L, k)
            unstable = not is_k_stable(inst, cand, k)[0]
            checks += 1
            if unstable != _has_independent_set(L, k):
                bad += 1
    return bad == 0, f"{checks} (graph, k) checks, {bad} mismatches"


CRITERIA = [
    (1, "k-stable existence via MIS peeling", check_existence),
    (2, "2-stable dynamics", check_two_stable_dynamics),
    (3, "best-response cycle", check_best_response_cycle),
    (4, "potential tables", check_potential_tables),
    (5, "welfare-optimal networks are 2-stable", check_optimal_is_two_stable),
    (6, "price of stability one", check_price_of_stability_one),
    (7, "named gadget numbers", check_named_gadgets),
    (8, "B_n fragmentation", check_bn_fragmentation),
    (9, "nonexistence", check_nonexistence),
    (10, "reduction chain", check_reduction_chain),
    (11, "stable marriage correspondence", check_stable_marriage),
    (12, "stability-testing gadget", check_stability_gadget),
]


def run_criterion(number: int) -> CriterionResult:
    num, title, fn = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(num, title, bool(passed), detail, time.perf_counter() - t)


def paper_suite(numbers=None) -> list[CriterionResult]:
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_criterion(n) for n in numbers]


def render_markdown(results: list[CriterionResult], timings: bool = False) -> str:
    head = "| # | criterion | result | detail |"
    rule = "|---|---|---|---|"
    if timings:
        head, rule = head + " seconds |", rule + "---|"
    rows = [head, rule]
    for r in results:
        row = f"| {r.number} | {r.title} | {'pass' if r.passed else 'FAIL'} | {r.detail} |"
        if timings:
            row += f" {r.seconds:.2f} |"
        rows.append(row)
    passed = sum(r.passed for r in results)
    rows.append("")
    rows.append(f"{passed}/{len(results)} criteria pass")
    return "\n".join(rows) + "\n"


def render_json(results: list[CriterionResult], timings: bool = False) -> str:
    docs = []
    for r in results:
        d = r.to_dict()
        if not timings:
            d.pop("seconds")
        docs.append(d)
    return json.dumps({"criteria": docs, "all_passed": all(r.passed for r in results)}, indent=2) + "\n"
