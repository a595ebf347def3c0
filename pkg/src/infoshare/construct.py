"""Algorithms that build stable networks, and the dynamics around them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

from .graphs import max_independent_set
from .model import (
    NEG_INF,
    Instance,
    Network,
    canonical_partition,
    components,
    conflict_graph,
    node_utility,
    partition_welfare,
    require_friends_enemies,
)
from .stability import (
    Defection,
    DefectionReport,
    apply_defection,
    find_improving_defection,
    iter_improving_defections,
    residual_components,
)

MIS_BOUND = 200


# ------------------------------------------------------------------ potentials

def sum_squares(sizes: Sequence[int]) -> int:
    return sum(x * x for x in sizes)


def sum_cubes(sizes: Sequence[int]) -> int:
    return sum(x**3 for x in sizes)


def f3(n: int) -> int:
    if n < 1:
        raise ValueError("block size must be positive")
    if n == 1:
        return 1  # the closed form gives 0 here
    return (n + 4) * (n - 1) // 2


def f3_recurrence(n_max: int) -> list[int]:
    """F3(1..n_max) from F3(i) = 2 F3(i-1) - F3(i-2) + 1."""
    vals = [0, 1, 3, 7]
    for i in range(4, n_max + 1):
        vals.append(2 * vals[i - 1] - vals[i - 2] + 1)
    return vals[1 : n_max + 1]


def f4(n: int) -> int:
    if n < 1:
        raise ValueError("block size must be positive")
    if n <= 5:
        return (1, 3, 7, 17, 34)[n - 1]
    return 17 * (n - 3) + (n - 5) * (n - 4) * (n - 3) // 6 + 7 * (n - 5) * (n - 4) // 2


def f4_recurrence(n_max: int) -> list[int]:
    """F4(1..n_max) from F4(i) = 3 F4(i-1) - 3 F4(i-2) + F4(i-3) + 1."""
    vals = [0, 1, 3, 7, 17]
    for i in range(5, n_max + 1):
        vals.append(3 * vals[i - 1] - 3 * vals[i - 2] + vals[i - 3] + 1)
    return vals[1 : n_max + 1]


def minimal_additive_potential(k: int, n_max: int) -> list[int]:
    """Smallest integer F(1..n_max) that rises under every join-type k-defection.

    A join-type defection moves m agents, each out of a group of size i-1
    (the largest size from which moving still pays), into a group of size
    i-m that holds one more participant, or into a fresh group when i == m.
    With F(0) = 0 and F(1) = 1 this forces
    F(i) > F(i-m) + m * (F(i-1) - F(i-2)), for m <= k-1, and for m == i <= k.
    """
    F = [0, 1]
    for i in range(2, n_max + 1):
        low = F[i - 1]  # F must be strictly increasing
        for m in range(1, min(k, i) + 1):
            if m == k and i != k:
                continue
            prev2 = F[i - 2]
            low = max(low, F[i - m] + m * (F[i - 1] - prev2))
        F.append(low + 1)
    return F[1:]


POTENTIALS: dict[str, Callable[[Sequence[int]], int]] = {
    "SUM_SQUARES": sum_squares,
    "SUM_CUBES": sum_cubes,
    "F3": lambda sizes: sum(f3(x) for x in sizes),
    "F4": lambda sizes: sum(f4(x) for x in sizes),
}


def general_utility_potential(inst: Instance, net: Network) -> int:
    """Sum over agents of their component utility."""
    return sum(node_utility(inst, net, i) for i in range(inst.n))


def block_sizes(net: Network) -> list[int]:
    return [len(b) for b in components(net)]


def potential_counterexample_check(n_max: int = 15) -> dict:
    before_sizes = [5, 5, 5, 5, 5, 1]
    after_sizes = [4, 4, 4, 4, 4, 6]
    before = sum(x**6 for x in before_sizes)
    after = sum(x**6 for x in after_sizes)
    chain = minimal_additive_potential(5, n_max)
    return {
        "sixth_power_before": before,
        "sixth_power_after": after,
        "sixth_power_decreases": after < before,
        "minimal_chain_k5": chain,
        "chain_lower_bounds_hold": chain[1] >= 3 and chain[2] >= 7 and chain[3] >= 17 and chain[4] >= 51,
        "chain_at_least_power_of_two": all(chain[i - 1] >= 2 ** (i - 1) for i in range(1, n_max + 1)),
    }


# ------------------------------------------------------------------ trajectory

@dataclass
class Trajectory:
    states: list = field(default_factory=list)
    moves: list = field(default_factory=list)
    potential_values: list = field(default_factory=list)
    reports: list = field(default_factory=list)

    @property
    def final(self) -> Network:
        return self.states[-1]

    def lines(self) -> list[dict]:
        out = []
        for t, state in enumerate(self.states):
            line = {
                "step": t,
                "blocks": [list(b) for b in components(state)],
                "edges": [list(e) for e in sorted(state.edges)],
                "potential": _tok(self.potential_values[t]) if t < len(self.potential_values) else None,
                "move": None,
            }
            if t > 0:
                rep = self.reports[t - 1] if t - 1 < len(self.reports) else None
                line["move"] = rep.to_dict() if rep is not None else self.moves[t - 1].to_dict()
            out.append(line)
        return out


def _tok(x):
    return "-inf" if x == NEG_INF else x


def singletons(n: int) -> Network:
    return Network.empty(n)


# ------------------------------------------------------------------ peeling

def mis_peeling_blocks(inst: Instance, mis_bound: int | None = MIS_BOUND) -> list[tuple[int, ...]]:
    """Blocks in formation order: each one a maximum independent set of what is left."""
    require_friends_enemies(inst)
    H = conflict_graph(inst)
    full_adj = H.adjacency_masks()
    remaining = list(range(inst.n))
    blocks = []
    while remaining:
        index = {v: t for t, v in enumerate(remaining)}
        sub = [0] * len(remaining)
        for t, v in enumerate(remaining):
            m = 0
            for w in remaining:
                if (full_adj[v] >> w) & 1:
                    m |= 1 << index[w]
            sub[t] = m
        chosen = [remaining[t] for t in max_independent_set(len(remaining), sub, mis_bound)]
        blocks.append(tuple(chosen))
        taken = set(chosen)
        remaining = [v for v in remaining if v not in taken]
    return blocks


def greedy_mis_peeling(inst: Instance, mis_bound: int | None = MIS_BOUND) -> Network:
    return Network.from_blocks(inst.n, mis_peeling_blocks(inst, mis_bound))


# ------------------------------------------------------------------ 2-stable dynamics

def _join_move(blocks, j: int, target) -> Defection:
    # j joins `target` by pairing with its smallest member, who keeps the rest
    i = target[0]
    rest = tuple(v for v in target if v != i)
    return Defection((j, i), (rest,) if rest else ())


def two_stable_dynamics(inst: Instance) -> Trajectory:
    """Move single agents into weakly larger friendly cliques until none can move.

    Scan order: smallest eligible agent first, then the largest eligible
    target clique, ties broken by canonical block order.
    """
    require_friends_enemies(inst)
    conflict = inst.conflict_masks()
    state = singletons(inst.n)
    traj = Trajectory([state], [], [sum_squares(block_sizes(state))])
    limit = inst.n * inst.n // 2
    while True:
        blocks = components(state)
        move = None
        for j in range(inst.n):
            J = next(b for b in blocks if j in b)
            best = None
            for I in blocks:
                if I is J or len(I) < len(J):
                    continue
                if any((conflict[j] >> i) & 1 for i in I):
                    continue
                if best is None or len(I) > len(best):
                    best = I
            if best is not None:
                move = _join_move(blocks, j, best)
                break
        if move is None:
            return traj
        if len(traj.moves) >= limit:
            raise RuntimeError("2-stable dynamics exceeded n^2/2 moves")
        report = _report(inst, state, move)
        state = apply_defection(state, move, cliqueified=True)
        traj.states.append(state)
        traj.moves.append(move)
        traj.reports.append(report)
        traj.potential_values.append(sum_squares(block_sizes(state)))


def _report(inst: Instance, net: Network, d: Defection) -> DefectionReport:
    after_net = apply_defection(net, d)
    before = tuple(node_utility(inst, net, s) for s in d.participants)
    after = tuple(node_utility(inst, after_net, s) for s in d.participants)
    return DefectionReport(d, before, after)


# ------------------------------------------------------------------ potential dynamics

def _run_improving(inst: Instance, start: Network, k: int, potential, max_steps: int) -> Trajectory:
    state = start
    traj = Trajectory([state], [], [potential(block_sizes(state))])
    while True:
        rep = find_improving_defection(inst, state, k)
        if rep is None:
            return traj
        if len(traj.moves) >= max_steps:
            raise RuntimeError(f"no k-stable network within {max_steps} steps")
        state = apply_defection(state, rep.defection, cliqueified=True)
        value = potential(block_sizes(state))
        if value <= traj.potential_values[-1]:
            raise RuntimeError(
                f"potential did not increase ({traj.potential_values[-1]} -> {value}) "
                f"on defection {rep.defection}"
            )
        traj.states.append(state)
        traj.moves.append(rep.defection)
        traj.reports.append(rep)
        traj.potential_values.append(value)


def potential_dynamics(inst: Instance, k: int) -> Trajectory:
    """Apply canonical improving <=k-defections from all singletons (k in {3, 4})."""
    if k not in (3, 4):
        raise ValueError("potential dynamics are defined for k = 3 and k = 4")
    require_friends_enemies(inst)
    potential = POTENTIALS["F3" if k == 3 else "F4"]
    fk = f3 if k == 3 else f4
    max_steps = inst.n * fk(inst.n) + 1
    return _run_improving(inst, singletons(inst.n), k, potential, max_steps)


class NotOptimalError(ValueError):
    """A repair step beat the welfare of a partition claimed to be optimal."""


def repair_trajectory(inst: Instance, optimal) -> Trajectory:
    require_friends_enemies(inst)
    if isinstance(optimal, Network):
        blocks = components(optimal)
    else:
        blocks = canonical_partition(optimal)
    start = Network.from_blocks(inst.n, blocks)
    claimed = partition_welfare(inst, blocks)
    traj = _run_improving(inst, start, 3, sum_cubes, inst.n**3 + 1)
    for state in traj.states[1:]:
        w = partition_welfare(inst, components(state))
        if w > claimed:
            raise NotOptimalError(f"repair reached welfare {w} above the claimed optimum {claimed}")
        if w < claimed:
            raise RuntimeError(f"repair step lowered welfare to {w}")
    return traj


def three_stable_from_optimal(inst: Instance, optimal) -> Network:
    """Turn a welfare-optimal clique partition into a 3-stable one of equal welfare."""
    return repair_trajectory(inst, optimal).final


# ------------------------------------------------------------------ best response

@dataclass(frozen=True)
class MoveSpec:
    """A scripted defection: who defects and which neighbours they keep."""

    participants: tuple
    keep: tuple = ()

    def to_dict(self) -> dict:
        return {"participants": list(self.participants), "keep": list(self.keep)}

    @classmethod
    def from_dict(cls, doc) -> "MoveSpec":
        return cls(tuple(doc["participants"]), tuple(doc.get("keep", ())))


class ScheduleError(ValueError):
    pass


def resolve_move(net: Network, spec: MoveSpec) -> Defection:
    S = set(spec.participants)
    comps = residual_components(net, S)
    adj = net.neighbours()
    attached = []
    for v in spec.keep:
        if v in S:
            raise ScheduleError(f"kept agent {v} is a participant")
        if not any(v in adj[s] for s in S):
            raise ScheduleError(f"agent {v} is not a neighbour of {sorted(S)}")
        comp = next(c for c in comps if v in c)
        if comp not in attached:
            attached.append(comp)
    return Defection(tuple(S), tuple(attached))


@dataclass
class BestResponseResult:
    trajectory: Trajectory
    cycle: bool
    cycle_start: int | None = None


def best_response_run(inst: Instance, start: Network, schedule="auto", max_steps: int = 100) -> BestResponseResult:
    """Run best-response dynamics, scripted or automatic, and look for a cycle.

    ``"auto"`` takes, at each step, the improving <=2-defection with the
    largest summed gain of its participants (first in canonical order on
    ties).  A schedule is a list of ``MoveSpec``; each scripted move must
    strictly improve every participant.
    """
    state = start
    traj = Trajectory([state], [], [general_utility_potential(inst, state)])
    seen = {state: 0}
    steps = schedule if schedule != "auto" else None
    t = 0
    while t < max_steps:
        if steps is None:
            best = None
            for rep in iter_improving_defections(inst, state, 2):
                if best is None or rep.gain() > best.gain():
                    best = rep
            if best is None:
                break
            d, rep = best.defection, best
        else:
            if t >= len(steps):
                break
            spec = steps[t]
            if isinstance(spec, dict):
                spec = MoveSpec.from_dict(spec)
            d = spec if isinstance(spec, Defection) else resolve_move(state, spec)
            rep = _report(inst, state, d)
            for s, b, a in zip(d.participants, rep.before, rep.after):
                if not a > b:
                    raise ScheduleError(f"step {t + 1}: agent {s} does not improve ({b} -> {a})")
        state = apply_defection(state, d)
        traj.states.append(state)
        traj.moves.append(d)
        traj.reports.append(rep)
        traj.potential_values.append(general_utility_potential(inst, state))
        t += 1
        if state in seen:
            return BestResponseResult(traj, True, seen[state])
        seen[state] = t
    return BestResponseResult(traj, False, None)


# ------------------------------------------------------------------ stable marriage

def _check_prefs(prefs, n):
    if len(prefs) != n or any(sorted(p) != list(range(n)) for p in prefs):
        raise ValueError("preferences must be complete strict lists over 0..n-1")


def gale_shapley(men: Sequence[Sequence[int]], women: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Man-proposing deferred acceptance; returns sorted (man, woman) pairs.

    ``men[m]`` lists women from most to least preferred, likewise ``women[w]``.
    """
    n = len(men)
    _check_prefs(men, n)
    _check_prefs(women, n)
    rank = [{m: r for r, m in enumerate(women[w])} for w in range(n)]
    nxt = [0] * n
    husband = [None] * n
    free = list(range(n - 1, -1, -1))
    while free:
        m = free.pop()
        w = men[m][nxt[m]]
        nxt[m] += 1
        cur = husband[w]
        if cur is None:
            husband[w] = m
        elif rank[w][m] < rank[w][cur]:
            husband[w] = m
            free.append(cur)
        else:
            free.append(m)
    return sorted((m, w) for w, m in enumerate(husband))


def blocking_pairs(matching, men, women) -> list[tuple[int, int]]:
    n = len(men)
    wife = {m: w for m, w in matching}
    husband = {w: m for m, w in matching}
    mrank = [{w: r for r, w in enumerate(p)} for p in men]
    wrank = [{m: r for r, m in enumerate(p)} for p in women]
    out = []
    for m in range(n):
        for w in range(n):
            if wife.get(m) == w:
                continue
            m_wants = m not in wife or mrank[m][w] < mrank[m][wife[m]]
            w_wants = w not in husband or wrank[w][m] < wrank[w][husband[w]]
            if m_wants and w_wants:
                out.append((m, w))
    return out


def stable_matchings_brute_force(men, women) -> list[tuple[tuple[int, int], ...]]:
    n = len(men)
    out = []
    for perm in permutations(range(n)):
        matching = tuple((m, perm[m]) for m in range(n))
        if not blocking_pairs(matching, men, women):
            out.append(matching)
    return out


def matching_to_network(matching, n: int) -> Network:
    """Men are agents 0..n-1, women n..2n-1."""
    return Network(2 * n, frozenset((m, n + w) for m, w in matching))


def network_to_matching(net: Network, n: int):
    """Decode a network of the marriage encoding; None if it is not a perfect matching."""
    pairs = []
    for b in components(net):
        if len(b) != 2 or not (b[0] < n <= b[1]):
            return None
        pairs.append((b[0], b[1] - n))
    return tuple(sorted(pairs))
