"""Exact welfare baselines and price-of-stability/anarchy via exhaustive oracles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import graphs
from .model import (
    NEG_INF,
    ConflictGraph,
    Instance,
    canonical_partition,
    conflict_graph,
    partition_welfare,
)
from .instances import grid_columns, grid_rows, two_cliques_matching_partition
from .partitions import conflict_free_partitions
from .stability import ORACLE_BOUND, BoundExceeded, iter_stable_partitions, partition_is_k_stable

TOTAL_UTILITY = "TOTAL_UTILITY"
COMPONENT_COUNT = "COMPONENT_COUNT"
CHROMATIC_BOUND = 40


def _check_bound(n, bound):
    if bound is not None and n > bound:
        raise BoundExceeded(f"{n} agents exceeds the oracle bound {bound}")


def optimal_total_welfare(inst: Instance, bound: int | None = ORACLE_BOUND):
    """Largest total welfare of any network, with the first optimal partition."""
    _check_bound(inst.n, bound)
    best, witness = None, None
    for blocks in conflict_free_partitions(inst.n, inst.conflict_masks()):
        w = partition_welfare(inst, blocks)
        if best is None or w > best:
            best, witness = w, blocks
    return best, witness


def optimal_partitions(inst: Instance, bound: int | None = ORACLE_BOUND):
    """Every welfare-maximising conflict-free partition."""
    _check_bound(inst.n, bound)
    best, out = None, []
    for blocks in conflict_free_partitions(inst.n, inst.conflict_masks()):
        w = partition_welfare(inst, blocks)
        if best is None or w > best:
            best, out = w, [blocks]
        elif w == best:
            out.append(blocks)
    return best, out


def min_conflict_free_blocks(inst: Instance, bound: int | None = ORACLE_BOUND) -> int:
    _check_bound(inst.n, bound)
    return min(len(b) for b in conflict_free_partitions(inst.n, inst.conflict_masks()))


def chromatic_number(H: ConflictGraph, bound: int | None = CHROMATIC_BOUND):
    """Exact chromatic number and a colouring (list of colour ids per agent)."""
    return graphs.chromatic_number(H.n, H.adjacency_masks(), bound)


def enumerate_stable_networks(inst: Instance, k: int, bound: int | None = ORACLE_BOUND) -> list:
    return list(iter_stable_partitions(inst, k, bound))


def _ratio(num, den):
    """num / den as a Fraction; None when undefined (den <= 0 with num != den)."""
    if num == den:
        return Fraction(1)
    if den == NEG_INF or num == NEG_INF or den <= 0:
        return None
    return Fraction(num) / Fraction(den)


@dataclass
class WelfareReport:
    metric: str
    k: int
    optimum: object
    optimum_witness: tuple
    best_stable: object = None
    best_witness: tuple | None = None
    worst_stable: object = None
    worst_witness: tuple | None = None
    stable_count: int = 0
    pos: Fraction | None = None
    poa: Fraction | None = None

    @property
    def nonexistent(self) -> bool:
        return self.stable_count == 0

    def to_dict(self) -> dict:
        def num(x):
            if x is None:
                return None
            if x == NEG_INF:
                return "-inf"
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        def blocks(b):
            return None if b is None else [list(x) for x in b]

        doc = {
            "metric": self.metric,
            "k": self.k,
            "optimum": num(self.optimum),
            "optimum_witness": blocks(self.optimum_witness),
            "stable_networks": self.stable_count,
        }
        if self.nonexistent:
            doc["status"] = "nonexistent"
            return doc
        doc.update(
            status="ok",
            best_stable=num(self.best_stable),
            best_witness=blocks(self.best_witness),
            worst_stable=num(self.worst_stable),
            worst_witness=blocks(self.worst_witness),
            pos=num(self.pos),
            poa=num(self.poa),
        )
        return doc


def welfare_report(inst: Instance, k: int, metric: str = TOTAL_UTILITY, bound: int | None = ORACLE_BOUND) -> WelfareReport:
    _check_bound(inst.n, bound)
    if metric == TOTAL_UTILITY:
        optimum, witness = optimal_total_welfare(inst, bound)
        score = lambda b: partition_welfare(inst, b)
        better = lambda a, b: a > b
    elif metric == COMPONENT_COUNT:
        chi, coloring = chromatic_number(conflict_graph(inst))
        optimum = chi
        witness = canonical_partition(
            [v for v in range(inst.n) if coloring[v] == c] for c in range(chi)
        )
        score = len
        better = lambda a, b: a < b
    else:
        raise ValueError(f"unknown metric {metric!r}")
    rep = WelfareReport(metric, k, optimum, witness)
    for blocks in iter_stable_partitions(inst, k, bound):
        val = score(blocks)
        rep.stable_count += 1
        if rep.best_stable is None or better(val, rep.best_stable):
            rep.best_stable, rep.best_witness = val, blocks
        if rep.worst_stable is None or better(rep.worst_stable, val):
            rep.worst_stable, rep.worst_witness = val, blocks
    if rep.stable_count:
        if metric == TOTAL_UTILITY:
            rep.pos = _ratio(optimum, rep.best_stable)
            rep.poa = _ratio(optimum, rep.worst_stable)
        else:
            rep.pos = _ratio(rep.best_stable, optimum)
            rep.poa = _ratio(rep.worst_stable, optimum)
    return rep


def poa_bound_check(inst: Instance, k: int, family: str, **params) -> dict:
    """Compare a measured price of anarchy with the closed-form lower bound.

    ``family`` is ``"two-cliques-matching"`` (params: n) or ``"grid"``
    (params: r, c, with k <= r).  The worst stable network is found
    exhaustively.
    """
    rep = welfare_report(inst, k, TOTAL_UTILITY)
    record = {
        "family": family,
        "k": k,
        "optimum": rep.optimum,
        "worst_stable": rep.worst_stable,
        "measured_poa": rep.poa,
    }
    if family == "two-cliques-matching":
        n = params["n"]
        matching = two_cliques_matching_partition(n)
        record["witness_stable"] = partition_is_k_stable(inst, matching, k)
        record["witness_welfare"] = partition_welfare(inst, matching)
        record["bound"] = Fraction(n, 2)
    elif family == "grid":
        r, c = params["r"], params["c"]
        n = r * c
        cols, rows = grid_columns(r, c), grid_rows(r, c)
        record["witness_stable"] = partition_is_k_stable(inst, cols, k)
        record["witness_welfare"] = partition_welfare(inst, cols)
        record["rows_welfare"] = partition_welfare(inst, rows)
        # columns have k = r members: (n/k - 1)/(k - 1) with k the column length
        record["bound"] = Fraction(n // r - 1, r - 1)
        record["columns_formula"] = Fraction(n * r - n, 2)
        record["rows_formula"] = Fraction(n * n // r - n, 2)
        stable_cols = len(cols)
        chi = chromatic_number(conflict_graph(inst))[0]
        record["components_ratio"] = Fraction(stable_cols, chi)
    else:
        raise ValueError(f"unknown family {family!r}")
    poa = rep.poa
    record["holds"] = poa is not None and poa >= record["bound"] and record["witness_stable"]
    return record
