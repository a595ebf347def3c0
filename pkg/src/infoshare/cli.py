"""Command-line front end.

Exit codes: 0 ok, 1 instability found (or a failing experiment),
2 usage or input error, 3 oracle bound exceeded, 4 no stable network.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import construct, experiments, instances, reductions, stability, welfare
from .graphs import BoundExceeded
from .model import (
    FormatError,
    Instance,
    Network,
    dumps,
    instance_from_dict,
    instance_to_dict,
    is_clique_partition,
    network_from_dict,
    network_to_dict,
)

EXIT_OK, EXIT_UNSTABLE, EXIT_USAGE, EXIT_BOUND, EXIT_NONEXISTENT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ io helpers

def _read_doc(path):
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON input: {exc}") from None


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _instance_of(doc, instance_path=None) -> Instance:
    """An instance document, or the instance embedded in a network document."""
    if instance_path:
        return instance_from_dict(_read_doc(instance_path))
    if isinstance(doc, dict) and "instance" in doc:
        return instance_from_dict(doc["instance"])
    if isinstance(doc, dict) and ("pairs" in doc or "default" in doc):
        return instance_from_dict(doc)
    raise UsageError("input carries no instance; pass --instance FILE")


def _network_doc(inst: Instance, net: Network, extra=None) -> dict:
    doc = network_to_dict(net, as_blocks=is_clique_partition(net))
    doc["instance"] = instance_to_dict(inst)
    if extra:
        doc.update(extra)
    return doc


def _partition_list(blocks):
    return [list(b) for b in blocks]


# ------------------------------------------------------------------ generate

def _param_pairs(tokens):
    """Turn ``--key value`` tokens into a dict; values are JSON when they parse."""
    params = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--"):
            raise UsageError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        try:
            raw = next(it)
        except StopIteration:
            raise UsageError(f"{tok} needs a value") from None
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _build_family(family: str, params: dict, seed):
    """Returns (instance, sibling artifacts) for a family name and its parameters."""
    p = dict(params)
    extra = {}

    def take(name, default=None, required=False):
        if name in p:
            return p.pop(name)
        if required:
            raise UsageError(f"family {family!r} needs --{name.replace('_', '-')}")
        return default

    if family == "friends-enemies":
        inst = instances.gen_friends_enemies(take("n", required=True), [tuple(e) for e in take("enemies", [])])
    elif family == "bn":
        inst = instances.gen_Bn(take("n", required=True), bool(take("literal", False)))
    elif family == "grid":
        r, c = take("r", required=True), take("c", required=True)
        inst = instances.gen_grid(r, c)
        extra["network"] = Network.from_blocks(r * c, instances.grid_columns(r, c))
    elif family == "two-cliques-matching":
        n = take("n", required=True)
        inst = instances.gen_two_cliques_matching(n)
        extra["network"] = Network.from_blocks(n, instances.two_cliques_matching_partition(n))
    elif family == "cycle":
        g = instances.gen_best_response_cycle(take("s_size", 6))
        inst = g.instance
        extra["network"] = g.start
        extra["schedule"] = [m.to_dict() for m in g.schedule]
    elif family == "stable-marriage":
        men, women = take("men"), take("women")
        if men is None or women is None:
            n = take("n", required=True)
            men, women = instances.random_preferences(n, random.Random(seed or 0))
        inst = instances.gen_stable_marriage(men, women)
    elif family == "c-nonexist":
        inst = instances.gen_c_nonexistence(take("c", 5))
    elif family == "gadget":
        graph = take("graph", required=True)
        L = network_from_dict(_read_doc(graph) if isinstance(graph, str) else graph)
        inst, cand = instances.gen_stability_test_gadget(L, take("k", required=True))
        extra["network"] = cand
    elif family == "random":
        inst = instances.gen_random(take("n", required=True), float(take("p", 0.3)), seed or 0)
    elif family in ("pendant-k4", "distinct-stable", "k4-triangles", "k3-pendants", "strong-weak", "asym-nonexist"):
        inst = instances.FAMILIES[family]()
    else:
        raise UsageError(f"unknown family {family!r}")
    if p:
        raise UsageError(f"unknown parameters for {family}: {', '.join(sorted(p))}")
    return inst, extra


def cmd_generate(args) -> int:
    inst, extra = _build_family(args.family, _param_pairs(args.params), args.seed)
    _write(dumps(instance_to_dict(inst)), args.output)
    if args.with_network:
        if not args.output or args.output == "-":
            raise UsageError("--with-network needs -o FILE for the sibling files")
        if not extra:
            raise UsageError(f"family {args.family!r} defines no candidate network")
        stem = Path(args.output)
        base = stem.with_suffix("") if stem.suffix == ".json" else stem
        if "network" in extra:
            Path(f"{base}.network.json").write_text(dumps(_network_doc(inst, extra["network"])), encoding="utf-8")
        if "schedule" in extra:
            Path(f"{base}.schedule.json").write_text(dumps({"schedule": extra["schedule"]}), encoding="utf-8")
    return EXIT_OK


# ------------------------------------------------------------------ solve / verify

def cmd_solve(args) -> int:
    inst = _instance_of(_read_doc(args.input))
    alg = args.alg
    if alg == "peel":
        net = construct.greedy_mis_peeling(inst)
    elif alg == "dyn2":
        net = construct.two_stable_dynamics(inst).final
    elif alg in ("pot3", "pot4"):
        net = construct.potential_dynamics(inst, int(alg[-1])).final
    else:
        _, witness = welfare.optimal_total_welfare(inst, args.oracle_bound)
        net = construct.three_stable_from_optimal(inst, witness)
    _write(dumps(_network_doc(inst, net, {"algorithm": alg})), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = _read_doc(args.input)
    inst = _instance_of(doc, args.instance)
    net = network_from_dict(doc)
    if net.n != inst.n:
        raise UsageError(f"network has {net.n} agents but the instance has {inst.n}")
    ok, witness = stability.is_k_stable(inst, net, args.k)
    lines = ["STABLE" if ok else "UNSTABLE"]
    if witness is not None:
        lines.append(json.dumps(witness.to_dict(), indent=2))
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_UNSTABLE


def cmd_enumerate(args) -> int:
    inst = _instance_of(_read_doc(args.input))
    found = [_partition_list(b) for b in stability.iter_stable_partitions(inst, args.k, args.oracle_bound)]
    _write(dumps(found), args.output)
    return EXIT_OK if found else EXIT_NONEXISTENT


def cmd_welfare(args) -> int:
    inst = _instance_of(_read_doc(args.input))
    metric = {"utility": welfare.TOTAL_UTILITY, "components": welfare.COMPONENT_COUNT}[args.metric]
    rep = welfare.welfare_report(inst, args.k, metric, args.oracle_bound)
    _write(dumps(rep.to_dict()), args.output)
    return EXIT_NONEXISTENT if rep.nonexistent else EXIT_OK


# ------------------------------------------------------------------ reduce / trace

STAGES = ("3col", "3ctpg", "scbg", "matching")


def cmd_reduce(args) -> int:
    if STAGES.index(args.to) <= STAGES.index(args.source):
        raise UsageError(f"cannot reduce from {args.source} to {args.to}")
    if args.source != "3col":
        raise UsageError("only --from 3col is supported")
    H = network_from_dict(_read_doc(args.input))
    tpg = reductions.reduce_3col_to_3ctpg(H)
    out = {"3col": network_to_dict(H), "3ctpg": tpg.to_dict()}
    if args.to in ("scbg", "matching"):
        K = reductions.reduce_3ctpg_to_scbg(tpg)
        out["scbg"] = K.to_dict()
        if args.to == "matching":
            out["matching"] = instance_to_dict(reductions.reduce_scbg_to_matching_instance(K))
    _write(dumps(out), args.output)
    return EXIT_OK


def cmd_trace(args) -> int:
    doc = _read_doc(args.input)
    inst = _instance_of(doc, args.instance)
    if args.alg:
        if args.alg == "dyn2":
            traj = construct.two_stable_dynamics(inst)
        elif args.alg in ("pot3", "pot4"):
            traj = construct.potential_dynamics(inst, int(args.alg[-1]))
        else:
            _, witness = welfare.optimal_total_welfare(inst, args.oracle_bound)
            traj = construct.repair_trajectory(inst, witness)
        lines = traj.lines()
    else:
        if args.start:
            start = network_from_dict(_read_doc(args.start))
        elif "edges" in doc or "blocks" in doc:
            start = network_from_dict(doc)
        else:
            start = Network.empty(inst.n)
        schedule = "auto"
        if args.schedule:
            sched_doc = _read_doc(args.schedule)
            raw = sched_doc["schedule"] if isinstance(sched_doc, dict) else sched_doc
            schedule = [construct.MoveSpec.from_dict(m) for m in raw]
        res = construct.best_response_run(inst, start, schedule, args.max_steps)
        lines = res.trajectory.lines()
        lines.append({"cycle": res.cycle, "cycle_start": res.cycle_start, "moves": len(res.trajectory.moves)})
    _write("".join(json.dumps(line) + "\n" for line in lines), args.output)
    return EXIT_OK


# ------------------------------------------------------------------ experiment

def cmd_experiment(args) -> int:
    if args.suite != "paper-suite":
        raise UsageError(f"unknown suite {args.suite!r}")
    numbers = None
    if args.only:
        numbers = [int(x) for x in args.only.split(",")]
        known = {c[0] for c in experiments.CRITERIA}
        if not set(numbers) <= known:
            raise UsageError(f"criteria must be among {sorted(known)}")
    results = experiments.paper_suite(numbers)
    render = experiments.render_json if args.format == "json" else experiments.render_markdown
    _write(render(results, args.timings), args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_UNSTABLE


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle-bound", type=int, default=stability.ORACLE_BOUND,
                        help="ceiling on exhaustive enumeration size (default %(default)s)")
    common.add_argument("--seed", type=int, default=None, help="seed for random families")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="infoshare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write an instance of a named family")
    p.add_argument("family", choices=sorted(instances.FAMILIES))
    p.add_argument("--with-network", action="store_true",
                   help="also write the family's candidate network / schedule next to -o")
    p.epilog = "family parameters follow as --name value, e.g. grid --r 3 --c 4"
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", parents=[common], help="construct a stable network")
    p.add_argument("input", nargs="?")
    p.add_argument("--alg", choices=["peel", "dyn2", "pot3", "pot4", "repair3"], default="peel")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check k-stability of a network")
    p.add_argument("input", nargs="?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--instance", help="instance file when the network does not embed one")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[common], help="list all k-stable clique partitions")
    p.add_argument("input", nargs="?")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("welfare", parents=[common], help="price of stability / anarchy report")
    p.add_argument("input", nargs="?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--metric", choices=["utility", "components"], default="utility")
    p.set_defaults(func=cmd_welfare)

    p = sub.add_parser("reduce", parents=[common], help="run the hardness reduction chain")
    p.add_argument("input", nargs="?")
    p.add_argument("--from", dest="source", choices=STAGES[:1], default="3col")
    p.add_argument("--to", choices=STAGES[1:], default="matching")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("trace", parents=[common], help="replay dynamics as JSON lines")
    p.add_argument("input", nargs="?")
    p.add_argument("--instance")
    p.add_argument("--start", help="start network file (default: the input network or singletons)")
    p.add_argument("--schedule", help="schedule file of scripted moves (default: automatic best response)")
    p.add_argument("--alg", choices=["dyn2", "pot3", "pot4", "repair3"],
                   help="trace a construction algorithm instead of best response")
    p.add_argument("--max-steps", type=int, default=100)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("experiment", parents=[common], help="run the acceptance battery")
    p.add_argument("suite", choices=["paper-suite"])
    p.add_argument("--format", choices=["markdown", "json"], default="markdown")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds")
    p.set_defaults(func=cmd_experiment)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if args.command == "generate":
            args.params = extra
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (UsageError, FormatError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
