"""Command-line front end.

Exit codes: 0 success, 2 usage error (argparse), 3 runtime failure.
Global flags --seed/--threads/--out precede the subcommand; --threads never
changes output bytes, only wall time.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
import random

from .busy_beaver import SearchBudgetError, bb_search, registry_machine
from .core import (
    TapeConfiguration,
    Topology,
    TuringMachine,
    decode_rule,
    diagram_to_text,
    machine_from_text,
    run,
    sample_machines,
)
from .emulation import enumerate_transforms, scan_emulations, transform_count
from .experiment import (
    ConfigError,
    ExperimentConfig,
    derive_seed,
    parse_config,
    run_behaviour_experiment,
    run_emulation_experiment,
)
from .scoring import delta


def _add_machine_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--space", nargs=2, type=int, metavar=("N", "K"))
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--rule", type=int, help="rule number within --space")
    source.add_argument(
        "--registry",
        action="store_true",
        help="use the shipped champion for --space",
    )
    source.add_argument("--table", help="machine text file (n k rule + table)")


def _resolve_machine(args: argparse.Namespace) -> TuringMachine:
    if args.table:
        with open(args.table) as f:
            return machine_from_text(f.read())
    if args.space is None:
        raise ValueError("--space N K is required with --rule/--registry")
    n, k = args.space
    if args.registry:
        return registry_machine(n, k, by="steps")
    return decode_rule(n, k, args.rule)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmemu",
        description=(
            "Simulate small Turing machines, search Busy Beavers, and score "
            "emulation capability under block transformations."
        ),
    )
    parser.add_argument("--version", action="version", version=f"tmemu {__version__}")
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="root seed (default 0; overrides the config seed when given)",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker count")
    parser.add_argument("--out", help="output file or directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bb-search", help="exhaustive Busy Beaver search")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--cutoff", type=int, default=1000)

    p = sub.add_parser("run", help="simulate one machine, print the diagram")
    _add_machine_args(p)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--input", default="", help="initial tape as digits")
    p.add_argument("--one-way", action="store_true", help="one-way-right tape")
    p.add_argument("--pbm", help="also dump the diagram as a portable bitmap")

    p = sub.add_parser("transforms", help="enumerate block transformations")
    p.add_argument("k", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--all", action="store_true", help="list each transform")
    p.add_argument("--include-noninjective", action="store_true")

    p = sub.add_parser("emulate", help="emulation scan for one machine")
    _add_machine_args(p)
    p.add_argument("--blocks", nargs="+", type=int, default=[2, 3])
    p.add_argument("--m", type=int, default=3, help="emulated steps")
    p.add_argument("--candidates", type=int, default=1000)
    p.add_argument("--initial", help="explicit initial tape as digits")
    p.add_argument("--initial-random", type=int, metavar="L", default=6)

    p = sub.add_parser("behaviour", help="compressed-length behaviour sweep")
    _add_machine_args(p)
    p.add_argument("--inputs", nargs=2, type=int, default=[1, 100], metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=1000)

    p = sub.add_parser("experiment", help="run a config-file experiment")
    p.add_argument("--config", required=True)

    p = sub.add_parser("score", help="emulation-count confidence value")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)

    return parser


def _cmd_bb_search(args) -> int:
    record = bb_search(args.n, args.k, args.cutoff, workers=args.threads)
    text = json.dumps(record.to_json_dict(), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_run(args) -> int:
    machine = _resolve_machine(args)
    topology = Topology.ONE_WAY_RIGHT if args.one_way else Topology.TWO_WAY
    initial = TapeConfiguration.from_pattern(
        tuple(int(c) for c in args.input), topology=topology
    )
    diagram = run(machine, initial, args.steps)
    sys.stdout.write(
        f"# machine {machine.n} {machine.k} {machine.rule_number}\n"
        f"# window {diagram.window[0]} {diagram.window[1]}\n"
        f"# outcome {diagram.outcome}\n"
    )
    sys.stdout.write(diagram_to_text(diagram))
    if args.pbm:
        from .behaviour import diagram_to_pbm

        with open(args.pbm, "w") as f:
            f.write(diagram_to_pbm(diagram))
    return 0


def _cmd_transforms(args) -> int:
    injective = not args.include_noninjective
    count = transform_count(args.k, args.b, injective_only=injective)
    sys.stdout.write(f"{count}\n")
    if args.all:
        for t in enumerate_transforms(args.k, args.b, injective_only=injective):
            blocks = " ".join("".join(str(s) for s in blk) for blk in t.blocks)
            sys.stdout.write(f"{t.id}: {blocks}\n")
    return 0


def _cmd_emulate(args) -> int:
    machine = _resolve_machine(args)
    seed = args.seed if args.seed is not None else 0
    if args.initial:
        initial = tuple(int(c) for c in args.initial)
    else:
        rng = random.Random(derive_seed(seed, "initial"))
        while True:
            initial = tuple(
                rng.randrange(machine.k) for _ in range(args.initial_random)
            )
            if any(initial):
                break
    transforms = []
    for b in sorted(set(args.blocks)):
        transforms.extend(enumerate_transforms(machine.k, b))
    candidates = sample_machines(
        machine.n, machine.k, args.candidates, derive_seed(seed, "candidates/cli")
    )
    scan = scan_emulations(machine, candidates, transforms, initial, args.m)
    lines = ["emulator_rule,transform_id,block_size,emulated_rule,initial_condition,m,digest"]
    initial_str = "".join(str(s) for s in initial)
    for r in scan.records:
        lines.append(
            f"{r.emulator_rule},{r.transform_id},{r.block_size},{r.emulated_rule},"
            f"{initial_str},{r.m},{r.evolution_digest.encode().hex()}"
        )
    lines.append(
        f"# transforms_tested={scan.transforms_tested} "
        f"decode_failures={scan.decode_failures} "
        f"trivial_filtered={scan.trivial_filtered} "
        f"raw={len(scan.records)} "
        f"distinct={len({r.evolution_digest for r in scan.records})}"
    )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_behaviour(args) -> int:
    if not args.out:
        raise ValueError("behaviour requires --out DIRECTORY")
    machine = _resolve_machine(args)
    lo, hi = args.inputs
    summary = run_behaviour_experiment(
        machine,
        label=f"cli-{machine.n}-{machine.k}",
        inputs=range(lo, hi + 1),
        steps=args.steps,
        out_dir=args.out,
        seed=args.seed if args.seed is not None else 0,
    )
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as f:
        config = parse_config(f.read())
    if args.seed is not None:
        config = ExperimentConfig(
            **{**config.__dict__, "seed": args.seed}
        )
    out_dir = args.out or config.out
    if not out_dir:
        raise ConfigError("no output directory: set 'out =' in the config or pass --out")
    summary = run_emulation_experiment(config, out_dir, workers=args.threads)
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_score(args) -> int:
    sys.stdout.write(f"{delta(args.x, args.a)}\n")
    return 0


_COMMANDS = {
    "bb-search": _cmd_bb_search,
    "run": _cmd_run,
    "transforms": _cmd_transforms,
    "emulate": _cmd_emulate,
    "behaviour": _cmd_behaviour,
    "experiment": _cmd_experiment,
    "score": _cmd_score,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, LookupError, OSError, SearchBudgetError) as e:
        print(f"tmemu: error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
