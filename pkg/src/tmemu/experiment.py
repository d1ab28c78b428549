"""Experiment driver: declarative configs, labelled seed derivation, and
reproducible emulation/behaviour experiment runs with atomic output.

One root seed derives every sampling stream through a purpose-string label
(sha256 of "root|label"), so streams are independent and adding a new
sampling site never perturbs existing ones. For a fixed (config, seed) every
output byte is identical across runs and worker counts.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import multiprocessing
import os
import random
from dataclasses import dataclass
from typing import Iterable

from . import __version__
from .behaviour import behaviour_histogram, computed_function, count_modes
from .busy_beaver import registry_machine
from .core import TuringMachine, decode_rule, rule_space_size
from .emulation import (
    EmulationScan,
    enumerate_transforms,
    scan_emulations,
)
from .scoring import compare_groups


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


def derive_seed(root_seed: int, label: str) -> int:
    """64-bit sub-seed for a named sampling stream."""
    digest = hashlib.sha256(f"{root_seed}|{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    emulator_kind: str  # "registry" or "rule"
    emulator_rule: int | None
    random_emulators: int
    candidate_sample: int
    block_sizes: tuple[int, ...]
    m: int
    initial_kind: str  # "random" or "explicit"
    initial_length: int
    initial_cells: tuple[int, ...] | None
    seed: int
    belief: float
    out: str | None = None

    def validate(self) -> None:
        if self.n < 1 or self.k < 2:
            raise ConfigError(f"invalid space ({self.n}, {self.k})")
        if self.emulator_kind not in ("registry", "rule"):
            raise ConfigError(f"unknown emulator kind {self.emulator_kind!r}")
        if self.emulator_kind == "rule":
            if self.emulator_rule is None:
                raise ConfigError("emulator rule missing")
            if not 0 <= self.emulator_rule < rule_space_size(self.n, self.k):
                raise ConfigError(f"emulator rule {self.emulator_rule} out of range")
        if self.random_emulators < 0:
            raise ConfigError("random_emulators must be >= 0")
        if self.candidate_sample < 1:
            raise ConfigError("candidate_sample must be >= 1")
        if not self.block_sizes:
            raise ConfigError("need at least one block size")
        if any(b < 1 for b in self.block_sizes):
            raise ConfigError("block sizes must be >= 1")
        if self.m < 1:
            raise ConfigError("m must be >= 1")
        if self.initial_kind == "explicit":
            if not self.initial_cells:
                raise ConfigError("explicit initial condition is empty")
            if any(not 0 <= s < self.k for s in self.initial_cells):
                raise ConfigError("initial condition uses out-of-alphabet symbols")
        elif self.initial_kind == "random":
            if self.initial_length < 1:
                raise ConfigError("initial length must be >= 1")
        else:
            raise ConfigError(f"unknown initial kind {self.initial_kind!r}")
        if not 0 < self.belief <= 1:
            raise ConfigError("belief must be in (0, 1]")

    def canonical_text(self) -> str:
        lines = [
            f"space = {self.n} {self.k}",
            (
                "emulator = registry"
                if self.emulator_kind == "registry"
                else f"emulator = rule {self.emulator_rule}"
            ),
            f"random_emulators = {self.random_emulators}",
            f"candidate_sample = {self.candidate_sample}",
            "block_sizes = " + " ".join(str(b) for b in self.block_sizes),
            f"m = {self.m}",
            (
                f"initial = random {self.initial_length}"
                if self.initial_kind == "random"
                else "initial = explicit "
                + "".join(str(s) for s in self.initial_cells)
            ),
            f"seed = {self.seed}",
            f"belief = {self.belief}",
        ]
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def parse_config(text: str) -> ExperimentConfig:
    """Parse the declarative key = value format; see canonical_text for the
    exact shape. Unknown keys are rejected."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        values[key.strip()] = value.strip()

    def need(key: str) -> str:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
        return values[key]

    try:
        n_s, k_s = need("space").split()
        n, k = int(n_s), int(k_s)
    except ValueError as e:
        raise ConfigError(f"bad space: {e}") from None

    emulator = need("emulator").split()
    if emulator == ["registry"]:
        emulator_kind, emulator_rule = "registry", None
    elif len(emulator) == 2 and emulator[0] == "rule":
        emulator_kind, emulator_rule = "rule", int(emulator[1])
    else:
        raise ConfigError(f"bad emulator spec {values['emulator']!r}")

    initial = values.get("initial", "random 6").split()
    if len(initial) == 2 and initial[0] == "random":
        initial_kind, initial_length, initial_cells = "random", int(initial[1]), None
    elif len(initial) == 2 and initial[0] == "explicit":
        initial_kind, initial_length = "explicit", 0
        initial_cells = tuple(int(c) for c in initial[1])
    else:
        raise ConfigError(f"bad initial spec {values.get('initial')!r}")

    known = {
        "space",
        "emulator",
        "random_emulators",
        "candidate_sample",
        "block_sizes",
        "m",
        "initial",
        "seed",
        "belief",
        "out",
    }
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    try:
        config = ExperimentConfig(
            n=n,
            k=k,
            emulator_kind=emulator_kind,
            emulator_rule=emulator_rule,
            random_emulators=int(values.get("random_emulators", "30")),
            candidate_sample=int(values.get("candidate_sample", "1000")),
            block_sizes=tuple(
                int(b) for b in values.get("block_sizes", "2 3 4").split()
            ),
            m=int(values.get("m", "3")),
            initial_kind=initial_kind,
            initial_length=initial_length,
            initial_cells=initial_cells,
            seed=int(values.get("seed", "0")),
            belief=float(values.get("belief", "1.0")),
            out=values.get("out"),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    config.validate()
    return config


def draw_initial_condition(config: ExperimentConfig) -> tuple[int, ...]:
    """Seeded random non-all-blank pattern, or the explicit one."""
    if config.initial_kind == "explicit":
        return config.initial_cells
    rng = random.Random(derive_seed(config.seed, "initial"))
    while True:
        cells = tuple(rng.randrange(config.k) for _ in range(config.initial_length))
        if any(cells):
            return cells


def _resolve_emulator(config: ExperimentConfig) -> TuringMachine:
    if config.emulator_kind == "registry":
        return registry_machine(config.n, config.k, by="steps")
    return decode_rule(config.n, config.k, config.emulator_rule)


def _candidate_rules(config: ExperimentConfig, label: str) -> list[int]:
    size = rule_space_size(config.n, config.k)
    rng = random.Random(derive_seed(config.seed, f"candidates/{label}"))
    return [rng.randrange(size) for _ in range(config.candidate_sample)]


_SCAN_CONTEXT: dict | None = None


def _scan_one(task: tuple[str, int, int]) -> EmulationScan:
    """Worker: emulation scan for one emulator. Context is inherited via
    fork or rebuilt from the pickled config."""
    label, index, emulator_rule = task
    ctx = _SCAN_CONTEXT
    config: ExperimentConfig = ctx["config"]
    emulator = decode_rule(config.n, config.k, emulator_rule)
    candidates = [
        decode_rule(config.n, config.k, r)
        for r in _candidate_rules(config, label)
    ]
    return scan_emulations(
        emulator, candidates, ctx["transforms"], ctx["initial"], config.m
    )


def _init_scan_context(config, transforms, initial) -> None:
    global _SCAN_CONTEXT
    _SCAN_CONTEXT = {
        "config": config,
        "transforms": transforms,
        "initial": initial,
    }


def _atomic_write_all(out_dir: str, files: dict[str, str]) -> None:
    """Write every file or none: stage under temporary names, then rename.

    Renames only start after all staging writes succeed, so an error leaves
    no partial result files behind."""
    os.makedirs(out_dir, exist_ok=True)
    staged = []
    try:
        for name, content in files.items():
            tmp = os.path.join(out_dir, f".tmp-{name}")
            with open(tmp, "w", newline="") as f:
                f.write(content)
            staged.append((tmp, os.path.join(out_dir, name)))
        for tmp, final in staged:
            os.replace(tmp, final)
    except BaseException:
        for tmp, _ in staged:
            try:
                os.unlink(tmp)
            except OSError:
                pass
        raise


def _csv_header_lines(config_hash: str, seed: int) -> str:
    return (
        f"# tmemu {__version__}\n"
        f"# config_hash={config_hash} seed={seed}\n"
    )


def _emulator_tasks(config: ExperimentConfig, bb_rule: int) -> list[tuple[str, int, int]]:
    tasks = [("bb", 0, bb_rule)]
    size = rule_space_size(config.n, config.k)
    rng = random.Random(derive_seed(config.seed, "emulators"))
    for j in range(config.random_emulators):
        tasks.append((f"rnd/{j}", j, rng.randrange(size)))
    return tasks


def run_emulation_experiment(
    config: ExperimentConfig,
    out_dir: str,
    workers: int = 1,
) -> dict:
    """Full two-group emulation experiment; returns the summary dict and
    writes emulations.csv, counts.csv and summary.json atomically.

    The reference emulator and each sampled random emulator are scanned over
    every injective transform of the configured block sizes against a fresh
    per-emulator candidate sample, all on one shared initial condition.
    """
    config.validate()
    initial = draw_initial_condition(config)
    bb_machine = _resolve_emulator(config)
    transforms = []
    for b in sorted(set(config.block_sizes)):
        transforms.extend(enumerate_transforms(config.k, b, injective_only=True))
    tasks = _emulator_tasks(config, bb_machine.rule_number)

    _init_scan_context(config, transforms, initial)
    if workers <= 1 or len(tasks) < 2:
        scans = [_scan_one(t) for t in tasks]
    else:
        with multiprocessing.Pool(
            processes=workers,
            initializer=_init_scan_context,
            initargs=(config, transforms, initial),
        ) as pool:
            scans = pool.map(_scan_one, tasks)

    config_hash = config.config_hash()
    header = _csv_header_lines(config_hash, config.seed)

    emu_buf = io.StringIO()
    emu_buf.write(header)
    writer = csv.writer(emu_buf, lineterminator="\n")
    writer.writerow(
        [
            "row_type",
            "group",
            "emulator_rule",
            "transform_id",
            "block_size",
            "emulated_rule",
            "initial_condition",
            "m",
            "digest",
            "transforms_tested",
            "decode_failures",
            "trivial_filtered_count",
        ]
    )
    initial_str = "".join(str(s) for s in initial)
    for (label, _, emulator_rule), scan in zip(tasks, scans):
        group = "bb" if label == "bb" else "random"
        for r in scan.records:
            writer.writerow(
                [
                    "record",
                    group,
                    r.emulator_rule,
                    r.transform_id,
                    r.block_size,
                    r.emulated_rule,
                    initial_str,
                    r.m,
                    r.evolution_digest.encode().hex(),
                    "",
                    "",
                    "",
                ]
            )
        writer.writerow(
            [
                "summary",
                group,
                emulator_rule,
                "",
                "",
                "",
                initial_str,
                config.m,
                "",
                scan.transforms_tested,
                scan.decode_failures,
                scan.trivial_filtered,
            ]
        )

    counts_buf = io.StringIO()
    counts_buf.write(header)
    writer = csv.writer(counts_buf, lineterminator="\n")
    writer.writerow(["group", "emulator_index", "emulator_rule", "raw_count", "distinct_count"])
    raw_bb: list[int] = []
    raw_rnd: list[int] = []
    distinct_bb: list[int] = []
    distinct_rnd: list[int] = []
    for (label, index, emulator_rule), scan in zip(tasks, scans):
        group = "bb" if label == "bb" else "random"
        raw = len(scan.records)
        distinct = len({r.evolution_digest for r in scan.records})
        writer.writerow([group, index, emulator_rule, raw, distinct])
        (raw_bb if group == "bb" else raw_rnd).append(raw)
        (distinct_bb if group == "bb" else distinct_rnd).append(distinct)

    summary: dict = {
        "tool_version": __version__,
        "config_hash": config_hash,
        "seed": config.seed,
        "config": {
            "n": config.n,
            "k": config.k,
            "emulator": (
                "registry"
                if config.emulator_kind == "registry"
                else f"rule {config.emulator_rule}"
            ),
            "emulator_rule": bb_machine.rule_number,
            "random_emulators": config.random_emulators,
            "candidate_sample": config.candidate_sample,
            "block_sizes": list(sorted(set(config.block_sizes))),
            "m": config.m,
            "initial_condition": initial_str,
            "belief": config.belief,
        },
    }
    if raw_rnd:
        raw_cmp = compare_groups(raw_bb, raw_rnd, a=config.belief)
        distinct_cmp = compare_groups(distinct_bb, distinct_rnd, a=config.belief)
        nk = config.n * config.k
        summary["raw"] = raw_cmp.to_json_dict()
        summary["distinct"] = distinct_cmp.to_json_dict()
        summary["delta_normalized"] = {
            "busy-beaver": {
                "raw": raw_cmp.delta_first / nk,
                "distinct": distinct_cmp.delta_first / nk,
            },
            "random": {
                "raw": raw_cmp.delta_second / nk,
                "distinct": distinct_cmp.delta_second / nk,
            },
        }
        summary["verdicts"] = {
            "raw": raw_cmp.verdict,
            "distinct": distinct_cmp.verdict,
        }
    else:
        summary["raw"] = {"busy-beaver": raw_bb}
        summary["distinct"] = {"busy-beaver": distinct_bb}

    _atomic_write_all(
        out_dir,
        {
            "emulations.csv": emu_buf.getvalue(),
            "counts.csv": counts_buf.getvalue(),
            "summary.json": json.dumps(summary, indent=2, sort_keys=True) + "\n",
        },
    )
    return summary


def run_behaviour_experiment(
    machine: TuringMachine,
    label: str,
    inputs: Iterable[int],
    steps: int,
    out_dir: str,
    seed: int = 0,
) -> dict:
    """Behaviour histogram plus computed-function table for one machine;
    writes behaviour.csv, function.csv and summary.json atomically."""
    inputs = list(inputs)
    samples = behaviour_histogram(machine, inputs, steps)
    values = computed_function(machine, inputs, steps)

    meta = (
        f"machine={machine.n},{machine.k},{machine.rule_number} "
        f"label={label} steps={steps}"
    )
    config_hash = hashlib.sha256(meta.encode()).hexdigest()[:16]
    header = _csv_header_lines(config_hash, seed)

    b_buf = io.StringIO()
    b_buf.write(header)
    writer = csv.writer(b_buf, lineterminator="\n")
    writer.writerow(["input", "outcome", "steps", "compressed_length"])
    for s in samples:
        writer.writerow([s.input_index, s.outcome, s.steps_run, s.compressed_length])

    f_buf = io.StringIO()
    f_buf.write(header)
    writer = csv.writer(f_buf, lineterminator="\n")
    writer.writerow(["input", "output", "outcome"])
    for v in values:
        writer.writerow([v.input_index, v.output, v.outcome])

    lengths = [s.compressed_length for s in samples]
    summary = {
        "tool_version": __version__,
        "config_hash": config_hash,
        "seed": seed,
        "machine": {
            "n": machine.n,
            "k": machine.k,
            "rule_number": machine.rule_number,
            "label": label,
        },
        "inputs": [inputs[0], inputs[-1]] if inputs else [],
        "steps": steps,
        "halted": sum(1 for s in samples if s.outcome == "halted"),
        "max_steps_reached": sum(1 for s in samples if s.outcome == "max-steps"),
        "modes": count_modes(lengths),
    }
    _atomic_write_all(
        out_dir,
        {
            "behaviour.csv": b_buf.getvalue(),
            "function.csv": f_buf.getvalue(),
            "summary.json": json.dumps(summary, indent=2, sort_keys=True) + "\n",
        },
    )
    return summary
