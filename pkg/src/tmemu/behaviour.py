"""Qualitative behaviour analysis of a machine over consecutive inputs:
compressed space-time diagram lengths, head-frontier filtering, and the
computed input/output function.

Compressed length is a cheap behaviour fingerprint: diagrams of machines
doing qualitatively different things on different inputs land in different
length clusters, so the histogram of lengths over inputs 1..N exposes the
behavioural repertoire without any hand inspection.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Iterable

from .core import BLANK, SpaceTimeDiagram, TapeConfiguration, TuringMachine, run

# Single pinned DEFLATE parameterization (zlib container, level 6): lengths
# are only ever compared relatively, never as absolute byte counts.
COMPRESSION_LEVEL = 6


def integer_to_tape(i: int) -> tuple[int, ...]:
    """Binary digits of i, most significant first; the head starts on the
    leftmost digit. Trailing zero digits are indistinguishable from the
    blank background by construction."""
    if i < 1:
        raise ValueError("inputs are numbered from 1")
    return tuple(int(d) for d in bin(i)[2:])


def diagram_bytes(diagram: SpaceTimeDiagram) -> bytes:
    """Canonical serialization: one ASCII digit per cell, row-major, no
    separators."""
    return "".join(
        "".join(str(s) for s in row) for row in diagram.rows
    ).encode("ascii")


def compressed_length(diagram: SpaceTimeDiagram) -> int:
    """Byte length of the canonical serialization under the pinned DEFLATE
    level. Deterministic: equal diagrams compress to equal lengths."""
    return len(zlib.compress(diagram_bytes(diagram), COMPRESSION_LEVEL))


@dataclass(frozen=True)
class BehaviourSample:
    input_index: int
    compressed_length: int
    outcome: str  # "halted" or "max-steps"
    steps_run: int


def behaviour_histogram(
    machine: TuringMachine,
    inputs: Iterable[int],
    steps: int,
) -> list[BehaviourSample]:
    """One sample per input: lay the input in binary, run for ``steps``,
    compress the diagram. Samples appear in input order."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    samples = []
    for i in inputs:
        diagram = run(machine, TapeConfiguration.from_pattern(integer_to_tape(i)), steps)
        samples.append(
            BehaviourSample(
                input_index=i,
                compressed_length=compressed_length(diagram),
                outcome="halted" if diagram.halted else "max-steps",
                steps_run=diagram.halted_at if diagram.halted else steps,
            )
        )
    return samples


def frontier_rows(diagram: SpaceTimeDiagram) -> SpaceTimeDiagram:
    """Keep row 0 plus every row where the head moved strictly beyond all
    previously visited cells. Idempotent; the window is unchanged."""
    heads = diagram.head_positions
    keep = [0]
    lo = hi = heads[0]
    for t in range(1, len(heads)):
        h = heads[t]
        if h > hi or h < lo:
            keep.append(t)
        lo = min(lo, h)
        hi = max(hi, h)
    return SpaceTimeDiagram(
        rows=tuple(diagram.rows[t] for t in keep),
        window=diagram.window,
        head_positions=tuple(heads[t] for t in keep),
        halted_at=diagram.halted_at,
    )


@dataclass(frozen=True)
class ComputedValue:
    input_index: int
    output: str  # final tape stripped of leading/trailing blanks, as digits
    outcome: str  # "halted" or "max-steps" (snapshot at the cutoff)


def computed_function(
    machine: TuringMachine,
    inputs: Iterable[int],
    steps: int,
) -> list[ComputedValue]:
    """Input/output table over binary inputs. A max-steps outcome reports
    the tape snapshot at the cutoff, not a final value."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = []
    for i in inputs:
        diagram = run(machine, TapeConfiguration.from_pattern(integer_to_tape(i)), steps)
        row = diagram.final_row()
        nonblank = [j for j, s in enumerate(row) if s != BLANK]
        if nonblank:
            digits = "".join(str(s) for s in row[nonblank[0] : nonblank[-1] + 1])
        else:
            digits = ""
        out.append(
            ComputedValue(
                input_index=i,
                output=digits,
                outcome="halted" if diagram.halted else "max-steps",
            )
        )
    return out


def diagram_to_pbm(diagram: SpaceTimeDiagram) -> str:
    """Portable bitmap/graymap text for visual inspection: P1 with nonblank
    as black for 2-symbol machines, P2 with one gray level per symbol
    otherwise. One image row per time step."""
    height = len(diagram.rows)
    width = diagram.window[1] - diagram.window[0] + 1
    symbols = {s for row in diagram.rows for s in row}
    if symbols <= {0, 1}:
        body = "\n".join(" ".join(str(s) for s in row) for row in diagram.rows)
        return f"P1\n{width} {height}\n{body}\n"
    maxval = max(symbols)
    body = "\n".join(
        " ".join(str(maxval - s) for s in row) for row in diagram.rows
    )
    return f"P2\n{width} {height}\n{maxval}\n{body}\n"


def count_modes(
    lengths: list[int],
    bin_width: int = 4,
    min_share: float = 0.05,
) -> int:
    """Mechanical multimodality proxy: bin lengths into fixed-width bins,
    group contiguous nonempty bins into clusters, and count clusters holding
    at least one bin with >= min_share of the samples. Clusters are
    separated by at least one empty bin by construction."""
    if not lengths:
        return 0
    threshold = min_share * len(lengths)
    bins: dict[int, int] = {}
    for length in lengths:
        b = length // bin_width
        bins[b] = bins.get(b, 0) + 1
    modes = 0
    cluster_has_mode = False
    prev = None
    for b in sorted(bins):
        if prev is not None and b > prev + 1:
            modes += cluster_has_mode
            cluster_has_mode = False
        cluster_has_mode = cluster_has_mode or bins[b] >= threshold
        prev = b
    modes += cluster_has_mode
    return modes
