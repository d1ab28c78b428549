"""Small Turing machine model: rule numbering, simulation, space-time diagrams.

Machines are total (n states, k symbols) transition tables over a sparse tape.
State 0 is the halting state; symbol 0 is the blank. Every machine in a rule
space has a canonical rule number under a fixed digit encoding, so rule spaces
can be enumerated, sampled and reproduced exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple

BLANK = 0

LEFT = -1
RIGHT = 1
STAY = 0  # only valid on halting instructions


class Topology(Enum):
    TWO_WAY = "two-way"
    ONE_WAY_RIGHT = "one-way-right"


class FellOffTapeError(Exception):
    """Head moved to a negative cell on a one-way-right tape.

    Distinct from halting: the machine did not reach state 0, it ran out of
    tape. Never raised on a two-way tape.
    """

    def __init__(self, step: int | None = None):
        at = "" if step is None else f" at step {step}"
        super().__init__(f"head fell off the left tape edge{at}")
        self.step = step


class Instruction(NamedTuple):
    next_state: int
    write: int
    direction: int

    def validate(self, n: int, k: int) -> None:
        if not 0 <= self.next_state <= n:
            raise ValueError(f"next_state {self.next_state} outside [0, {n}]")
        if not 0 <= self.write < k:
            raise ValueError(f"write symbol {self.write} outside [0, {k})")
        if self.direction not in (LEFT, STAY, RIGHT):
            raise ValueError(f"direction {self.direction} not in {{-1, 0, 1}}")
        # halting moves nowhere; non-halting must move
        if (self.direction == STAY) != (self.next_state == 0):
            raise ValueError(
                f"direction 0 iff next_state 0 violated: {self}"
            )


def rule_space_size(n: int, k: int) -> int:
    """Number of (n, k) machines: (k*(2n+1))^(n*k).

    Each of the n*k table entries independently picks one of k halting
    instructions or one of n*k*2 (state, write, direction) moves. For k=2
    this is (4n+2)^(2n).
    """
    if n < 1:
        raise ValueError("need at least one state")
    if k < 2:
        raise ValueError("need at least two symbols")
    return (k * (2 * n + 1)) ** (n * k)


def _digit_base(n: int, k: int) -> int:
    return k * (2 * n + 1)


def _instruction_to_digit(inst: Instruction, k: int) -> int:
    if inst.next_state == 0:
        return inst.write
    move_bit = (inst.direction + 1) // 2
    return k + ((inst.next_state - 1) * k + inst.write) * 2 + move_bit


def _digit_to_instruction(digit: int, k: int) -> Instruction:
    if digit < k:
        return Instruction(0, digit, STAY)
    q = digit - k
    packed, move_bit = divmod(q, 2)
    next_state, write = divmod(packed, k)
    return Instruction(next_state + 1, write, LEFT if move_bit == 0 else RIGHT)


@dataclass(frozen=True)
class TuringMachine:
    """Total transition table for an (n, k) machine.

    ``table`` is flat: the entry for (state s, symbol c) sits at index
    (s-1)*k + c, states counted from 1. The rule number is derived from the
    table (state-major, symbol-minor, most significant digit first) and is
    bijective with it.
    """

    n: int
    k: int
    table: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 2:
            raise ValueError(f"invalid rule space ({self.n}, {self.k})")
        if len(self.table) != self.n * self.k:
            raise ValueError(
                f"table has {len(self.table)} entries, need {self.n * self.k}"
            )
        for inst in self.table:
            inst.validate(self.n, self.k)

    def instruction(self, state: int, symbol: int) -> Instruction:
        if not 1 <= state <= self.n:
            raise ValueError(f"state {state} outside [1, {self.n}]")
        if not 0 <= symbol < self.k:
            raise ValueError(f"symbol {symbol} outside [0, {self.k})")
        return self.table[(state - 1) * self.k + symbol]

    @cached_property
    def rule_number(self) -> int:
        return encode_rule(self)

    @classmethod
    def from_entries(
        cls, n: int, k: int, entries: dict[tuple[int, int], tuple[int, int, int]]
    ) -> "TuringMachine":
        """Build from a {(state, symbol): (next_state, write, direction)} map."""
        table = []
        for state in range(1, n + 1):
            for symbol in range(k):
                try:
                    table.append(Instruction(*entries[(state, symbol)]))
                except KeyError:
                    raise ValueError(
                        f"table is not total: missing entry ({state}, {symbol})"
                    ) from None
        return cls(n, k, tuple(table))


def encode_rule(machine: TuringMachine) -> int:
    """Canonical rule number: table entries as digits in base k*(2n+1).

    Entries are ordered (state ascending from 1, symbol ascending from 0)
    with the first entry most significant. Halting instructions take the
    lowest k digit values (digit = written symbol); the rest pack
    (next_state, write, direction) above them.
    """
    base = _digit_base(machine.n, machine.k)
    rule = 0
    for inst in machine.table:
        rule = rule * base + _instruction_to_digit(inst, machine.k)
    return rule


def decode_rule(n: int, k: int, rule: int) -> TuringMachine:
    """Inverse of :func:`encode_rule`. Rejects out-of-range rule numbers."""
    size = rule_space_size(n, k)
    if not 0 <= rule < size:
        raise ValueError(f"rule number {rule} outside [0, {size}) for ({n}, {k})")
    base = _digit_base(n, k)
    digits = []
    x = rule
    for _ in range(n * k):
        x, d = divmod(x, base)
        digits.append(d)
    digits.reverse()
    return TuringMachine(n, k, tuple(_digit_to_instruction(d, k) for d in digits))


@dataclass(frozen=True)
class TapeConfiguration:
    """Sparse instantaneous description: nonblank cells, head, control state."""

    cells: dict[int, int]
    head: int = 0
    state: int = 1
    topology: Topology = Topology.TWO_WAY

    def __post_init__(self) -> None:
        if self.topology is Topology.ONE_WAY_RIGHT:
            if self.head < 0 or any(p < 0 for p in self.cells):
                raise ValueError("one-way-right tape has no negative cells")
        if any(sym == BLANK for sym in self.cells.values()):
            # keep the sparse map canonical so configs compare by equality
            object.__setattr__(
                self,
                "cells",
                {p: s for p, s in self.cells.items() if s != BLANK},
            )

    @classmethod
    def blank(cls, topology: Topology = Topology.TWO_WAY) -> "TapeConfiguration":
        return cls(cells={}, head=0, state=1, topology=topology)

    @classmethod
    def from_pattern(
        cls,
        pattern: Iterable[int],
        origin: int = 0,
        head: int | None = None,
        state: int = 1,
        topology: Topology = Topology.TWO_WAY,
    ) -> "TapeConfiguration":
        """Lay ``pattern`` on cells origin.., head on its leftmost cell."""
        cells = {
            origin + i: sym for i, sym in enumerate(pattern) if sym != BLANK
        }
        return cls(
            cells=cells,
            head=origin if head is None else head,
            state=state,
            topology=topology,
        )

    def read(self) -> int:
        return self.cells.get(self.head, BLANK)

    @property
    def halted(self) -> bool:
        return self.state == 0

    def nonblank_extent(self) -> tuple[int, int] | None:
        if not self.cells:
            return None
        return min(self.cells), max(self.cells)


def step(machine: TuringMachine, config: TapeConfiguration) -> TapeConfiguration:
    """One transition. The returned configuration has state 0 when the
    machine halts (the write is applied before halting; the head stays put).

    Raises FellOffTapeError when a one-way-right head would move to -1.
    """
    if config.halted:
        raise ValueError("cannot step a halted configuration")
    inst = machine.instruction(config.state, config.read())
    cells = dict(config.cells)
    if inst.write == BLANK:
        cells.pop(config.head, None)
    else:
        cells[config.head] = inst.write
    head = config.head + inst.direction
    if config.topology is Topology.ONE_WAY_RIGHT and head < 0:
        raise FellOffTapeError()
    return TapeConfiguration(
        cells=cells, head=head, state=inst.next_state, topology=config.topology
    )


@dataclass(frozen=True)
class SpaceTimeDiagram:
    """Tape rows over time, one row per step including step 0.

    ``window`` is the hull of every visited head position and the initial
    nonblank extent, so diagrams of different machines on the same input
    are comparable after blank padding. When a machine halts before
    ``max_steps``, the remaining rows repeat the final tape (frozen-tape
    convention) and ``halted_at`` records the true halting step.

    A max-steps outcome says nothing about halting; treat it as unknown.
    """

    rows: tuple[tuple[int, ...], ...]
    window: tuple[int, int]
    head_positions: tuple[int, ...]
    halted_at: int | None

    @property
    def halted(self) -> bool:
        return self.halted_at is not None

    @property
    def outcome(self) -> str:
        if self.halted_at is not None:
            return f"halted[{self.halted_at}]"
        return "max-steps"

    def final_row(self) -> tuple[int, ...]:
        return self.rows[-1]


def run(
    machine: TuringMachine,
    initial: TapeConfiguration,
    max_steps: int,
) -> SpaceTimeDiagram:
    """Simulate up to ``max_steps`` transitions, capturing every tape row.

    Equivalent to iterating :func:`step` and snapshotting, but reconstructs
    rows from per-step writes so long runs stay cheap.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    cells = dict(initial.cells)
    head = initial.head
    state = initial.state
    one_way = initial.topology is Topology.ONE_WAY_RIGHT

    lo = hi = head
    extent = initial.nonblank_extent()
    if extent is not None:
        lo = min(lo, extent[0])
        hi = max(hi, extent[1])

    # (write_pos, write_sym, head_after) per executed step
    trace: list[tuple[int, int, int]] = []
    halted_at = 0 if state == 0 else None
    table = machine.table
    k = machine.k
    n = machine.n
    for t in range(1, max_steps + 1):
        if state == 0:
            break
        sym = cells.get(head, BLANK)
        if not (1 <= state <= n):  # pragma: no cover - guarded by types
            raise ValueError(f"invalid state {state}")
        inst = table[(state - 1) * k + sym]
        if inst.write == BLANK:
            cells.pop(head, None)
        else:
            cells[head] = inst.write
        write_pos = head
        write_sym = inst.write
        if inst.next_state == 0:
            state = 0
            halted_at = t
            trace.append((write_pos, write_sym, head))
            break
        head += inst.direction
        if one_way and head < 0:
            raise FellOffTapeError(step=t)
        state = inst.next_state
        lo = min(lo, head)
        hi = max(hi, head)
        trace.append((write_pos, write_sym, head))

    width = hi - lo + 1
    row = [BLANK] * width
    for pos, sym in initial.cells.items():
        row[pos - lo] = sym
    rows = [tuple(row)]
    heads = [initial.head]
    for pos, sym, head_after in trace:
        row[pos - lo] = sym
        rows.append(tuple(row))
        heads.append(head_after)
    # frozen-tape rows: consumers sample rows at fixed step multiples even
    # when the machine halts mid-window
    while len(rows) < max_steps + 1:
        rows.append(rows[-1])
        heads.append(heads[-1])
    return SpaceTimeDiagram(
        rows=tuple(rows),
        window=(lo, hi),
        head_positions=tuple(heads),
        halted_at=halted_at,
    )


def sample_machines(
    n: int, k: int, count: int, seed: int
) -> list[TuringMachine]:
    """Draw ``count`` machines uniformly by rule number, reproducibly."""
    if count < 0:
        raise ValueError("count must be >= 0")
    size = rule_space_size(n, k)
    rng = random.Random(seed)
    return [decode_rule(n, k, rng.randrange(size)) for _ in range(count)]


def sample_rules(n: int, k: int, count: int, seed: int) -> list[int]:
    """Rule numbers only; same stream as :func:`sample_machines`."""
    if count < 0:
        raise ValueError("count must be >= 0")
    size = rule_space_size(n, k)
    rng = random.Random(seed)
    return [rng.randrange(size) for _ in range(count)]


# --- text forms ------------------------------------------------------------
#
# Machines: "n k rule_number" then optionally one "state symbol -> next write
# dir" line per table entry. Diagrams: one row per line, symbols as single
# digits (k <= 10).


def machine_to_text(machine: TuringMachine, include_table: bool = True) -> str:
    lines = [f"{machine.n} {machine.k} {machine.rule_number}"]
    if include_table:
        for state in range(1, machine.n + 1):
            for symbol in range(machine.k):
                inst = machine.instruction(state, symbol)
                lines.append(
                    f"{state} {symbol} -> "
                    f"{inst.next_state} {inst.write} {inst.direction}"
                )
    return "\n".join(lines) + "\n"


def machine_from_text(text: str) -> TuringMachine:
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty machine text")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"bad machine header {lines[0]!r}: want 'n k rule'")
    n, k, rule = (int(x) for x in header)
    machine = decode_rule(n, k, rule)
    if len(lines) > 1:
        entries = {}
        for ln in lines[1:]:
            lhs, _, rhs = ln.partition("->")
            state, symbol = (int(x) for x in lhs.split())
            next_state, write, direction = (int(x) for x in rhs.split())
            entries[(state, symbol)] = (next_state, write, direction)
        explicit = TuringMachine.from_entries(n, k, entries)
        if explicit.table != machine.table:
            raise ValueError(
                "explicit table disagrees with rule number "
                f"{rule} for space ({n}, {k})"
            )
    return machine


def diagram_to_text(diagram: SpaceTimeDiagram) -> str:
    return "\n".join("".join(str(s) for s in row) for row in diagram.rows) + "\n"
