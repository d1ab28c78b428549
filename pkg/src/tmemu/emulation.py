"""Block-transform emulation: invertible symbol-to-block compilers,
coarse-grained decoding of space-time diagrams, and the machine-emulates-
machine search.

A machine A emulates a machine B on an input when running A on the
block-encoded input and decoding every b-th row back through the inverse
transform reproduces B's direct evolution on the original input, cell for
cell. Internal states are ignored throughout: the comparison treats both
machines as black boxes over tape content.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .core import BLANK, SpaceTimeDiagram, TapeConfiguration, TuringMachine, run


class DecodeFailure(Exception):
    """A sampled row contains a block outside the transform's image.

    ``step`` is the emulated step (sampled-row index), ``cell`` the decoded
    cell coordinate of the first offending block.
    """

    def __init__(self, step: int | None, cell: int):
        super().__init__(f"undecodable block at emulated step {step}, cell {cell}")
        self.step = step
        self.cell = cell


@dataclass(frozen=True)
class BlockTransform:
    """Injective-by-construction check is left to ``injective``; enumeration
    can also produce non-injective maps for counting experiments.

    ``id`` is the index within the lexicographic enumeration of all
    (k^b)^k symbol-to-block maps for (k, b), stable under injectivity
    filtering.
    """

    k: int
    b: int
    blocks: tuple[tuple[int, ...], ...]
    id: int

    def __post_init__(self) -> None:
        if len(self.blocks) != self.k:
            raise ValueError(f"need one block per symbol, got {len(self.blocks)}")
        for block in self.blocks:
            if len(block) != self.b:
                raise ValueError(f"block {block} does not have length {self.b}")
            if any(not 0 <= s < self.k for s in block):
                raise ValueError(f"block {block} uses symbols outside [0, {self.k})")

    @property
    def injective(self) -> bool:
        return len(set(self.blocks)) == self.k

    @cached_property
    def inverse(self) -> dict[tuple[int, ...], int]:
        if not self.injective:
            raise ValueError("only injective transforms have a back transformation")
        return {block: sym for sym, block in enumerate(self.blocks)}


def transform_count(k: int, b: int, injective_only: bool = True) -> int:
    """(k^b)^k maps in total; the injective ones count by falling factorial."""
    if k < 2 or b < 1:
        raise ValueError("need k >= 2 and b >= 1")
    total = k**b
    if not injective_only:
        return total**k
    count = 1
    for i in range(k):
        count *= total - i
    return count


def transform_from_id(k: int, b: int, id: int) -> BlockTransform:
    """Rebuild a transform from its enumeration index."""
    total = k**b
    if not 0 <= id < total**k:
        raise ValueError(f"transform id {id} outside [0, {total ** k})")
    indices = []
    x = id
    for _ in range(k):
        x, r = divmod(x, total)
        indices.append(r)
    indices.reverse()
    all_blocks = list(itertools.product(range(k), repeat=b))
    return BlockTransform(
        k=k, b=b, blocks=tuple(all_blocks[i] for i in indices), id=id
    )


def enumerate_transforms(
    k: int,
    b: int,
    injective_only: bool = True,
    max_total: int = 10_000_000,
) -> list[BlockTransform]:
    """All symbol-to-block maps for (k, b) in lexicographic order of
    (block of symbol 0, block of symbol 1, ...).

    Only injective maps admit a back transformation, so emulation search
    uses ``injective_only=True`` (the default).
    """
    if k < 2 or b < 1:
        raise ValueError("need k >= 2 and b >= 1")
    total = (k**b) ** k
    if total > max_total:
        raise ValueError(
            f"(k={k}, b={b}) enumerates {total} transforms, over the "
            f"max_total guard of {max_total}"
        )
    all_blocks = list(itertools.product(range(k), repeat=b))
    out = []
    for id, combo in enumerate(itertools.product(all_blocks, repeat=k)):
        if injective_only and len(set(combo)) != k:
            continue
        out.append(BlockTransform(k=k, b=b, blocks=combo, id=id))
    return out


def encode_tape(transform: BlockTransform, tape: tuple[int, ...]) -> tuple[int, ...]:
    """Replace each cell by its block, left to right."""
    out: list[int] = []
    for sym in tape:
        out.extend(transform.blocks[sym])
    return tuple(out)


def decode_tape(transform: BlockTransform, tape: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse of :func:`encode_tape`; raises DecodeFailure off the image."""
    b = transform.b
    if len(tape) % b != 0:
        raise DecodeFailure(step=None, cell=len(tape) // b)
    inverse = transform.inverse
    out = []
    for i in range(0, len(tape), b):
        block = tuple(tape[i : i + b])
        sym = inverse.get(block)
        if sym is None:
            raise DecodeFailure(step=None, cell=i // b)
        out.append(sym)
    return tuple(out)


@dataclass(frozen=True)
class CoarseGrainedEvolution:
    """Decoded rows, one per emulated step, over decoded cell coordinates."""

    rows: tuple[tuple[int, ...], ...]
    window: tuple[int, int]
    m: int

    def __post_init__(self) -> None:
        if len(self.rows) != self.m + 1:
            raise ValueError(f"need m+1 = {self.m + 1} rows, got {len(self.rows)}")
        width = self.window[1] - self.window[0] + 1
        if any(len(r) != width for r in self.rows):
            raise ValueError("row lengths disagree with window")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def decode_rows(
    transform: BlockTransform,
    diagram: SpaceTimeDiagram,
    m: int,
    extent: tuple[int, int] | None = None,
) -> CoarseGrainedEvolution:
    """Sample rows 0, b, 2b, ..., b*m and decode each through the inverse map.

    Block boundaries sit at cell positions that are multiples of b (the
    encoded initial pattern starts a block at cell 0); sampled rows are
    blank-extended to whole blocks before decoding. ``extent`` widens the
    decoded region beyond the diagram window (cells there are blank by the
    sparse-tape semantics); the emulation pipeline passes the encoded
    pattern's extent so symbols whose blocks are all blank do not silently
    fall off the window edge. Raises DecodeFailure at the first block
    outside the transform's image. Never truncates: every sampled row
    either decodes fully or fails.
    """
    b = transform.b
    if m < 0:
        raise ValueError("m must be >= 0")
    if len(diagram.rows) < b * m + 1:
        raise ValueError(
            f"diagram has {len(diagram.rows)} rows, need {b * m + 1} "
            f"for m={m} at block size {b}"
        )
    inverse = transform.inverse
    lo, hi = diagram.window
    if extent is not None:
        lo = min(lo, extent[0])
        hi = max(hi, extent[1])
    alo = (lo // b) * b
    ahi_excl = _ceil_div(hi + 1, b) * b
    left_pad = (BLANK,) * (diagram.window[0] - alo)
    right_pad = (BLANK,) * (ahi_excl - 1 - diagram.window[1])
    cell_lo = alo // b
    n_blocks = (ahi_excl - alo) // b
    decoded_rows = []
    for step in range(m + 1):
        row = left_pad + diagram.rows[step * b] + right_pad
        decoded = []
        for c in range(n_blocks):
            sym = inverse.get(row[c * b : (c + 1) * b])
            if sym is None:
                raise DecodeFailure(step=step, cell=cell_lo + c)
            decoded.append(sym)
        decoded_rows.append(tuple(decoded))
    return CoarseGrainedEvolution(
        rows=tuple(decoded_rows),
        window=(cell_lo, cell_lo + n_blocks - 1),
        m=m,
    )


def evolution_from_diagram(diagram: SpaceTimeDiagram, m: int) -> CoarseGrainedEvolution:
    """First m+1 rows of a direct run, as an evolution (identity decoding)."""
    if len(diagram.rows) < m + 1:
        raise ValueError(f"diagram has {len(diagram.rows)} rows, need {m + 1}")
    return CoarseGrainedEvolution(
        rows=diagram.rows[: m + 1], window=diagram.window, m=m
    )


def is_trivial(evolution: CoarseGrainedEvolution) -> bool:
    """True iff every row repeats row 0 (the emulated machine did nothing)."""
    first = evolution.rows[0]
    return all(row == first for row in evolution.rows)


def evolution_digest(evolution: CoarseGrainedEvolution) -> str:
    """Canonical serialization: step count, absolute start column of the
    nonblank hull, and the hull-trimmed rows. Two evolutions get equal
    digests iff they are equal cell-for-cell after blank-padding both to a
    common window, so digest equality is the emulation match criterion and
    the distinct-count key.
    """
    width = evolution.window[1] - evolution.window[0] + 1
    first = width
    last = -1
    for row in evolution.rows:
        for i, sym in enumerate(row):
            if sym != BLANK:
                if i < first:
                    first = i
                if i > last:
                    last = i
    if last < 0:
        return f"{evolution.m};;"
    start_abs = evolution.window[0] + first
    body = "|".join(
        "".join(str(s) for s in row[first : last + 1]) for row in evolution.rows
    )
    return f"{evolution.m};{start_abs};{body}"


def evolutions_match(a: CoarseGrainedEvolution, b: CoarseGrainedEvolution) -> bool:
    """Cell-for-cell equality after padding both to the union window.

    This is the definitional comparison; ``evolution_digest`` equality is
    the fast equivalent used by the search.
    """
    if a.m != b.m:
        return False
    lo = min(a.window[0], b.window[0])
    hi = max(a.window[1], b.window[1])

    def padded(e: CoarseGrainedEvolution):
        left = (BLANK,) * (e.window[0] - lo)
        right = (BLANK,) * (hi - e.window[1])
        return [left + row + right for row in e.rows]

    return padded(a) == padded(b)


@dataclass(frozen=True)
class EmulationRecord:
    """One verified (emulator, compiler, emulated machine, input) quadruple."""

    emulator_rule: int
    transform_id: int
    block_size: int
    emulated_rule: int
    initial_condition: tuple[int, ...]
    m: int
    evolution_digest: str


@dataclass(frozen=True)
class EmulationScan:
    """find_emulations result plus the filter counters the records omit."""

    records: tuple[EmulationRecord, ...]
    transforms_tested: int
    decode_failures: int
    trivial_filtered: int


def scan_emulations(
    emulator: TuringMachine,
    candidates: list[TuringMachine],
    transforms: list[BlockTransform],
    initial: tuple[int, ...],
    m: int,
) -> EmulationScan:
    """Run the emulation pipeline for one emulator.

    For each transform: encode the initial tape, run the emulator for b*m
    steps from state 1 with the head on the leftmost cell, decode every
    b-th row, drop undecodable or trivial evolutions, and match the result
    against each candidate's direct m-step run on the raw initial tape
    (blank padding to the union window; states ignored on both sides).

    Output is canonically ordered by (block size, transform id, candidate
    rule number) and is deterministic for fixed inputs.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not initial:
        raise ValueError("initial condition must have at least one cell")
    for c in candidates:
        if (c.n, c.k) != (emulator.n, emulator.k):
            raise ValueError(
                f"candidate space ({c.n}, {c.k}) differs from emulator "
                f"({emulator.n}, {emulator.k})"
            )
    for t in transforms:
        if t.k != emulator.k:
            raise ValueError(f"transform alphabet {t.k} differs from machine {emulator.k}")

    by_digest: dict[str, list[int]] = {}
    for cand in candidates:
        diag = run(cand, TapeConfiguration.from_pattern(initial), m)
        digest = evolution_digest(evolution_from_diagram(diag, m))
        by_digest.setdefault(digest, []).append(cand.rule_number)
    for rules in by_digest.values():
        rules.sort()

    emulator_rule = emulator.rule_number
    records: list[EmulationRecord] = []
    decode_failures = 0
    trivial_filtered = 0
    for t in sorted(transforms, key=lambda t: (t.b, t.id)):
        encoded = encode_tape(t, initial)
        diag = run(emulator, TapeConfiguration.from_pattern(encoded), t.b * m)
        try:
            evolution = decode_rows(t, diag, m, extent=(0, len(encoded) - 1))
        except DecodeFailure:
            decode_failures += 1
            continue
        if is_trivial(evolution):
            trivial_filtered += 1
            continue
        digest = evolution_digest(evolution)
        for rule in by_digest.get(digest, ()):
            records.append(
                EmulationRecord(
                    emulator_rule=emulator_rule,
                    transform_id=t.id,
                    block_size=t.b,
                    emulated_rule=rule,
                    initial_condition=tuple(initial),
                    m=m,
                    evolution_digest=digest,
                )
            )
    return EmulationScan(
        records=tuple(records),
        transforms_tested=len(transforms),
        decode_failures=decode_failures,
        trivial_filtered=trivial_filtered,
    )


def find_emulations(
    emulator: TuringMachine,
    candidates: list[TuringMachine],
    transforms: list[BlockTransform],
    initial: tuple[int, ...],
    m: int,
) -> list[EmulationRecord]:
    """Every verified emulation of a candidate by ``emulator``; see
    :func:`scan_emulations` for the pipeline and ordering."""
    return list(
        scan_emulations(emulator, candidates, transforms, initial, m).records
    )


def count_emulations(records: list[EmulationRecord], distinct: bool = False) -> int:
    """Raw count, or the number of distinct emulated evolutions.

    Distinctness is exact equality of the canonical serializations; no
    lossy hashing is involved.
    """
    if not distinct:
        return len(records)
    return len({r.evolution_digest for r in records})
