"""Busy Beaver statistics: exhaustive rule-space search and champion registry.

The search runs every machine of an (n, k) space on a blank two-way tape and
keeps the maxima over halters of sigma (nonblank cells at halt) and steps.
Two sound non-halt detectors keep the scan fast: an exact configuration
repeat check and a translation-loop check for machines running off into
fresh blank tape. Machines neither halted nor proven looping by the cutoff
are counted as unresolved; a cutoff is never evidence of non-halting.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from importlib import resources

from .core import (
    BLANK,
    Instruction,
    SpaceTimeDiagram,
    TuringMachine,
    _digit_base,
    _digit_to_instruction,
    rule_space_size,
)

# Spaces larger than this are not exhaustively enumerable at desk scale.
MAX_ENUMERABLE = 100_000_000

HALTED = 1
CUTOFF = 0
NONHALTING = -1


class SearchBudgetError(Exception):
    """Rule space too large to enumerate; partial progress is discarded."""


class UnknownSpaceError(LookupError):
    """No registry entry for the requested (n, k) space."""


class RegistryValueUnknownError(LookupError):
    """Registry ships a champion table for (n, k) but no exact statistics."""


@dataclass(frozen=True)
class HaltStatistics:
    """Per-run halting work: nonblank cells on the final tape, halting step."""

    sigma: int
    steps: int


def halt_statistics(diagram: SpaceTimeDiagram) -> HaltStatistics:
    if not diagram.halted:
        raise ValueError("halt statistics are defined only for halted runs")
    sigma = sum(1 for sym in diagram.final_row() if sym != BLANK)
    return HaltStatistics(sigma=sigma, steps=diagram.halted_at)


@dataclass(frozen=True)
class BusyBeaverRecord:
    """Maxima of a rule space with the machines achieving them.

    ``unresolved`` counts machines whose halting status stayed unknown at the
    step cutoff; proven non-halters are excluded. The result is exact iff
    unresolved is 0 or the cutoff dwarfs the space's true maximum.
    """

    n: int
    k: int
    sigma: int
    s_steps: int
    champions_sigma: tuple[int, ...]
    champions_steps: tuple[int, ...]
    unresolved: int
    provenance: str  # "searched" or "registry"
    cutoff: int | None = None
    halted: int | None = None
    nonhalting: int | None = None
    source: str = ""

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "sigma": self.sigma,
            "s_steps": self.s_steps,
            "champions_sigma": list(self.champions_sigma),
            "champions_steps": list(self.champions_steps),
            "unresolved": self.unresolved,
            "provenance": self.provenance,
            "cutoff": self.cutoff,
            "halted": self.halted,
            "nonhalting": self.nonhalting,
            "source": self.source,
        }


def decide_blank_run(
    machine_table: list[tuple[Instruction, ...]] | TuringMachine,
    k: int | None = None,
    cutoff: int = 1000,
) -> tuple[int, int, int]:
    """Fast blank-tape run without diagram capture.

    Returns (status, steps, sigma) with status HALTED, CUTOFF or NONHALTING;
    sigma is meaningful only for halters. Used by the search and to verify
    registry champions whose runs are too long to diagram.
    """
    if isinstance(machine_table, TuringMachine):
        m = machine_table
        k = m.k
        trans = [None] + [
            [m.instruction(s, c) for c in range(k)] for s in range(1, m.n + 1)
        ]
    else:
        trans = machine_table
        assert k is not None
    tape = bytearray(2 * cutoff + 3)
    origin = cutoff + 1
    status, steps, sigma, _, _ = _decide(trans, cutoff, tape, origin)
    return status, steps, sigma


def _decide(trans, cutoff, tape, origin):
    """Core decision loop. ``tape`` must be blank on entry; the caller owns
    resetting the dirtied span (returned as lo..hi).

    Non-halt proofs are conservative:
      * exact repeat: the full configuration (state, head, visited extent,
        tape content) recurs, so the machine cycles forever;
      * translation loop: the head reaches fresh blank territory in a state
        it was already in at an earlier record-extent event, and never fell
        back past that event's cell in between -- by translation invariance
        the excursion repeats shifted, forever.
    """
    head = origin
    state = 1
    lo = hi = head
    chain_r = []  # (pos, state) record-extent events, pruned on fallback
    chain_l = []
    snap_state = -1
    snap_head = -1
    snap_lo = 0
    snap_hi = 0
    snap_tape = None
    next_snap = 16
    t = 0
    while t < cutoff:
        ns, wr, mv = trans[state][tape[head]]
        tape[head] = wr
        t += 1
        if ns == 0:
            sigma = 0
            for c in tape[lo : hi + 1]:
                if c:
                    sigma += 1
            return (HALTED, t, sigma, lo, hi)
        head += mv
        state = ns
        if head > hi:
            hi = head
            for _, s in chain_r:
                if s == state:
                    return (NONHALTING, t, 0, lo, hi)
            chain_r.append((head, state))
        elif chain_r and head < chain_r[-1][0]:
            while chain_r and head < chain_r[-1][0]:
                chain_r.pop()
        if head < lo:
            lo = head
            for _, s in chain_l:
                if s == state:
                    return (NONHALTING, t, 0, lo, hi)
            chain_l.append((head, state))
        elif chain_l and head > chain_l[-1][0]:
            while chain_l and head > chain_l[-1][0]:
                chain_l.pop()
        if (
            state == snap_state
            and head == snap_head
            and lo == snap_lo
            and hi == snap_hi
            and tape[lo : hi + 1] == snap_tape
        ):
            return (NONHALTING, t, 0, lo, hi)
        if t == next_snap:
            snap_state = state
            snap_head = head
            snap_lo = lo
            snap_hi = hi
            snap_tape = tape[lo : hi + 1]
            next_snap *= 2
    return (CUTOFF, t, 0, lo, hi)


def _decide_naive(trans, cutoff, tape, origin):
    """Reference decision loop without any non-halt detection. Kept for the
    search-equivalence tests: maxima and champions must match ``_decide``."""
    head = origin
    state = 1
    lo = hi = head
    t = 0
    while t < cutoff:
        ns, wr, mv = trans[state][tape[head]]
        tape[head] = wr
        t += 1
        if ns == 0:
            sigma = 0
            for c in tape[lo : hi + 1]:
                if c:
                    sigma += 1
            return (HALTED, t, sigma, lo, hi)
        head += mv
        state = ns
        if head > hi:
            hi = head
        elif head < lo:
            lo = head
    return (CUTOFF, t, 0, lo, hi)


def _search_range(n, k, start, stop, cutoff, naive=False):
    """Scan rule numbers [start, stop), returning partial maxima.

    Enumerates by odometer over the digit vector so successive machines
    share their table object; this keeps per-machine setup O(1) amortized.
    """
    base = _digit_base(n, k)
    entries = n * k
    inst_of = [_digit_to_instruction(d, k) for d in range(base)]
    decide = _decide_naive if naive else _decide

    digits = []
    x = start
    for _ in range(entries):
        x, d = divmod(x, base)
        digits.append(d)
    digits.reverse()
    trans = [None] + [
        [inst_of[digits[(s - 1) * k + c]] for c in range(k)]
        for s in range(1, n + 1)
    ]

    tape = bytearray(2 * cutoff + 3)
    origin = cutoff + 1
    max_sigma = -1
    champs_sigma: list[int] = []
    max_steps = -1
    champs_steps: list[int] = []
    halted = 0
    nonhalting = 0
    unresolved = 0
    last = entries - 1
    for rule in range(start, stop):
        status, t, sigma, lo, hi = decide(trans, cutoff, tape, origin)
        if status == HALTED:
            halted += 1
            if sigma >= max_sigma:
                if sigma > max_sigma:
                    max_sigma = sigma
                    champs_sigma = [rule]
                else:
                    champs_sigma.append(rule)
            if t >= max_steps:
                if t > max_steps:
                    max_steps = t
                    champs_steps = [rule]
                else:
                    champs_steps.append(rule)
        elif status == NONHALTING:
            nonhalting += 1
        else:
            unresolved += 1
        if hi >= lo:
            tape[lo : hi + 1] = bytes(hi - lo + 1)
        if rule + 1 < stop:
            i = last
            while digits[i] == base - 1:
                digits[i] = 0
                trans[i // k + 1][i % k] = inst_of[0]
                i -= 1
            digits[i] += 1
            trans[i // k + 1][i % k] = inst_of[digits[i]]
    return (
        max_sigma,
        champs_sigma,
        max_steps,
        champs_steps,
        halted,
        nonhalting,
        unresolved,
    )


def bb_search(
    n: int,
    k: int,
    cutoff: int,
    workers: int = 1,
    naive: bool = False,
) -> BusyBeaverRecord:
    """Exhaustive Busy Beaver search over the full (n, k) rule space.

    Deterministic and independent of ``workers``: the range partition is
    fixed and the merge (max, champion-list union, count sum) is performed
    in range order. ``naive=True`` runs fully un-reduced (no non-halt
    detectors, no bulk handling of the step-1 halting prefix); maxima,
    champions and halt counts must be identical either way.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    size = rule_space_size(n, k)
    if size > MAX_ENUMERABLE:
        raise SearchBudgetError(
            f"space ({n}, {k}) has {size} machines; exhaustive search "
            f"exceeds the desk-scale budget of {MAX_ENUMERABLE} and no "
            "partial result is kept"
        )

    base = _digit_base(n, k)
    first = 0
    bulk_halted = 0
    if n >= 2 and cutoff >= 2 and not naive:
        # Rules below k*base^(nk-1) have a halting (1,0) entry: they halt at
        # step 1 with sigma <= 1. For n >= 2 and cutoff >= 2 the space also
        # contains a 2-step halter with sigma 2 (write 1, move right, halt
        # writing 1), so none of these can be champions; account in bulk.
        first = k * base ** (n * k - 1)
        bulk_halted = first

    partials = []
    if workers <= 1 or size - first < 2 * workers:
        partials.append(_search_range(n, k, first, size, cutoff, naive))
    else:
        chunks = []
        span = size - first
        parts = min(workers * 8, span)
        for i in range(parts):
            a = first + span * i // parts
            b = first + span * (i + 1) // parts
            if a < b:
                chunks.append((n, k, a, b, cutoff, naive))
        with multiprocessing.Pool(processes=workers) as pool:
            partials = pool.starmap(_search_range, chunks)

    max_sigma = -1
    champs_sigma: list[int] = []
    max_steps = -1
    champs_steps: list[int] = []
    halted = bulk_halted
    nonhalting = 0
    unresolved = 0
    for p_sigma, p_csigma, p_steps, p_csteps, p_halt, p_nonhalt, p_unres in partials:
        if p_sigma > max_sigma:
            max_sigma = p_sigma
            champs_sigma = list(p_csigma)
        elif p_sigma == max_sigma:
            champs_sigma.extend(p_csigma)
        if p_steps > max_steps:
            max_steps = p_steps
            champs_steps = list(p_csteps)
        elif p_steps == max_steps:
            champs_steps.extend(p_csteps)
        halted += p_halt
        nonhalting += p_nonhalt
        unresolved += p_unres

    if max_steps < 0:
        # No halter found outside the bulk prefix; fall back to bulk stats.
        # Only reachable for cutoff 1 or degenerate spaces.
        if bulk_halted:
            raise SearchBudgetError(
                "bulk prefix skipped but no non-bulk halter found; "
                "rerun with a cutoff >= 2"
            )
        max_sigma = 0
        max_steps = 0
    return BusyBeaverRecord(
        n=n,
        k=k,
        sigma=max_sigma,
        s_steps=max_steps,
        champions_sigma=tuple(champs_sigma),
        champions_steps=tuple(champs_steps),
        unresolved=unresolved,
        provenance="searched",
        cutoff=cutoff,
        halted=halted,
        nonhalting=nonhalting,
    )


# --- champion registry -------------------------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    n: int
    k: int
    sigma: int | None
    steps: int | None
    source: str
    steps_machine: TuringMachine
    sigma_machine: TuringMachine


def _parse_table_block(lines: list[str], i: int, n: int, k: int):
    entries = {}
    while i < len(lines):
        ln = lines[i]
        if not ln.startswith((" ", "\t")):
            break
        lhs, _, rhs = ln.partition("->")
        state, symbol = (int(x) for x in lhs.split())
        next_state, write, direction = (int(x) for x in rhs.split())
        entries[(state, symbol)] = (next_state, write, direction)
        i += 1
    return TuringMachine.from_entries(n, k, entries), i


def parse_registry(text: str) -> dict[tuple[int, int], RegistryEntry]:
    lines = [
        ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")
    ]
    out: dict[tuple[int, int], RegistryEntry] = {}
    i = 0
    while i < len(lines):
        header = lines[i].strip()
        if not (header.startswith("[machine") and header.endswith("]")):
            raise ValueError(f"expected [machine N K] section, got {header!r}")
        _, n_s, k_s = header[1:-1].split()
        n, k = int(n_s), int(k_s)
        i += 1
        sigma: int | None = None
        steps: int | None = None
        source = ""
        steps_machine = None
        sigma_machine = None
        while i < len(lines) and not lines[i].strip().startswith("[machine"):
            ln = lines[i].strip()
            if ln.startswith("champion steps:"):
                steps_machine, i = _parse_table_block(lines, i + 1, n, k)
                continue
            if ln.startswith("champion sigma:"):
                rest = ln.partition(":")[2].strip()
                if rest == "same":
                    sigma_machine = "same"
                    i += 1
                else:
                    sigma_machine, i = _parse_table_block(lines, i + 1, n, k)
                continue
            key, _, value = ln.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "sigma":
                sigma = None if value == "unknown" else int(value)
            elif key == "steps":
                steps = None if value == "unknown" else int(value)
            elif key == "source":
                source = value
            else:
                raise ValueError(f"unknown registry key {key!r} in ({n}, {k})")
            i += 1
        if steps_machine is None:
            raise ValueError(f"registry entry ({n}, {k}) has no champion table")
        if sigma_machine == "same" or sigma_machine is None:
            sigma_machine = steps_machine
        out[(n, k)] = RegistryEntry(
            n=n,
            k=k,
            sigma=sigma,
            steps=steps,
            source=source,
            steps_machine=steps_machine,
            sigma_machine=sigma_machine,
        )
    return out


_REGISTRY_CACHE: dict[tuple[int, int], RegistryEntry] | None = None


def _registry() -> dict[tuple[int, int], RegistryEntry]:
    global _REGISTRY_CACHE
    if _REGISTRY_CACHE is None:
        text = (
            resources.files("tmemu").joinpath("data/bb_registry.txt").read_text()
        )
        _REGISTRY_CACHE = parse_registry(text)
    return _REGISTRY_CACHE


def registry_entries() -> list[RegistryEntry]:
    return [_registry()[key] for key in sorted(_registry())]


def registry_machine(n: int, k: int, by: str = "steps") -> TuringMachine:
    """Champion table for (n, k); ``by`` picks the steps or sigma champion.

    Available even for entries whose exact statistics are unknown.
    """
    try:
        entry = _registry()[(n, k)]
    except KeyError:
        raise UnknownSpaceError(f"no registry entry for space ({n}, {k})") from None
    if by == "steps":
        return entry.steps_machine
    if by == "sigma":
        return entry.sigma_machine
    raise ValueError("by must be 'steps' or 'sigma'")


def registry_lookup(n: int, k: int) -> BusyBeaverRecord:
    """Shipped champion record for (n, k).

    Raises UnknownSpaceError for spaces the registry does not cover, and
    RegistryValueUnknownError for table-only entries whose true maxima are
    beyond desk-scale verification.
    """
    try:
        entry = _registry()[(n, k)]
    except KeyError:
        raise UnknownSpaceError(f"no registry entry for space ({n}, {k})") from None
    if entry.sigma is None or entry.steps is None:
        raise RegistryValueUnknownError(
            f"registry ships a champion table for ({n}, {k}) but its exact "
            "statistics are unknown; use registry_machine() for the table"
        )
    return BusyBeaverRecord(
        n=n,
        k=k,
        sigma=entry.sigma,
        s_steps=entry.steps,
        champions_sigma=(entry.sigma_machine.rule_number,),
        champions_steps=(entry.steps_machine.rule_number,),
        unresolved=0,
        provenance="registry",
        cutoff=None,
        source=entry.source,
    )
