"""Shared fixtures and the independent reference simulator.

The reference simulator is deliberately written from scratch against the
machine model (sparse dict tape, no loop detection, no reconstruction
tricks) so it can serve as an oracle for the production run/search paths.
"""

from __future__ import annotations

import pytest

from tmemu.core import BLANK, TuringMachine, decode_rule, rule_space_size


def naive_run(machine: TuringMachine, initial_cells: dict[int, int], max_steps: int):
    """Plain step-by-step simulation.

    Returns (halted_at, cells, heads): halted_at is None if the cutoff was
    reached, cells maps positions to nonblank symbols at the end, heads is
    the head position after every step (including the start).
    """
    cells = {p: s for p, s in initial_cells.items() if s != BLANK}
    head = 0
    state = 1
    heads = [head]
    for t in range(1, max_steps + 1):
        inst = machine.instruction(state, cells.get(head, BLANK))
        if inst.write == BLANK:
            cells.pop(head, None)
        else:
            cells[head] = inst.write
        if inst.next_state == 0:
            heads.append(head)
            return t, cells, heads
        head += inst.direction
        state = inst.next_state
        heads.append(head)
    return None, cells, heads


def naive_bb_oracle(n: int, k: int, cutoff: int):
    """Exhaustive maxima by brute enumeration with the reference simulator."""
    max_sigma = -1
    champs_sigma = []
    max_steps = -1
    champs_steps = []
    halted_rules = set()
    for rule in range(rule_space_size(n, k)):
        machine = decode_rule(n, k, rule)
        halted_at, cells, _ = naive_run(machine, {}, cutoff)
        if halted_at is None:
            continue
        halted_rules.add(rule)
        sigma = len(cells)
        if sigma > max_sigma:
            max_sigma, champs_sigma = sigma, [rule]
        elif sigma == max_sigma:
            champs_sigma.append(rule)
        if halted_at > max_steps:
            max_steps, champs_steps = halted_at, [rule]
        elif halted_at == max_steps:
            champs_steps.append(rule)
    return {
        "sigma": max_sigma,
        "s_steps": max_steps,
        "champions_sigma": champs_sigma,
        "champions_steps": champs_steps,
        "halted": halted_rules,
    }


@pytest.fixture(scope="session")
def one_step_halter() -> TuringMachine:
    """(1,0) -> halt writing 1: halts at step 1 with a single nonblank."""
    return TuringMachine.from_entries(
        1, 2, {(1, 0): (0, 1, 0), (1, 1): (0, 0, 0)}
    )
