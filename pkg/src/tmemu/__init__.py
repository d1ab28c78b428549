"""Turing machine emulation lab: simulation, Busy Beaver search,
block-transform emulation and reprogrammability scoring."""

from .core import (
    BLANK,
    FellOffTapeError,
    Instruction,
    SpaceTimeDiagram,
    TapeConfiguration,
    Topology,
    TuringMachine,
    decode_rule,
    diagram_to_text,
    encode_rule,
    machine_from_text,
    machine_to_text,
    rule_space_size,
    run,
    sample_machines,
    sample_rules,
    step,
)
from .busy_beaver import (
    BusyBeaverRecord,
    HaltStatistics,
    RegistryValueUnknownError,
    SearchBudgetError,
    UnknownSpaceError,
    bb_search,
    halt_statistics,
    registry_lookup,
    registry_machine,
)
from .emulation import (
    BlockTransform,
    CoarseGrainedEvolution,
    DecodeFailure,
    EmulationRecord,
    count_emulations,
    decode_rows,
    decode_tape,
    encode_tape,
    enumerate_transforms,
    find_emulations,
    is_trivial,
    scan_emulations,
    transform_count,
)
from .scoring import ComparisonSummary, GroupComparison, compare_groups, delta
from .behaviour import (
    BehaviourSample,
    behaviour_histogram,
    compressed_length,
    computed_function,
    count_modes,
    frontier_rows,
    integer_to_tape,
)

__version__ = "0.1.0"
