"""Deterministic multitape Turing machine simulation in square-root
space: block decomposition, interval summaries with a merge algebra,
a static causal tree over blocks, a rolling-boundary streaming
simulator with full space accounting, and constant-size witness
programs that re-expand any summarized interval on demand.
"""

from .blocks import (
    POLICY_BOUNDARY,
    POLICY_FULL,
    BlockDecomposition,
    BlockReport,
    IntervalSummary,
    TapeWindow,
    check_block_respecting,
    decompose,
    direct_summary,
    fold_left_deep,
    interval_summary,
    leaf_summary,
    merge,
    screen_area,
)
from .codec import (
    decode_configuration,
    decode_configuration_exact,
    decode_history,
    decode_history_exact,
    decode_summary,
    decode_summary_exact,
    decode_svarint,
    decode_uvarint,
    encode_configuration,
    encode_history,
    encode_summary,
    encode_svarint,
    encode_uvarint,
)
from .ctree import (
    CausalTree,
    RadialProfile,
    TraversalStep,
    TreeNode,
    build_tree,
    dfs_order,
    label_tree,
    leaf_to_time,
    radial_profile,
    split_left_count,
    time_to_leaf,
    tree_depth_for,
    tree_to_json,
)
from .errors import (
    CodecError,
    HolosimError,
    InternalInvariantError,
    MachineFormatError,
    MergeIncompatible,
    MissingInitialTape,
    ModelViolation,
    NonBlockRespecting,
    RunEndedEarly,
    StaleWindowReentry,
    StepFromHaltError,
    WindowEscape,
)
from .ledger import LedgerRow, ScreenLedger, attach_ledger, int_cells
from .machine import (
    Configuration,
    HistoryCursor,
    MachineSpec,
    RunHistory,
    RunRecord,
    build_machine,
    initial_configuration,
    initial_tape_accessor,
    normalize_input,
    parse_machine,
    probe_run_length,
    run,
    serialize_machine,
    step,
)
from .replay import ReplayExit, replay_all, replay_block, replay_from_summary
from .samples import SAMPLE_NAMES, counter_input, load_sample, palin_input, sample_text
from .scaling import (
    CSV_HEADER,
    ScalingReport,
    ScalingRow,
    area_law_study,
    fit_loglog,
    render_scaling_svg,
    report_to_csv,
    volume_vs_screen,
)
from .spacetime import SpacetimeDAG, build_dag, dag_from_json, dag_to_dot, dag_to_json
from .streaming import (
    CaptureSink,
    CountingSink,
    RollingState,
    default_block_length,
    holo_run,
    reconstruct_at,
)
from .witness import (
    KIND_HISTORY,
    KIND_POINTWISE,
    WitnessProgram,
    build_witness,
    parse_witness,
    run_witness,
)

__version__ = "0.1.0"
