"""Block decomposition, interval summaries and their merge algebra.

A run of t steps is cut into T = ceil(t/b) blocks of b consecutive
steps (the last may be shorter).  The summary of a step interval
[L, R] records the control state and head positions on entry (time
L-1) and exit (time R), plus interface windows carrying tape contents
at those two times.  Adjacent summaries join with merge(); a whole run
folds down to a single summary whose windows stay small under the
boundary policy.

Window convention: the cells a block touches are the head positions
over configurations L-1 through R inclusive, so the resting position
of a head at the block boundary belongs to both neighbouring blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .errors import MergeIncompatible, NonBlockRespecting
from .machine import Configuration, MachineSpec, RunRecord

POLICY_FULL = "full"
POLICY_BOUNDARY = "boundary"

InitialTape = Callable[[int, int], str]


@dataclass(frozen=True)
class BlockDecomposition:
    t: int
    b: int
    T: int
    blocks: tuple[tuple[int, int], ...]

    def block(self, k: int) -> tuple[int, int]:
        if not 1 <= k <= self.T:
            raise IndexError(f"block index {k} outside [1, {self.T}]")
        return self.blocks[k - 1]


def decompose(t: int, b: int) -> BlockDecomposition:
    """Cut step range [1, t] into blocks of b steps.  t = 0 produces an
    empty decomposition; negative t or non-positive b are rejected."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    blocks = []
    L = 1
    while L <= t:
        R = min(L + b - 1, t)
        blocks.append((L, R))
        L = R + 1
    return BlockDecomposition(t=t, b=b, T=len(blocks), blocks=tuple(blocks))


@dataclass(frozen=True)
class TapeWindow:
    """Contiguous cell span with the symbols over it at one instant.
    An empty window is canonically (lo=0, hi=-1, no symbols)."""

    lo: int
    hi: int
    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) != self.hi - self.lo + 1:
            raise ValueError(
                f"window [{self.lo},{self.hi}] carries {len(self.symbols)} symbols"
            )
        if self.hi < self.lo and (self.lo, self.hi) != (0, -1):
            raise ValueError("empty window must be canonical (0, -1)")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def symbol_at(self, cell: int) -> str:
        if not self.lo <= cell <= self.hi:
            raise IndexError(f"cell {cell} outside window [{self.lo},{self.hi}]")
        return self.symbols[cell - self.lo]

    def covers(self, cell: int) -> bool:
        return self.lo <= cell <= self.hi

    @property
    def span(self) -> tuple[int, int]:
        return (self.lo, self.hi)


EMPTY_WINDOW = TapeWindow(0, -1, ())


@dataclass(frozen=True)
class IntervalSummary:
    """Boundary data of a step interval.

    entry holds per-tape windows with contents at time L-1, exit the
    same at time R.  Under the full policy both sides share one span
    per tape (all cells the interval visited).  Under the boundary
    policy the entry side keeps only the leftmost constituent block's
    window and the exit side the rightmost's, so the two sides may
    have different spans.
    """

    machine: MachineSpec = field(compare=False, repr=False)
    L: int = 1
    R: int = 1
    q_in: str = ""
    q_out: str = ""
    heads_in: tuple[int, ...] = ()
    heads_out: tuple[int, ...] = ()
    entry: tuple[TapeWindow, ...] = ()
    exit: tuple[TapeWindow, ...] = ()
    policy: str = POLICY_FULL

    def __post_init__(self):
        if self.L < 1 or self.R < self.L:
            raise ValueError(f"invalid step interval [{self.L},{self.R}]")
        if self.policy not in (POLICY_FULL, POLICY_BOUNDARY):
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.policy == POLICY_FULL:
            for ew, xw in zip(self.entry, self.exit):
                if ew.span != xw.span:
                    raise ValueError("full-policy summary needs one span per tape")

    @property
    def steps(self) -> int:
        return self.R - self.L + 1


def screen_area(s: IntervalSummary) -> int:
    """Number of tape cells the summary's windows carry.  A tape whose
    entry and exit sides sit over the same span counts that span once."""
    total = 0
    for ew, xw in zip(s.entry, s.exit):
        if ew.span == xw.span:
            total += len(ew)
        else:
            total += len(ew) + len(xw)
    return total


# ---------------------------------------------------------------------------
# building summaries from a recorded run


def _head_track(run: RunRecord, L: int, R: int) -> tuple[
    tuple[int, ...], tuple[int, ...], list[tuple[int, int]]
]:
    """Heads at L-1 and at R, plus per-tape hull of head positions over
    configurations L-1..R, via the move trace alone."""
    entry_heads = run.history[L - 1].heads
    heads = list(entry_heads)
    lo = list(entry_heads)
    hi = list(entry_heads)
    for step in range(L, R + 1):
        moves = run.history.moves_at(step)
        for i in range(run.machine.k):
            heads[i] += moves[i]
            if heads[i] < lo[i]:
                lo[i] = heads[i]
            elif heads[i] > hi[i]:
                hi[i] = heads[i]
    return entry_heads, tuple(heads), [(lo[i], hi[i]) for i in range(run.machine.k)]


def _windows_at(cfg: Configuration, spans: Sequence[tuple[int, int]]) -> tuple[TapeWindow, ...]:
    out = []
    for i, (lo, hi) in enumerate(spans):
        out.append(TapeWindow(lo, hi, tuple(cfg.symbol_at(i, c) for c in range(lo, hi + 1))))
    return tuple(out)


def interval_summary(run: RunRecord, L: int, R: int) -> IntervalSummary:
    """Full-policy summary of an arbitrary step interval, read straight
    off the recorded history.  No window size limit is applied."""
    if not 1 <= L <= R <= run.t:
        raise ValueError(f"step interval [{L},{R}] outside [1,{run.t}]")
    entry_heads, exit_heads, spans = _head_track(run, L, R)
    entry_cfg = run.history[L - 1]
    exit_cfg = run.history[R]
    return IntervalSummary(
        machine=run.machine,
        L=L,
        R=R,
        q_in=entry_cfg.state,
        q_out=exit_cfg.state,
        heads_in=entry_heads,
        heads_out=exit_heads,
        entry=_windows_at(entry_cfg, spans),
        exit=_windows_at(exit_cfg, spans),
        policy=POLICY_FULL,
    )


def leaf_summary(
    run: RunRecord, block: tuple[int, int], c_int: int, b: int | None = None
) -> IntervalSummary:
    """Summary of one block, enforcing the interface window limit
    c_int * b per tape.  b defaults to the block's own length; pass the
    decomposition's b explicitly for a short final block."""
    L, R = block
    if not 1 <= L <= R <= run.t:
        raise ValueError(f"block [{L},{R}] outside [1,{run.t}]")
    if c_int < 1:
        raise ValueError(f"c_int must be >= 1, got {c_int}")
    if b is None:
        b = R - L + 1
    limit = c_int * b
    s = interval_summary(run, L, R)
    block_index = (L - 1) // b + 1
    for i, w in enumerate(s.entry):
        if len(w) > limit:
            raise NonBlockRespecting(block_index, i + 1, len(w), limit)
    return s


def direct_summary(
    run: RunRecord,
    decomp: BlockDecomposition,
    k_lo: int,
    k_hi: int,
    c_int: int,
    policy: str = POLICY_FULL,
) -> IntervalSummary:
    """Summary of blocks k_lo..k_hi computed in one pass from the
    oracle history, bypassing merge.  Used to cross-check merges."""
    if not 1 <= k_lo <= k_hi <= decomp.T:
        raise ValueError(f"block range [{k_lo},{k_hi}] outside [1,{decomp.T}]")
    L = decomp.block(k_lo)[0]
    R = decomp.block(k_hi)[1]
    whole = interval_summary(run, L, R)
    if policy == POLICY_FULL:
        return whole
    left_leaf = leaf_summary(run, decomp.block(k_lo), c_int, decomp.b)
    right_leaf = leaf_summary(run, decomp.block(k_hi), c_int, decomp.b)
    return replace(
        whole, entry=left_leaf.entry, exit=right_leaf.exit, policy=POLICY_BOUNDARY
    )


@dataclass(frozen=True)
class BlockCheck:
    k: int
    interval: tuple[int, int]
    spans: tuple[tuple[int, int], ...]
    widths: tuple[int, ...]
    ok: bool


@dataclass(frozen=True)
class BlockReport:
    t: int
    b: int
    c_int: int
    limit: int
    entries: tuple[BlockCheck, ...]
    ok: bool


def check_block_respecting(run: RunRecord, b: int, c_int: int) -> BlockReport:
    """Verify every block's visited span stays within c_int * b cells
    per tape.  One pass over the move trace."""
    if c_int < 1:
        raise ValueError(f"c_int must be >= 1, got {c_int}")
    decomp = decompose(run.t, b)
    limit = c_int * b
    k = run.machine.k
    heads = [0] * k
    entries = []
    step = 0
    for idx, (L, R) in enumerate(decomp.blocks, 1):
        lo = list(heads)
        hi = list(heads)
        while step < R:
            step += 1
            moves = run.history.moves_at(step)
            for i in range(k):
                heads[i] += moves[i]
                if heads[i] < lo[i]:
                    lo[i] = heads[i]
                elif heads[i] > hi[i]:
                    hi[i] = heads[i]
        widths = tuple(hi[i] - lo[i] + 1 for i in range(k))
        entries.append(
            BlockCheck(
                k=idx,
                interval=(L, R),
                spans=tuple((lo[i], hi[i]) for i in range(k)),
                widths=widths,
                ok=all(w <= limit for w in widths),
            )
        )
    return BlockReport(
        t=run.t,
        b=b,
        c_int=c_int,
        limit=limit,
        entries=tuple(entries),
        ok=all(e.ok for e in entries),
    )


# ---------------------------------------------------------------------------
# merge


def _check_join(left: IntervalSummary, right: IntervalSummary) -> None:
    if left.machine is not right.machine and left.machine != right.machine:
        raise MergeIncompatible("summaries come from different machines")
    if left.policy != right.policy:
        raise MergeIncompatible(f"policy mismatch: {left.policy} vs {right.policy}")
    if left.R + 1 != right.L:
        raise MergeIncompatible(
            f"intervals [{left.L},{left.R}] and [{right.L},{right.R}] are not adjacent"
        )
    if left.q_out != right.q_in:
        raise MergeIncompatible(
            f"exit state {left.q_out!r} does not match entry state {right.q_in!r}"
        )
    if left.heads_out != right.heads_in:
        raise MergeIncompatible(
            f"exit heads {left.heads_out} do not match entry heads {right.heads_in}"
        )
    # both sides snapshot time left.R, so they must agree where they overlap
    for i, (xw, ew) in enumerate(zip(left.exit, right.entry)):
        for c in range(max(xw.lo, ew.lo), min(xw.hi, ew.hi) + 1):
            if xw.symbol_at(c) != ew.symbol_at(c):
                raise MergeIncompatible(
                    f"window contents disagree at tape {i + 1} cell {c}"
                )


def merge(
    left: IntervalSummary,
    right: IntervalSummary,
    initial_tape: InitialTape | None = None,
) -> IntervalSummary:
    """Join two adjacent interval summaries.

    Full policy grows one window per tape over the union span.  The
    two summaries always carry enough data to fill both sides: a cell
    outside the left window is untouched during the left interval (all
    writes land under a head, and heads stay inside the window), so its
    content at entry time left.L-1 is exactly what right's entry window
    records at the shared boundary time; symmetrically, a cell outside
    the right window keeps its left-exit content through the right
    interval.  initial_tape is therefore accepted but never consulted.
    Boundary policy keeps the left operand's entry side and the right
    operand's exit side unchanged.
    """
    _check_join(left, right)
    if left.policy == POLICY_BOUNDARY:
        return IntervalSummary(
            machine=left.machine,
            L=left.L,
            R=right.R,
            q_in=left.q_in,
            q_out=right.q_out,
            heads_in=left.heads_in,
            heads_out=right.heads_out,
            entry=left.entry,
            exit=right.exit,
            policy=POLICY_BOUNDARY,
        )

    entry_windows = []
    exit_windows = []
    for i in range(left.machine.k):
        lw, rw = left.entry[i], right.entry[i]
        lx, rx = left.exit[i], right.exit[i]
        if len(lw) == 0 and len(rw) == 0:
            entry_windows.append(EMPTY_WINDOW)
            exit_windows.append(EMPTY_WINDOW)
            continue
        if len(lw) > 0 and len(rw) > 0 and max(lw.lo, rw.lo) > min(lw.hi, rw.hi) + 1:
            raise MergeIncompatible(
                f"tape {i + 1} windows [{lw.lo},{lw.hi}] and [{rw.lo},{rw.hi}] "
                f"touch nowhere, so their union has a gap"
            )
        lo = min(w.lo for w in (lw, rw) if len(w) > 0)
        hi = max(w.hi for w in (lw, rw) if len(w) > 0)
        entry_syms = []
        exit_syms = []
        for c in range(lo, hi + 1):
            entry_syms.append(lw.symbol_at(c) if lw.covers(c) else rw.symbol_at(c))
            exit_syms.append(rx.symbol_at(c) if rx.covers(c) else lx.symbol_at(c))
        entry_windows.append(TapeWindow(lo, hi, tuple(entry_syms)))
        exit_windows.append(TapeWindow(lo, hi, tuple(exit_syms)))
    return IntervalSummary(
        machine=left.machine,
        L=left.L,
        R=right.R,
        q_in=left.q_in,
        q_out=right.q_out,
        heads_in=left.heads_in,
        heads_out=right.heads_out,
        entry=tuple(entry_windows),
        exit=tuple(exit_windows),
        policy=POLICY_FULL,
    )


def fold_left_deep(
    summaries: Sequence[IntervalSummary], initial_tape: InitialTape | None = None
) -> IntervalSummary:
    """Merge a block-ordered summary sequence strictly left to right."""
    if not summaries:
        raise ValueError("cannot fold an empty summary sequence")
    acc = summaries[0]
    for s in summaries[1:]:
        acc = merge(acc, s, initial_tape)
    return acc
