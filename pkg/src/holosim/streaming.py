"""Rolling-boundary streaming simulation in roughly sqrt(t) space.

The simulator walks the balanced block tree depth first without ever
materializing it.  At any instant it holds:

* one live window per tape: a contiguous cell range of capacity
  c_int * b containing the head, backed by a dict of non-blank cells;
* a pending stack of boundary digests, one per left sibling on the
  root-to-current path, so at most tree-depth many;
* the entry snapshot of the block currently being replayed;
* the retained entry windows of block 1, needed for the root summary.

Cells that fall out of a live window are recoverable from the initial
tape as long as they were clean (still holding their initial symbol)
when evicted.  Evicting a rewritten cell loses information; the
simulator notes it, and a later head excursion into the discarded
region raises StaleWindowReentry rather than fabricating contents.
Machines whose runs are block respecting at the chosen b and c_int
never trigger either condition and their emitted configurations match
direct simulation exactly.

Emitted configurations carry the live-window bounds as their spans.
Cells outside every span are reported as the initial tape, which is
correct whenever no dirty cell has been evicted; after a dirty
eviction only the in-span cells are trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .blocks import POLICY_BOUNDARY, IntervalSummary, TapeWindow, decompose
from .ctree import split_left_count
from .errors import (
    InternalInvariantError,
    NonBlockRespecting,
    RunEndedEarly,
    StaleWindowReentry,
)
from .ledger import ScreenLedger, cells_for_bits, int_cells, ints_cells
from .machine import Configuration, MachineSpec, normalize_input

Sink = Callable[[Configuration], None]


@dataclass(frozen=True)
class BoundaryDigest:
    """Structural residue of a summarized leaf range: interface data
    only, no tape symbols."""

    L: int
    R: int
    q_in: str
    q_out: str
    heads_in: tuple[int, ...]
    heads_out: tuple[int, ...]
    entry_spans: tuple[tuple[int, int], ...]
    exit_spans: tuple[tuple[int, int], ...]
    cost: int


class _TapeState:
    __slots__ = (
        "index",
        "blank",
        "cap",
        "initial",
        "live",
        "lo",
        "hi",
        "head",
        "dirty_lo",
        "dirty_hi",
        "lost_lo",
        "lost_hi",
        "blk_lo",
        "blk_hi",
        "snap",
    )

    def __init__(self, index: int, blank: str, cap: int, initial: Callable[[int], str]):
        self.index = index
        self.blank = blank
        self.cap = cap
        self.initial = initial
        first = initial(0)
        self.live: dict[int, str] = {} if first == blank else {0: first}
        self.lo = 0
        self.hi = 0
        self.head = 0
        # empty hulls use lo > hi
        self.dirty_lo, self.dirty_hi = 0, -1
        self.lost_lo, self.lost_hi = 0, -1
        self.blk_lo = 0
        self.blk_hi = 0
        self.snap: dict[int, str] = {}

    def begin_block(self) -> None:
        h = self.head
        self.blk_lo = h
        self.blk_hi = h
        self.snap = {h: self.live.get(h, self.blank)}


class RollingState:
    """The streaming simulator's working set and its driver.

    Construct via holo_run unless the internals are the point.  After
    run() completes, `root` holds the boundary-policy summary of the
    whole interval [1, t] and the attached ledger (if any) holds the
    space series.
    """

    def __init__(
        self,
        machine: MachineSpec,
        input_word,
        t: int,
        b: int,
        c_int: int = 2,
        sink: Sink | None = None,
        ledger: ScreenLedger | None = None,
    ):
        if t < 1:
            raise ValueError(f"t must be >= 1, got {t}")
        if c_int < 1:
            raise ValueError(f"c_int must be >= 1, got {c_int}")
        self.machine = machine
        self.input = normalize_input(machine, input_word)
        self.t = t
        self.b = b
        self.c_int = c_int
        self.cap = c_int * b
        self.decomp = decompose(t, b)
        self.T = self.decomp.T
        self.sink = sink
        self.ledger = ledger
        self.gamma = len(machine.work_alphabet)

        blank = machine.blank
        input_syms = self.input

        def tape_one_initial(cell: int, _syms=input_syms, _blank=blank) -> str:
            return _syms[cell] if 0 <= cell < len(_syms) else _blank

        def blank_initial(cell: int, _blank=blank) -> str:
            return _blank

        self.tapes = [
            _TapeState(i, blank, self.cap, tape_one_initial if i == 0 else blank_initial)
            for i in range(machine.k)
        ]
        self.input_nonblank = {
            c: s for c, s in enumerate(input_syms) if s != blank
        }
        self.state = machine.start
        self.tau = 0
        self.pending: list[BoundaryDigest] = []
        self.pending_cost = 0
        self.next_id = 0
        self.retained_entry: tuple[TapeWindow, ...] | None = None
        self.retained_cost = 0
        self.last_exit: tuple[TapeWindow, ...] | None = None
        self.forming_cost = 0
        self.depth_now = 0
        self.leaf_id = 0
        self.audit_stride = max(1, int(t**0.5))
        self.root: IntervalSummary | None = None
        if ledger is not None:
            ledger.T = self.T
            ledger.arena_cells = machine.k * self.cap

    # ---- space accounting -------------------------------------------------

    def _digest_cost(self, q_in: str, heads_in, entry_spans) -> int:
        """Cells a parked digest occupies: the entry-side interface of
        the left interval, which is all the eventual merge consumes from
        it.  The exit side coincides with the live frontier at park time
        (checked then, see _eval_range) and the right sibling supplies
        its own exit data; the interval identity is derivable from the
        traversal position, which the bookkeeping meter already charges.
        The dataclass keeps the redundant fields for audit assertions,
        but they are not simulator storage."""
        values = [self.machine.state_index[q_in]]
        values.extend(heads_in)
        for lo, hi in entry_spans:
            values.append(lo)
            values.append(hi)
        return ints_cells(values, self.gamma)

    def _screen_now(self) -> int:
        screen = self.machine.k * self.cap
        screen += self.pending_cost
        screen += self.retained_cost
        screen += self.forming_cost
        for ts in self.tapes:
            screen += len(ts.snap)
        return screen

    def _book_now(self) -> int:
        g = self.gamma
        values = [self.tau, self.leaf_id, self.t, self.b, self.T, len(self.pending)]
        for ts in self.tapes:
            values.extend(
                (
                    ts.head,
                    ts.lo,
                    ts.hi,
                    ts.blk_lo,
                    ts.blk_hi,
                    ts.dirty_lo,
                    ts.dirty_hi,
                    ts.lost_lo,
                    ts.lost_hi,
                )
            )
        book = ints_cells(values, g)
        book += int_cells(self.next_id, g)
        if self.depth_now >= 1:
            book += cells_for_bits(self.depth_now, g)  # path direction bits
        book += 1  # phase flag
        return book

    def _audit(self) -> None:
        recount = sum(d.cost for d in self.pending)
        if recount != self.pending_cost:
            raise InternalInvariantError(
                f"pending digest cost drifted: tracked {self.pending_cost}, "
                f"recounted {recount} at step {self.tau}"
            )
        if self.retained_entry is not None:
            recount = sum(len(w) for w in self.retained_entry)
            if recount != self.retained_cost:
                raise InternalInvariantError(
                    f"retained window cost drifted: tracked {self.retained_cost}, "
                    f"recounted {recount} at step {self.tau}"
                )

    # ---- tape discipline --------------------------------------------------

    def _arrive(self, ts: _TapeState, cell: int, block_index: int) -> None:
        if ts.lo <= cell <= ts.hi:
            pass
        else:
            if ts.lost_lo <= cell <= ts.lost_hi:
                raise StaleWindowReentry(ts.index + 1, cell, block_index)
            sym = ts.initial(cell)
            if sym != ts.blank:
                ts.live[cell] = sym
            if cell < ts.lo:
                ts.lo = cell
            else:
                ts.hi = cell
            while ts.hi - ts.lo + 1 > ts.cap:
                evict = ts.lo if cell == ts.hi else ts.hi
                if ts.blk_lo <= evict <= ts.blk_hi:
                    raise NonBlockRespecting(
                        block_index, ts.index + 1, ts.hi - ts.lo + 1, ts.cap
                    )
                held = ts.live.pop(evict, ts.blank)
                if held != ts.initial(evict):
                    if ts.lost_lo > ts.lost_hi:
                        ts.lost_lo = ts.lost_hi = evict
                    else:
                        ts.lost_lo = min(ts.lost_lo, evict)
                        ts.lost_hi = max(ts.lost_hi, evict)
                    if self.ledger is not None:
                        self.ledger.note_dirty_eviction()
                if evict == ts.lo:
                    ts.lo += 1
                else:
                    ts.hi -= 1
        if cell < ts.blk_lo:
            ts.blk_lo = cell
        elif cell > ts.blk_hi:
            ts.blk_hi = cell
        if cell not in ts.snap:
            ts.snap[cell] = ts.live.get(cell, ts.blank)

    def _do_step(self, block_index: int) -> None:
        machine = self.machine
        if machine.is_halting(self.state):
            raise RunEndedEarly(self.tau, self.t)
        blank = machine.blank
        tapes = self.tapes
        reads = tuple(ts.live.get(ts.head, blank) for ts in tapes)
        state, writes, moves = machine.delta[(self.state, reads)]
        for i, ts in enumerate(tapes):
            w = writes[i]
            h = ts.head
            if w == blank:
                ts.live.pop(h, None)
            else:
                ts.live[h] = w
            if w != ts.initial(h):
                if ts.dirty_lo > ts.dirty_hi:
                    ts.dirty_lo = ts.dirty_hi = h
                else:
                    ts.dirty_lo = min(ts.dirty_lo, h)
                    ts.dirty_hi = max(ts.dirty_hi, h)
            h += moves[i]
            ts.head = h
            self._arrive(ts, h, block_index)
        self.state = state
        self.tau += 1

    def _emit(self) -> None:
        machine = self.machine
        blank = machine.blank
        cells = []
        spans = []
        for ts in self.tapes:
            if ts.index == 0 and self.input_nonblank:
                merged = {
                    c: s
                    for c, s in self.input_nonblank.items()
                    if not ts.lo <= c <= ts.hi
                }
                merged.update(ts.live)
            else:
                merged = dict(ts.live)
            cells.append(merged)
            spans.append((ts.lo, ts.hi))
        config = Configuration(
            machine=machine,
            time=self.tau,
            state=self.state,
            heads=tuple(ts.head for ts in self.tapes),
            cells=tuple(cells),
            spans=tuple(spans),
        )
        self.sink(config)  # type: ignore[misc]

    # ---- tree walk --------------------------------------------------------

    def _window_of(self, ts: _TapeState, contents: dict[int, str]) -> TapeWindow:
        return TapeWindow(
            ts.blk_lo,
            ts.blk_hi,
            tuple(contents.get(c, ts.blank) for c in range(ts.blk_lo, ts.blk_hi + 1)),
        )

    def _run_leaf(self, k: int, depth: int) -> BoundaryDigest:
        L, R = self.decomp.block(k)
        if self.tau != L - 1:
            raise InternalInvariantError(
                f"leaf {k} starts at step {L - 1} but clock is at {self.tau}"
            )
        self.depth_now = depth
        self.leaf_id = k
        q_in = self.state
        heads_in = tuple(ts.head for ts in self.tapes)
        for ts in self.tapes:
            ts.begin_block()
        idx = self.machine.state_index
        self.forming_cost = ints_cells([L, idx[q_in], *heads_in], self.gamma)
        record = self.ledger.record if self.ledger is not None else None
        for _ in range(L, R + 1):
            self._do_step(k)
            if self.sink is not None:
                self._emit()
            if record is not None:
                record(self.tau, self._screen_now(), self._book_now())
            if self.tau % self.audit_stride == 0:
                self._audit()
        entry_windows = tuple(self._window_of(ts, ts.snap) for ts in self.tapes)
        if k == 1:
            self.retained_entry = entry_windows
            self.retained_cost = sum(len(w) for w in entry_windows)
        if k == self.T:
            self.last_exit = tuple(self._window_of(ts, ts.live) for ts in self.tapes)
        heads_out = tuple(ts.head for ts in self.tapes)
        spans = tuple(w.span for w in entry_windows)
        self.forming_cost = 0
        return BoundaryDigest(
            L=L,
            R=R,
            q_in=q_in,
            q_out=self.state,
            heads_in=heads_in,
            heads_out=heads_out,
            entry_spans=spans,
            exit_spans=spans,
            cost=self._digest_cost(q_in, heads_in, spans),
        )

    def _merge_digests(self, left: BoundaryDigest, right: BoundaryDigest) -> BoundaryDigest:
        if left.R + 1 != right.L:
            raise InternalInvariantError(
                f"digest intervals [{left.L},{left.R}] and [{right.L},{right.R}] "
                f"are not adjacent"
            )
        if left.q_out != right.q_in or left.heads_out != right.heads_in:
            raise InternalInvariantError(
                f"digest interfaces disagree at step {left.R}: "
                f"{left.q_out}/{left.heads_out} vs {right.q_in}/{right.heads_in}"
            )
        return BoundaryDigest(
            L=left.L,
            R=right.R,
            q_in=left.q_in,
            q_out=right.q_out,
            heads_in=left.heads_in,
            heads_out=right.heads_out,
            entry_spans=left.entry_spans,
            exit_spans=right.exit_spans,
            cost=self._digest_cost(left.q_in, left.heads_in, left.entry_spans),
        )

    def _eval_range(self, lo: int, hi: int, depth: int) -> BoundaryDigest:
        self.next_id += 1
        node_id = self.next_id - 1
        if lo == hi:
            return self._run_leaf(lo, depth)
        mid = lo + split_left_count(hi - lo + 1) - 1
        left = self._eval_range(lo, mid, depth + 1)
        # boundary compatibility at park time: the digest's exit side
        # must be the live frontier, or the replay went off the rails
        if left.q_out != self.state or left.heads_out != tuple(
            ts.head for ts in self.tapes
        ):
            raise InternalInvariantError(
                f"digest parked at step {left.R} disagrees with the frontier"
            )
        self.pending.append(left)
        self.pending_cost += left.cost
        if self.ledger is not None:
            self.ledger.note_pending(len(self.pending))
        right = self._eval_range(mid + 1, hi, depth + 1)
        popped = self.pending.pop()
        self.pending_cost -= popped.cost
        if popped is not left:
            raise InternalInvariantError(f"pending stack corrupted at node {node_id}")
        return self._merge_digests(popped, right)

    def run(self) -> IntervalSummary:
        digest = self._eval_range(1, self.T, 0)
        if self.retained_entry is None or self.last_exit is None:
            raise InternalInvariantError("walk finished without boundary windows")
        if self.pending:
            raise InternalInvariantError(f"{len(self.pending)} digests left pending")
        root = IntervalSummary(
            machine=self.machine,
            L=1,
            R=self.t,
            q_in=digest.q_in,
            q_out=digest.q_out,
            heads_in=digest.heads_in,
            heads_out=digest.heads_out,
            entry=self.retained_entry,
            exit=self.last_exit,
            policy=POLICY_BOUNDARY,
        )
        if digest.L != 1 or digest.R != self.t:
            raise InternalInvariantError(
                f"root digest covers [{digest.L},{digest.R}], expected [1,{self.t}]"
            )
        if digest.entry_spans != tuple(w.span for w in self.retained_entry):
            raise InternalInvariantError("root entry spans disagree with digest")
        if digest.exit_spans != tuple(w.span for w in self.last_exit):
            raise InternalInvariantError("root exit spans disagree with digest")
        self.root = root
        return root


def default_block_length(t: int) -> int:
    """ceil(sqrt(t)), the balance point between window size and tree
    depth."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    r = int(t**0.5)
    while r * r < t:
        r += 1
    while (r - 1) * (r - 1) >= t:
        r -= 1
    return r


def holo_run(
    machine: MachineSpec,
    input_word,
    t: int,
    b: int | None = None,
    c_int: int = 2,
    sink: Sink | None = None,
    ledger: ScreenLedger | None = None,
) -> IntervalSummary:
    """Stream a t-step run in block-sized space; returns the root
    boundary summary of [1, t].

    t must be the exact run length (or less, for a prefix of a longer
    run); if the machine halts before t the walk raises RunEndedEarly.
    Use probe_run_length to discover the length first.  sink, when
    given, receives one emitted configuration per step in time order.
    """
    if b is None:
        b = default_block_length(t)
    engine = RollingState(machine, input_word, t, b, c_int, sink, ledger)
    return engine.run()


class CaptureSink:
    """Sink that keeps the configuration at one target time and checks
    it is delivered exactly once."""

    def __init__(self, target: int):
        self.target = target
        self.config: Configuration | None = None
        self.hits = 0

    def __call__(self, config: Configuration) -> None:
        if config.time == self.target:
            self.hits += 1
            if self.hits > 1:
                raise InternalInvariantError(
                    f"time {self.target} emitted {self.hits} times"
                )
            self.config = config


class CountingSink:
    """Sink that counts emissions per time, for exactly-once checks."""

    def __init__(self):
        self.counts: dict[int, int] = {}

    def __call__(self, config: Configuration) -> None:
        self.counts[config.time] = self.counts.get(config.time, 0) + 1

    def all_once(self, t: int) -> bool:
        return len(self.counts) == t and all(v == 1 for v in self.counts.values())


def reconstruct_at(
    machine: MachineSpec,
    input_word,
    t: int,
    tau: int,
    b: int | None = None,
    c_int: int = 2,
) -> Configuration:
    """Stream the run and return the emitted configuration at time tau,
    1 <= tau <= t."""
    if not 1 <= tau <= t:
        raise ValueError(f"tau {tau} outside [1, {t}]")
    sink = CaptureSink(tau)
    holo_run(machine, input_word, t, b=b, c_int=c_int, sink=sink)
    if sink.config is None:
        raise InternalInvariantError(f"time {tau} was never emitted")
    return sink.config
