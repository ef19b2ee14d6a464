"""Deterministic multitape machine model and linear-space reference execution.

A machine has k two-way-infinite tapes.  The input occupies cells
0..n-1 of tape 1 at time 0; every head starts on cell 0.  One step
reads the k cells under the heads, consults the total transition map,
writes k symbols back, and moves each head by at most one cell.

run() is the reference oracle: it executes the machine forwards,
records a compact per-step trace plus periodic checkpoints, and can
reproduce the configuration at any time on demand.  Everything else in
the toolkit is validated against these histories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

from .errors import MachineFormatError, StepFromHaltError

MOVE_TOKENS = {"L": -1, "S": 0, "R": 1}
MOVE_NAMES = {-1: "L", 0: "S", 1: "R"}

TransitionKey = tuple[str, tuple[str, ...]]
TransitionValue = tuple[str, tuple[str, ...], tuple[int, ...]]

ACCEPT = "accept"
REJECT = "reject"
BUDGET = "budget"


@dataclass(frozen=True)
class MachineSpec:
    """Immutable machine description.

    states is the canonical ordering used wherever states are encoded
    as integers: start first, interior states sorted, accept and reject
    last.  work_alphabet keeps its declared order for the same reason.
    """

    name: str
    k: int
    states: tuple[str, ...]
    start: str
    accept: str
    reject: str
    input_alphabet: tuple[str, ...]
    work_alphabet: tuple[str, ...]
    blank: str
    delta: dict[TransitionKey, TransitionValue] = field(repr=False)

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.work_alphabet)}

    def is_halting(self, state: str) -> bool:
        return state == self.accept or state == self.reject


def _canonical_states(mentioned: set[str], start: str, accept: str, reject: str) -> tuple[str, ...]:
    fixed = [start] + [q for q in (accept, reject) if q != start]
    middle = sorted(mentioned - set(fixed))
    # start first, then interior states, then the halting pair
    return tuple([start] + middle + [q for q in (accept, reject) if q != start])


def build_machine(
    name: str,
    k: int,
    start: str,
    accept: str,
    reject: str,
    input_alphabet: Sequence[str],
    work_alphabet: Sequence[str],
    blank: str,
    delta: Mapping[TransitionKey, TransitionValue],
) -> MachineSpec:
    """Validate parts and assemble a MachineSpec.

    Raises MachineFormatError on any semantic problem: duplicate or
    unknown symbols, a non-total transition map, moves outside
    {-1, 0, +1}, or transitions out of a halting state.
    """
    if k < 1:
        raise MachineFormatError(f"tapes must be >= 1, got {k}")
    work = tuple(work_alphabet)
    if len(set(work)) != len(work):
        raise MachineFormatError("duplicate symbol in work_alphabet")
    inp = tuple(input_alphabet)
    if len(set(inp)) != len(inp):
        raise MachineFormatError("duplicate symbol in input_alphabet")
    missing_inp = [s for s in inp if s not in work]
    if missing_inp:
        raise MachineFormatError(f"input symbol {missing_inp[0]!r} not in work_alphabet")
    if blank not in work:
        raise MachineFormatError(f"blank symbol {blank!r} not in work_alphabet")
    if accept == reject:
        raise MachineFormatError("accept and reject states must differ")

    mentioned = {start, accept, reject}
    for (q, syms), (q2, writes, moves) in delta.items():
        mentioned.add(q)
        mentioned.add(q2)
        if q in (accept, reject):
            raise MachineFormatError(f"transition out of halting state {q!r}")
        if len(syms) != k or len(writes) != k or len(moves) != k:
            raise MachineFormatError(f"transition for state {q!r} has wrong arity")
        for s in syms + writes:
            if s not in work:
                raise MachineFormatError(f"unknown symbol {s!r} in transition for state {q!r}")
        for m in moves:
            if m not in (-1, 0, 1):
                raise MachineFormatError(f"invalid move {m!r} in transition for state {q!r}")

    states = _canonical_states(mentioned, start, accept, reject)
    nonhalt = [q for q in states if q not in (accept, reject)]
    expected = len(nonhalt) * len(work) ** k
    if len(delta) != expected:
        sample = None
        keys = set(delta)
        for q in nonhalt:
            for combo in _symbol_combos(work, k):
                if (q, combo) not in keys:
                    sample = (q, combo)
                    break
            if sample:
                break
        detail = f"; first missing: state {sample[0]!r} on {sample[1]!r}" if sample else ""
        raise MachineFormatError(
            f"transition map is not total: {len(delta)} entries, expected {expected}{detail}"
        )
    return MachineSpec(
        name=name,
        k=k,
        states=states,
        start=start,
        accept=accept,
        reject=reject,
        input_alphabet=inp,
        work_alphabet=work,
        blank=blank,
        delta=dict(delta),
    )


def _symbol_combos(work: tuple[str, ...], k: int) -> Iterator[tuple[str, ...]]:
    if k == 0:
        yield ()
        return
    for rest in _symbol_combos(work, k - 1):
        for s in work:
            yield rest + (s,)


# ---------------------------------------------------------------------------
# definition text format


def parse_machine(text: str) -> MachineSpec:
    """Parse the line-oriented machine definition format.

    Directives: machine, tapes, blank, input_alphabet, work_alphabet,
    start, accept, reject, then one delta line per transition.  '#'
    starts a comment.  Errors carry the offending line number.
    """
    header: dict[str, object] = {}
    delta_rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "delta":
            if "tapes" not in header:
                raise MachineFormatError("tapes must be declared before delta", lineno)
            delta_rows.append((lineno, tokens))
            continue
        if keyword in ("machine", "blank", "start", "accept", "reject"):
            if len(tokens) != 2:
                raise MachineFormatError(f"{keyword} takes exactly one argument", lineno)
            if keyword in header:
                raise MachineFormatError(f"duplicate {keyword} directive", lineno)
            header[keyword] = tokens[1]
        elif keyword == "tapes":
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise MachineFormatError("tapes takes one positive integer", lineno)
            if keyword in header:
                raise MachineFormatError("duplicate tapes directive", lineno)
            header[keyword] = int(tokens[1])
        elif keyword in ("input_alphabet", "work_alphabet"):
            if keyword in header:
                raise MachineFormatError(f"duplicate {keyword} directive", lineno)
            header[keyword] = tokens[1:]
        else:
            raise MachineFormatError(f"unknown directive {keyword!r}", lineno)

    for needed in ("machine", "tapes", "blank", "work_alphabet", "start", "accept", "reject"):
        if needed not in header:
            raise MachineFormatError(f"missing {needed} directive")
    header.setdefault("input_alphabet", [])

    k = int(header["tapes"])  # type: ignore[arg-type]
    delta: dict[TransitionKey, TransitionValue] = {}
    for lineno, tokens in delta_rows:
        # delta q s1..sk -> q' w1..wk m1..mk
        want = 4 + 3 * k
        if len(tokens) != want:
            raise MachineFormatError(
                f"delta line needs {want} tokens for {k} tape(s), got {len(tokens)}", lineno
            )
        if tokens[2 + k] != "->":
            raise MachineFormatError("delta line missing '->' separator", lineno)
        q = tokens[1]
        syms = tuple(tokens[2 : 2 + k])
        q2 = tokens[3 + k]
        writes = tuple(tokens[3 + k + 1 : 3 + 2 * k + 1])
        move_toks = tokens[3 + 2 * k + 1 :]
        moves = []
        for tok in move_toks:
            if tok not in MOVE_TOKENS:
                raise MachineFormatError(f"invalid move {tok!r} (use L, S or R)", lineno)
            moves.append(MOVE_TOKENS[tok])
        key = (q, syms)
        if key in delta:
            raise MachineFormatError(f"duplicate delta entry for state {q!r} on {syms!r}", lineno)
        delta[key] = (q2, writes, tuple(moves))

    return build_machine(
        name=str(header["machine"]),
        k=k,
        start=str(header["start"]),
        accept=str(header["accept"]),
        reject=str(header["reject"]),
        input_alphabet=list(header["input_alphabet"]),  # type: ignore[arg-type]
        work_alphabet=list(header["work_alphabet"]),  # type: ignore[arg-type]
        blank=str(header["blank"]),
        delta=delta,
    )


def serialize_machine(machine: MachineSpec) -> str:
    """Emit the canonical definition text: fixed directive order, delta
    rows sorted by state then read symbols.  parse(serialize(m)) == m."""
    lines = [
        f"machine {machine.name}",
        f"tapes {machine.k}",
        f"blank {machine.blank}",
        "input_alphabet" + ("" if not machine.input_alphabet else " " + " ".join(machine.input_alphabet)),
        "work_alphabet " + " ".join(machine.work_alphabet),
        f"start {machine.start}",
        f"accept {machine.accept}",
        f"reject {machine.reject}",
    ]
    sidx = machine.state_index
    gidx = machine.symbol_index

    def row_key(item: tuple[TransitionKey, TransitionValue]):
        (q, syms), _ = item
        return (sidx[q], tuple(gidx[s] for s in syms))

    for (q, syms), (q2, writes, moves) in sorted(machine.delta.items(), key=row_key):
        lines.append(
            "delta {} {} -> {} {} {}".format(
                q,
                " ".join(syms),
                q2,
                " ".join(writes),
                " ".join(MOVE_NAMES[m] for m in moves),
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description at a given time.

    cells maps cell index to symbol, storing non-blank cells only, so
    two configurations with the same tape contents compare equal no
    matter how they were produced.  spans records, per tape, the region
    this record is authoritative for: the visited span for oracle
    histories, the replay window for reconstructions.  spans and the
    machine reference do not take part in equality.
    """

    machine: MachineSpec = field(compare=False, repr=False)
    time: int = 0
    state: str = ""
    heads: tuple[int, ...] = ()
    cells: tuple[dict[int, str], ...] = ()
    spans: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def symbol_at(self, tape: int, cell: int) -> str:
        return self.cells[tape].get(cell, self.machine.blank)

    def restricted(self, spans: Sequence[tuple[int, int]]) -> "Configuration":
        """Copy with tape contents masked to the given per-tape spans."""
        masked = tuple(
            {c: s for c, s in self.cells[i].items() if spans[i][0] <= c <= spans[i][1]}
            for i in range(self.machine.k)
        )
        return Configuration(
            machine=self.machine,
            time=self.time,
            state=self.state,
            heads=self.heads,
            cells=masked,
            spans=tuple((lo, hi) for lo, hi in spans),
        )

    def describe(self) -> str:
        parts = [f"time={self.time} state={self.state}"]
        for i in range(self.machine.k):
            lo, hi = self.spans[i]
            syms = " ".join(self.symbol_at(i, c) for c in range(lo, hi + 1))
            parts.append(f"tape{i + 1} head={self.heads[i]} [{lo},{hi}]: {syms}")
        return "\n".join(parts)


def normalize_input(machine: MachineSpec, input_word: str | Sequence[str]) -> tuple[str, ...]:
    """Accept either a character string or a symbol sequence; validate
    every symbol against the machine's input alphabet."""
    syms = tuple(input_word)
    allowed = set(machine.input_alphabet)
    for s in syms:
        if s not in allowed:
            raise MachineFormatError(f"input symbol {s!r} not in input alphabet")
    return syms


def initial_configuration(machine: MachineSpec, input_word: str | Sequence[str]) -> Configuration:
    syms = normalize_input(machine, input_word)
    tape0 = {i: s for i, s in enumerate(syms) if s != machine.blank}
    cells = tuple(dict(tape0) if i == 0 else {} for i in range(machine.k))
    return Configuration(
        machine=machine,
        time=0,
        state=machine.start,
        heads=(0,) * machine.k,
        cells=cells,
        spans=((0, 0),) * machine.k,
    )


def initial_tape_accessor(
    machine: MachineSpec, input_word: str | Sequence[str]
) -> Callable[[int, int], str]:
    """Time-zero tape contents as a (tape, cell) -> symbol function."""
    syms = normalize_input(machine, input_word)

    def at(tape: int, cell: int) -> str:
        if tape == 0 and 0 <= cell < len(syms):
            return syms[cell]
        return machine.blank

    return at


def step(machine: MachineSpec, config: Configuration) -> Configuration:
    """One deterministic step.  Pure: the input configuration is kept
    intact.  Raises StepFromHaltError on accepting or rejecting states."""
    if machine.is_halting(config.state):
        raise StepFromHaltError(f"cannot step from halting state {config.state!r}")
    reads = tuple(config.cells[i].get(config.heads[i], machine.blank) for i in range(machine.k))
    q2, writes, moves = machine.delta[(config.state, reads)]
    new_cells = []
    new_heads = []
    new_spans = []
    for i in range(machine.k):
        tape = dict(config.cells[i])
        if writes[i] == machine.blank:
            tape.pop(config.heads[i], None)
        else:
            tape[config.heads[i]] = writes[i]
        head = config.heads[i] + moves[i]
        lo, hi = config.spans[i]
        new_cells.append(tape)
        new_heads.append(head)
        new_spans.append((min(lo, head), max(hi, head)))
    return Configuration(
        machine=machine,
        time=config.time + 1,
        state=q2,
        heads=tuple(new_heads),
        cells=tuple(new_cells),
        spans=tuple(new_spans),
    )


# ---------------------------------------------------------------------------
# reference execution with replayable history


class HistoryCursor:
    """Sequential walker over a recorded run.

    Keeps one mutable tape image and advances it step by step, so a
    full forward scan costs O(1) amortized per step instead of one
    snapshot per step.
    """

    def __init__(self, history: "RunHistory"):
        self._h = history
        self.time = 0
        self.state = history._state0
        self.heads = list(history._heads0)
        self.cells = [dict(tape) for tape in history._cells0]
        self.spans = [list(span) for span in history._spans0]

    def read(self, tape: int, cell: int) -> str:
        return self.cells[tape].get(cell, self._h.machine.blank)

    def advance(self) -> None:
        if self.time >= self._h.t:
            raise IndexError("cursor already at end of history")
        state_after, writes, moves = self._h._trace[self.time]
        blank = self._h.machine.blank
        for i in range(self._h.machine.k):
            if writes[i] == blank:
                self.cells[i].pop(self.heads[i], None)
            else:
                self.cells[i][self.heads[i]] = writes[i]
            self.heads[i] += moves[i]
            if self.heads[i] < self.spans[i][0]:
                self.spans[i][0] = self.heads[i]
            elif self.heads[i] > self.spans[i][1]:
                self.spans[i][1] = self.heads[i]
        self.state = state_after
        self.time += 1

    def advance_to(self, time: int) -> None:
        if time < self.time:
            raise IndexError(f"cursor cannot rewind from {self.time} to {time}")
        while self.time < time:
            self.advance()

    def snapshot(self) -> Configuration:
        return Configuration(
            machine=self._h.machine,
            time=self.time,
            state=self.state,
            heads=tuple(self.heads),
            cells=tuple(dict(tape) for tape in self.cells),
            spans=tuple((lo, hi) for lo, hi in self.spans),
        )


class RunHistory:
    """Random access to every configuration of a recorded run.

    Stores the initial configuration, a compact per-step trace of
    (state after, symbols written, head moves), and full checkpoints
    every ~sqrt(t) steps.  history[tau] replays forward from the
    nearest checkpoint.
    """

    def __init__(
        self,
        machine: MachineSpec,
        c0: Configuration,
        trace: list[tuple[str, tuple[str, ...], tuple[int, ...]]],
    ):
        self.machine = machine
        self.t = len(trace)
        self._trace = trace
        self._state0 = c0.state
        self._heads0 = c0.heads
        self._cells0 = c0.cells
        self._spans0 = c0.spans
        self._stride = max(1, math.isqrt(self.t)) if self.t else 1
        self._checkpoints: dict[int, Configuration] = {0: c0}
        cur = self.cursor()
        while cur.time + self._stride <= self.t:
            cur.advance_to(cur.time + self._stride)
            self._checkpoints[cur.time] = cur.snapshot()

    def cursor(self) -> HistoryCursor:
        return HistoryCursor(self)

    def moves_at(self, step: int) -> tuple[int, ...]:
        """Head moves applied by 1-based step number."""
        if not 1 <= step <= self.t:
            raise IndexError(f"step {step} outside [1, {self.t}]")
        return self._trace[step - 1][2]

    def state_after(self, step: int) -> str:
        if not 1 <= step <= self.t:
            raise IndexError(f"step {step} outside [1, {self.t}]")
        return self._trace[step - 1][0]

    def __len__(self) -> int:
        return self.t + 1

    def __getitem__(self, tau: int) -> Configuration:
        if not 0 <= tau <= self.t:
            raise IndexError(f"time {tau} outside [0, {self.t}]")
        base = (tau // self._stride) * self._stride
        while base not in self._checkpoints:
            base -= self._stride
        cfg = self._checkpoints[base]
        if base == tau:
            return cfg
        cur = HistoryCursor(self)
        cur.time = cfg.time
        cur.state = cfg.state
        cur.heads = list(cfg.heads)
        cur.cells = [dict(tape) for tape in cfg.cells]
        cur.spans = [list(span) for span in cfg.spans]
        cur.advance_to(tau)
        return cur.snapshot()

    def configurations(self) -> Iterator[Configuration]:
        cur = self.cursor()
        yield cur.snapshot()
        while cur.time < self.t:
            cur.advance()
            yield cur.snapshot()

    @property
    def final(self) -> Configuration:
        return self[self.t]


@dataclass(frozen=True)
class RunRecord:
    """Outcome of a reference run: the oracle all other modules are
    checked against."""

    machine: MachineSpec
    input: tuple[str, ...]
    t: int
    halt_reason: str  # accept, reject or budget
    history: RunHistory = field(compare=False, repr=False)

    @property
    def final_state(self) -> str:
        return self.history.final.state


def run(machine: MachineSpec, input_word: str | Sequence[str], max_steps: int) -> RunRecord:
    """Execute up to max_steps steps from the standard initial
    configuration, recording a replayable history.  Halting earlier is
    fine; t in the result is the number of steps actually executed."""
    if max_steps < 0:
        raise ValueError(f"max_steps must be >= 0, got {max_steps}")
    c0 = initial_configuration(machine, input_word)
    syms = normalize_input(machine, input_word)
    blank = machine.blank
    delta = machine.delta
    k = machine.k
    state = c0.state
    heads = list(c0.heads)
    cells = [dict(tape) for tape in c0.cells]
    trace: list[tuple[str, tuple[str, ...], tuple[int, ...]]] = []
    reason = BUDGET
    for _ in range(max_steps):
        if machine.is_halting(state):
            break
        reads = tuple(cells[i].get(heads[i], blank) for i in range(k))
        state, writes, moves = delta[(state, reads)]
        for i in range(k):
            if writes[i] == blank:
                cells[i].pop(heads[i], None)
            else:
                cells[i][heads[i]] = writes[i]
            heads[i] += moves[i]
        trace.append((state, writes, moves))
    if machine.is_halting(state):
        reason = ACCEPT if state == machine.accept else REJECT
    return RunRecord(
        machine=machine,
        input=syms,
        t=len(trace),
        halt_reason=reason,
        history=RunHistory(machine, c0, trace),
    )


def probe_run_length(
    machine: MachineSpec, input_word: str | Sequence[str], max_steps: int
) -> tuple[int, str]:
    """Step the machine without recording anything and report how many
    steps it executes within the budget, plus the halt reason."""
    if max_steps < 0:
        raise ValueError(f"max_steps must be >= 0, got {max_steps}")
    syms = normalize_input(machine, input_word)
    blank = machine.blank
    delta = machine.delta
    k = machine.k
    state = machine.start
    heads = [0] * k
    cells: list[dict[int, str]] = [
        {i: s for i, s in enumerate(syms) if s != blank} if j == 0 else {} for j in range(k)
    ]
    steps = 0
    for _ in range(max_steps):
        if machine.is_halting(state):
            break
        reads = tuple(cells[i].get(heads[i], blank) for i in range(k))
        state, writes, moves = delta[(state, reads)]
        for i in range(k):
            if writes[i] == blank:
                cells[i].pop(heads[i], None)
            else:
                cells[i][heads[i]] = writes[i]
            heads[i] += moves[i]
        steps += 1
    if machine.is_halting(state):
        reason = ACCEPT if state == machine.accept else REJECT
    else:
        reason = BUDGET
    return steps, reason
