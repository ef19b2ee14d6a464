"""Test-side reference implementations and random object generators.

The reference interpreter here uses grow-on-demand list tapes, written
independently of the package's dict-backed machinery, so each can catch
the other's mistakes.  Generators are plain seeded-random constructors
(not hypothesis strategies) so large corpora stay cheap and repeatable.
"""

from __future__ import annotations

import random

from holosim import (
    Configuration,
    IntervalSummary,
    MachineSpec,
    POLICY_BOUNDARY,
    POLICY_FULL,
    TapeWindow,
    build_machine,
)


class ListTape:
    """Two-sided tape as a pair of grow-on-demand lists."""

    def __init__(self, blank: str, symbols=()):
        self.blank = blank
        self.neg: list[str] = []  # cells -1, -2, ...
        self.pos: list[str] = list(symbols)  # cells 0, 1, ...

    def read(self, i: int) -> str:
        arr, j = (self.pos, i) if i >= 0 else (self.neg, -i - 1)
        return arr[j] if j < len(arr) else self.blank

    def write(self, i: int, sym: str) -> None:
        arr, j = (self.pos, i) if i >= 0 else (self.neg, -i - 1)
        while len(arr) <= j:
            arr.append(self.blank)
        arr[j] = sym

    def nonblank(self) -> dict[int, str]:
        cells = {}
        for j, s in enumerate(self.pos):
            if s != self.blank:
                cells[j] = s
        for j, s in enumerate(self.neg):
            if s != self.blank:
                cells[-j - 1] = s
        return cells


def reference_trace(machine: MachineSpec, word, max_steps: int):
    """Yield (time, state, heads, nonblank-cells-per-tape), time 0
    included, halting at accept/reject or the step budget."""
    tapes = [
        ListTape(machine.blank, tuple(word) if i == 0 else ())
        for i in range(machine.k)
    ]
    heads = [0] * machine.k
    state = machine.start
    yield 0, state, tuple(heads), tuple(t.nonblank() for t in tapes)
    steps = 0
    while steps < max_steps and state not in (machine.accept, machine.reject):
        reads = tuple(tapes[i].read(heads[i]) for i in range(machine.k))
        state, writes, moves = machine.delta[(state, reads)]
        for i in range(machine.k):
            tapes[i].write(heads[i], writes[i])
            heads[i] += moves[i]
        steps += 1
        yield steps, state, tuple(heads), tuple(t.nonblank() for t in tapes)


def reference_block_spans(machine: MachineSpec, word, t: int, b: int):
    """Per-block per-tape visited spans [lo, hi] over configurations
    L-1..R, by brute force over the reference trace."""
    trace = list(reference_trace(machine, word, t))
    heads_at = [row[2] for row in trace]
    spans = []
    step = 0
    while step < t:
        L = step + 1
        R = min(step + b, t)
        block = []
        for i in range(machine.k):
            positions = [heads_at[tau][i] for tau in range(L - 1, R + 1)]
            block.append((min(positions), max(positions)))
        spans.append(((L, R), tuple(block)))
        step = R
    return spans


# ---------------------------------------------------------------------------
# random generators

_SYMBOL_POOL = ["_", "0", "1", "a", "b", "c"]


def random_machine(rng: random.Random, k: int | None = None) -> MachineSpec:
    """A small total machine with random transitions."""
    if k is None:
        k = rng.randint(1, 3)
    n_work = rng.randint(2, 4)
    work = _SYMBOL_POOL[:n_work]
    blank = "_"
    inputs = [s for s in work if s != blank]
    if rng.random() < 0.3:
        inputs = inputs[: rng.randint(0, len(inputs))]
    middle = [f"s{i}" for i in range(rng.randint(1, 3))]
    states = ["go"] + middle
    accept, reject = "yes", "no"
    all_states = states + [accept, reject]

    def combos(depth: int):
        if depth == 0:
            yield ()
            return
        for rest in combos(depth - 1):
            for s in work:
                yield (s,) + rest

    delta = {}
    for q in states:
        for syms in combos(k):
            q2 = rng.choice(all_states if rng.random() < 0.25 else states)
            writes = tuple(rng.choice(work) for _ in range(k))
            moves = tuple(rng.choice((-1, 0, 1)) for _ in range(k))
            delta[(q, syms)] = (q2, writes, moves)
    return build_machine(
        name=f"rand{rng.randrange(10**6)}",
        k=k,
        start="go",
        accept=accept,
        reject=reject,
        input_alphabet=inputs,
        work_alphabet=work,
        blank=blank,
        delta=delta,
    )


def random_window(rng: random.Random, machine: MachineSpec, span=None) -> TapeWindow:
    if span is None:
        if rng.random() < 0.1:
            return TapeWindow(0, -1, ())
        lo = rng.randint(-30, 30)
        hi = lo + rng.randint(0, 8)
    else:
        lo, hi = span
        if hi < lo:
            return TapeWindow(0, -1, ())
    syms = tuple(rng.choice(machine.work_alphabet) for _ in range(hi - lo + 1))
    return TapeWindow(lo, hi, syms)


def random_summary(rng: random.Random, machine: MachineSpec) -> IntervalSummary:
    """Structurally valid summary; not necessarily realizable by a run."""
    L = rng.randint(1, 1000)
    R = L + rng.randint(0, 200)
    policy = POLICY_FULL if rng.random() < 0.5 else POLICY_BOUNDARY
    entry = []
    exit_ = []
    for _ in range(machine.k):
        ew = random_window(rng, machine)
        if policy == POLICY_FULL:
            xw = random_window(rng, machine, span=ew.span)
        else:
            xw = random_window(rng, machine)
        entry.append(ew)
        exit_.append(xw)
    return IntervalSummary(
        machine=machine,
        L=L,
        R=R,
        q_in=rng.choice(machine.states),
        q_out=rng.choice(machine.states),
        heads_in=tuple(rng.randint(-50, 50) for _ in range(machine.k)),
        heads_out=tuple(rng.randint(-50, 50) for _ in range(machine.k)),
        entry=tuple(entry),
        exit=tuple(exit_),
        policy=policy,
    )


def random_configuration(rng: random.Random, machine: MachineSpec) -> Configuration:
    cells = []
    spans = []
    heads = []
    for _ in range(machine.k):
        head = rng.randint(-40, 40)
        tape: dict[int, str] = {}
        for _ in range(rng.randint(0, 10)):
            c = rng.randint(-40, 40)
            sym = rng.choice(machine.work_alphabet)
            if sym != machine.blank:
                tape[c] = sym
        occupied = list(tape) + [head]
        spans.append((min(occupied), max(occupied)))
        heads.append(head)
        cells.append(tape)
    return Configuration(
        machine=machine,
        time=rng.randint(0, 10**6),
        state=rng.choice(machine.states),
        heads=tuple(heads),
        cells=tuple(cells),
        spans=tuple(spans),
    )
