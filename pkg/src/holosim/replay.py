"""Window-restricted re-execution from interval summaries.

A full-policy summary pins down everything the machine can see during
its interval: entry state, entry head positions, and the entry contents
of every cell any head visits before the interval ends.  Stepping the
transition function inside those windows therefore reproduces the
original run exactly, cell for cell, without any access to the global
tape.  A head leaving its window would mean the summary was not
generated from a real run; that surfaces as WindowEscape rather than
silently reading a blank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .blocks import POLICY_FULL, IntervalSummary, TapeWindow
from .errors import StepFromHaltError, WindowEscape
from .machine import Configuration, MachineSpec


@dataclass(frozen=True)
class ReplayExit:
    """End of a window replay: the final restricted configuration and
    the windows with their exit-time contents."""

    config: Configuration
    windows: tuple[TapeWindow, ...]


def _restricted_config(
    machine: MachineSpec,
    time: int,
    state: str,
    heads: tuple[int, ...],
    tapes: list[dict[int, str]],
    spans: tuple[tuple[int, int], ...],
) -> Configuration:
    cells = tuple(
        {c: s for c, s in tape.items() if s != machine.blank} for tape in tapes
    )
    return Configuration(
        machine=machine, time=time, state=state, heads=heads, cells=cells, spans=spans
    )


def replay_block(
    machine: MachineSpec,
    state: str,
    heads: tuple[int, ...],
    windows: tuple[TapeWindow, ...],
    steps: int,
    emit: Callable[[Configuration], None] | None = None,
    time_base: int = 0,
) -> ReplayExit:
    """Run `steps` transitions inside the given windows.

    The windows carry entry-time contents.  emit, when given, receives
    the restricted configuration after each step at times time_base+1
    onward.  Raises WindowEscape if a head leaves its window and
    StepFromHaltError if asked to step a halting state.
    """
    if len(heads) != machine.k or len(windows) != machine.k:
        raise ValueError(
            f"expected {machine.k} heads and windows, got {len(heads)} and {len(windows)}"
        )
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    spans = tuple(w.span for w in windows)
    for i, (h, w) in enumerate(zip(heads, windows)):
        if not w.covers(h):
            raise WindowEscape(i + 1, h)
    tapes: list[dict[int, str]] = [
        {w.lo + j: sym for j, sym in enumerate(w.symbols)} for w in windows
    ]
    blank = machine.blank
    heads_now = list(heads)
    for j in range(steps):
        if machine.is_halting(state):
            raise StepFromHaltError(state)
        reads = tuple(
            tapes[i].get(heads_now[i], blank) for i in range(machine.k)
        )
        state, writes, moves = machine.delta[(state, reads)]
        for i in range(machine.k):
            if writes[i] == blank:
                tapes[i].pop(heads_now[i], None)
            else:
                tapes[i][heads_now[i]] = writes[i]
            h = heads_now[i] + moves[i]
            lo, hi = spans[i]
            if not lo <= h <= hi:
                raise WindowEscape(i + 1, h)
            heads_now[i] = h
        if emit is not None:
            emit(
                _restricted_config(
                    machine, time_base + j + 1, state, tuple(heads_now), tapes, spans
                )
            )
    exit_windows = tuple(
        TapeWindow(
            w.lo,
            w.hi,
            tuple(tapes[i].get(c, blank) for c in range(w.lo, w.hi + 1)),
        )
        if len(w) > 0
        else w
        for i, w in enumerate(windows)
    )
    config = _restricted_config(
        machine, time_base + steps, state, tuple(heads_now), tapes, spans
    )
    return ReplayExit(config=config, windows=exit_windows)


def replay_from_summary(
    machine: MachineSpec, summary: IntervalSummary, tau: int
) -> Configuration:
    """Reconstruct the configuration at time tau from a full-policy
    summary covering tau, restricted to the summary's windows.

    tau ranges over [L-1, R]: L-1 is the entry configuration itself,
    R is the exit.  The summary is trusted; an inconsistent one shows
    up as WindowEscape or a halt mid-replay.
    """
    if summary.policy != POLICY_FULL:
        raise ValueError(
            f"replay needs a {POLICY_FULL!r} summary, got {summary.policy!r}"
        )
    lo, hi = summary.L - 1, summary.R
    if not lo <= tau <= hi:
        raise ValueError(f"tau {tau} outside [{lo}, {hi}]")
    result = replay_block(
        machine,
        summary.q_in,
        summary.heads_in,
        summary.entry,
        steps=tau - lo,
        time_base=lo,
    )
    return result.config


def replay_all(
    machine: MachineSpec, summary: IntervalSummary
) -> tuple[Configuration, ...]:
    """Every configuration of the summarized interval, entry through
    exit, each reconstructed by a fresh replay from the entry data."""
    return tuple(
        replay_from_summary(machine, summary, tau)
        for tau in range(summary.L - 1, summary.R + 1)
    )
