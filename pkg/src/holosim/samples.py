"""Bundled sample machines and input builders for them.

writer2   halts by itself after two steps.
sweep     never halts; run it under a step budget n to sweep n cells.
counter   binary increment loop over an n-bit input; accepts at 2^n.
palin     two-tape palindrome check, quadratic time in the word length.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

from .machine import MachineSpec, parse_machine

SAMPLE_NAMES = ("writer2", "sweep", "counter", "palin")

_cache: dict[str, MachineSpec] = {}


def sample_path(name: str) -> Path:
    if name not in SAMPLE_NAMES:
        raise KeyError(f"unknown sample machine {name!r}; have {', '.join(SAMPLE_NAMES)}")
    return Path(str(resources.files("holosim").joinpath("machines", f"{name}.tm")))


def sample_text(name: str) -> str:
    return sample_path(name).read_text()


def load_sample(name: str) -> MachineSpec:
    if name not in _cache:
        _cache[name] = parse_machine(sample_text(name))
    return _cache[name]


def counter_input(n: int) -> str:
    """n-bit all-zero word; the counter then runs for about 2^(n+1) steps
    before accepting, so pick n above log2 of the step budget to keep it
    busy for the whole budget."""
    if n < 1:
        raise ValueError("counter needs at least one bit")
    return "0" * n


def palin_input(t: int) -> str:
    """All-zero palindrome sized so the check runs for at least t steps."""
    if t < 1:
        raise ValueError("step budget must be >= 1")
    n = math.isqrt(2 * t) + 2
    return "0" * n
