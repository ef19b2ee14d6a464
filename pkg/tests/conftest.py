from __future__ import annotations

import pytest

import holosim as hs

_CRITERIA: list[tuple[float, str, bool, str]] = []


def record_criterion(num: float, label: str, ok: bool, detail: str = "") -> None:
    """Called by the acceptance tests; one summary line per criterion is
    printed after the run."""
    _CRITERIA.append((num, label, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok, detail in sorted(_CRITERIA, key=lambda row: row[0]):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {num:g}: {label}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def machines() -> dict[str, hs.MachineSpec]:
    return {name: hs.load_sample(name) for name in hs.SAMPLE_NAMES}


@pytest.fixture(scope="session")
def counter_run(machines) -> hs.RunRecord:
    """A 512-step counter prefix shared by many tests."""
    return hs.run(machines["counter"], hs.counter_input(10), max_steps=512)
