"""Shared pytest plumbing.

The acceptance tests record one (number, description, ok, seconds) row per
criterion; the terminal summary prints them as PASS/FAIL lines so the
result survives output capturing.
"""

import time

import pytest

CRITERIA: list[tuple[int, str, bool, float]] = []


@pytest.fixture
def criterion():
    def run(num: int, desc: str, body, budget: float | None = None):
        t0 = time.perf_counter()
        ok = False
        try:
            body()
            ok = True
        finally:
            secs = time.perf_counter() - t0
            if budget is not None and secs >= budget:
                ok = False
            CRITERIA.append((num, desc, ok, secs))
        if budget is not None:
            assert secs < budget, f"criterion {num}: {secs:.2f}s exceeds {budget}s"

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok, secs in sorted(CRITERIA):
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{word} criterion {num:2d}: {desc} [{secs:.2f}s]")
