"""Shared strategies and helpers for the test suite."""

from __future__ import annotations

import os

from hypothesis import settings
from hypothesis import strategies as st

from dibipart.digraph import Digraph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def digraphs(draw, min_n=1, max_n=8, density=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if density is None:
        arcs = [p for p in pairs if draw(st.booleans())]
    else:
        arcs = [p for p in pairs if draw(st.floats(0, 1)) < density]
    return Digraph(n, arcs)


@st.composite
def tournaments(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u in range(n):
        for v in range(u + 1, n):
            arcs.append((u, v) if draw(st.booleans()) else (v, u))
    return Digraph(n, arcs)


ACCEPTANCE_LINES: list = []


def report(criterion: int, ok: bool, detail: str):
    """Record one PASS/FAIL line per acceptance criterion; the lines are
    printed (sorted by criterion) in the terminal summary of every run."""
    line = f"ACCEPTANCE criterion {criterion}: {'PASS' if ok else 'FAIL'} -- {detail}"
    print(line)
    ACCEPTANCE_LINES.append((criterion, line))
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
