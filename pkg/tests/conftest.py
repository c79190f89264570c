import itertools

import pytest
from hypothesis import strategies as st

from hypermatch.hypergraph import Hypergraph

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def _report(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@st.composite
def hypergraphs(draw, max_n=10, max_m=15):
    n = draw(st.integers(1, max_n))
    total = (1 << n) - 1
    m = draw(st.integers(1, min(max_m, total)))
    edges = draw(st.lists(st.integers(1, total), min_size=m, max_size=m, unique=True))
    return Hypergraph(n, tuple(edges))


def disjoint_subsets_oracle(n):
    """All pairwise-disjoint families of nonempty subsets of [n], by brute force.

    Each vertex gets a label in {0, 1, ..., n}: 0 means unused, labels > 0
    name blocks.  Families are collected as frozensets of bitmasks.
    """
    families = set()
    for labels in itertools.product(range(n + 1), repeat=n):
        blocks = {}
        for v, lab in enumerate(labels):
            if lab:
                blocks[lab] = blocks.get(lab, 0) | (1 << v)
        if blocks:
            families.add(frozenset(blocks.values()))
    return families
