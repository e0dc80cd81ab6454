from functools import lru_cache

import numpy as np
import pytest

from tannaka.groupoid import build, bundle, group, pair, product, union
from tannaka.reps import unitary_dual

EXAMPLES = {
    "C1": group("C1"),
    "C2": group("C2"),
    "C4": group("C4"),
    "C6": group("C6"),
    "S3": group("S3"),
    "D4": group("D4"),
    "Q8": group("Q8"),
    "pair1": pair(1),
    "pair2": pair(2),
    "pair3": pair(3),
    "bundle_C2_2": bundle("C2", 2),
    "bundle_C4_3": bundle("C4", 3),
    "bundle_S3_2": bundle("S3", 2),
    "union_C2_pair2": union(group("C2"), pair(2)),
    "product_C2_pair2": product(group("C2"), pair(2)),
}


@lru_cache(maxsize=None)
def groupoid(name):
    return build(EXAMPLES[name])


@lru_cache(maxsize=None)
def dual_of(name, seed=0):
    return unitary_dual(groupoid(name), seed=seed)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def report_criterion(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
