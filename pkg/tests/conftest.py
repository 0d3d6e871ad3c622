import sys
from pathlib import Path

import numpy as np
import pytest

from gengrover.instance import hadamard_sources, make_instance, random_instance, substream

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def inst_d2():
    return make_instance(2, [[1 / np.sqrt(2), 1 / np.sqrt(2)]], [1])


@pytest.fixture
def inst_d4():
    """D=4, source H|0>, target {3}: one pair with c = 1/2."""
    return make_instance(4, hadamard_sources(2, [0]), [3])


@pytest.fixture
def random_inst():
    def make(d, n, m, seed, family="random"):
        return random_instance(d, n, m, family, substream(seed, 0))

    return make
