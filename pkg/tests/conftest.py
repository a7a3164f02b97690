import numpy as np
import pytest

from relaysel.topology import CapacityTables


def random_tables(rng: np.random.Generator, ns: int, nr: int, zero_prob: float = 0.1, integer: bool = False):
    """Random capacity tables with some links forced to zero."""

    def draw(shape):
        if integer:
            v = rng.integers(1, 20, size=shape).astype(float)
        else:
            v = rng.uniform(0.1, 10.0, size=shape)
        v[rng.random(shape) < zero_prob] = 0.0
        return v

    return CapacityTables(draw((ns, nr)), draw(ns), draw(nr))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
