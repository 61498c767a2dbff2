import numpy as np
import pytest

from povline import Sample


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture
def exp_sample(rng):
    return Sample.from_values(rng.exponential(2.0, 800))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo checks")


ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (bool(passed), detail)
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
