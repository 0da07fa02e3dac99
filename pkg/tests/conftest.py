import numpy as np
import pytest

from halfwave import Kernel, SolitonSpec, SpinPoleData, solve_iterative

SQ3_2 = np.sqrt(3.0) / 2


@pytest.fixture
def rational():
    return Kernel.rational()


@pytest.fixture
def stationary():
    """Stationary one-soliton m0 = e1, a = i, s = (1, -i, 0)."""
    return SpinPoleData.real([1, 0, 0], [1j], [[1, -1j, 0]])


def two_soliton_spec(kind=None):
    """Two solitons with opposite velocities and unequal heights."""
    return SolitonSpec(kind or Kernel.rational(), [-3 + 1j, 3 + 1.5j],
                       [[SQ3_2, 0, 0.5], [SQ3_2, 0, -0.5]], [0, 0, 1])


def periodic_two_soliton_spec(L=2 * np.pi):
    return SolitonSpec(Kernel.trigonometric(L), [-1.5 + 0.5j, 1.5 + 0.8j],
                       [[0.8, 0, 0.6], [0.8, 0, -0.6]], [0, 0, 1])


@pytest.fixture(scope="session")
def two_soliton():
    return solve_iterative(two_soliton_spec()).data


@pytest.fixture(scope="session")
def periodic_two_soliton():
    return solve_iterative(periodic_two_soliton_spec()).data


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
