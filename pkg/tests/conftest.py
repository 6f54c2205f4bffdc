import numpy as np
import pytest

from invertor.simulators import DiscreteOracle, LobeSimulator, make_synthetic_dataset
from invertor.trace import Simulator

ORACLE_TRUTH = np.array([0.875, 0.125, 0.625])


@pytest.fixture
def oracle():
    sim = DiscreteOracle(horizon=3)
    data = np.cumsum(ORACLE_TRUTH - 0.5)
    return sim, data


@pytest.fixture(scope="session")
def lobe_problem():
    sim = LobeSimulator(horizon=5)
    data, truth = make_synthetic_dataset(sim, 11)
    return sim, data, truth


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


class ScriptedSimulator(Simulator):
    """Scalar random walk whose distance is infinite unless ``u_t`` hits ``target``.

    Gives exact control over which particles carry zero weight.
    """

    param_dim = 1

    def __init__(self, horizon=3, target=0.5):
        self.horizon = horizon
        self.target = target

    def initialize(self):
        return 0.0

    def sample_params(self, rng):
        return np.array([rng.random()])

    def prob_sample(self, params):
        return 0.0

    def in_support(self, value, component=0):
        return 0.0 <= value <= 1.0

    def simulate(self, state, params):
        return float(params[0])

    def emit(self, state):
        return state

    def distances(self, emission, data, step):
        return np.array([0.0 if emission == self.target else np.inf])


@pytest.fixture
def scripted():
    return ScriptedSimulator


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.acceptance_lines

    def record(number, name, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number} {name}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
