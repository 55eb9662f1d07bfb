import numpy as np
import pytest

from su11if.ifshift import BeamSpec
from su11if.interferometer import CoherentInputs, OpaSettings
from su11if.optics import LayerStack

PEAK_BRACKET = (np.radians(43.0), np.radians(44.5))


@pytest.fixture
def stack47():
    return LayerStack(2.22, -20.327 + 1.862j, 47e-9, 780e-9)


@pytest.fixture
def stack46():
    return LayerStack(2.22, -20.327 + 1.862j, 46e-9, 780e-9)


@pytest.fixture
def beam(stack47):
    return BeamSpec.for_stack(stack47, 1, 1e-3)


@pytest.fixture
def default_inputs():
    return CoherentInputs(50000.0, 0.0, 50000.0, np.pi)


@pytest.fixture
def default_opa():
    return OpaSettings.balanced_pair(0.7)


@pytest.fixture
def small_inputs():
    return CoherentInputs(0.5, 0.0, 0.5, np.pi)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: criterion(n, ok, detail)."""
    log = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        log.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_ACCEPTANCE, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log, key=lambda item: item[0]):
            terminalreporter.write_line(line)
