import numpy as np
import pytest
from hypothesis import settings

from twbeam import cases
from twbeam.assembly import assemble
from twbeam.basis import ModalBasis
from twbeam.sweeps import ResponseContext

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ref_beam():
    return cases.reference_beam()


@pytest.fixture(scope="session")
def basis100():
    return ModalBasis(100, 2.0)


@pytest.fixture(scope="session")
def system100(ref_beam, basis100):
    return assemble(ref_beam, basis100)


@pytest.fixture(scope="session")
def ctx100(ref_beam, basis100, system100):
    return ResponseContext(ref_beam, basis100, system=system100)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
