import numpy as np
import pytest

from qwstat import _pykernel
from qwstat.coin import hadamard

try:
    from qwstat import _ckernel
except ImportError:  # pragma: no cover
    _ckernel = None

KERNELS = [pytest.param(_pykernel, id="python")]
if _ckernel is not None:
    KERNELS.append(pytest.param(_ckernel, id="cython"))

ACCEPTANCE_RESULTS: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20141015)


@pytest.fixture
def H():
    return hadamard()


@pytest.fixture(params=KERNELS)
def kernel(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
