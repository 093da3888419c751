import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from imbaclust import _backend  # noqa: E402

BACKENDS = ["python"] + (["cython"] if _backend._ckernels is not None else [])

# filled by test_acceptance; echoed at the end of the session
ACCEPTANCE_LINES = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = _backend.name
    _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
