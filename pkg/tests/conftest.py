import contextlib
import time

import pytest

from qdt.quiver import Quiver
from qdt.stability import Stability

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[number])


@pytest.fixture
def acceptance():
    """Context manager recording one PASS/FAIL line for an acceptance criterion."""

    @contextlib.contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            line = f"criterion {number:2d} FAIL  {title} ({time.perf_counter() - start:.1f}s): {exc!s:.200}"
            _RESULTS[number] = line
            print(line)
            raise
        line = f"criterion {number:2d} PASS  {title} ({time.perf_counter() - start:.1f}s)"
        _RESULTS[number] = line
        print(line)

    return record


# --- shared small quivers --------------------------------------------------------

def quiver(n, arrows):
    return Quiver.from_arrows([str(i + 1) for i in range(n)], arrows)


@pytest.fixture
def point():
    return quiver(1, [])


@pytest.fixture
def loop1():
    return quiver(1, [("1", "1", 1)])


@pytest.fixture
def kronecker1():
    """One arrow 2 -> 1, so <e1, e2> = 1."""
    return quiver(2, [("2", "1", 1)])


@pytest.fixture
def two_cycle():
    return quiver(2, [("1", "2", 1), ("2", "1", 1)])


@pytest.fixture
def trivial2():
    return Stability.trivial(2)
