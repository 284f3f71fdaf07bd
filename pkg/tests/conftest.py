from functools import lru_cache

import pytest

from veltman.search import enumerate_frames, fixtures


@lru_cache(maxsize=None)
def frames_upto(n):
    return tuple(enumerate_frames(n))


@pytest.fixture(scope="session")
def frames3():
    return frames_upto(3)


@pytest.fixture(scope="session")
def frames4():
    return frames_upto(4)


@pytest.fixture
def zambella():
    return fixtures("zambella_ilp")


@pytest.fixture
def b_not_w():
    return fixtures("b_not_w")


@pytest.fixture
def b_w_not_r():
    return fixtures("b_w_not_r")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
