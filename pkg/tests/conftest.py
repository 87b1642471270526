import functools

import pytest

from fibtype.families import FamilyParams, example1_seed
from fibtype.sequence import FibSequence

_CRITERIA = []


@functools.lru_cache(maxsize=None)
def _family_seq(abc):
    return FibSequence(example1_seed(FamilyParams(*abc)))


@pytest.fixture
def family_seq():
    """Cached sequences; they only ever grow, so sharing them is safe."""
    return lambda *abc: _family_seq(tuple(abc))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA.append((mark.args[0], mark.args[1], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n, title, outcome in sorted(_CRITERIA):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
