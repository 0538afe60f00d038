import pytest

from efxlab import limits
from efxlab.rng import SplitMix64


@pytest.fixture
def rng():
    return SplitMix64(20231015)


@pytest.fixture
def restore_limits():
    saved = limits.get_limits()
    yield
    limits.set_limits(saved)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance as acc

    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.format_line(num, *acc.RESULTS[num]))
