import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def golden():
    from amdyn import from_resonance
    return from_resonance(0.5, 2, 1)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance as acc
    lines = [acc.RESULTS[n] for n in sorted(acc.RESULTS)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
