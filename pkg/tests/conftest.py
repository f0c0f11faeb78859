import pytest

from gramlab import make_context


@pytest.fixture(scope="session")
def ctx():
    # one context per session: the band rules are built lazily and reused
    return make_context()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
