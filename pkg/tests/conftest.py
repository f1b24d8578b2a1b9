from __future__ import annotations

import pytest

from stringyk import groups


@pytest.fixture(scope="session")
def S3():
    return groups.symmetric(3)


@pytest.fixture(scope="session")
def Z2():
    return groups.cyclic(2)


@pytest.fixture(scope="session")
def Q8():
    return groups.quaternion8()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])
