import pytest

import bornrate as br

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def gaussian_dist():
    return br.validate(br.gaussian(1.0, 10.0))


@pytest.fixture(scope="session")
def double_slit_dist():
    return br.validate(br.double_slit(1.0, 5.0, 10.0))


@pytest.fixture(scope="session")
def single_slit_dist():
    return br.validate(br.single_slit(1.0, 10.0))


@pytest.fixture(scope="session")
def uniform_dist():
    # flat table over [0, 4]: cdf(x) = x/4 there, handy for hand checks
    return br.validate(br.tabulated([(0.0, 1.0), (2.0, 1.0), (4.0, 1.0)],
                                    support_halfwidth=4.0))
