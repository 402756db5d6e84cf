import pytest

from hermframe import Interval, build_gram, build_rule, eigendecompose, gen_coeffs_exponential, gen_coeffs_gaussian

EXP1 = Interval(-1.0, 30.0)
EXP2 = Interval(-7.0, 10.0)
WIDE = Interval(-40.0, 40.0)


class Setup:
    def __init__(self, N, interval, c=None):
        self.N = N
        self.interval = interval
        self.rule = build_rule(interval)
        self.G = build_gram(N, interval, self.rule)
        self.dec = eigendecompose(self.G)
        self.c = c


@pytest.fixture(scope="session")
def exp1():
    return Setup(160, EXP1, gen_coeffs_gaussian())


@pytest.fixture(scope="session")
def exp2():
    return Setup(130, EXP2, gen_coeffs_exponential(20, 130))


@pytest.fixture(scope="session")
def wide160():
    return Setup(160, WIDE, gen_coeffs_gaussian())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
