from fractions import Fraction

import pytest

from solenoids.circle import GapSchedule, RotationNumber, build_denjoy
from solenoids.regression import reference_map, reference_solenoid


@pytest.fixture(scope="session")
def golden_map():
    return reference_map()


@pytest.fixture(scope="session")
def rigid_map():
    return build_denjoy(RotationNumber.golden(), GapSchedule(0.0, 2.0))


@pytest.fixture(scope="session")
def ref_spec():
    return reference_solenoid()


@pytest.fixture(scope="session")
def half_spec():
    return reference_solenoid((Fraction(1, 2), Fraction(1, 2)), ((1, 0), (0, 1)), (1, 1))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
