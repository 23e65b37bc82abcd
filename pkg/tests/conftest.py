import math

import pytest

from proxheat.materials import builtin_db
from proxheat.physcore import AMU, BOHR_MAGNETON, E_CHARGE, convert
from proxheat.trap import Particle, SpinSpec, TrapConfig, moment_expectation


@pytest.fixture
def ag():
    return builtin_db()["Ag"]


@pytest.fixture
def glass():
    return builtin_db()["glass"]


@pytest.fixture
def fig2_trap():
    return TrapConfig(omega_t=2 * math.pi * 1e6, n=(0, 0, 1), z=10e-6, T_env=300.0)


@pytest.fixture
def ion():
    return Particle(mass=40 * AMU, charge=E_CHARGE)


@pytest.fixture
def fig3_trap():
    return TrapConfig(omega_t=2 * math.pi * 1e5, n=(0, 0, 1), z=1e-6, T_env=300.0)


@pytest.fixture
def atom():
    spin = SpinSpec(BOHR_MAGNETON, 0.5, "operator_spin_half")
    return Particle(mass=40 * AMU, moment_expect=moment_expectation(spin),
                    c3=convert(1.0, "h*kHz*um^3", "J*m^3"))


# One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def report(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
