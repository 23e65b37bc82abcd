"""
Acceptance criteria. Each test prints one PASS/FAIL line (collected in the
terminal summary) and then asserts it.
"""

import dataclasses
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from proxheat import em_noise
from proxheat.cli import main
from proxheat.materials import Material, builtin_db
from proxheat.phonons import bessel_k2, coupling_g, rayleigh_heating_rate
from proxheat.rates import (ion_blackbody_closed, ion_rate_closed, ion_rate_endcap,
                            ion_rate_pipeline, zeeman_rate_closed, zeeman_rate_pipeline)
from proxheat.scenario import Sweep, format_csv, load_preset, parse_csv, run_scenario
from proxheat.trap import Particle, SpinSpec, TrapConfig, moment_expectation
from test_phonons import K2_ORACLE

# Hand oracle, literal SI constants, independent of the package.
H_BAR = 1.054571817e-34
K_B = 1.380649e-23
Q_E = 1.602176634e-19
M40 = 40 * 1.66053906660e-27
MU_0 = 1.25663706212e-6
MU_B = 9.2740100783e-24


def hand_ion(z, T=300.0, f=1e6, rho=1.6e-8, nz=1.0):
    return Q_E**2 * K_B * T * rho * (1 + nz**2) / (16 * math.pi * H_BAR * 2 * math.pi * f * M40 * z**3)


def hand_spin(z, moment_expect, T=300.0, f=1e5, rho=1.6e-8):
    return MU_0**2 * K_B * T * moment_expect / (128 * math.pi * H_BAR * 2 * math.pi * f * M40 * rho * z**3)


def rel(a, b):
    return abs(a / b - 1)


def decade(x):
    return math.floor(math.log10(x))


@pytest.fixture(scope="module")
def mats():
    db = builtin_db()
    return db["Ag"], db["glass"]


@pytest.fixture(scope="module")
def ion40():
    return Particle(M40, charge=Q_E)


def spin_particle(convention):
    return Particle(M40, moment_expect=moment_expectation(SpinSpec(MU_B, 0.5, convention)),
                    c3=6.6260701459400797e-49)


def test_criterion_01_ion_surface_rate(criterion, mats, ion40):
    ag, _ = mats
    trap = TrapConfig(2 * math.pi * 1e6, (0, 0, 1), 10e-6, 300.0)
    t0 = time.perf_counter()
    rate = ion_rate_closed(trap, ion40, ag)
    dt = time.perf_counter() - t0
    oracle = hand_ion(10e-6)
    # a lifetime near 1 s at 10 um means a rate within a factor 2 of 1/s
    ok = rel(rate, oracle) < 1e-9 and 0.5 <= rate <= 2.0 and dt < 0.01
    assert criterion(1, "ion surface rate at 10 um", ok,
                     f"rate={rate:.6g}/s oracle={oracle:.6g}/s rel={rel(rate, oracle):.1e} "
                     f"landmark window [0.5, 2]/s, {dt * 1e3:.2f} ms")


def test_criterion_02_pipeline_closed_equivalence(criterion, mats, ion40):
    rng = np.random.default_rng(20240601)
    n = 1000
    z = 10 ** rng.uniform(-7, -4, n)
    f = 10 ** rng.uniform(4, 7, n)
    T = rng.uniform(100, 600, n)
    rho = 10 ** rng.uniform(-8, -2, n)
    atom = spin_particle("operator_spin_half")
    t0 = time.perf_counter()
    worst, bad, worst_corrected = 0.0, 0, 0.0
    for zi, fi, Ti, ri in zip(z, f, T, rho):
        m = Material("grid", float(ri))
        trap = TrapConfig(2 * math.pi * float(fi), (0, 0, 1), float(zi), float(Ti))
        x = H_BAR * trap.omega_t / (K_B * Ti)
        bose = x / math.expm1(x)
        for pipe, closed in ((ion_rate_pipeline(trap, ion40, m), ion_rate_closed(trap, ion40, m)),
                             (zeeman_rate_pipeline(trap, atom, m), zeeman_rate_closed(trap, atom, m))):
            d = rel(pipe, closed)
            worst = max(worst, d)
            bad += d >= 1e-6
            worst_corrected = max(worst_corrected, rel(pipe, closed * bose))
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 10
    assert criterion(2, "pipeline vs closed form, 1e-6 over random grid", ok,
                     f"{bad}/{2 * n} comparisons exceed 1e-6, max rel={worst:.2e}; "
                     f"after exact Bose factor x/(e^x-1) max rel={worst_corrected:.1e}; {dt:.2f} s")


def test_criterion_03_blackbody_baseline(criterion, mats, ion40):
    ag, _ = mats
    trap = TrapConfig(2 * math.pi * 1e6, (0, 0, 1), 10e-6, 300.0)
    bb = ion_blackbody_closed(trap, ion40)
    bb_far = ion_blackbody_closed(trap.at(z=1e-3), ion40)
    surf_1um = ion_rate_closed(trap.at(z=1e-6), ion40, ag)
    oracle = Q_E**2 * K_B * 300 * 2 * math.pi * 1e6 / (
        6 * math.pi * 8.8541878128e-12 * 299792458.0**3 * H_BAR * M40)
    gap = math.log10(surf_1um / bb)
    ok = rel(bb, oracle) < 1e-9 and abs(bb / 2.1e-8 - 1) < 0.05 and bb == bb_far and gap >= 6
    assert criterion(3, "blackbody baseline", ok,
                     f"rate={bb:.4g}/s oracle={oracle:.4g}/s z-independent={bb == bb_far} "
                     f"surface(1um)/blackbody=1e{gap:.1f}")


def test_criterion_04_endcap_baseline(criterion, ion40):
    trap = TrapConfig(2 * math.pi * 1e6, (0, 0, 1), 10e-6, 300.0)
    rate = ion_rate_endcap(trap, ion40, 1.0, 1e-3)
    far = ion_rate_endcap(trap.at(z=1e-4), ion40, 1.0, 1e-3)
    oracle = hand_ion(1e-3, rho=1.0 * 1e-3)
    ok = rel(rate, oracle) < 1e-9 and abs(rate / 0.096 - 1) < 0.01 and rate == far
    assert criterion(4, "endcap baseline", ok,
                     f"rate={rate:.5g}/s oracle={oracle:.5g}/s z-independent={rate == far}")


def test_criterion_05_spin_rate(criterion, mats):
    ag, glass = mats
    trap = TrapConfig(2 * math.pi * 1e5, (0, 0, 1), 1e-6, 300.0)
    op = zeeman_rate_closed(trap, spin_particle("operator_spin_half"), ag)
    cl = zeeman_rate_closed(trap, spin_particle("classical_isotropic"), ag)
    op_oracle = hand_spin(1e-6, 8 * MU_B**2)
    cl_oracle = hand_spin(1e-6, 8 / 3 * MU_B**2)
    ratio = zeeman_rate_closed(trap, spin_particle("operator_spin_half"), glass) / op
    within = all(abs(decade(r) - decade(1e-2)) <= 1 for r in (op, cl))
    ok = (rel(op, op_oracle) < 1e-9 and rel(cl, cl_oracle) < 1e-9 and within
          and rel(ratio, 1.6e-17) < 1e-6)
    assert criterion(5, "spin rate at 1 um", ok,
                     f"operator={op:.4g}/s classical={cl:.4g}/s vs landmark ~1e-2/s "
                     f"(decimal exponents {decade(op)}, {decade(cl)} vs -2); glass/Ag={ratio:.6g}")


def test_criterion_06_phonon_rate(criterion, mats):
    ag, _ = mats
    trap = TrapConfig(2 * math.pi * 1e5, (0, 0, 1), 100e-9, 300.0)
    rate = rayleigh_heating_rate(trap, spin_particle("operator_spin_half"), ag)
    oracle = 2.3581591332366126e-6
    ok = rel(rate, oracle) < 1e-9 and rate < 1e-5
    assert criterion(6, "phonon rate at 100 nm", ok,
                     f"rate={rate:.4g}/s oracle={oracle:.4g}/s; landmark below 1e-6/s, "
                     f"within one decade: {rate < 1e-5}")


def _slope(table, col):
    x = np.log10(table.values)
    y = np.log10(np.array(table.rates[col], dtype=float))
    return np.polyfit(x, y, 1)[0]


def test_criterion_07_power_laws(criterion):
    # preset physics, z range widened to four decades
    fig2 = load_preset("fig2-ion-ag")
    fig2 = dataclasses.replace(fig2, sweep=Sweep("z", 1e-7, 1e-3, 81))
    fig3 = load_preset("fig3-spin-phonon")
    fig3 = dataclasses.replace(fig3, sweep=Sweep("z", 1e-8, 1e-4, 81))
    t2, t3 = run_scenario(fig2), run_scenario(fig3)
    slopes = {"ion_surface": (_slope(t2, "ion_surface"), -3),
              "spin_surface[Ag]": (_slope(t3, "spin_surface[Ag]"), -3),
              "spin_surface[glass]": (_slope(t3, "spin_surface[glass]"), -3),
              "phonon_vdw[Ag]": (_slope(t3, "phonon_vdw[Ag]"), -10)}
    ok = all(abs(s - e) < 1e-3 for s, e in slopes.values())
    assert criterion(7, "log-log slopes over 4 decades", ok,
                     ", ".join(f"{k}={s:.6f}" for k, (s, _) in slopes.items()))


def test_criterion_08_detailed_balance_and_zero_T(criterion, mats, ion40):
    ag, glass = mats
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(500):
        w = 10 ** rng.uniform(3, 13)
        T = 10 ** rng.uniform(-1, 3)
        z = 10 ** rng.uniform(-8, -3)
        x = H_BAR * w / (K_B * T)
        if x > 600:
            continue
        up = em_noise.electric_field_spectrum(ag, z, w, T, include_blackbody=True)[2, 2]
        down = em_noise.electric_field_spectrum(ag, z, -w, T, include_blackbody=True)[2, 2]
        b_up = em_noise.magnetic_force_spectrum_zz(glass, z, w, T)
        b_down = em_noise.magnetic_force_spectrum_zz(glass, z, -w, T)
        worst = max(worst, rel(up / down, math.exp(x)), rel(b_up / b_down, math.exp(x)))
    cold2 = TrapConfig(2 * math.pi * 1e6, (0, 0, 1), 10e-6, 0.0)
    cold3 = TrapConfig(2 * math.pi * 1e5, (0, 0, 1), 1e-6, 0.0)
    atom = spin_particle("operator_spin_half")
    zero = [ion_rate_pipeline(cold2, ion40, ag, include_blackbody=True),
            zeeman_rate_pipeline(cold3, atom, ag),
            rayleigh_heating_rate(cold3, atom, ag)]
    ok = worst < 1e-9 and all(r == 0 for r in zero)
    assert criterion(8, "detailed balance and T -> 0", ok,
                     f"max |S(w)/S(-w) e^-x - 1|={worst:.1e}; rates at T=0: {zero}")


def test_criterion_09_special_functions(criterion):
    k2_worst = max(rel(bessel_k2(x), v) for x, v in K2_ORACLE)
    c3 = 6.6260701459400797e-49
    g_ok = True
    for z in (1e-8, 1e-7, 1e-6):
        for qz in np.geomspace(1e-6, 0.099, 25):
            g = coupling_g(qz / z, z, c3)
            g_ok &= abs(g * z**4 / (-3 * c3) - 1) < qz
    ok = k2_worst < 1e-9 and g_ok
    assert criterion(9, "K2 and coupling asymptote", ok,
                     f"K2 max rel vs quadrature={k2_worst:.1e} on [1e-3, 20]; "
                     f"g within Qz of -3c3/z^4 for Qz<0.1: {g_ok}")


def test_criterion_10_cli_determinism(criterion, tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"run{k}.csv"
        subprocess.run([sys.executable, "-m", "proxheat", "--preset", "fig2-ion-ag",
                        "--out", str(p), "--quiet"], check=True)
        outs.append(p.read_bytes())
    identical = outs[0] == outs[1]
    text = outs[0].decode()
    round_trip = format_csv(parse_csv(text)) == text
    (tmp_path / "none.toml").write_text(
        '[scenario]\nmaterials = ["glass"]\n[particle]\nmass_amu = 40\n'
        '[trap]\nomega_t_hz = 1e5\ntemperature_k = 300\n'
        '[sweep]\nvariable = "z"\nmin_um = 1\nmax_um = 2\npoints = 2\n')
    (tmp_path / "bad.toml").write_text("[scenario]\nmaterials = [\n")
    codes = (main(["--preset", "fig2-ion-ag", "--out", str(tmp_path / "ok.csv"), "--quiet"]),
             main(["--config", str(tmp_path / "bad.toml")]),
             main(["--config", str(tmp_path / "missing.toml")]),
             main(["--config", str(tmp_path / "none.toml")]))
    capsys.readouterr()
    ok = identical and round_trip and codes == (0, 1, 2, 3)
    assert criterion(10, "CLI determinism, round trip, exit codes", ok,
                     f"byte-identical={identical} round-trip={round_trip} "
                     f"exit codes ok/config/io/none={codes}")
