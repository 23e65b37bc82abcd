"""
Golden-rule heating rates.

Each proximity channel exists twice: a *pipeline* that assembles the noise
spectrum from em_noise and feeds it through the golden rule with the exact
Bose factor, and a *closed form* that takes the high-temperature limit
nbar -> kB T / (hbar omega_t). The two agree up to the factor
x / (exp(x) - 1), x = hbar omega_t / (kB T).

The rate Gamma(1 <- 0) also sets the decay of coherences between trap
levels in the Born-Markov limit, so it doubles as a decoherence rate.
"""

from dataclasses import asdict, dataclass, field
import math
import warnings as _warnings

import numpy as np

from . import em_noise
from .materials import DrudeValidityWarning
from .phonons import QZ_VALIDITY_LIMIT, rayleigh_heating_rate, rayleigh_qz
from .physcore import C_LIGHT, EPS0, HBAR, KB, MU0
from .trap import ground_state_size

__all__ = [
    "MECHANISMS",
    "HIGH_T_WARN",
    "NoMechanismError",
    "RateResult",
    "EndcapCircuit",
    "golden_rule_rate",
    "ion_surface_formula",
    "ion_blackbody_formula",
    "ion_endcap_formula",
    "zeeman_formula",
    "ion_rate_closed",
    "ion_blackbody_closed",
    "ion_rate_pipeline",
    "ion_rate_endcap",
    "zeeman_rate_closed",
    "zeeman_rate_pipeline",
    "high_t_ratio",
    "compute_all",
]

MECHANISMS = ("ion_surface", "ion_blackbody", "ion_endcap", "spin_surface", "phonon_vdw")
METHODS = ("closed_form", "pipeline")

# hbar omega_t / kB T above which the closed forms' high-T limit is flagged.
HIGH_T_WARN = 1e-3

ENDCAP_CAVEAT = "endcap model holds only up to a geometrical factor of order unity"


class NoMechanismError(ValueError):
    """No heating channel applies to the given particle and materials."""


@dataclass(frozen=True)
class RateResult:
    """Heating rate Gamma(1 <- 0) in 1/s for one mechanism."""

    mechanism: str
    rate: float
    method: str
    inputs_echo: dict = field(default_factory=dict, compare=False)
    warnings: tuple = ()

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.rate >= 0:
            raise ValueError(f"rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class EndcapCircuit:
    """Lumped trap-electrode circuit: resistance (ohm) and endcap spacing (m)."""

    resistance: float
    distance: float

    def __post_init__(self):
        if not (self.resistance > 0 and self.distance > 0):
            raise ValueError("endcap resistance and distance must be > 0")


def golden_rule_rate(trap, particle, force_spectrum):
    """a^2 / hbar^2 * n^T S_F(-omega_t) n."""
    if force_spectrum.units != em_noise.UNITS_FORCE:
        raise ValueError(
            f"golden rule needs a force spectrum ({em_noise.UNITS_FORCE}), "
            f"got {force_spectrum.units}"
        )
    a = ground_state_size(trap, particle)
    return a**2 / HBAR**2 * force_spectrum.project(trap.n)


# Closed forms as plain arithmetic: they evaluate on floats and on Quantities.

def ion_surface_formula(q, kT, rho, n_z, hbar, omega_t, mass, z):
    return q**2 * kT * rho / (hbar * omega_t * mass) * (1 + n_z**2) / (16 * math.pi * z**3)


def ion_blackbody_formula(q, kT, omega_t, eps0, c, hbar, mass):
    return q**2 * kT * omega_t / (6 * math.pi * eps0 * c**3 * hbar * mass)


def ion_endcap_formula(q, kT, resistance, n_z, hbar, omega_t, mass, d):
    return q**2 * kT * resistance / (hbar * omega_t * mass) * (1 + n_z**2) / (16 * math.pi * d**2)


def zeeman_formula(mu0, kT, hbar, omega_t, mass, rho, moment_expect, z):
    return mu0**2 * kT / (hbar * omega_t * mass * rho) * moment_expect / (128 * math.pi * z**3)


def _need_charge(particle):
    if particle.charge == 0:
        raise ValueError("ion channels need a nonzero charge")


def ion_rate_closed(trap, particle, material):
    """Surface proximity-field heating of an ion, high-T closed form."""
    _need_charge(particle)
    return ion_surface_formula(particle.charge, KB * trap.T_env, material.resistivity,
                               trap.n_z, HBAR, trap.omega_t, particle.mass, trap.z)


def ion_blackbody_closed(trap, particle):
    _need_charge(particle)
    return ion_blackbody_formula(particle.charge, KB * trap.T_env, trap.omega_t,
                                 EPS0, C_LIGHT, HBAR, particle.mass)


def ion_rate_pipeline(trap, particle, material, include_blackbody=False,
                      include_surface=True):
    """Ion heating from the assembled electric-field spectrum at -omega_t."""
    _need_charge(particle)
    s_e = em_noise.electric_field_spectrum(
        material, trap.z, -trap.omega_t, trap.T_env,
        include_blackbody=include_blackbody, include_surface=include_surface,
    )
    return golden_rule_rate(trap, particle,
                            s_e.scaled(particle.charge**2, em_noise.UNITS_FORCE))


def ion_rate_endcap(trap, particle, resistance, d_endcap):
    """Johnson-noise heating between endcaps: rho/z -> R, z -> endcap spacing."""
    _need_charge(particle)
    if not (resistance > 0 and d_endcap > 0):
        raise ValueError("endcap resistance and distance must be > 0")
    return ion_endcap_formula(particle.charge, KB * trap.T_env, resistance, trap.n_z,
                              HBAR, trap.omega_t, particle.mass, d_endcap)


def _need_perpendicular(trap):
    if abs(abs(trap.n_z) - 1) > 1e-12:
        raise ValueError(
            "magnetic channel is implemented only for a trap axis normal to the "
            f"surface (n = e_z); got n = {trap.n}"
        )


def zeeman_rate_closed(trap, particle, material):
    """Magnetic proximity-field heating, high-T closed form."""
    _need_perpendicular(trap)
    return zeeman_formula(MU0, KB * trap.T_env, HBAR, trap.omega_t, particle.mass,
                          material.resistivity, particle.moment_expect, trap.z)


def zeeman_rate_pipeline(trap, particle, material):
    _need_perpendicular(trap)
    kernel = em_noise.magnetic_force_spectrum_zz(material, trap.z, -trap.omega_t, trap.T_env)
    # sum_ij <mu_i mu_j> t_ij = <3 mu^2 - mu_z^2> / 2
    s_zz = 0.5 * particle.moment_expect * kernel
    spectrum = em_noise.SpectralTensor(np.diag([0.0, 0.0, s_zz]), em_noise.UNITS_FORCE,
                                       -trap.omega_t, trap.z)
    return golden_rule_rate(trap, particle, spectrum)


def high_t_ratio(trap):
    """hbar omega_t / (kB T)."""
    if trap.T_env == 0:
        return math.inf
    return HBAR * trap.omega_t / (KB * trap.T_env)


def _echo(trap, particle, material=None, **extra):
    echo = {"trap": asdict(trap), "particle": asdict(particle)}
    if material is not None:
        echo["material"] = asdict(material)
    echo.update(extra)
    return echo


def _select(channels):
    if channels == "auto":
        return set(MECHANISMS)
    chosen = set(channels)
    unknown = chosen - set(MECHANISMS)
    if unknown:
        raise ValueError(f"unknown channel(s): {', '.join(sorted(unknown))}")
    return chosen


def compute_all(trap, particle, material, *, endcap=None, channels="auto",
                method="pipeline"):
    """Every applicable heating mechanism at one trap configuration.

    Charge enables the ion channels (endcap only when ``endcap`` is given), a
    nonzero moment the spin channel, and c3 together with phonon parameters
    of ``material`` the phonon channel. Inapplicable channels are omitted.
    ``method`` picks pipeline or closed form where both exist; the endcap and
    phonon channels are closed forms only.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    wanted = _select(channels)
    pipeline = method == "pipeline"
    common = []
    x = high_t_ratio(trap)
    if x > HIGH_T_WARN:
        common.append(
            f"hbar omega_t / kB T = {x:.3g}: closed forms' high-temperature limit "
            "deviates from the exact Bose factor"
        )
    results = []

    def add(mechanism, fn, meth, mat=None, extra_warnings=(), **extra):
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always", DrudeValidityWarning)
            rate = fn()
        notes = [str(w.message) for w in caught if issubclass(w.category, DrudeValidityWarning)]
        results.append(RateResult(
            mechanism, rate, meth, _echo(trap, particle, mat, **extra),
            tuple(dict.fromkeys([*common, *extra_warnings, *notes])),
        ))

    m_name = "pipeline" if pipeline else "closed_form"
    if particle.charge != 0:
        if "ion_surface" in wanted:
            qs = em_noise.quasi_static_warnings(trap.z, trap.omega_t)
            if pipeline:
                add("ion_surface", lambda: ion_rate_pipeline(trap, particle, material),
                    m_name, material, qs)
            else:
                add("ion_surface", lambda: ion_rate_closed(trap, particle, material),
                    m_name, material, qs)
        if "ion_blackbody" in wanted:
            if pipeline:
                fn = lambda: ion_rate_pipeline(trap, particle, material,
                                               include_blackbody=True, include_surface=False)
            else:
                fn = lambda: ion_blackbody_closed(trap, particle)
            add("ion_blackbody", fn, m_name)
        if "ion_endcap" in wanted and endcap is not None:
            add("ion_endcap",
                lambda: ion_rate_endcap(trap, particle, endcap.resistance, endcap.distance),
                "closed_form", None, (ENDCAP_CAVEAT,), endcap=asdict(endcap))
    if particle.moment_expect > 0 and "spin_surface" in wanted:
        fn = zeeman_rate_pipeline if pipeline else zeeman_rate_closed
        add("spin_surface", lambda: fn(trap, particle, material), m_name, material)
    if particle.c3 > 0 and material.has_phonons and "phonon_vdw" in wanted:
        qz = rayleigh_qz(trap, material)
        flag = ()
        if qz is not None and qz > QZ_VALIDITY_LIMIT:
            flag = (f"Q z = {qz:.3g} exceeds {QZ_VALIDITY_LIMIT}: long-wavelength "
                    "phonon coupling invalid",)
        add("phonon_vdw", lambda: rayleigh_heating_rate(trap, particle, material),
            "closed_form", material, flag)
    if not results:
        raise NoMechanismError(
            f"no heating mechanism applies (charge={particle.charge}, "
            f"moment_expect={particle.moment_expect}, c3={particle.c3}, "
            f"material={material.name}, channels={sorted(wanted)})"
        )
    return results
