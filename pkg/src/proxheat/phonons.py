"""
Rayleigh-phonon channel for neutral, spinless atoms.

Thermal surface waves corrugate the substrate and modulate the atom's
van-der-Waals image potential. The lateral Fourier component of that
modulation couples with strength g(Q; z) = -(3 c3 Q^2 / 2 z^2) K2(Q z).
For sound wavelengths much longer than the trap distance the coupling
reduces to -3 c3 / z^4 and the heating rate follows a z^-10 power law.
"""

from dataclasses import dataclass
import math

from scipy import special

from .physcore import HBAR, KB

__all__ = [
    "MissingPhononParameter",
    "PhononChannel",
    "QZ_VALIDITY_LIMIT",
    "bessel_k2",
    "coupling_g",
    "rayleigh_heating_formula",
    "rayleigh_heating_rate",
    "rayleigh_qz",
]

# Q z above this breaks the long-wavelength form of the coupling.
QZ_VALIDITY_LIMIT = 0.1


class MissingPhononParameter(ValueError):
    pass


@dataclass(frozen=True)
class PhononChannel:
    material: object
    c3: float
    Q: float | None = None

    def __post_init__(self):
        if not self.c3 >= 0:
            raise ValueError(f"c3 must be >= 0, got {self.c3}")
        if self.Q is not None and not self.Q > 0:
            raise ValueError(f"Q must be > 0, got {self.Q}")

    @classmethod
    def resonant(cls, material, c3, omega_t):
        """Channel with Q fixed to omega_t / v_R when the material knows v_R."""
        v = material.rayleigh_velocity
        return cls(material, c3, None if v is None else omega_t / v)


def bessel_k2(x):
    """Modified Bessel function of the second kind, order 2."""
    if not x > 0:
        raise ValueError(f"K2 needs x > 0, got {x}")
    return float(special.kv(2, x))


def coupling_g(Q, z, c3):
    """Corrugation coupling g(Q; z) in J/m."""
    if not (Q > 0 and z > 0):
        raise ValueError(f"coupling_g needs Q > 0 and z > 0, got Q={Q}, z={z}")
    if c3 < 0:
        raise ValueError(f"c3 must be >= 0, got {c3}")
    return -1.5 * c3 * Q**2 / z**2 * bessel_k2(Q * z)


def rayleigh_heating_formula(kT, c3, hbar, omega_t, omega_D, mass, surface_mass, eta, z):
    """Closed-form phonon heating rate; plain arithmetic so it also runs on
    :class:`~proxheat.physcore.Quantity` arguments."""
    return (kT * c3**2 / (hbar * omega_t * omega_D**3 * mass * surface_mass)
            * 72 * math.pi**3 * eta * (1 + eta**2) / z**10)


def rayleigh_qz(trap, material):
    """Q z for the resonant Rayleigh wave, or None without a sound velocity."""
    if material.rayleigh_velocity is None:
        return None
    return trap.omega_t * trap.z / material.rayleigh_velocity


def rayleigh_heating_rate(trap, particle, material):
    """Heating rate (1/s) from thermal Rayleigh waves via the vdW image potential."""
    missing = material.missing_phonon_params()
    if missing:
        raise MissingPhononParameter(
            f"{material.name}: phonon heating needs {', '.join(missing)}"
        )
    return rayleigh_heating_formula(
        KB * trap.T_env, particle.c3, HBAR, trap.omega_t, material.debye_freq,
        particle.mass, material.surface_atom_mass, material.eta, trap.z,
    )
