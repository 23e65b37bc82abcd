"""
Trap and particle configuration.

The trap is a one-dimensional harmonic well along the unit vector ``n``; its
ground-state size is also the |<1|x|0>| matrix element entering the
golden-rule rate.
"""

from dataclasses import dataclass
import math

from .physcore import HBAR

__all__ = [
    "TrapConfig",
    "Particle",
    "SpinSpec",
    "SPIN_CONVENTIONS",
    "ground_state_size",
    "moment_expectation",
    "axis_from_angles",
]

SPIN_CONVENTIONS = ("operator_spin_half", "classical_isotropic")


@dataclass(frozen=True)
class TrapConfig:
    """Trap frequency ``omega_t`` (rad/s), axis ``n``, distance ``z`` to the
    surface (m) and substrate temperature ``T_env`` (K)."""

    omega_t: float
    n: tuple = (0.0, 0.0, 1.0)
    z: float = 1e-6
    T_env: float = 300.0

    def __post_init__(self):
        n = tuple(float(c) for c in self.n)
        if len(n) != 3:
            raise ValueError("trap axis n must have three components")
        if abs(math.fsum(c * c for c in n) - 1) > 1e-12:
            raise ValueError(f"trap axis n must be a unit vector, |n|^2 = {sum(c * c for c in n)}")
        object.__setattr__(self, "n", n)
        if not self.omega_t > 0:
            raise ValueError(f"omega_t must be > 0, got {self.omega_t}")
        if not self.z > 0:
            raise ValueError(f"distance z must be > 0, got {self.z}")
        if not self.T_env >= 0:
            raise ValueError(f"T_env must be >= 0, got {self.T_env}")

    @property
    def n_z(self):
        return self.n[2]

    def at(self, **changes):
        """Copy with some fields replaced (used by sweeps)."""
        values = {"omega_t": self.omega_t, "n": self.n, "z": self.z, "T_env": self.T_env}
        values.update(changes)
        return TrapConfig(**values)


@dataclass(frozen=True)
class Particle:
    """Trapped particle.

    ``moment_expect`` is the expectation value <3 mu^2 - mu_z^2> in J^2/T^2,
    see :func:`moment_expectation`. ``c3`` is the van-der-Waals coefficient of
    the -c3/z^3 surface potential, J m^3.
    """

    mass: float
    charge: float = 0.0
    moment_expect: float = 0.0
    c3: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if not self.moment_expect >= 0:
            raise ValueError(f"moment_expect must be >= 0, got {self.moment_expect}")
        if not self.c3 >= 0:
            raise ValueError(f"c3 must be >= 0, got {self.c3}")


@dataclass(frozen=True)
class SpinSpec:
    moment_magnitude: float
    spin: float = 0.5
    convention: str = "operator_spin_half"

    def __post_init__(self):
        if not self.moment_magnitude >= 0:
            raise ValueError(f"moment_magnitude must be >= 0, got {self.moment_magnitude}")
        if self.convention not in SPIN_CONVENTIONS:
            raise ValueError(
                f"unknown spin convention {self.convention!r}; choose from {SPIN_CONVENTIONS}"
            )


def ground_state_size(trap, particle):
    """sqrt(hbar / (2 M omega_t))."""
    return math.sqrt(HBAR / (2 * particle.mass * trap.omega_t))


def moment_expectation(spec):
    """<3 mu^2 - mu_z^2> for a moment of magnitude ``spec.moment_magnitude``.

    ``operator_spin_half``: mu_i = 2 |mu| S_i / hbar with <S_i^2> = hbar^2/4,
    so <mu_i^2> = |mu|^2 for every component and the result is 8 |mu|^2.

    ``classical_isotropic``: a classical vector of length |mu| with random
    orientation, mu_z^2 = mu^2 / 3, giving 8/3 |mu|^2.
    """
    mu2 = spec.moment_magnitude**2
    if spec.convention == "operator_spin_half":
        if spec.spin != 0.5:
            raise ValueError(
                f"operator_spin_half convention needs spin 1/2, got {spec.spin}"
            )
        component = mu2  # (2|mu|/hbar)^2 * hbar^2/4
        return 3 * (3 * component) - component
    return 3 * mu2 - mu2 / 3


def axis_from_angles(theta, phi=0.0):
    """Unit vector at polar angle ``theta`` from the surface normal."""
    return (math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta))
