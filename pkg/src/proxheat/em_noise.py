"""
Thermal electromagnetic noise above a half-space.

Spectra follow the convention S(omega) = int dt <F(t) F(0)> exp(i omega t),
so absorption by the trapped particle probes negative frequencies. The
thermal weight is written with the odd sign of Im G folded in:

    thermal_factor(+w) = 2 hbar (nbar(w) + 1)
    thermal_factor(-w) = 2 hbar nbar(w)

and every spectrum below is thermal_factor(omega) * (loss part at |omega|).
This vanishes at T = 0 for omega < 0 and obeys detailed balance exactly.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .materials import epsilon, im_reflection_quasistatic
from .physcore import C_LIGHT, EPS0, HBAR, KB, MU0

__all__ = [
    "SpectralTensor",
    "S_SURFACE",
    "T_MAGNETIC",
    "QUASI_STATIC_LIMIT",
    "quasi_static_warnings",
    "bose_occupation",
    "thermal_factor",
    "im_green_blackbody",
    "im_green_surface",
    "electric_field_spectrum",
    "magnetic_field_correlation",
    "magnetic_force_spectrum_zz",
]

# Image-dipole anisotropy of the quasi-static surface Green tensor.
S_SURFACE = np.diag([0.5, 0.5, 1.0])
# Anisotropy of the magnetic correlation tensor above a conductor.
T_MAGNETIC = np.diag([1.5, 1.5, 1.0])

# omega z / c above this is flagged: retardation no longer negligible.
QUASI_STATIC_LIMIT = 0.01

UNITS_E = "V^2 s/m^2"
UNITS_B = "T^2 s"
UNITS_FORCE = "N^2 s"


@dataclass(frozen=True)
class SpectralTensor:
    """3x3 cross-correlation spectral density at one frequency and height."""

    components: np.ndarray
    units: str
    omega: float
    position_z: float
    warnings: tuple = field(default=())

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if c.shape != (3, 3):
            raise ValueError(f"spectral tensor must be 3x3, got shape {c.shape}")
        if not np.allclose(c, c.T, rtol=1e-12, atol=0):
            raise ValueError("spectral tensor must be symmetric")
        if np.any(np.diag(c) < 0):
            raise ValueError("spectral tensor diagonal must be non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __getitem__(self, idx):
        return self.components[idx]

    def scaled(self, factor, units):
        """Multiply by a non-negative coupling, e.g. q^2 to go from E to force."""
        return SpectralTensor(self.components * factor, units, self.omega,
                              self.position_z, self.warnings)

    def __add__(self, other):
        if other.units != self.units or other.omega != self.omega:
            raise ValueError("can only add spectra with equal units and frequency")
        return SpectralTensor(self.components + other.components, self.units,
                              self.omega, self.position_z,
                              self.warnings + other.warnings)

    def project(self, n):
        """n^T S n."""
        n = np.asarray(n, dtype=float)
        return float(n @ self.components @ n)


def _check_T(T):
    if T < 0:
        raise ValueError(f"temperature must be non-negative, got {T} K")


def bose_occupation(omega, T):
    """Mean thermal quantum number at |omega|."""
    _check_T(T)
    if T == 0:
        return 0.0
    x = HBAR * abs(omega) / (KB * T)
    if x == 0:
        return math.inf
    # stable for all x > 0: e^-x / (1 - e^-x)
    return math.exp(-x) / -math.expm1(-x)


def thermal_factor(omega, T):
    """Fluctuation-dissipation weight 2 hbar / (1 - exp(-hbar omega / kB T)),
    times sign(omega) so that it multiplies loss parts taken at |omega|.

    Returns 2 hbar (nbar + 1) for omega > 0 and 2 hbar nbar for omega < 0.
    """
    _check_T(T)
    if omega == 0:
        raise ValueError("thermal factor diverges at omega = 0")
    nbar = bose_occupation(omega, T)
    return 2 * HBAR * (nbar + 1 if omega > 0 else nbar)


def im_green_blackbody(omega):
    """Free-space Im G_ij = omega^3 / (6 pi eps0 c^3) delta_ij, odd in omega."""
    return np.eye(3) * omega**3 / (6 * math.pi * EPS0 * C_LIGHT**3)


def quasi_static_warnings(z, omega):
    ratio = abs(omega) * z / C_LIGHT
    if ratio >= QUASI_STATIC_LIMIT:
        return (f"quasi-static approximation questionable: omega z / c = {ratio:.3g}",)
    return ()


def im_green_surface(material, z, omega):
    """Quasi-static reflected Im G_ij at height ``z``, for ``omega`` > 0.

    s_ij / (16 pi eps0 z^3) * Im[(eps - 1)/(eps + 1)].
    """
    if not z > 0:
        raise ValueError(f"distance z must be > 0, got {z}")
    return S_SURFACE * im_reflection_quasistatic(material, omega) / (16 * math.pi * EPS0 * z**3)


def electric_field_spectrum(material, z, omega, T, include_blackbody=False,
                            include_surface=True):
    """Electric-field spectral tensor S_E(z, z; omega) in V^2 s / m^2."""
    w = abs(omega)
    im_g = np.zeros((3, 3))
    warnings = ()
    if include_surface:
        im_g = im_g + im_green_surface(material, z, w)
        warnings = quasi_static_warnings(z, w)
    if include_blackbody:
        im_g = im_g + im_green_blackbody(w)
    return SpectralTensor(thermal_factor(omega, T) * im_g, UNITS_E, omega, z, warnings)


def _magnetic_prefactor(material, omega, T):
    # mu0^2 omega^2 hbar eps0 Im eps(omega) / (1 - exp(-hbar omega / kB T))
    w = abs(omega)
    return MU0**2 * w**2 * EPS0 * epsilon(material, w).imag * thermal_factor(omega, T) / 2


def magnetic_field_correlation(material, z1, z2, omega, T):
    """Magnetic cross-correlation S_B(R, z1; R, z2; omega) in T^2 s."""
    if not (z1 > 0 and z2 > 0):
        raise ValueError(f"heights must be > 0, got z1={z1}, z2={z2}")
    pref = _magnetic_prefactor(material, omega, T)
    return SpectralTensor(T_MAGNETIC * pref / (8 * math.pi * (z1 + z2)), UNITS_B,
                          omega, 0.5 * (z1 + z2))


def magnetic_force_spectrum_zz(material, z, omega, T):
    """Kernel K with S_F^zz = sum_ij mu_i mu_j t_ij K, in N^2 s / (J/T)^2.

    d/dz d/dz' [8 pi (z + z')]^-1 at z' = z is (32 pi z^3)^-1.
    """
    if not z > 0:
        raise ValueError(f"distance z must be > 0, got {z}")
    return _magnetic_prefactor(material, omega, T) / (32 * math.pi * z**3)
