"""
Physical constants, unit conversion and a minimal dimension-checked scalar.

Everything in the package works in SI units. Temperatures stay in kelvin and
are turned into energies only through :func:`thermal_energy`, so kB never
silently disappears from a formula.

The dimension vector is ordered (kg, m, s, A, K).
"""

from dataclasses import dataclass
from fractions import Fraction
import math

__all__ = [
    "Constants",
    "CONSTANTS",
    "HBAR",
    "KB",
    "EPS0",
    "MU0",
    "C_LIGHT",
    "E_CHARGE",
    "AMU",
    "BOHR_MAGNETON",
    "H_PLANCK",
    "DimensionError",
    "Quantity",
    "UNITS",
    "unit",
    "convert",
    "thermal_energy",
]


class DimensionError(ValueError):
    """Raised when quantities of incompatible dimension are combined."""


@dataclass(frozen=True)
class Constants:
    """CODATA-2018 values in SI units."""

    hbar: float = 1.054571817e-34  # J s (exact)
    kB: float = 1.380649e-23  # J/K (exact)
    eps0: float = 8.8541878128e-12  # F/m
    mu0: float = 1.25663706212e-6  # H/m
    c: float = 299792458.0  # m/s (exact)
    e_charge: float = 1.602176634e-19  # C (exact)
    amu: float = 1.66053906660e-27  # kg
    bohr_magneton: float = 9.2740100783e-24  # J/T

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"constant {name} must be positive, got {value}")


CONSTANTS = Constants()

HBAR = CONSTANTS.hbar
KB = CONSTANTS.kB
EPS0 = CONSTANTS.eps0
MU0 = CONSTANTS.mu0
C_LIGHT = CONSTANTS.c
E_CHARGE = CONSTANTS.e_charge
AMU = CONSTANTS.amu
BOHR_MAGNETON = CONSTANTS.bohr_magneton
H_PLANCK = 2 * math.pi * HBAR

_BASE = ("kg", "m", "s", "A", "K")


def _dim(kg=0, m=0, s=0, A=0, K=0):
    return tuple(Fraction(x) for x in (kg, m, s, A, K))


DIMENSIONLESS = _dim()


class Quantity:
    """A real value with an exponent vector over (kg, m, s, A, K).

    Plain numbers mixed into arithmetic are treated as dimensionless, so
    closed-form expressions written for floats evaluate unchanged on
    Quantities and expose their resulting dimension.

    >>> (Quantity(2.0, _dim(m=1)) * Quantity(3.0, _dim(s=-1))).dim_string()
    'm s^-1'
    """

    __slots__ = ("value", "dim")

    def __init__(self, value, dim=DIMENSIONLESS):
        if len(dim) != len(_BASE):
            raise ValueError(f"dimension vector needs {len(_BASE)} entries")
        self.value = float(value)
        self.dim = tuple(Fraction(x) for x in dim)

    @staticmethod
    def _lift(other):
        if isinstance(other, Quantity):
            return other
        if isinstance(other, (int, float)):
            return Quantity(other)
        return NotImplemented

    def _same(self, other, op):
        if self.dim != other.dim:
            raise DimensionError(
                f"cannot {op} [{self.dim_string()}] and [{other.dim_string()}]"
            )

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._same(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._same(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Quantity(
            self.value * other.value, tuple(a + b for a, b in zip(self.dim, other.dim))
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Quantity(
            self.value / other.value, tuple(a - b for a, b in zip(self.dim, other.dim))
        )

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, power):
        p = Fraction(power).limit_denominator(64)
        return Quantity(self.value**float(p), tuple(d * p for d in self.dim))

    def _cmp(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Quantity with {type(other).__name__}")
        self._same(other, "compare")
        return other.value

    def __eq__(self, other):
        if not isinstance(other, (Quantity, int, float)):
            return NotImplemented
        other = self._lift(other)
        return self.dim == other.dim and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.dim))

    def __lt__(self, other):
        return self.value < self._cmp(other)

    def __le__(self, other):
        return self.value <= self._cmp(other)

    def __gt__(self, other):
        return self.value > self._cmp(other)

    def __ge__(self, other):
        return self.value >= self._cmp(other)

    def __float__(self):
        if self.dim != DIMENSIONLESS:
            raise DimensionError(f"[{self.dim_string()}] is not dimensionless")
        return self.value

    def dim_string(self):
        parts = []
        for name, exp in zip(_BASE, self.dim):
            if exp == 0:
                continue
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(parts) or "1"

    def __repr__(self):
        return f"Quantity({self.value!r}, [{self.dim_string()}])"


# Dimensions used across the package.
DIM_LENGTH = _dim(m=1)
DIM_MASS = _dim(kg=1)
DIM_TIME = _dim(s=1)
DIM_RATE = _dim(s=-1)
DIM_TEMPERATURE = _dim(K=1)
DIM_ENERGY = _dim(kg=1, m=2, s=-2)
DIM_CHARGE = _dim(s=1, A=1)
DIM_RESISTIVITY = _dim(kg=1, m=3, s=-3, A=-2)
DIM_RESISTANCE = _dim(kg=1, m=2, s=-3, A=-2)
DIM_FLUX_DENSITY = _dim(kg=1, s=-2, A=-1)
DIM_MOMENT = _dim(m=2, A=1)
DIM_C3 = _dim(kg=1, m=5, s=-2)
DIM_ACTION = _dim(kg=1, m=2, s=-1)
DIM_PERMITTIVITY = _dim(kg=-1, m=-3, s=4, A=2)
DIM_PERMEABILITY = _dim(kg=1, m=1, s=-2, A=-2)
DIM_VELOCITY = _dim(m=1, s=-1)
DIM_HEAT_CAPACITY = _dim(kg=1, m=2, s=-2, K=-1)

# Unit tag -> (factor to SI, dimension). Cyclic frequencies (Hz, kHz, MHz)
# convert to angular frequency in rad/s, which is the package-wide convention.
UNITS = {
    "1": (1.0, DIMENSIONLESS),
    "m": (1.0, DIM_LENGTH),
    "cm": (1e-2, DIM_LENGTH),
    "mm": (1e-3, DIM_LENGTH),
    "um": (1e-6, DIM_LENGTH),
    "nm": (1e-9, DIM_LENGTH),
    "kg": (1.0, DIM_MASS),
    "amu": (AMU, DIM_MASS),
    "s": (1.0, DIM_TIME),
    "rad/s": (1.0, DIM_RATE),
    "1/s": (1.0, DIM_RATE),
    "Hz": (2 * math.pi, DIM_RATE),
    "kHz": (2 * math.pi * 1e3, DIM_RATE),
    "MHz": (2 * math.pi * 1e6, DIM_RATE),
    "K": (1.0, DIM_TEMPERATURE),
    "J": (1.0, DIM_ENERGY),
    "eV": (E_CHARGE, DIM_ENERGY),
    "C": (1.0, DIM_CHARGE),
    "e": (E_CHARGE, DIM_CHARGE),
    "ohm*m": (1.0, DIM_RESISTIVITY),
    "ohm*cm": (1e-2, DIM_RESISTIVITY),
    "ohm": (1.0, DIM_RESISTANCE),
    "T": (1.0, DIM_FLUX_DENSITY),
    "G": (1e-4, DIM_FLUX_DENSITY),
    "J/T": (1.0, DIM_MOMENT),
    "mu_B": (BOHR_MAGNETON, DIM_MOMENT),
    # moment quoted as a Zeeman frequency shift per field, mu/(2 pi hbar)
    "h*MHz/G": (H_PLANCK * 1e6 / 1e-4, DIM_MOMENT),
    "J*m^3": (1.0, DIM_C3),
    # van-der-Waals coefficient quoted as c3/(2 pi hbar)
    "h*kHz*um^3": (H_PLANCK * 1e3 * 1e-18, DIM_C3),
}

_ALIASES = {
    "µm": "um",
    "μm": "um",
    "Ω·m": "ohm*m",
    "Ω·cm": "ohm*cm",
    "Ω": "ohm",
    "ohm_m": "ohm*m",
    "ohm_cm": "ohm*cm",
    "s^-1": "1/s",
}


def _lookup(tag):
    key = _ALIASES.get(tag, tag)
    try:
        return UNITS[key]
    except KeyError:
        raise KeyError(f"unknown unit {tag!r}") from None


def unit(tag):
    """Return the Quantity equal to one ``tag``, expressed in SI."""
    factor, dim = _lookup(tag)
    return Quantity(factor, dim)


def convert(value, from_unit, to_unit, *, via_kB=False):
    """Convert ``value`` between two registered units.

    Parameters
    ----------
    value : float
    from_unit, to_unit : str
        Keys of :data:`UNITS` (a few aliases such as ``"Ω·cm"`` or ``"µm"``
        are accepted).
    via_kB : bool
        Allow the temperature <-> energy equivalence E = kB T. Without it a
        kelvin/joule conversion is a dimension mismatch like any other.
    """
    f_from, d_from = _lookup(from_unit)
    f_to, d_to = _lookup(to_unit)
    si = value * f_from
    if d_from != d_to:
        if via_kB and d_from == DIM_TEMPERATURE and d_to == DIM_ENERGY:
            si = si * KB
        elif via_kB and d_from == DIM_ENERGY and d_to == DIM_TEMPERATURE:
            si = si / KB
        else:
            raise DimensionError(
                f"cannot convert {from_unit!r} [{Quantity(1, d_from).dim_string()}] "
                f"to {to_unit!r} [{Quantity(1, d_to).dim_string()}]"
            )
    return si / f_to


def thermal_energy(T):
    """kB*T in joules; ``T`` in kelvin."""
    if T < 0:
        raise ValueError(f"temperature must be non-negative, got {T} K")
    return KB * T
