"""
Substrate models.

A :class:`Material` carries the low-frequency resistivity that drives both
proximity-field channels, optional Drude parameters, and the surface-phonon
parameters of the van-der-Waals channel. The dielectric model is chosen by
the data: Drude when plasma frequency and damping are both given, otherwise
the constant-resistivity conductor 1 + i/(eps0 omega rho).
"""

from dataclasses import asdict, dataclass
import json
import sys
import warnings

from .physcore import AMU, EPS0, HBAR, KB, convert

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "Material",
    "MaterialDb",
    "MaterialError",
    "DrudeValidityWarning",
    "epsilon",
    "im_reflection_quasistatic",
    "material_from_config",
    "load_material_file",
    "builtin_db",
]

# Relative tolerance between the Drude DC resistivity and the stated one.
DRUDE_RHO_RTOL = 0.05


class MaterialError(ValueError):
    """Invalid material definition."""


class DrudeValidityWarning(UserWarning):
    """Frequency is not far enough below the Drude damping rate."""


@dataclass(frozen=True)
class Material:
    """Substrate parameters, all SI.

    Attributes
    ----------
    name : str
    resistivity : float
        Specific resistance at trap frequencies, ohm m.
    drude_plasma_freq, drude_damping : float or None
        Drude plasma frequency and damping rate, rad/s.
    debye_freq : float or None
        Debye frequency, rad/s.
    surface_atom_mass : float or None
        Mass of a surface atom, kg.
    eta : float or None
        Decay parameter of the Rayleigh wave into the bulk.
    surface_density : float or None
        Surface atoms per m^2. Stored only.
    rayleigh_velocity : float or None
        Rayleigh sound velocity, m/s. Used for the Q z << 1 validity flag.
    """

    name: str
    resistivity: float
    drude_plasma_freq: float | None = None
    drude_damping: float | None = None
    debye_freq: float | None = None
    surface_atom_mass: float | None = None
    eta: float | None = None
    surface_density: float | None = None
    rayleigh_velocity: float | None = None

    def __post_init__(self):
        if not self.resistivity > 0:
            raise MaterialError(f"{self.name}: resistivity must be > 0")
        for attr in ("debye_freq", "surface_atom_mass", "surface_density",
                     "rayleigh_velocity", "drude_plasma_freq", "drude_damping"):
            value = getattr(self, attr)
            if value is not None and not value > 0:
                raise MaterialError(f"{self.name}: {attr} must be > 0, got {value}")
        if self.eta is not None and not 0 < self.eta <= 2:
            raise MaterialError(f"{self.name}: eta must lie in (0, 2], got {self.eta}")
        if (self.drude_plasma_freq is None) != (self.drude_damping is None):
            raise MaterialError(
                f"{self.name}: give both drude_plasma_freq and drude_damping or neither"
            )
        if self.has_drude:
            rho_drude = self.drude_damping / (EPS0 * self.drude_plasma_freq**2)
            if abs(rho_drude / self.resistivity - 1) > DRUDE_RHO_RTOL:
                raise MaterialError(
                    f"{self.name}: Drude DC resistivity {rho_drude:.4g} ohm m differs "
                    f"from resistivity {self.resistivity:.4g} ohm m by more than "
                    f"{DRUDE_RHO_RTOL:.0%}"
                )

    @property
    def has_drude(self):
        return self.drude_plasma_freq is not None

    @property
    def has_phonons(self):
        return None not in (self.debye_freq, self.surface_atom_mass, self.eta)

    def missing_phonon_params(self):
        return [a for a in ("debye_freq", "surface_atom_mass", "eta")
                if getattr(self, a) is None]


def epsilon(material, omega):
    """Complex relative permittivity at angular frequency ``omega`` > 0."""
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if material.has_drude:
        wp, gamma = material.drude_plasma_freq, material.drude_damping
        if omega > gamma / 10:
            warnings.warn(
                f"{material.name}: omega={omega:.3g} rad/s is not well below the "
                f"damping rate {gamma:.3g} rad/s; low-frequency forms are inaccurate",
                DrudeValidityWarning,
                stacklevel=2,
            )
        return 1 - wp**2 / (omega * (omega + 1j * gamma))
    return complex(1.0, 1.0 / (EPS0 * omega * material.resistivity))


def im_reflection_quasistatic(material, omega):
    """Im[(eps - 1)/(eps + 1)], the electrostatic image factor's loss part."""
    eps = epsilon(material, omega)
    # (eps-1)/(eps+1) = 1 - 2/(eps+1); the subtraction form loses digits when |eps| >> 1
    return (-2 / (eps + 1)).imag


class MaterialDb:
    """Named, read-only collection of materials."""

    def __init__(self, materials=()):
        self._entries = {}
        for m in materials:
            self._entries[m.name] = m

    def __getitem__(self, name):
        try:
            return self._entries[name]
        except KeyError:
            known = ", ".join(sorted(self._entries))
            raise KeyError(f"unknown material {name!r} (known: {known})") from None

    def __contains__(self, name):
        return name in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, MaterialDb) and self._entries == other._entries

    def names(self):
        return list(self._entries)

    def merged(self, other):
        """New database with entries of ``other`` overriding ours."""
        return MaterialDb([*self, *other])

    def to_json(self):
        return json.dumps([asdict(m) for m in self], indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(Material(**d) for d in json.loads(text))


# Config keys -> (Material attribute, converter to SI).
_CONFIG_KEYS = {
    "name": ("name", str),
    "resistivity_ohm_cm": ("resistivity", lambda v: convert(v, "ohm*cm", "ohm*m")),
    "debye_temp_K": ("debye_freq", lambda v: KB * v / HBAR),
    "surface_atom_mass_amu": ("surface_atom_mass", lambda v: v * AMU),
    "eta": ("eta", float),
    "plasma_freq_rad_s": ("drude_plasma_freq", float),
    "damping_rad_s": ("drude_damping", float),
    "surface_density_per_m2": ("surface_density", float),
    "rayleigh_velocity_m_s": ("rayleigh_velocity", float),
}
_REQUIRED = ("name", "resistivity_ohm_cm")


def material_from_config(entry, where="material"):
    """Build a Material from a mapping with unit-suffixed keys."""
    unknown = sorted(set(entry) - set(_CONFIG_KEYS))
    if unknown:
        raise MaterialError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in _REQUIRED if k not in entry]
    if missing:
        raise MaterialError(f"{where}: missing required key(s) {', '.join(missing)}")
    kwargs = {}
    for key, value in entry.items():
        attr, conv = _CONFIG_KEYS[key]
        if key != "name" and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise MaterialError(f"{where}.{key}: expected a number, got {value!r}")
        kwargs[attr] = conv(value)
    return Material(**kwargs)


def load_material_file(path):
    """Read materials from a TOML file.

    The file holds either one material as top-level keys, or several as a
    ``[[material]]`` array of tables.
    """
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise MaterialError(f"{path}: {exc}") from None
    if "material" in doc:
        extra = set(doc) - {"material"}
        if extra:
            raise MaterialError(f"{path}: unknown top-level key(s) {', '.join(sorted(extra))}")
        return MaterialDb(
            material_from_config(e, f"{path}: material[{i}]")
            for i, e in enumerate(doc["material"])
        )
    return MaterialDb([material_from_config(doc, str(path))])


def _builtin():
    ag = Material(
        name="Ag",
        resistivity=convert(1.6e-6, "ohm*cm", "ohm*m"),
        debye_freq=KB * 225.0 / HBAR,
        surface_atom_mass=108.0 * AMU,
        eta=0.75,
    )
    glass = Material(name="glass", resistivity=convert(1e11, "ohm*cm", "ohm*m"))
    return MaterialDb([ag, glass])


_BUILTIN = _builtin()


def builtin_db():
    """Ag and glass with the parameter values of the reference curves."""
    return _BUILTIN
