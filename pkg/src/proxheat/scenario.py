"""
Scenario files, parameter sweeps and CSV tables.

A scenario is a TOML document with unit-suffixed keys::

    [scenario]
    materials = ["Ag", "glass"]      # names from the database or [[material]]
    channels = "auto"                # or a list of mechanism names
    method = "pipeline"              # or "closed_form"

    [particle]
    mass_amu = 40
    charge_e = 1                     # or charge_c
    moment_bohr = 1.0                # or moment_j_per_t, moment_h_mhz_per_g
    spin = 0.5
    spin_convention = "operator_spin_half"
    c3_h_khz_um3 = 1.0               # or c3_j_m3

    [trap]
    omega_t_hz = 1e6                 # cyclic frequency, omega_t = 2 pi f
    axis = [0, 0, 1]
    temperature_k = 300
    distance_um = 10                 # not needed when sweeping z

    [endcap]                         # optional
    resistance_ohm = 1.0
    distance_mm = 1.0

    [sweep]
    variable = "z"                   # z (min_um/max_um), omega_t (min_hz/max_hz), T (min_k/max_k)
    min_um = 0.3
    max_um = 1000
    points = 200
    spacing = "log"

Inline materials use the material-file keys inside ``[[material]]`` tables.
"""

import csv
from dataclasses import dataclass
from importlib import resources
import io
import os
import sys

import numpy as np

from .materials import MaterialDb, MaterialError, builtin_db, load_material_file, material_from_config
from .physcore import AMU, BOHR_MAGNETON, E_CHARGE, convert
from .rates import MECHANISMS, METHODS, EndcapCircuit, compute_all
from .trap import SPIN_CONVENTIONS, Particle, SpinSpec, TrapConfig, moment_expectation

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "Sweep",
    "Scenario",
    "SweepTable",
    "PRESETS",
    "load_preset",
    "load_scenario",
    "parse_scenario",
    "material_db",
    "run_scenario",
    "emit_csv",
    "format_csv",
    "read_csv",
    "parse_csv",
]

PRESETS = ("fig2-ion-ag", "fig3-spin-phonon")

# Material-independent channels appear once even with several materials.
SHARED_MECHANISMS = ("ion_blackbody", "ion_endcap")

# sweep variable -> (config unit suffix, converter to SI, SI unit label)
SWEEP_VARIABLES = {
    "z": ("um", lambda v: convert(v, "um", "m"), "m"),
    "omega_t": ("hz", lambda v: convert(v, "Hz", "rad/s"), "rad/s"),
    "T": ("k", float, "K"),
}
CSV_FORMAT = "{:.8e}"


class ConfigError(ValueError):
    """Scenario file could not be parsed or validated."""


@dataclass(frozen=True)
class Sweep:
    variable: str
    min: float
    max: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep.variable: must be one of {list(SWEEP_VARIABLES)}")
        if self.spacing not in ("log", "linear"):
            raise ConfigError("sweep.spacing: must be 'log' or 'linear'")
        if not self.min < self.max:
            raise ConfigError(f"sweep: min ({self.min}) must be < max ({self.max})")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise ConfigError(f"sweep.points: need an integer >= 2, got {self.points!r}")
        if self.spacing == "log" and not self.min > 0:
            raise ConfigError("sweep: log spacing needs min > 0")

    def grid(self):
        if self.spacing == "log":
            values = np.geomspace(self.min, self.max, self.points)
        else:
            values = np.linspace(self.min, self.max, self.points)
        values[0], values[-1] = self.min, self.max
        return [float(v) for v in values]


@dataclass(frozen=True)
class Scenario:
    materials: tuple
    particle: Particle
    trap: TrapConfig
    sweep: Sweep
    channels: object = "auto"
    method: str = "pipeline"
    endcap: EndcapCircuit | None = None
    spin: SpinSpec | None = None
    name: str = "scenario"


@dataclass
class SweepTable:
    """Rates over a sweep grid. ``rates[column][row]`` is None where a
    mechanism does not apply."""

    variable: str
    unit: str
    values: list
    columns: list
    rates: dict
    warnings: list
    name: str = ""

    def column(self, name):
        return self.rates[name]

    def __len__(self):
        return len(self.values)


def material_db(extra=None):
    """Built-in materials merged with PROXHEAT_MATERIALS and ``extra``."""
    db = builtin_db()
    path = os.environ.get("PROXHEAT_MATERIALS")
    if path:
        db = db.merged(load_material_file(path))
    if extra is not None:
        db = db.merged(extra)
    return db


def _take(section, where, allowed):
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _number(section, key, where, required=False, positive=False):
    if key not in section:
        if required:
            raise ConfigError(f"{where}.{key}: required")
        return None
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{where}.{key}: must be > 0, got {value}")
    return float(value)


def _one_of(section, keys, where, required=False):
    present = [k for k in keys if k in section]
    if len(present) > 1:
        raise ConfigError(f"{where}: give only one of {', '.join(present)}")
    if not present:
        if required:
            raise ConfigError(f"{where}: one of {', '.join(keys)} is required")
        return None, None
    key = present[0]
    return key, _number(section, key, where)


def _table(doc, key):
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected a table")
    return value


def _parse_particle(sec):
    where = "particle"
    _take(sec, where, {"mass_amu", "mass_kg", "charge_e", "charge_c", "moment_bohr",
                       "moment_j_per_t", "moment_h_mhz_per_g", "moment_expect_j2_per_t2",
                       "spin", "spin_convention", "c3_h_khz_um3", "c3_j_m3"})
    key, mass = _one_of(sec, ("mass_amu", "mass_kg"), where, required=True)
    mass = mass * AMU if key == "mass_amu" else mass
    key, charge = _one_of(sec, ("charge_e", "charge_c"), where)
    charge = 0.0 if charge is None else (charge * E_CHARGE if key == "charge_e" else charge)
    key, moment = _one_of(sec, ("moment_bohr", "moment_j_per_t", "moment_h_mhz_per_g",
                                "moment_expect_j2_per_t2"), where)
    spin = None
    moment_expect = 0.0
    if key == "moment_expect_j2_per_t2":
        moment_expect = moment
    elif key is not None:
        magnitude = {"moment_bohr": moment * BOHR_MAGNETON,
                     "moment_j_per_t": moment,
                     "moment_h_mhz_per_g": convert(moment, "h*MHz/G", "J/T")}[key]
        conv = sec.get("spin_convention", "operator_spin_half")
        if conv not in SPIN_CONVENTIONS:
            raise ConfigError(f"{where}.spin_convention: must be one of {SPIN_CONVENTIONS}")
        s = _number(sec, "spin", where)
        try:
            spin = SpinSpec(magnitude, 0.5 if s is None else s, conv)
            moment_expect = moment_expectation(spin)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    key, c3 = _one_of(sec, ("c3_h_khz_um3", "c3_j_m3"), where)
    c3 = 0.0 if c3 is None else (convert(c3, "h*kHz*um^3", "J*m^3") if key == "c3_h_khz_um3" else c3)
    try:
        return Particle(mass, charge, moment_expect, c3), spin
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse_sweep(sec):
    where = "sweep"
    variable = sec.get("variable")
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(f"{where}.variable: must be one of {list(SWEEP_VARIABLES)}, got {variable!r}")
    suffix, to_si, _ = SWEEP_VARIABLES[variable]
    lo_key, hi_key = f"min_{suffix}", f"max_{suffix}"
    _take(sec, where, {"variable", "points", "spacing", lo_key, hi_key})
    lo = to_si(_number(sec, lo_key, where, required=True))
    hi = to_si(_number(sec, hi_key, where, required=True))
    return Sweep(variable, lo, hi, sec.get("points", 0), sec.get("spacing", "log"))


def parse_scenario(doc, name="scenario", db=None):
    """Validate a parsed TOML mapping into a :class:`Scenario`."""
    _take(doc, "top level", {"scenario", "material", "particle", "trap", "endcap", "sweep"})
    inline = doc.get("material", [])
    if not isinstance(inline, list):
        raise ConfigError("material: expected [[material]] tables")
    try:
        extra = MaterialDb(material_from_config(e, f"material[{i}]") for i, e in enumerate(inline))
    except MaterialError as exc:
        raise ConfigError(str(exc)) from None
    db = (db if db is not None else material_db()).merged(extra)

    head = _table(doc, "scenario")
    _take(head, "scenario", {"materials", "material", "channels", "method", "name"})
    names = head.get("materials", head.get("material", []))
    if isinstance(names, str):
        names = [names]
    if not names:
        raise ConfigError("scenario.materials: at least one material is required")
    try:
        materials = tuple(db[n] for n in names)
    except KeyError as exc:
        raise ConfigError(f"scenario.materials: {exc.args[0]}") from None
    channels = head.get("channels", "auto")
    if channels != "auto":
        if not isinstance(channels, list) or not set(channels) <= set(MECHANISMS):
            raise ConfigError(f"scenario.channels: 'auto' or a list from {MECHANISMS}")
        channels = tuple(channels)
    method = head.get("method", "pipeline")
    if method not in METHODS:
        raise ConfigError(f"scenario.method: must be one of {METHODS}")

    particle, spin = _parse_particle(_table(doc, "particle"))
    sweep = _parse_sweep(_table(doc, "sweep"))

    sec = _table(doc, "trap")
    _take(sec, "trap", {"omega_t_hz", "axis", "temperature_k", "distance_um"})
    f_t = _number(sec, "omega_t_hz", "trap", required=sweep.variable != "omega_t", positive=True)
    T = _number(sec, "temperature_k", "trap", required=sweep.variable != "T")
    z = _number(sec, "distance_um", "trap", required=sweep.variable != "z", positive=True)
    axis = sec.get("axis", [0.0, 0.0, 1.0])
    try:
        trap = TrapConfig(
            omega_t=convert(f_t, "Hz", "rad/s") if f_t is not None else sweep.min,
            n=tuple(axis),
            z=convert(z, "um", "m") if z is not None else sweep.min,
            T_env=T if T is not None else sweep.min,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"trap: {exc}") from None

    endcap = None
    if "endcap" in doc:
        sec = _table(doc, "endcap")
        _take(sec, "endcap", {"resistance_ohm", "distance_mm", "distance_m"})
        r = _number(sec, "resistance_ohm", "endcap", required=True, positive=True)
        key, d = _one_of(sec, ("distance_mm", "distance_m"), "endcap", required=True)
        d = convert(d, "mm", "m") if key == "distance_mm" else d
        try:
            endcap = EndcapCircuit(r, d)
        except ValueError as exc:
            raise ConfigError(f"endcap: {exc}") from None

    return Scenario(materials, particle, trap, sweep, channels, method, endcap, spin,
                    head.get("name", name))


def _parse_text(text, source):
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_scenario(path, db=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_scenario(_parse_text(text, path), stem, db)


def load_preset(name, db=None):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    text = resources.files("proxheat").joinpath("presets", f"{name}.toml").read_text("utf-8")
    return parse_scenario(_parse_text(text, name), name, db)


def _column_name(mechanism, material, n_materials):
    if n_materials == 1 or mechanism in SHARED_MECHANISMS:
        return mechanism
    return f"{mechanism}[{material.name}]"


def run_scenario(scenario):
    """Evaluate every applicable mechanism at each sweep point."""
    grid = scenario.sweep.grid()
    var = scenario.sweep.variable
    field_name = {"z": "z", "omega_t": "omega_t", "T": "T_env"}[var]
    rows = []
    for value in grid:
        trap = scenario.trap.at(**{field_name: value})
        row, notes = {}, []
        for i, material in enumerate(scenario.materials):
            results = compute_all(
                trap, scenario.particle, material,
                endcap=scenario.endcap if i == 0 else None,
                channels=scenario.channels, method=scenario.method,
            )
            for r in results:
                if i > 0 and r.mechanism in SHARED_MECHANISMS:
                    continue
                col = _column_name(r.mechanism, material, len(scenario.materials))
                row[col] = r.rate
                notes.extend(f"{col}: {w}" for w in r.warnings)
        rows.append((row, list(dict.fromkeys(notes))))

    columns = []
    for material in scenario.materials:
        for mech in MECHANISMS:
            col = _column_name(mech, material, len(scenario.materials))
            if col not in columns and any(col in row for row, _ in rows):
                columns.append(col)
    rates = {c: [row.get(c) for row, _ in rows] for c in columns}
    return SweepTable(var, SWEEP_VARIABLES[var][2], grid, columns, rates,
                      ["; ".join(n) for _, n in rows], scenario.name)


def _header_var(table):
    return f"{table.variable}_{table.unit.replace('/', '_')}"


def format_csv(table):
    """CSV text: a '#' comment line with units, a header, one row per point."""
    buf = io.StringIO()
    buf.write(f"# proxheat {table.name}: {table.variable} in {table.unit}, "
              "rates Gamma(1<-0) in 1/s, SI units throughout\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([_header_var(table), *table.columns, "warnings"])
    for i, value in enumerate(table.values):
        cells = [CSV_FORMAT.format(value)]
        for col in table.columns:
            rate = table.rates[col][i]
            cells.append("" if rate is None else CSV_FORMAT.format(rate))
        cells.append(table.warnings[i])
        writer.writerow(cells)
    return buf.getvalue()


def emit_csv(table, path):
    """Write :func:`format_csv` output to ``path`` (``"-"`` for stdout)."""
    text = format_csv(table)
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read())


def parse_csv(text):
    """Inverse of :func:`format_csv`."""
    lines = text.splitlines()
    name = ""
    if lines and lines[0].startswith("#"):
        name = lines[0][len("# proxheat "):].split(":", 1)[0]
        lines = lines[1:]
    reader = csv.reader(lines)
    header = next(reader)
    var, _, unit = header[0].partition("_")
    if var == "omega":  # omega_t_rad_s
        var, unit = "omega_t", "rad/s"
    elif unit == "rad_s":
        unit = "rad/s"
    columns = header[1:-1]
    values, warnings = [], []
    rates = {c: [] for c in columns}
    for row in reader:
        values.append(float(row[0]))
        for col, cell in zip(columns, row[1:-1]):
            rates[col].append(None if cell == "" else float(cell))
        warnings.append(row[-1])
    return SweepTable(var, unit, values, columns, rates, warnings, name)
