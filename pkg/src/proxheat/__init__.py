"""Heating rates of harmonically trapped particles near thermal surfaces."""

from .materials import Material, MaterialDb, builtin_db
from .physcore import CONSTANTS, Quantity, convert, thermal_energy
from .rates import RateResult, compute_all
from .scenario import Scenario, SweepTable, load_preset, load_scenario, run_scenario
from .trap import Particle, SpinSpec, TrapConfig

__all__ = [
    "CONSTANTS",
    "Material",
    "MaterialDb",
    "Particle",
    "Quantity",
    "RateResult",
    "Scenario",
    "SpinSpec",
    "SweepTable",
    "TrapConfig",
    "builtin_db",
    "compute_all",
    "convert",
    "load_preset",
    "load_scenario",
    "run_scenario",
    "thermal_energy",
]

__version__ = "0.1.0"
