"""Casimir energies of magnetodielectric half-spaces and where they change sign."""

__version__ = "0.1.0"

from .energy import (  # noqa: E402
    EnergyCoefficient,
    Regime,
    Sign,
    SlabConfig,
    ball_force_coefficient,
    classify,
    conductor_vs_material_energy,
    crossover_temperature,
    high_temperature_free_energy,
    impedance_energy,
    pair_potential,
    slab_energy,
    slab_energy_oracle,
    uvl_energy,
)
from .media import (  # noqa: E402
    Impedance,
    Material,
    Polarizability,
    reflection_impedance_limit,
    reflection_te,
    reflection_tm,
)
from .output import phase_map_from_json, serialize_boundary, serialize_phase_map  # noqa: E402
from .phase import BoundaryCurve, PhaseMap, SweepAxis, sweep, trace_boundary  # noqa: E402
from .quadrature import ConvergenceError, QuadratureSpec  # noqa: E402
from .specfun import polylog  # noqa: E402

__all__ = [
    "BoundaryCurve",
    "ConvergenceError",
    "EnergyCoefficient",
    "Impedance",
    "Material",
    "PhaseMap",
    "Polarizability",
    "QuadratureSpec",
    "Regime",
    "Sign",
    "SlabConfig",
    "SweepAxis",
    "ball_force_coefficient",
    "classify",
    "conductor_vs_material_energy",
    "crossover_temperature",
    "high_temperature_free_energy",
    "impedance_energy",
    "pair_potential",
    "phase_map_from_json",
    "polylog",
    "reflection_impedance_limit",
    "reflection_te",
    "reflection_tm",
    "serialize_boundary",
    "serialize_phase_map",
    "slab_energy",
    "slab_energy_oracle",
    "sweep",
    "trace_boundary",
    "uvl_energy",
]
