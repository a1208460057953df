"""Chiral and electric Casimir-Polder potentials of a driven two-level
molecule between two chiral mirrors, with ensemble trajectory statistics
for enantiomer separation."""

__version__ = "0.1.0"

from .constants import CONST, PhysicalConstants
from .core import (
    CavitySpec,
    DriveSpec,
    MirrorSpec,
    MoleculeSpec,
    Side,
    molecule_preset,
    molecule_preset_names,
    populations,
    rabi_from_intensity,
    symmetric_cavity,
    thermal_photon_number,
    time_averaged_populations,
)
from .dynamics import (
    EnsembleSpec,
    Fate,
    ForceField,
    SeparationReport,
    SeparationStats,
    TrajectoryState,
    energy_drift,
    force_field_pair,
    integrate_trajectory,
    run_ensemble,
    separation_report,
)
from .greens import (
    CavityRoundTrip,
    GreensConfig,
    trace_G_imaginary,
    trace_G_real_resonant,
    trace_curl_G_imaginary,
    trace_curl_G_real_resonant,
)
from .potential import (
    BarrierReport,
    PotentialComponents,
    PotentialConfig,
    State,
    alpha_isotropic,
    barrier_report,
    component_grid,
    driven_potential,
    force,
    gamma_rotatory,
    potential_components,
    potential_curve,
    potential_thermal,
    potential_zero_T,
)
from .quadrature import ConvergenceError, QuadratureConfig, SeriesConfig
from .scenarios import (
    ConfigError,
    RunManifest,
    ScenarioConfig,
    load_preset,
    load_scenario,
    preset_names,
    run_scenario,
)

__all__ = [
    "__version__",
    "CONST",
    "PhysicalConstants",
    "CavitySpec",
    "DriveSpec",
    "MirrorSpec",
    "MoleculeSpec",
    "Side",
    "molecule_preset",
    "molecule_preset_names",
    "populations",
    "rabi_from_intensity",
    "symmetric_cavity",
    "thermal_photon_number",
    "time_averaged_populations",
    "EnsembleSpec",
    "Fate",
    "ForceField",
    "SeparationReport",
    "SeparationStats",
    "TrajectoryState",
    "energy_drift",
    "force_field_pair",
    "integrate_trajectory",
    "run_ensemble",
    "separation_report",
    "CavityRoundTrip",
    "GreensConfig",
    "trace_G_imaginary",
    "trace_G_real_resonant",
    "trace_curl_G_imaginary",
    "trace_curl_G_real_resonant",
    "BarrierReport",
    "PotentialComponents",
    "PotentialConfig",
    "State",
    "alpha_isotropic",
    "barrier_report",
    "component_grid",
    "driven_potential",
    "force",
    "gamma_rotatory",
    "potential_components",
    "potential_curve",
    "potential_thermal",
    "potential_zero_T",
    "ConvergenceError",
    "QuadratureConfig",
    "SeriesConfig",
    "ConfigError",
    "RunManifest",
    "ScenarioConfig",
    "load_preset",
    "load_scenario",
    "preset_names",
    "run_scenario",
]
