"""cavidyn: semiclassical dynamics of many electronic two-level systems and
collective vibrations coupled to a lossy IR cavity mode.

The electronic ensemble is a reduced single-TLS density matrix under a
Lindblad equation; the cavity and the bright/dark collective vibrational
coordinates are classical oscillators coupled through the total mean dipole.
A short resonant pulse excites the electrons, the sudden change of the
collective permanent dipole pumps the cavity, and the resulting vibrational
polaritons dephase into the dark modes.
"""

__version__ = "0.1.0"

from .analytics import (
    ResonanceWeight,
    default_resonance_weight,
    fit_power_law,
    predicted_photon_gain,
    predicted_photon_gain_longtime,
    predicted_vibrational_gain,
    quench_oracle,
)
from .dynamics import (
    IntegrationError,
    StateDerivative,
    Trajectory,
    convergence_check,
    integrate,
    lindblad_dissipator,
    rhs,
    rk4_step,
)
from .model import (
    SystemState,
    dark_frequencies,
    effective_hamiltonian,
    electronic_dipole_matrix,
    initial_state,
    mean_total_dipole,
    pulse_field,
)
from .observables import (
    AnalysisError,
    EnergyReport,
    PolaritonPair,
    energies,
    excited_population,
    fit_exponential_lifetime,
    polariton_frequencies,
    rabi_splitting_from_trajectory,
)
from .params import ParameterError, Params, Pulse, default_params
from .sweep import SweepSpec, SweepTable, detuning_scan, run_sweep
from .units import convert_units

__all__ = [
    "AnalysisError",
    "EnergyReport",
    "IntegrationError",
    "ParameterError",
    "Params",
    "PolaritonPair",
    "Pulse",
    "ResonanceWeight",
    "StateDerivative",
    "SweepSpec",
    "SweepTable",
    "SystemState",
    "Trajectory",
    "convergence_check",
    "convert_units",
    "dark_frequencies",
    "default_params",
    "default_resonance_weight",
    "detuning_scan",
    "effective_hamiltonian",
    "electronic_dipole_matrix",
    "energies",
    "excited_population",
    "fit_exponential_lifetime",
    "fit_power_law",
    "initial_state",
    "integrate",
    "lindblad_dissipator",
    "mean_total_dipole",
    "polariton_frequencies",
    "predicted_photon_gain",
    "predicted_photon_gain_longtime",
    "predicted_vibrational_gain",
    "pulse_field",
    "quench_oracle",
    "rabi_splitting_from_trajectory",
    "rhs",
    "rk4_step",
    "run_sweep",
    "__version__",
]
