"""Quantum kicked-rotor simulation laboratory.

Propagates a rotor wavefunction through its exact one-period Floquet map,
splits every probability update into a Markovian (master-equation) part and
a quantum-interference residual, and provides the energy, entropy and
localization diagnostics needed to study dynamical localization under
periodic, random-interval and quasi-periodic kick schedules.
"""

__version__ = "0.1.0"

from .bessel import BesselBand, bessel_band
from .rotor import (
    Distribution,
    FloquetStep,
    QuantumState,
    apply_step_banded,
    apply_step_spectral,
    default_basis_halfwidth,
    initial_state,
    occupation,
)
from .markov import (
    InterferenceVector,
    TransitionMatrix,
    diffusion_coefficient,
    gaussian_reference,
    interference_residual,
    markov_step,
    rate_band,
    transition_band,
)
from .schedules import (
    GOLDEN_RATIO,
    KickSchedule,
    periodic_schedule,
    quasiperiodic_schedule,
    random_schedule,
)
from .diagnostics import (
    DiagnosticsRecord,
    InsufficientDataError,
    LocalizationFit,
    canonical_profile,
    energy,
    energy_decomposition,
    entropy,
    fit_localization,
    participation_number,
    saturation_kick,
    second_moment,
)
from .ensemble import (
    EdgeOccupationError,
    EnsembleResult,
    RunConfig,
    build_initial_set,
    run_ensemble,
)
from .config import ConfigError, parse_config

__all__ = [
    "BesselBand",
    "bessel_band",
    "Distribution",
    "FloquetStep",
    "QuantumState",
    "apply_step_banded",
    "apply_step_spectral",
    "default_basis_halfwidth",
    "initial_state",
    "occupation",
    "InterferenceVector",
    "TransitionMatrix",
    "diffusion_coefficient",
    "gaussian_reference",
    "interference_residual",
    "markov_step",
    "rate_band",
    "transition_band",
    "GOLDEN_RATIO",
    "KickSchedule",
    "periodic_schedule",
    "quasiperiodic_schedule",
    "random_schedule",
    "DiagnosticsRecord",
    "InsufficientDataError",
    "LocalizationFit",
    "canonical_profile",
    "energy",
    "energy_decomposition",
    "entropy",
    "fit_localization",
    "participation_number",
    "saturation_kick",
    "second_moment",
    "EdgeOccupationError",
    "EnsembleResult",
    "RunConfig",
    "build_initial_set",
    "run_ensemble",
    "ConfigError",
    "parse_config",
]
