"""Bichromatically driven Floquet qubit toolkit: quasienergy spectra, gap
sensitivities, dephasing lifetimes, and sweet/sour-spot analysis."""

from .analytic import (
    MultimodeParams,
    ResonanceIndex,
    StarkShift,
    bessel_j,
    bias_sensitivity_multimode,
    gap_multimode,
    gap_multimode_branch,
    gvv_bias_sensitivity,
    gvv_gap,
    optimal_base_frequency,
    rwa_gap,
    stark_shift_chi,
    theta,
)
from .floquet import (
    DriveConfig,
    FloquetSpectrum,
    TruncationConfig,
    build_extended_hamiltonian,
    default_truncation,
    diagonalize_symmetric,
    folded_gap_magnitude,
    fourier_weights,
    propagator_oracle,
    quasienergy_gap,
    select_physical_modes,
    solve_floquet,
)
from .noise import DephasingResult, NoiseModel, bose_occupation, dephasing_rate, spectral_density
from .sensitivity import gap_sensitivity_amplitude, gap_sensitivity_bias, verify_weight_identity
from .sweep import (
    GridSpec,
    SweepResult,
    SweetSpotReport,
    delta_scan,
    fast_drive_scan,
    find_sweet_spots,
    sweep_grid,
    sweep_line,
)

__version__ = "0.1.0"
