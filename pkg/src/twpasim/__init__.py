"""Simulation and calibration toolkit for SNAIL-based traveling-wave
parametric amplifiers: flux-tunable nonlinearities, dispersion and phase
matching, four-wave-mixing gain with loss, quantum-limited added noise,
ladder-network impedance analysis, time-domain harmonic generation, and
parameter-extraction fits."""

from .coupled_mode import (
    CoupledModeSystem,
    GainPoint,
    PumpDrive,
    analytic_gain_lossless,
    gain_profile,
    kerr_phase_shifts,
    phase_matched_frequencies,
    propagate,
    pump_amplitude_from_power,
    total_mismatch,
)
from .dispersion import (
    LossProfile,
    delta_k_dispersion,
    kappa_from_loss,
    transmitted_phase,
    wavevector,
)
from .fitting import (
    CurveFitProblem,
    FitResult,
    fit_dispersion_phase,
    fit_flux_dependence,
    least_squares,
    unwrap_phase,
)
from .network import (
    LadderSpec,
    TwoPortABCD,
    cell_abcd,
    chain,
    characteristic_impedance,
    reflection_from_impedance,
    ripple_peak_to_peak,
    transmission,
)
from .noise import (
    NoiseFit,
    NoiseRecord,
    RadiometerSample,
    fit_output_line,
    fit_twpa_noise,
    occupation_photons,
    photons_to_kelvin,
    simulate_added_noise,
    source_occupation,
    synthesize_radiometer,
)
from .snail import (
    OperatingPoint,
    SnailParameters,
    alternating_polarity,
    flux_sweep,
    g3_maximal_flux,
    operating_point,
    solve_steady_phase,
)
from .transient import (
    Lattice,
    LatticeState,
    TransientConfig,
    TransientResult,
    build_lattice,
    integrate,
    second_harmonic_ratio,
    spectrum,
    total_energy,
)

__version__ = "0.1.0"
