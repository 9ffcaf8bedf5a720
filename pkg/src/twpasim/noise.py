"""Thermal-source radiometry, noise-calibration fits, and added-noise simulation.

A thermal source at temperature T emits the symmetrized spectral density

    N_source(omega, T) = (hbar*omega/2) * coth(hbar*omega / 2*k_B*T)

watts per hertz (half a photon at T -> 0, k_B*T in the Rayleigh-Jeans limit).

Output-line calibration fits P = (N_source + N_out) * G_out * B_w per
frequency by linear least squares in N_source. The amplifier-on fit uses the
high-gain two-mode model

    P = {N_src(w_s)*G(w_s) + N_T*G(w_s) + N_src(w_i)*G(w_i) + N_out} * G_out * B_w,

where the idler input term exists because a broadband source illuminates both
coupled modes; dropping it (the single-mode model) biases the fitted added
noise low, by up to a factor of two when the idler input approaches the
signal input. By default the idler-path power gain is tied to the fitted
signal gain as G(w_i) = G(w_s) - 1 (the photon-number relation of a
phase-preserving pair amplifier); an independently measured idler gain can be
supplied instead.

Added-noise simulation propagates symmetrized second moments through the
lossy coupled-mode line. Each cell attenuates and injects an independent
half-photon-occupation source; the per-cell source power coefficient is
1 - exp(-2*kappa''), the unique choice that preserves the field commutator
exactly through a pure-loss chain (a plain sqrt(kappa'') source does not).
In the lossless limit the loss sum vanishes identically and commutator
preservation of the two-mode squeezer pins the input-referred added noise to
half a photon at high gain, the standard quantum limit.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, K_B
from .coupled_mode import CoupledModeSystem, PumpDrive, propagate
from .dispersion import LossProfile
from .errors import DataError, FitDegenerateError
from .snail import OperatingPoint

SINGLE_MODE = "single-mode"
TWO_MODE = "two-mode"


def source_occupation(omega: float, t: float) -> float:
    """Symmetrized thermal spectral density, watts per hertz."""
    if omega <= 0 or t <= 0:
        raise ValueError("omega and t must be positive")
    x = HBAR * omega / (2.0 * K_B * t)
    return (HBAR * omega / 2.0) / math.tanh(x)


def occupation_photons(omega: float, t: float) -> float:
    """Symmetrized occupation in photons at omega."""
    return source_occupation(omega, t) / (HBAR * omega)


def photons_to_kelvin(omega: float, n_photons: float) -> float:
    """Display conversion T = hbar*omega*N/k_B for quoting noise in kelvin."""
    return HBAR * omega * n_photons / K_B


@dataclass(frozen=True)
class RadiometerSample:
    """One (frequency, source temperature, power-in-bandwidth) measurement."""

    omega: float
    t_source: float
    psd_watts: float
    b_w: float

    def __post_init__(self):
        if self.t_source <= 0 or self.psd_watts <= 0 or self.b_w <= 0:
            raise ValueError("t_source, psd_watts and b_w must be positive")


@dataclass(frozen=True)
class NoiseRecord:
    """Fit results at one frequency. Photon numbers are referred to omega."""

    omega: float
    g_out: float
    n_out: float
    g_out_err: float = 0.0
    n_out_err: float = 0.0
    g_twpa: float | None = None
    n_twpa: float | None = None
    g_twpa_err: float | None = None
    n_twpa_err: float | None = None
    model_kind: str | None = None

    def __post_init__(self):
        if self.g_out <= 0:
            raise ValueError("g_out must be positive")
        # n_twpa below half a photon is allowed: it is the diagnostic
        # signature of the single-mode fit bias, not an input error.


@dataclass(frozen=True)
class NoiseFit:
    """Per-frequency noise-fit records."""

    records: tuple[NoiseRecord, ...]

    def at(self, omega: float) -> NoiseRecord:
        for rec in self.records:
            if rec.omega == omega:
                return rec
        raise DataError(
            f"no calibration record at omega/2pi = {omega / (2e9 * math.pi):.4f} GHz"
        )


def _group_by_omega(samples):
    groups: dict[float, list[RadiometerSample]] = {}
    for s in samples:
        groups.setdefault(s.omega, []).append(s)
    return groups


def _lls(x: np.ndarray, y: np.ndarray):
    """Least squares y = slope*x + intercept with standard errors."""
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = max(len(x) - 2, 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    return coef[0], coef[1], math.sqrt(max(cov[0, 0], 0.0)), math.sqrt(max(cov[1, 1], 0.0))


def fit_output_line(samples) -> NoiseFit:
    """Fit (G_out, N_out) per frequency from source-temperature sweeps.

    Requires at least three distinct temperatures per frequency spanning a
    factor of five in N_source. Returns photon-unit records with standard
    errors.
    """
    records = []
    for omega, grp in sorted(_group_by_omega(samples).items()):
        temps = sorted({s.t_source for s in grp})
        if len(temps) < 3:
            raise FitDegenerateError(
                f"need >= 3 distinct source temperatures at "
                f"{omega / (2e9 * math.pi):.4f} GHz, got {len(temps)}"
            )
        n_src = np.array([occupation_photons(s.omega, s.t_source) for s in grp])
        if n_src.max() / n_src.min() < 5.0:
            raise FitDegenerateError(
                f"source occupation spans only x{n_src.max() / n_src.min():.2f} "
                f"at {omega / (2e9 * math.pi):.4f} GHz; need >= x5"
            )
        b_w = grp[0].b_w
        hw = HBAR * omega
        y = np.array([s.psd_watts for s in grp]) / (b_w * hw)
        slope, intercept, s_err, i_err = _lls(n_src, y)
        if slope <= 0 or not math.isfinite(slope):
            raise FitDegenerateError("non-positive fitted output gain")
        n_out = intercept / slope
        n_out_err = abs(n_out) * math.hypot(
            i_err / intercept if intercept != 0 else 0.0, s_err / slope
        )
        records.append(
            NoiseRecord(
                omega=omega,
                g_out=slope,
                n_out=n_out,
                g_out_err=s_err,
                n_out_err=n_out_err,
            )
        )
    return NoiseFit(tuple(records))


def fit_twpa_noise(
    samples,
    out_calibration: NoiseFit,
    omega_p: float,
    model_kind: str = TWO_MODE,
    idler_gain: dict[float, float] | None = None,
    t_max: float = 0.4,
) -> NoiseFit:
    """Fit (G_twpa, N_twpa) per frequency on top of an output-line calibration.

    Samples above t_max (default 400 mK, where source power approaches
    amplifier saturation) are discarded. model_kind selects the two-mode
    model (idler input included) or the single-mode model (idler dropped).
    idler_gain optionally maps omega_s to an independently measured idler
    power gain; otherwise the idler gain is tied to the fitted signal gain
    minus one.
    """
    if model_kind not in (SINGLE_MODE, TWO_MODE):
        raise ValueError(f"unknown model kind {model_kind!r}")
    records = []
    for omega, grp in sorted(_group_by_omega(samples).items()):
        grp = [s for s in grp if s.t_source <= t_max]
        cal = out_calibration.at(omega)
        temps = sorted({s.t_source for s in grp})
        if len(temps) < 3:
            raise FitDegenerateError(
                f"need >= 3 distinct temperatures <= {t_max} K at "
                f"{omega / (2e9 * math.pi):.4f} GHz"
            )
        n_s = np.array([occupation_photons(omega, s.t_source) for s in grp])
        if n_s.max() / n_s.min() < 1.2:
            raise FitDegenerateError("insufficient source-temperature spread")
        omega_i = 2.0 * omega_p - omega
        if omega_i <= 0:
            raise ValueError("idler frequency non-positive")
        hw = HBAR * omega
        b_w = grp[0].b_w
        # Everything in photons at omega_s; the idler term scales by
        # omega_i/omega_s to stay in watts-per-hertz-equivalent units.
        p_norm = np.array([s.psd_watts for s in grp]) / (b_w * hw * cal.g_out)
        if model_kind == SINGLE_MODE:
            y = p_norm - cal.n_out
            slope, intercept, s_err, i_err = _lls(n_s, y)
        else:
            n_i = np.array(
                [occupation_photons(omega_i, s.t_source) for s in grp]
            ) * (omega_i / omega)
            if idler_gain is not None:
                g_i = idler_gain[omega]
                y = p_norm - cal.n_out - g_i * n_i
                slope, intercept, s_err, i_err = _lls(n_s, y)
            else:
                y = p_norm - cal.n_out + n_i
                slope, intercept, s_err, i_err = _lls(n_s + n_i, y)
        if slope <= 0 or not math.isfinite(slope):
            raise FitDegenerateError("non-positive fitted amplifier gain")
        n_twpa = intercept / slope
        n_err = abs(n_twpa) * math.hypot(
            i_err / intercept if intercept != 0 else 0.0, s_err / slope
        )
        records.append(
            NoiseRecord(
                omega=omega,
                g_out=cal.g_out,
                n_out=cal.n_out,
                g_out_err=cal.g_out_err,
                n_out_err=cal.n_out_err,
                g_twpa=slope,
                n_twpa=n_twpa,
                g_twpa_err=s_err,
                n_twpa_err=n_err,
                model_kind=model_kind,
            )
        )
    return NoiseFit(tuple(records))


def synthesize_radiometer(
    truth: NoiseFit,
    temperatures,
    b_w: float,
    seed: int,
    noise_fraction: float = 0.0,
    omega_p: float | None = None,
) -> list[RadiometerSample]:
    """Generate radiometer samples from a forward noise model.

    Records carrying amplifier parameters use the model_kind stored on them
    (two-mode synthesis needs omega_p); records without amplifier parameters
    use the bare output-line model. Deterministic for a fixed seed; optional
    multiplicative Gaussian noise of the given fraction.
    """
    temps = list(temperatures)
    if not temps:
        raise ValueError("temperatures must be non-empty")
    rng = np.random.default_rng(seed)
    samples = []
    for rec in truth.records:
        hw = HBAR * rec.omega
        for t in temps:
            n_src = occupation_photons(rec.omega, t)
            if rec.g_twpa is None:
                level = (n_src + rec.n_out) * rec.g_out
            else:
                level = rec.g_twpa * (n_src + rec.n_twpa)
                if rec.model_kind != SINGLE_MODE:
                    if omega_p is None:
                        raise ValueError("two-mode synthesis needs omega_p")
                    omega_i = 2.0 * omega_p - rec.omega
                    n_i = occupation_photons(omega_i, t) * (omega_i / rec.omega)
                    level += (rec.g_twpa - 1.0) * n_i
                level = (level + rec.n_out) * rec.g_out
            p = level * b_w * hw
            if noise_fraction > 0:
                p *= 1.0 + noise_fraction * rng.standard_normal()
            samples.append(
                RadiometerSample(omega=rec.omega, t_source=t, psd_watts=p, b_w=b_w)
            )
    return samples


def _propagator_sequence(system: CoupledModeSystem) -> tuple[np.ndarray, np.ndarray]:
    """|S(m)_11|^2 and |S(m)_12|^2 for m = 0 .. N-1."""
    gen = system.generator()
    n = system.n_cells
    lam, vec = np.linalg.eig(gen)
    if abs(lam[0] - lam[1]) > 1e-12 * max(1.0, abs(lam[0]), abs(lam[1])):
        vinv = np.linalg.inv(vec)
        ms = np.arange(n)[:, None]
        growth = np.exp(ms * lam[None, :])
        s11 = growth @ (vec[0, :] * vinv[:, 0])
        s12 = growth @ (vec[0, :] * vinv[:, 1])
        return np.abs(s11) ** 2, np.abs(s12) ** 2
    # near-defective generator: step cell by cell
    s = np.eye(2, dtype=complex)
    step = propagate(dataclasses.replace(system, n_cells=1))
    s11 = np.empty(n)
    s12 = np.empty(n)
    for m in range(n):
        s11[m] = abs(s[0, 0]) ** 2
        s12[m] = abs(s[0, 1]) ** 2
        s = step @ s
    return s11, s12


def simulate_added_noise(
    op: OperatingPoint,
    pump: PumpDrive,
    loss: LossProfile,
    omega_s: float,
    n_cells: int,
) -> float:
    """Input-referred added noise in photons (symmetrized, high-gain convention).

    The signal-mode output fluctuation is

        n_out = |S11|^2/2 + |S12|^2/2
              + sum_m [ |S(m)_11|^2 eps_s + |S(m)_12|^2 eps_i ] / 2,

    with per-cell source power eps = 1 - exp(-2*kappa''), and the added noise
    is (n_out - |S11|^2/2) / |S11|^2: the output excess over the amplified
    signal vacuum, referred to the input. Lossless and at high gain this is
    exactly half a photon (total input-referred noise of one photon).
    """
    system = CoupledModeSystem.from_operating_point(op, omega_s, pump, n_cells, loss)
    return added_noise_of_system(system)


def added_noise_of_system(system: CoupledModeSystem) -> float:
    """Added noise of an explicitly constructed coupled-mode system."""
    s = propagate(system)
    g11 = abs(s[0, 0]) ** 2
    g12 = abs(s[0, 1]) ** 2
    eps_s = 1.0 - math.exp(-2.0 * system.kappa2_s)
    eps_i = 1.0 - math.exp(-2.0 * system.kappa2_i)
    if eps_s == 0.0 and eps_i == 0.0:
        loss_sum = 0.0
    else:
        s11m, s12m = _propagator_sequence(system)
        loss_sum = float(eps_s * s11m.sum() + eps_i * s12m.sum())
    return (g12 + loss_sum) / (2.0 * g11)
