"""Command-line entry point: figure-reproduction and calibration workflows.

Every subcommand is driven by a declarative JSON run file, writes delimited
output plus rendered figures into the output directory, and finishes with a
manifest recording the configuration hash, versions, seed and per-file
content hashes. Exit codes: 0 success, 2 configuration error, 3 data error,
4 solver failure, 5 model-validity error.
"""

from __future__ import annotations

import csv
import dataclasses
import functools
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .config import GHZ, RunConfig, load_run_config
from .coupled_mode import PumpDrive, gain_profile, phase_matched_frequencies
from .dispersion import LossProfile, kappa_from_loss, wavevector
from .errors import (
    ConfigError,
    DataError,
    ModelValidityError,
    SolverError,
    TwpasimError,
)
from .fitting import fit_dispersion_phase, fit_flux_dependence
from .network import LadderSpec, characteristic_impedance, ripple_peak_to_peak, transmission
from .noise import (
    RadiometerSample,
    fit_output_line,
    fit_twpa_noise,
    photons_to_kelvin,
    simulate_added_noise,
)
from .reports import band_figure, line_figure, write_csv, write_manifest
from .snail import flux_sweep, g3_maximal_flux, operating_point
from .transient import (
    TransientConfig,
    build_lattice,
    integrate,
    second_harmonic_ratio,
    spectrum,
)

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_SOLVER = 4
EXIT_MODEL = 5


def _exit_code(exc: TwpasimError) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, DataError):
        return EXIT_DATA
    if isinstance(exc, ModelValidityError):
        return EXIT_MODEL
    if isinstance(exc, SolverError):
        return EXIT_SOLVER
    return EXIT_SOLVER


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TwpasimError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


def common_options(fn):
    fn = click.option(
        "--config", "-c", "config_path", required=True, type=click.Path(), help="Run file (JSON)."
    )(fn)
    fn = click.option(
        "--out", "-o", "out_dir", required=True, type=click.Path(), help="Output directory."
    )(fn)
    fn = click.option(
        "--set",
        "-s",
        "overrides",
        multiple=True,
        help="Override a run-file entry, e.g. -s gain.pump_freq_ghz=6.0",
    )(fn)
    return fn


def _prepare(config_path, out_dir, overrides=()) -> tuple[RunConfig, Path]:
    cfg = load_run_config(config_path, overrides)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return cfg, out


def _flux_rad(section, key="flux_quanta", default=0.5):
    return 2.0 * math.pi * float(section.get(key, default))


def _pump_from_section(section) -> PumpDrive:
    omega_p = float(section["pump_freq_ghz"]) * GHZ
    amp = section.get("pump_amplitude_rad")
    dbm = section.get("pump_power_dbm")
    if (amp is None) == (dbm is None):
        raise ConfigError("give exactly one of pump_amplitude_rad and pump_power_dbm")
    if amp is not None:
        return PumpDrive(omega_p=omega_p, a_p0=float(amp))
    return PumpDrive(omega_p=omega_p, input_power_dbm=float(dbm))


def _grid_ghz(section, lo=4.0, hi=12.0, n=161):
    f_min = float(section.get("f_min_ghz", lo))
    f_max = float(section.get("f_max_ghz", hi))
    n_points = int(section.get("n_points", n))
    if not (f_max > f_min > 0) or n_points < 2:
        raise ConfigError("need f_max_ghz > f_min_ghz > 0 and n_points >= 2")
    return np.linspace(f_min, f_max, n_points)


def _load_loss(section, key) -> LossProfile:
    if key not in section:
        raise ConfigError(f"missing '{key}' in run file block")
    path = Path(section[key])
    if not path.exists():
        raise DataError(f"loss profile file not found: {path}")
    return LossProfile.from_csv(path)


@click.group()
@click.version_option(version=__version__, prog_name="twpasim")
def main():
    """Simulation and calibration workflows for nonlinear amplifier lines."""


@main.command("cell-sweep")
@common_options
@guarded
def cell_sweep_cmd(config_path, out_dir, overrides):
    """Flux sweep of the unit cell's coefficients and mixing rates."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.sections.get("cell_sweep", {})
    n_points = int(section.get("n_points", 401))
    ops = flux_sweep(cfg.device, n_points)
    rows = [
        (
            op.phi_ext / (2.0 * math.pi),
            op.phi_star,
            op.alpha,
            op.beta,
            op.gamma,
            op.l_cell * 1e12,
            op.z_char,
            op.omega0 / GHZ,
            op.omega_j / GHZ,
            op.g3 / (2e6 * math.pi),
            op.g4 / (2e6 * math.pi),
        )
        for op in ops
    ]
    files = [
        write_csv(
            out / "cell_sweep.csv",
            [
                "flux_quanta",
                "phi_star_rad",
                "alpha",
                "beta",
                "gamma",
                "l_ph",
                "z_ohm",
                "f0_ghz",
                "fj_ghz",
                "g3_mhz",
                "g4_mhz",
            ],
            rows,
        )
    ]
    flux = [r[0] for r in rows]
    files.append(
        line_figure(
            out / "cell_sweep.png",
            flux,
            [[r[10] for r in rows], [r[9] for r in rows]],
            ["four-wave rate g4", "three-wave rate g3"],
            "external flux (flux quanta)",
            "rate / 2pi (MHz)",
            "Flux-tunable nonlinear rates",
        )
    )
    files.append(write_manifest(out, "cell-sweep", cfg.raw_text, cfg.seed, files))
    click.echo(f"cell-sweep: wrote {len(files)} files to {out}")


@main.command("dispersion")
@common_options
@guarded
def dispersion_cmd(config_path, out_dir, overrides):
    """Pump-off wavevector and transmitted phase across a frequency grid."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.sections.get("dispersion", {})
    op = operating_point(cfg.device, _flux_rad(section))
    theta0 = float(section.get("theta0_rad", 0.0))
    grid = _grid_ghz(section, lo=0.5, hi=14.0, n=271)
    ks = [wavevector(op, f * GHZ) for f in grid]
    rows = [
        (f, k, theta0 + cfg.device.n_cells * k) for f, k in zip(grid, ks)
    ]
    files = [
        write_csv(
            out / "dispersion.csv",
            ["freq_ghz", "k_rad_per_cell", "phase_rad"],
            rows,
        )
    ]
    files.append(
        line_figure(
            out / "dispersion.png",
            grid,
            [ks],
            ["k"],
            "frequency (GHz)",
            "wavevector (rad/cell)",
            "Linear dispersion",
        )
    )
    files.append(write_manifest(out, "dispersion", cfg.raw_text, cfg.seed, files))
    click.echo(f"dispersion: wrote {len(files)} files to {out}")


@main.command("gain")
@common_options
@guarded
def gain_cmd(config_path, out_dir, overrides):
    """Lossy four-wave-mixing gain profile at one pump setting."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("gain")
    op = operating_point(cfg.device, _flux_rad(section))
    pump = _pump_from_section(section)
    loss = _load_loss(section, "loss_profile")
    grid = _grid_ghz(section)
    points = gain_profile(op, pump, loss, grid * GHZ, cfg.device.n_cells)
    rows = [
        (p.omega_s / GHZ, p.gain_db, p.delta_k_out) for p in points
    ]
    files = [
        write_csv(
            out / "gain_profile.csv",
            ["f_signal_ghz", "gain_db", "delta_k_out_rad"],
            rows,
        )
    ]
    f_sig = [r[0] for r in rows]
    loss_db = [
        -20.0 * kappa_from_loss(loss, cfg.device.n_cells, f * GHZ)
        * cfg.device.n_cells / math.log(10.0)
        for f in f_sig
    ]
    rel = [r[1] - l for r, l in zip(rows, loss_db)]
    files.append(
        line_figure(
            out / "gain_profile.png",
            f_sig,
            [[r[1] for r in rows], rel],
            ["absolute 20 log10 |S11|", "pump-on/pump-off"],
            "signal frequency (GHz)",
            "gain (dB)",
            f"Gain, pump at {pump.omega_p / GHZ:.3g} GHz",
        )
    )
    files.append(write_manifest(out, "gain", cfg.raw_text, cfg.seed, files))
    click.echo(f"gain: wrote {len(files)} files to {out}")


@main.command("phase-match")
@common_options
@guarded
def phase_match_cmd(config_path, out_dir, overrides):
    """Zero crossings of the total phase mismatch around the pump."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("phase_match")
    op = operating_point(cfg.device, _flux_rad(section))
    pump = _pump_from_section(section)
    roots = phase_matched_frequencies(op, pump)
    rows = [
        (pump.omega_p / GHZ, w / GHZ, (2.0 * pump.omega_p - w) / GHZ) for w in roots
    ]
    files = [
        write_csv(
            out / "phase_match.csv",
            ["f_pump_ghz", "f_signal_ghz", "f_idler_ghz"],
            rows,
        )
    ]
    files.append(write_manifest(out, "phase-match", cfg.raw_text, cfg.seed, files))
    click.echo(f"phase-match: {len(rows)} matched frequencies, wrote to {out}")


@main.command("noise-sim")
@common_options
@guarded
def noise_sim_cmd(config_path, out_dir, overrides):
    """Added-noise band between the low- and high-power loss profiles."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("noise_sim")
    op = operating_point(cfg.device, _flux_rad(section))
    pump = _pump_from_section(section)
    loss_low = _load_loss(section, "loss_profile_low_power")
    loss_high = _load_loss(section, "loss_profile_high_power")
    grid = _grid_ghz(section, n=81)
    n = cfg.device.n_cells
    rows = []
    for f in grid:
        omega_s = f * GHZ
        n_low = simulate_added_noise(op, pump, loss_low, omega_s, n)
        n_high = simulate_added_noise(op, pump, loss_high, omega_s, n)
        rows.append((f, n_low, n_high))
    files = [
        write_csv(
            out / "added_noise.csv",
            [
                "f_signal_ghz",
                "n_added_photons_low_power_loss",
                "n_added_photons_high_power_loss",
            ],
            rows,
        )
    ]
    files.append(
        band_figure(
            out / "added_noise.png",
            [r[0] for r in rows],
            [min(r[1], r[2]) for r in rows],
            [max(r[1], r[2]) for r in rows],
            "loss envelope",
            "signal frequency (GHz)",
            "added noise (photons)",
            "Simulated input-referred added noise",
        )
    )
    files.append(write_manifest(out, "noise-sim", cfg.raw_text, cfg.seed, files))
    click.echo(f"noise-sim: wrote {len(files)} files to {out}")


def _load_radiometer_csv(path: Path, b_w: float) -> list[RadiometerSample]:
    if not path.exists():
        raise DataError(f"radiometer file not found: {path}")
    samples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["freq_ghz", "t_source_mk", "psd_dbm_per_hz"]:
            raise DataError(
                f"{path}: expected header 'freq_ghz,t_source_mk,psd_dbm_per_hz'"
            )
        for rec in reader:
            try:
                omega = float(rec["freq_ghz"]) * GHZ
                t = float(rec["t_source_mk"]) * 1e-3
                psd = 1e-3 * 10.0 ** (float(rec["psd_dbm_per_hz"]) / 10.0) * b_w
            except (TypeError, ValueError) as exc:
                raise DataError(f"malformed radiometer row in {path}: {exc}") from exc
            samples.append(
                RadiometerSample(omega=omega, t_source=t, psd_watts=psd, b_w=b_w)
            )
    if not samples:
        raise DataError(f"radiometer file {path} is empty")
    return samples


@main.command("noise-fit")
@common_options
@guarded
def noise_fit_cmd(config_path, out_dir, overrides):
    """Output-line calibration followed by the amplifier noise fit."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("noise_fit")
    b_w = float(section.get("bandwidth_hz", 1e6))
    cal_samples = _load_radiometer_csv(Path(section["calibration_csv"]), b_w)
    twpa_samples = _load_radiometer_csv(Path(section["radiometer_csv"]), b_w)
    omega_p = float(section["pump_freq_ghz"]) * GHZ
    model = section.get("model", "two-mode")
    t_max = float(section.get("t_max_mk", 400.0)) * 1e-3
    calibration = fit_output_line(cal_samples)
    fit = fit_twpa_noise(twpa_samples, calibration, omega_p, model, t_max=t_max)
    rows = [
        (
            rec.omega / GHZ,
            10.0 * math.log10(rec.g_out),
            rec.n_out,
            10.0 * math.log10(rec.g_twpa),
            rec.n_twpa,
            rec.model_kind,
        )
        for rec in fit.records
    ]
    files = [
        write_csv(
            out / "noise_fit.csv",
            [
                "freq_ghz",
                "g_out_db",
                "n_out_photons",
                "g_twpa_db",
                "n_twpa_photons",
                "model",
            ],
            rows,
        )
    ]
    files.append(
        line_figure(
            out / "noise_fit.png",
            [r[0] for r in rows],
            [[r[4] for r in rows], [photons_to_kelvin(r[0] * GHZ, r[4]) * 1e3 for r in rows]],
            ["added noise (photons)", "added noise (mK)"],
            "frequency (GHz)",
            "fitted amplifier noise",
            f"Amplifier noise fit ({model})",
        )
    )
    files.append(write_manifest(out, "noise-fit", cfg.raw_text, cfg.seed, files))
    click.echo(f"noise-fit: wrote {len(files)} files to {out}")


@main.command("impedance")
@common_options
@guarded
def impedance_cmd(config_path, out_dir, overrides):
    """Bloch impedance and transmission, plain versus modulated ladder."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("impedance")
    l_cell = float(section.get("l_cell_ph", 240.0)) * 1e-12
    c_cell = float(section.get("c_cell_ff", 96.0)) * 1e-15
    n_cells = int(section.get("n_cells", cfg.device.n_cells))
    amp = float(section.get("modulation_amplitude", 0.10))
    period = int(section.get("modulation_period", 16))
    z0 = float(section.get("z0_ohm", 50.0))
    grid = _grid_ghz(section, lo=0.2, hi=12.0, n=241)
    omegas = grid * GHZ
    files = []
    results = {}
    for label, amplitude in (("plain", 0.0), ("modulated", amp)):
        spec = LadderSpec(
            l_cell=l_cell,
            c_cell=c_cell,
            n_cells=n_cells,
            modulation_amplitude=amplitude,
            modulation_period=period,
        )
        zb = characteristic_impedance(spec, omegas)
        s21 = transmission(spec, z0, omegas)
        s21_db = 20.0 * np.log10(np.maximum(np.abs(s21), 1e-300))
        results[label] = (zb, s21_db)
        rows = [
            (f, z.real, z.imag, db)
            for f, z, db in zip(grid, zb, s21_db)
        ]
        files.append(
            write_csv(
                out / f"impedance_{label}.csv",
                ["freq_ghz", "re_z_ohm", "im_z_ohm", "s21_db"],
                rows,
            )
        )
    files.append(
        line_figure(
            out / "impedance.png",
            grid,
            [np.abs(results["plain"][0]), np.abs(results["modulated"][0])],
            ["plain ladder", "modulated ladder"],
            "frequency (GHz)",
            "|Z_Bloch| (ohm)",
            "Characteristic impedance",
        )
    )
    files.append(
        line_figure(
            out / "transmission.png",
            grid,
            [results["plain"][1], results["modulated"][1]],
            ["plain ladder", "modulated ladder"],
            "frequency (GHz)",
            "|S21| (dB)",
            "Transmission and stop band",
        )
    )
    files.append(write_manifest(out, "impedance", cfg.raw_text, cfg.seed, files))
    click.echo(f"impedance: wrote {len(files)} files to {out}")


@main.command("ripple")
@common_options
@guarded
def ripple_cmd(config_path, out_dir, overrides):
    """Peak-to-peak gain ripple versus amplifier impedance."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("ripple")
    gain_db = float(section.get("gain_db", 20.0))
    z0 = float(section.get("z0_ohm", 50.0))
    z_min = float(section.get("z_min_ohm", 40.0))
    z_max = float(section.get("z_max_ohm", 60.0))
    n_points = int(section.get("n_points", 201))
    zs = np.linspace(z_min, z_max, n_points)
    rows = []
    for z in zs:
        gamma = (z - z0) / (z + z0)
        rows.append((z, ripple_peak_to_peak(gain_db, gamma, gamma)))
    files = [
        write_csv(out / "ripple.csv", ["z_twpa_ohm", "ripple_db"], rows)
    ]
    files.append(
        line_figure(
            out / "ripple.png",
            [r[0] for r in rows],
            [[r[1] for r in rows]],
            [f"{gain_db:.0f} dB forward gain"],
            "amplifier impedance (ohm)",
            "peak-to-peak ripple (dB)",
            "Gain ripple versus impedance mismatch",
        )
    )
    files.append(write_manifest(out, "ripple", cfg.raw_text, cfg.seed, files))
    click.echo(f"ripple: wrote {len(files)} files to {out}")


@main.command("transient")
@common_options
@guarded
def transient_cmd(config_path, out_dir, overrides):
    """Time-domain harmonic generation with and without flux-polarity inversion."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.sections.get("transient", {})
    if "flux_quanta" in section:
        flux = 2.0 * math.pi * float(section["flux_quanta"])
    else:
        flux = g3_maximal_flux(cfg.device)
    probe_freq = float(section.get("probe_freq_ghz", 4.0)) * 1e9
    dt = float(section["dt_ps"]) * 1e-12 if "dt_ps" in section else None
    duration = (
        float(section["duration_ns"]) * 1e-9 if "duration_ns" in section else None
    )
    run_cfg = TransientConfig(
        probe_freq=probe_freq,
        probe_power_dbm=float(section.get("probe_power_dbm", -90.0)),
        phi_ext=flux,
        polarity_enabled=True,
        dt=dt,
        duration=duration,
        ring_up=float(section.get("ring_up_ns", 20.0)) * 1e-9,
        record_decimation=int(section.get("record_decimation", 8)),
    )
    which = section.get("polarity", "both")
    if which not in ("both", "on", "off"):
        raise ConfigError("transient polarity must be 'both', 'on' or 'off'")
    runs = {"both": (True, False), "on": (True,), "off": (False,)}[which]
    files = []
    summary = {"flux_quanta": flux / (2.0 * math.pi), "runs": {}}
    spectra = {}
    for enabled in runs:
        label = "polarity_on" if enabled else "polarity_off"
        lattice = build_lattice(cfg.device, flux, enabled)
        result = integrate(lattice, dataclasses.replace(run_cfg, polarity_enabled=enabled))
        freq, power = spectrum(result.v_out, result.sample_rate)
        ratio = second_harmonic_ratio(freq, power, probe_freq)
        summary["runs"][label] = {"second_harmonic_ratio_db": ratio}
        files.append(
            write_csv(
                out / f"timeseries_{label}.csv",
                ["t_ns", "v_out_uv"],
                zip(result.time * 1e9, result.v_out * 1e6),
            )
        )
        power_db = 10.0 * np.log10(np.maximum(power, 1e-300))
        files.append(
            write_csv(
                out / f"spectrum_{label}.csv",
                ["freq_ghz", "power_db"],
                zip(freq / 1e9, power_db),
            )
        )
        spectra[label] = (freq / 1e9, power_db)
    if len(spectra) == 2:
        summary["suppression_db"] = (
            summary["runs"]["polarity_on"]["second_harmonic_ratio_db"]
            - summary["runs"]["polarity_off"]["second_harmonic_ratio_db"]
        )
    fig_x = next(iter(spectra.values()))[0]
    files.append(
        line_figure(
            out / "spectrum.png",
            fig_x,
            [s[1] for s in spectra.values()],
            list(spectra.keys()),
            "frequency (GHz)",
            "power (dB)",
            "Harmonic generation at the load",
        )
    )
    summary_path = out / "transient_summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(summary_path)
    files.append(write_manifest(out, "transient", cfg.raw_text, cfg.seed, files))
    click.echo(f"transient: wrote {len(files)} files to {out}")


def _load_two_column_csv(path: Path, headers: list[str]):
    if not path.exists():
        raise DataError(f"data file not found: {path}")
    xs, ys = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != headers:
            raise DataError(f"{path}: expected header '{','.join(headers)}'")
        for rec in reader:
            try:
                xs.append(float(rec[headers[0]]))
                ys.append(float(rec[headers[1]]))
            except (TypeError, ValueError) as exc:
                raise DataError(f"malformed row in {path}: {exc}") from exc
    if not xs:
        raise DataError(f"data file {path} is empty")
    return np.asarray(xs), np.asarray(ys)


def _write_fit_report(out: Path, name: str, payload: dict, result) -> Path:
    payload = dict(payload)
    payload["converged"] = bool(result.converged)
    payload["reason"] = result.reason
    payload["iterations"] = int(result.iterations)
    payload["residual_norm"] = float(result.residual_norm)
    path = out / name
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


@main.command("fit-phase")
@common_options
@guarded
def fit_phase_cmd(config_path, out_dir, overrides):
    """Extract the cell inductance from transmitted-phase data."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("fit_phase")
    freq_ghz, phase = _load_two_column_csv(
        Path(section["data_csv"]), ["freq_ghz", "phase_rad"]
    )
    fit = fit_dispersion_phase(
        freq_ghz * GHZ,
        phase,
        n_cells=int(section.get("n_cells", cfg.device.n_cells)),
        c_g=float(section.get("cg_ff", cfg.device.cg * 1e15)) * 1e-15,
        c_j=float(section.get("cj_ff", cfg.device.cj * 1e15)) * 1e-15,
    )
    files = [
        _write_fit_report(
            out,
            "fit_phase.json",
            {
                "l_cell_ph": fit["l_cell"] * 1e12,
                "l_cell_err_ph": fit["l_cell_err"] * 1e12,
                "theta0_rad": fit["theta0"],
                "theta0_err_rad": fit["theta0_err"],
            },
            fit["result"],
        )
    ]
    files.append(write_manifest(out, "fit-phase", cfg.raw_text, cfg.seed, files))
    click.echo(
        f"fit-phase: l_cell = {fit['l_cell'] * 1e12:.4f} pH, wrote to {out}"
    )


@main.command("fit-flux")
@common_options
@guarded
def fit_flux_cmd(config_path, out_dir, overrides):
    """Extract critical current and asymmetry from inductance-versus-flux data."""
    cfg, out = _prepare(config_path, out_dir, overrides)
    section = cfg.section("fit_flux")
    flux_quanta, l_ph = _load_two_column_csv(
        Path(section["data_csv"]), ["flux_quanta", "l_ph"]
    )
    fit = fit_flux_dependence(
        2.0 * math.pi * flux_quanta,
        l_ph * 1e-12,
        cg=float(section.get("cg_ff", cfg.device.cg * 1e15)) * 1e-15,
        cj=float(section.get("cj_ff", cfg.device.cj * 1e15)) * 1e-15,
    )
    files = [
        _write_fit_report(
            out,
            "fit_flux.json",
            {
                "i0_ua": fit["i0"] * 1e6,
                "i0_err_ua": fit["i0_err"] * 1e6,
                "r": fit["r"],
                "r_err": fit["r_err"],
            },
            fit["result"],
        )
    ]
    files.append(write_manifest(out, "fit-flux", cfg.raw_text, cfg.seed, files))
    click.echo(f"fit-flux: i0 = {fit['i0'] * 1e6:.4f} uA, r = {fit['r']:.4f}")


if __name__ == "__main__":
    main()
