import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twpasim import (
    CoupledModeSystem,
    LossProfile,
    PumpDrive,
    analytic_gain_lossless,
    delta_k_dispersion,
    gain_profile,
    kerr_phase_shifts,
    phase_matched_frequencies,
    propagate,
    pump_amplitude_from_power,
    total_mismatch,
    wavevector,
)
from twpasim.errors import PumpAmplitudeError

GHZ = 2.0 * math.pi * 1e9


class TestPumpAmplitude:
    def test_vanishes_with_power(self, half_flux_op):
        a_lo = pump_amplitude_from_power(half_flux_op, 8.0 * GHZ, -240.0)
        assert a_lo < 1e-7

    def test_sqrt_two_scaling(self, half_flux_op):
        # doubling the power (+10 log10 2 dB) scales the amplitude by sqrt(2)
        a1 = pump_amplitude_from_power(half_flux_op, 8.0 * GHZ, -90.0)
        a2 = pump_amplitude_from_power(
            half_flux_op, 8.0 * GHZ, -90.0 + 10.0 * math.log10(2.0)
        )
        assert a2 == pytest.approx(math.sqrt(2.0) * a1, rel=1e-12)

    def test_round_trip_to_power(self, half_flux_op):
        # invert the three-step conversion and recover -75 dBm to 1e-9 dB
        op = half_flux_op
        a_p = pump_amplitude_from_power(op, 8.0 * GHZ, -75.0)
        k_p = wavevector(op, 8.0 * GHZ)
        i_a = a_p * k_p / ((2.0 * math.pi / 2.067833848461929e-15) * op.l_cell)
        p_watts = 0.5 * i_a**2 * op.z_char
        dbm = 10.0 * math.log10(p_watts / 1e-3)
        assert dbm == pytest.approx(-75.0, abs=1e-9)

    def test_drive_exclusive_inputs(self):
        with pytest.raises(ValueError):
            PumpDrive(omega_p=8.0 * GHZ)
        with pytest.raises(ValueError):
            PumpDrive(omega_p=8.0 * GHZ, a_p0=0.1, input_power_dbm=-80.0)


class TestKerrShifts:
    def test_zero_amplitude(self, half_flux_op):
        out = kerr_phase_shifts(half_flux_op, 6.0 * GHZ, 8.0 * GHZ, 0.0)
        assert out == (0.0, 0.0, 0.0, 0.0)

    def test_degenerate_mismatch_is_twice_pump_shift(self, half_flux_op):
        eta_s, eta_i, eta_p, dk = kerr_phase_shifts(
            half_flux_op, 8.0 * GHZ, 8.0 * GHZ, 0.8
        )
        assert eta_s == pytest.approx(2.0 * eta_p, rel=1e-12)
        assert eta_i == pytest.approx(2.0 * eta_p, rel=1e-12)
        assert dk == pytest.approx(2.0 * eta_p, rel=1e-12)

    def test_sign_reversal_against_dispersion(self, half_flux_op):
        # negative quartic bias: Kerr mismatch opposes the dispersive one
        for fs in np.linspace(4.2, 11.8, 30):
            if abs(fs - 8.0) < 0.05:
                continue
            *_, dk_kerr = kerr_phase_shifts(half_flux_op, fs * GHZ, 8.0 * GHZ, 0.8)
            dk_disp = delta_k_dispersion(half_flux_op, fs * GHZ, 8.0 * GHZ)
            assert dk_kerr < 0.0 < dk_disp

    def test_shift_signs_follow_quartic(self, half_flux_op, zero_flux_op):
        neg = kerr_phase_shifts(half_flux_op, 6.0 * GHZ, 8.0 * GHZ, 0.5)
        pos = kerr_phase_shifts(zero_flux_op, 6.0 * GHZ, 8.0 * GHZ, 0.5)
        assert all(v < 0 for v in neg[:3])
        assert all(v > 0 for v in pos[:3])

    def test_guard_rejects_large_slope(self, half_flux_op):
        k_p = wavevector(half_flux_op, 8.0 * GHZ)
        with pytest.raises(PumpAmplitudeError):
            kerr_phase_shifts(half_flux_op, 6.0 * GHZ, 8.0 * GHZ, 1.01 / k_p)

    def test_guard_warns_above_half(self, half_flux_op):
        k_p = wavevector(half_flux_op, 8.0 * GHZ)
        with pytest.warns(UserWarning):
            kerr_phase_shifts(half_flux_op, 6.0 * GHZ, 8.0 * GHZ, 0.6 / k_p)


class TestPropagate:
    def test_zero_generator_is_identity(self):
        sys0 = CoupledModeSystem(0.0, 0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0, 0.0, 100)
        assert np.allclose(propagate(sys0), np.eye(2), atol=1e-14)

    def test_decoupled_phases(self):
        dk = 0.01
        sys0 = CoupledModeSystem(dk, 0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0, 0.0, 700)
        s = propagate(sys0)
        expected = np.diag(
            [np.exp(-0.5j * dk * 700), np.exp(0.5j * dk * 700)]
        )
        assert np.allclose(s, expected, atol=1e-12)

    def test_pure_attenuation(self):
        kappa = 8e-4
        sys0 = CoupledModeSystem(0.0, 0.0, 0.0, 0.0, 0.4, 0.6, kappa, kappa, kappa, 700)
        s = propagate(sys0)
        assert abs(s[0, 0]) == pytest.approx(math.exp(-kappa * 700), rel=1e-12)
        assert abs(s[0, 1]) < 1e-15

    def test_mixed_sign_etas_rejected(self):
        with pytest.raises(ValueError):
            CoupledModeSystem(0.0, 1e-3, -1e-3, 1e-3, 0.4, 0.6, 0, 0, 0, 700)

    @settings(max_examples=80, deadline=None)
    @given(
        eta_s=st.floats(1e-5, 8e-3),
        ratio=st.floats(0.3, 3.0),
        dk=st.floats(-6e-3, 6e-3),
        sign=st.sampled_from([-1.0, 1.0]),
        n=st.integers(50, 1200),
    )
    def test_lossless_commutator_preservation(self, eta_s, ratio, dk, sign, n):
        sys0 = CoupledModeSystem(
            dk, sign * eta_s, sign * eta_s * ratio, sign * eta_s / 2.0,
            0.4, 0.6, 0.0, 0.0, 0.0, n,
        )
        s = propagate(sys0)
        assert abs(s[0, 0]) ** 2 - abs(s[0, 1]) ** 2 == pytest.approx(1.0, abs=1e-10)
        assert abs(s[1, 1]) ** 2 - abs(s[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-10)


class TestAnalyticGain:
    def test_zero_pump_zero_db(self, half_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.0)
        assert analytic_gain_lossless(half_flux_op, 6.0 * GHZ, pump, 700) == 0.0

    def test_gain_at_least_unity(self, half_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.7)
        for fs in np.linspace(3.0, 12.9, 41):
            assert analytic_gain_lossless(half_flux_op, fs * GHZ, pump, 700) >= 0.0

    def test_matched_point_reduces_to_cosh(self, half_flux_op):
        op = half_flux_op
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.51)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            roots = phase_matched_frequencies(op, pump)
            assert roots
            ws = roots[0]
            eta_s, eta_i, _, _ = kerr_phase_shifts(op, ws, 8.0 * GHZ, 1.51)
            g = math.sqrt(eta_s * eta_i) / 2.0
            expected = 10.0 * math.log10(math.cosh(g * 700) ** 2)
            got = analytic_gain_lossless(op, ws, pump, 700)
        assert got == pytest.approx(expected, abs=1e-3)

    @settings(max_examples=100, deadline=None)
    @given(
        fs=st.floats(3.5, 12.4),
        fp=st.sampled_from([6.0, 8.0, 10.0]),
        amp=st.floats(0.05, 1.55),
        n=st.integers(100, 1200),
    )
    def test_matches_matrix_exponential(self, half_flux_op, fs, fp, amp, n):
        # closed form versus exp(M*N), lossless, to 1e-9 relative
        op = half_flux_op
        if 2.0 * fp - fs <= 0.2:
            return
        pump = PumpDrive(omega_p=fp * GHZ, a_p0=amp)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                db = analytic_gain_lossless(op, fs * GHZ, pump, n)
            except PumpAmplitudeError:
                return
            system = CoupledModeSystem.from_operating_point(op, fs * GHZ, pump, n)
        s = propagate(system)
        db_matrix = 20.0 * math.log10(abs(s[0, 0]))
        assert 10.0 ** (db / 10.0) == pytest.approx(
            10.0 ** (db_matrix / 10.0), rel=1e-9
        )


class TestGainProfile:
    def test_zero_pump_is_pure_loss_line(self, half_flux_op):
        loss = LossProfile.linear_slope(1.0)
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.0)
        points = gain_profile(
            half_flux_op, pump, loss, np.array([5.0, 6.0, 7.0]) * GHZ, 700
        )
        for p in points:
            kappa = math.log(10.0) * (p.omega_s / GHZ) / (20.0 * 700.0)
            assert p.gain_db == pytest.approx(
                20.0 * math.log10(math.exp(-kappa * 700)), rel=1e-9
            )

    def test_double_lobe_and_high_frequency_peak(self, half_flux_op):
        # pump-on/pump-off gain shows a lobe on each side of the pump and a
        # higher peak above it when loss grows with frequency
        loss = LossProfile.linear_slope(1.0)
        k_p = wavevector(half_flux_op, 8.0 * GHZ)
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.35 / k_p)
        grid = np.linspace(4.0, 12.0, 161) * GHZ
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            points = gain_profile(half_flux_op, pump, loss, grid, 700)
        rel = {}
        for p in points:
            kappa = math.log(10.0) * (p.omega_s / GHZ) / (20.0 * 700.0)
            rel[p.omega_s / GHZ] = p.gain_db - 20.0 * math.log10(math.exp(-kappa * 700))
        freqs = sorted(rel)
        low = [f for f in freqs if f < 7.9]
        high = [f for f in freqs if f > 8.1]
        peak_low = max(rel[f] for f in low)
        peak_high = max(rel[f] for f in high)
        assert peak_low > 6.0 and peak_high > 6.0
        assert peak_high >= peak_low
        # continuity through the pump: no notch artifact at f_s = f_p
        near = [rel[f] for f in freqs if 7.7 < f < 8.3]
        assert max(near) - min(near) < 3.0

    def test_skipped_points_logged(self, half_flux_op, caplog):
        loss = LossProfile((5.0 * GHZ, 11.0 * GHZ), (-5.0, -11.0))
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.2)
        with caplog.at_level("WARNING"):
            points = gain_profile(
                half_flux_op, pump, loss, np.array([4.0, 6.0]) * GHZ, 700
            )
        assert len(points) == 1
        assert "skipped" in caplog.text

    def test_lossless_peak_exceeds_lossy_peak(self, half_flux_op):
        loss = LossProfile.linear_slope(1.0)
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.2)
        grid = np.linspace(4.5, 11.5, 101) * GHZ
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lossy = max(
                p.gain_db for p in gain_profile(half_flux_op, pump, loss, grid, 700)
            )
            lossless = max(
                analytic_gain_lossless(half_flux_op, w, pump, 700) for w in grid
            )
        assert lossless > lossy


class TestPhaseMatching:
    def test_zero_amplitude_degenerate_only(self, half_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.0)
        assert phase_matched_frequencies(half_flux_op, pump) == [8.0 * GHZ]

    def test_positive_quartic_has_no_roots(self, zero_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=0.4)
        assert phase_matched_frequencies(zero_flux_op, pump) == []

    def test_mirror_pairs(self, half_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            roots = phase_matched_frequencies(half_flux_op, pump)
        assert len(roots) == 2
        assert roots[0] + roots[1] == pytest.approx(16.0 * GHZ, rel=1e-12)

    def test_roots_against_dense_scan_oracle(self, half_flux_op):
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            roots = phase_matched_frequencies(half_flux_op, pump)
            scan = np.linspace(0.5 * GHZ, 8.0 * GHZ, 10**5)
            vals = np.array(
                [total_mismatch(half_flux_op, w, pump) for w in scan]
            )
        idx = np.flatnonzero(np.diff(np.sign(vals)) != 0)
        assert len(idx) == 1
        step = scan[1] - scan[0]
        assert abs(roots[0] - scan[idx[0]]) <= step

    def test_roots_move_out_monotonically_with_amplitude(self, half_flux_op):
        prev_gap = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for amp in (0.4, 0.8, 1.2, 1.5):
                pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=amp)
                roots = phase_matched_frequencies(half_flux_op, pump)
                gap = 8.0 * GHZ - roots[0]
                assert gap > prev_gap
                prev_gap = gap

    def test_reciprocity_with_flat_loss(self, half_flux_op):
        # frequency-independent kappa keeps the mirror symmetry exact
        loss = LossProfile((1.0 * GHZ, 14.0 * GHZ), (-5.0, -5.0))
        pump = PumpDrive(omega_p=8.0 * GHZ, a_p0=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for off in (0.7, 1.3, 2.2):
                sys_lo = CoupledModeSystem.from_operating_point(
                    half_flux_op, (8.0 - off) * GHZ, pump, 700, loss
                )
                sys_hi = CoupledModeSystem.from_operating_point(
                    half_flux_op, (8.0 + off) * GHZ, pump, 700, loss
                )
                g_lo = abs(propagate(sys_lo)[0, 0]) ** 2
                g_hi = abs(propagate(sys_hi)[0, 0]) ** 2
                assert g_lo == pytest.approx(g_hi, rel=1e-9)
