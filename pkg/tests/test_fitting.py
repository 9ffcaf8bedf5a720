import math

import numpy as np
import pytest

from twpasim import (
    CurveFitProblem,
    fit_dispersion_phase,
    fit_flux_dependence,
    least_squares,
    operating_point,
    transmitted_phase,
    unwrap_phase,
)
from twpasim.errors import FitAbortedError

GHZ = 2.0 * math.pi * 1e9


class TestEngine:
    def test_linear_model_exact_recovery_in_two_iterations(self):
        x = np.linspace(0.0, 10.0, 20)
        y = 2.5 * x - 1.3

        def residual(p):
            return p[0] * x + p[1] - y

        # two damped near-Gauss-Newton steps reach 0.01%; full convergence
        # (one more iteration) is exact to machine precision
        two = least_squares(
            CurveFitProblem(residual_fn=residual, x0=[0.0, 0.0], max_iter=2)
        )
        assert two.params[0] == pytest.approx(2.5, rel=1e-4)
        assert two.params[1] == pytest.approx(-1.3, rel=1e-4)
        full = least_squares(
            CurveFitProblem(residual_fn=residual, x0=[0.0, 0.0], tol_cost=1e-30)
        )
        assert full.converged
        assert full.params == pytest.approx([2.5, -1.3], rel=1e-12)

    def test_bent_valley_converges(self):
        def residual(p):
            return np.array([10.0 * (p[1] - p[0] ** 2), 1.0 - p[0]])

        result = least_squares(
            CurveFitProblem(residual_fn=residual, x0=[-1.2, 1.0], max_iter=500)
        )
        assert result.converged
        assert result.params == pytest.approx([1.0, 1.0], abs=1e-8)

    def test_accepted_cost_non_increasing(self):
        def residual(p):
            return np.array(
                [10.0 * (p[1] - p[0] ** 2), 1.0 - p[0], 0.1 * p[0] * p[1]]
            )

        result = least_squares(
            CurveFitProblem(residual_fn=residual, x0=[2.0, -3.0], max_iter=300)
        )
        costs = np.array(result.cost_history)
        assert np.all(np.diff(costs) <= 1e-30)

    def test_bounds_projection(self):
        x = np.linspace(0.0, 1.0, 10)
        y = 3.0 * x

        def residual(p):
            return p[0] * x - y

        result = least_squares(
            CurveFitProblem(residual_fn=residual, x0=[1.0], lower=[0.0], upper=[2.0])
        )
        assert result.params[0] == pytest.approx(2.0, abs=1e-12)

    def test_nonfinite_at_start_aborts(self):
        def residual(p):
            return np.array([math.nan])

        with pytest.raises(FitAbortedError):
            least_squares(CurveFitProblem(residual_fn=residual, x0=[1.0]))

    def test_nonfinite_trials_rejected_not_fatal(self):
        # residual blows up for p > 2; the fit must stay in the finite region
        x = np.linspace(0.0, 1.0, 15)
        y = 1.5 * x

        def residual(p):
            if p[0] > 2.0:
                return np.full(x.size, np.inf)
            return p[0] * x - y

        result = least_squares(CurveFitProblem(residual_fn=residual, x0=[1.9]))
        assert result.params[0] == pytest.approx(1.5, abs=1e-8)

    def test_jacobian_richardson_agreement(self):
        # forward differences at two step sizes agree after extrapolation
        def f(p):
            return np.array([math.sin(p[0]) + p[0] ** 2])

        p0 = np.array([0.7])
        exact = math.cos(0.7) + 2 * 0.7
        for h in (1e-6, 1e-7):
            d = (f(p0 + h)[0] - f(p0)[0]) / h
            assert d == pytest.approx(exact, rel=1e-5)

    def test_covariance_calibrated_on_seeded_noise(self):
        # seeded noisy exponential fits: deviations within 3 reported sigma
        # in at least 97 of 100 trials per parameter
        x = np.linspace(0.0, 4.0, 60)
        truth = np.array([2.0, 0.7])
        hits = np.zeros(2)
        trials = 100
        for seed in range(trials):
            rng = np.random.default_rng(seed)
            y = truth[0] * np.exp(-truth[1] * x) + 0.01 * rng.standard_normal(x.size)

            def residual(p):
                return p[0] * np.exp(-p[1] * x) - y

            result = least_squares(
                CurveFitProblem(residual_fn=residual, x0=[1.0, 1.0], max_iter=200)
            )
            sigma = np.sqrt(np.diag(result.covariance))
            hits += (np.abs(result.params - truth) <= 3.0 * sigma).astype(float)
        assert hits[0] >= 97
        assert hits[1] >= 97


class TestUnwrap:
    def test_removes_jumps(self):
        theta = np.linspace(0.0, 30.0, 400)
        wrapped = np.mod(theta + math.pi, 2.0 * math.pi) - math.pi
        rec = unwrap_phase(wrapped)
        assert np.allclose(rec - rec[0], theta - theta[0], atol=1e-9)


class TestDispersionPhaseFit:
    C_G = 250e-15
    C_J = 50e-15

    def synthesize(self, half_flux_op, theta0=3.0, noise_deg=0.0, seed=0):
        # dense grid keeps physical phase steps below pi, as in measurement
        freqs = np.linspace(1.0, 12.0, 1201) * GHZ
        theta = np.array(
            [transmitted_phase(half_flux_op, 700, theta0, w) for w in freqs]
        )
        if noise_deg:
            rng = np.random.default_rng(seed)
            theta = theta + math.radians(noise_deg) * rng.standard_normal(theta.size)
        return freqs, theta

    def test_noise_free_round_trip(self, half_flux_op):
        freqs, theta = self.synthesize(half_flux_op)
        fit = fit_dispersion_phase(freqs, theta, 700, self.C_G, self.C_J)
        assert fit["l_cell"] == pytest.approx(half_flux_op.l_cell, rel=1e-4)
        assert fit["theta0"] == pytest.approx(3.0, abs=1e-2)

    def test_wrapped_input_recovers_inductance(self, half_flux_op):
        # measurement-style wrapped phases: the unwrap pass restores the
        # shape and theta0 absorbs the global 2*n*pi branch
        freqs, theta = self.synthesize(half_flux_op)
        wrapped = np.mod(theta + math.pi, 2.0 * math.pi) - math.pi
        fit = fit_dispersion_phase(freqs, wrapped, 700, self.C_G, self.C_J)
        assert fit["l_cell"] == pytest.approx(half_flux_op.l_cell, rel=1e-4)
        branch = (fit["theta0"] - 3.0) / (2.0 * math.pi)
        assert branch == pytest.approx(round(branch), abs=1e-3)

    def test_wrap_degeneracy(self, half_flux_op):
        freqs, theta = self.synthesize(half_flux_op, theta0=3.0)
        fit_a = fit_dispersion_phase(freqs, theta, 700, self.C_G, self.C_J)
        fit_b = fit_dispersion_phase(
            freqs, theta + 2.0 * math.pi, 700, self.C_G, self.C_J
        )
        assert fit_b["l_cell"] == pytest.approx(fit_a["l_cell"], rel=1e-10)
        assert fit_b["theta0"] - fit_a["theta0"] == pytest.approx(
            2.0 * math.pi, abs=1e-6
        )

    def test_recovery_under_phase_noise(self, half_flux_op):
        # half-degree RMS phase noise leaves L within 0.5 percent
        for seed in range(20):
            freqs, theta = self.synthesize(
                half_flux_op, noise_deg=0.5, seed=seed
            )
            fit = fit_dispersion_phase(freqs, theta, 700, self.C_G, self.C_J)
            assert fit["l_cell"] == pytest.approx(half_flux_op.l_cell, rel=5e-3)


class TestFluxDependenceFit:
    def synthesize(self, device, noise=0.0, seed=0):
        flux = np.linspace(0.0, 1.2 * math.pi, 35)
        l_vals = np.array([operating_point(device, pe).l_cell for pe in flux])
        if noise:
            rng = np.random.default_rng(seed)
            l_vals = l_vals * (1.0 + noise * rng.standard_normal(l_vals.size))
        return flux, l_vals

    def test_noise_free_round_trip(self, device):
        flux, l_vals = self.synthesize(device)
        fit = fit_flux_dependence(flux, l_vals)
        assert fit["i0"] == pytest.approx(2.19e-6, rel=1e-3)
        assert fit["r"] == pytest.approx(0.07, rel=1e-3)

    def test_symmetric_device_returns_zero_asymmetry(self):
        # r = 0 means a flux-independent inductance
        flux = np.linspace(0.0, 1.5 * math.pi, 25)
        phi0 = 2.067833848461929e-15
        l_vals = np.full(flux.size, phi0 / (2.0 * math.pi * 2.0e-6 / 3.0))
        fit = fit_flux_dependence(flux, l_vals)
        assert fit["r"] < 1e-4

    def test_recovery_under_multiplicative_noise(self, device):
        for seed in range(15):
            flux, l_vals = self.synthesize(device, noise=0.01, seed=seed)
            fit = fit_flux_dependence(flux, l_vals)
            assert fit["i0"] == pytest.approx(2.19e-6, rel=0.02)
            assert fit["r"] == pytest.approx(0.07, rel=0.10)

    def test_requires_half_period_span(self, device):
        flux = np.linspace(0.0, 0.4 * math.pi, 10)
        l_vals = np.array([operating_point(device, pe).l_cell for pe in flux])
        with pytest.raises(ValueError):
            fit_flux_dependence(flux, l_vals)
