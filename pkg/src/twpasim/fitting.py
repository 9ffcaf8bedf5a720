"""Damped least-squares engine and the two device-calibration fits.

The engine is a bounded Levenberg-Marquardt with a forward-difference
Jacobian and multiplicative damping (lambda x10 on a rejected step, /10 on an
accepted one, starting from 1e-3). Accepted-step cost is non-increasing by
construction. Trial points whose residual comes back non-finite are treated
as infinitely costly and rejected; a non-finite residual at the starting
point aborts the fit.

Calibration fits:
  * cell inductance and phase intercept from unwrapped transmitted-phase
    data, with cg, cj and the cell count held at their design values;
  * critical current and asymmetry ratio from the measured flux dependence
    of the cell inductance, evaluating the steady-state solve inside the
    residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import PHI0
from .errors import FitAbortedError, PlasmaCutoffError, UnphysicalBranchError
from .snail import SnailParameters, operating_point

_LAMBDA0 = 1e-3
_LAMBDA_MAX = 1e14


@dataclass
class CurveFitProblem:
    """A bounded nonlinear least-squares problem.

    residual_fn maps a parameter vector to a residual vector and must be
    deterministic and pure.
    """

    residual_fn: Callable[[np.ndarray], np.ndarray]
    x0: Sequence[float]
    lower: Sequence[float] | None = None
    upper: Sequence[float] | None = None
    tol_grad: float = 1e-10
    tol_step: float = 1e-13
    tol_cost: float = 1e-15
    max_iter: int = 200

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float)
        n = x0.size
        lo = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, float)
        hi = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, float)
        if np.any(lo > hi):
            raise ValueError("lower bounds exceed upper bounds")
        if np.any(x0 < lo) or np.any(x0 > hi):
            raise ValueError("initial point outside bounds")
        self.x0 = x0
        self.lower = lo
        self.upper = hi


@dataclass
class FitResult:
    params: np.ndarray
    residual_norm: float
    covariance: np.ndarray | None
    iterations: int
    converged: bool
    reason: str
    cost_history: list[float] = field(default_factory=list)


def _safe_residual(fn, x):
    try:
        r = np.asarray(fn(x), dtype=float)
    except (PlasmaCutoffError, UnphysicalBranchError, FloatingPointError):
        return None
    if not np.all(np.isfinite(r)):
        return None
    return r


def _jacobian(fn, x, r0, lo, hi):
    n = x.size
    jac = np.empty((r0.size, n))
    sqrt_eps = math.sqrt(np.finfo(float).eps)
    for j in range(n):
        # relative forward-difference step, absolute floor at zero
        h = sqrt_eps * abs(x[j]) if abs(x[j]) > 1e-100 else sqrt_eps
        xp = x.copy()
        if x[j] + h > hi[j]:
            h = -h
        xp[j] = x[j] + h
        h = xp[j] - x[j]
        rp = _safe_residual(fn, xp)
        if rp is None:
            xp[j] = x[j] - h
            h = xp[j] - x[j]
            rp = _safe_residual(fn, xp)
            if rp is None:
                raise FitAbortedError(x)
        jac[:, j] = (rp - r0) / h
    return jac


def least_squares(problem: CurveFitProblem) -> FitResult:
    """Run the Levenberg-Marquardt iteration to convergence or the cap."""
    x = problem.x0.copy()
    lo, hi = problem.lower, problem.upper
    r = _safe_residual(problem.residual_fn, x)
    if r is None:
        raise FitAbortedError(x)
    cost = float(r @ r)
    lam = _LAMBDA0
    history = [cost]
    reason = "iteration cap reached"
    converged = False
    it = 0
    jac = None
    for it in range(1, problem.max_iter + 1):
        jac = _jacobian(problem.residual_fn, x, r, lo, hi)
        jtj = jac.T @ jac
        grad = jac.T @ r
        if np.max(np.abs(grad)) < problem.tol_grad:
            converged, reason = True, "gradient below tolerance"
            break
        accepted = False
        while lam < _LAMBDA_MAX:
            damp = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-30))
            try:
                step = np.linalg.solve(damp, -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_try = np.clip(x + step, lo, hi)
            r_try = _safe_residual(problem.residual_fn, x_try)
            if r_try is not None:
                cost_try = float(r_try @ r_try)
                if cost_try <= cost:
                    scale = np.maximum(np.abs(x), np.abs(x_try)) + 1e-300
                    small_step = np.all(np.abs(x_try - x) <= problem.tol_step * scale)
                    cost_drop = cost - cost_try
                    x, r, cost = x_try, r_try, cost_try
                    history.append(cost)
                    lam = max(lam / 10.0, 1e-15)
                    accepted = True
                    if cost < problem.tol_cost:
                        converged, reason = True, "cost below tolerance"
                    elif small_step:
                        converged, reason = True, "step below tolerance"
                    elif cost_drop <= problem.tol_cost * cost:
                        converged, reason = True, "cost decrease below tolerance"
                    break
            lam *= 10.0
        if not accepted:
            converged, reason = False, "no acceptable step found"
            break
        if converged:
            break

    covariance = None
    if jac is not None:
        dof = max(r.size - x.size, 1)
        try:
            covariance = np.linalg.inv(jac.T @ jac) * (cost / dof)
            covariance = 0.5 * (covariance + covariance.T)
        except np.linalg.LinAlgError:
            covariance = None
    return FitResult(
        params=x,
        residual_norm=math.sqrt(cost),
        covariance=covariance,
        iterations=it,
        converged=converged,
        reason=reason,
        cost_history=history,
    )


def unwrap_phase(theta: np.ndarray) -> np.ndarray:
    """Remove 2*pi jumps from a wrapped phase sequence."""
    theta = np.asarray(theta, dtype=float)
    out = theta.copy()
    shift = 0.0
    for j in range(1, out.size):
        d = theta[j] - theta[j - 1]
        if d > math.pi:
            shift -= 2.0 * math.pi
        elif d < -math.pi:
            shift += 2.0 * math.pi
        out[j] = theta[j] + shift
    return out


def fit_dispersion_phase(
    omega: np.ndarray,
    theta: np.ndarray,
    n_cells: int,
    c_g: float,
    c_j: float,
) -> dict:
    """Extract (l_cell, theta0) from transmitted-phase data.

    The data are unwrapped first, so theta0 absorbs only the global branch
    offset. Trial inductances that push any data point above the plasma
    cutoff yield an invalid residual and the step is rejected.
    """
    omega = np.asarray(omega, dtype=float)
    theta_u = unwrap_phase(np.asarray(theta, dtype=float))

    def model(l_cell, theta0):
        omega_j2 = 1.0 / (l_cell * c_j)
        arg = 1.0 - omega**2 / omega_j2
        if np.any(arg <= 0):
            return None
        k = omega * math.sqrt(l_cell * c_g) / np.sqrt(arg)
        return theta0 + n_cells * k

    def residual(p):
        m = model(p[0], p[1])
        if m is None:
            return np.full(omega.size, np.inf)
        return m - theta_u

    # slope of the unwrapped phase at the lowest frequencies seeds L
    slope = (theta_u[1] - theta_u[0]) / (omega[1] - omega[0])
    l_init = max((slope / n_cells) ** 2 / c_g, 1e-15)
    t0_init = theta_u[0] - n_cells * omega[0] * math.sqrt(l_init * c_g)
    result = least_squares(
        CurveFitProblem(
            residual_fn=residual,
            x0=[l_init, t0_init],
            lower=[1e-15, -np.inf],
            upper=[1e-6, np.inf],
        )
    )
    err = (
        np.sqrt(np.diag(result.covariance))
        if result.covariance is not None
        else (math.nan, math.nan)
    )
    return {
        "l_cell": float(result.params[0]),
        "theta0": float(result.params[1]),
        "l_cell_err": float(err[0]),
        "theta0_err": float(err[1]),
        "result": result,
    }


def fit_flux_dependence(
    phi_ext: np.ndarray, l_cell: np.ndarray, cg: float = 250e-15, cj: float = 50e-15
) -> dict:
    """Extract (i0, r) from the measured flux dependence of the inductance.

    The model L(phi_ext) = Phi0 / (2*pi*i0*alpha(phi_ext; r)) evaluates the
    steady-state solve inside the residual. Requires data spanning at least
    half a flux period.
    """
    phi_ext = np.asarray(phi_ext, dtype=float)
    l_cell = np.asarray(l_cell, dtype=float)
    if phi_ext.max() - phi_ext.min() < math.pi:
        raise ValueError("flux data must span at least half a flux period")

    def residual(p):
        i0, r = p
        params = SnailParameters(i0=i0, r=min(max(r, 1e-12), 0.999), cg=cg, cj=cj, n_cells=1)
        model = np.array(
            [operating_point(params, pe).l_cell for pe in phi_ext]
        )
        return (model - l_cell) / l_cell

    # alpha in [1/3 - r, 1/3 + r]: the mean inductance seeds i0 at r ~ 0
    i0_init = PHI0 / (2.0 * math.pi * float(np.mean(l_cell)) * (1.0 / 3.0))
    result = least_squares(
        CurveFitProblem(
            residual_fn=residual,
            x0=[i0_init, 0.1],
            lower=[1e-9, 0.0],
            upper=[1e-3, 0.95],
        )
    )
    err = (
        np.sqrt(np.diag(result.covariance))
        if result.covariance is not None
        else (math.nan, math.nan)
    )
    return {
        "i0": float(result.params[0]),
        "r": float(result.params[1]),
        "i0_err": float(err[0]),
        "r_err": float(err[1]),
        "result": result,
    }
