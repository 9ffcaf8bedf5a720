"""SNAIL unit cell: steady state and flux-dependent circuit coefficients.

Each cell is a superconducting loop with three large junctions (critical
current i0) in one arm and one small junction (critical current r*i0) in the
other, shunted to ground by cg. With phi the phase across the small junction
and phi_ext the reduced external flux, flux quantization fixes the phase
across each large junction to (phi - phi_ext)/3, so the loop current is

    I(phi) = i0 * [r*sin(phi) + sin((phi - phi_ext)/3)].

The cell is operated about the current-free point phi_star, I(phi_star) = 0.
A Taylor expansion of I about phi_star,

    I(phi_star + x)/i0 ~ alpha*x - beta*x^2 - gamma*x^3,

defines the dimensionless coefficients

    alpha = r*cos(phi_star) + cos(u)/3
    beta  = [r*sin(phi_star) + sin(u)/9] / 2
    gamma = [r*cos(phi_star) + cos(u)/27] / 6,      u = (phi_star - phi_ext)/3,

which are exactly the first three derivatives of I/i0 at phi_star (up to the
conventional -2 and -6 factors on beta and gamma).  From these follow the
cell inductance L = Phi0/(2*pi*i0*alpha), the line impedance Z = sqrt(L/cg),
the characteristic and plasma frequencies omega0 = 1/sqrt(L*cg) and
omega_j = 1/sqrt(L*cj), and the three- and four-wave mixing rates

    hbar*g3 = (beta/3 alpha) * sqrt(E_C * hbar * omega0)
    hbar*g4 = (gamma/2 alpha) * E_C,        E_C = e^2/(2*cg).

Branch selection: phi_star is tracked by continuation in phi_ext from the
phi_star = 0 solution at phi_ext = 0, matching adiabatic flux biasing of a
real device.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import E_CHARGE, HBAR, PHI0
from .errors import SteadyStateError, UnphysicalBranchError

_RESIDUAL_TOL = 1e-13
_NEWTON_CAP = 60


def _sin_folded(x: float) -> float:
    # sin evaluated by reflection about the nearest multiple of pi, so the
    # loop symmetry points phi_ext = 0 and pi give exact zeros in beta.
    m = round(x / math.pi)
    s = math.sin(x - m * math.pi)
    return -s if m % 2 else s


def _cos_folded(x: float) -> float:
    m = round(x / math.pi)
    c = math.cos(x - m * math.pi)
    return -c if m % 2 else c


def _sin_folded_arr(x: np.ndarray) -> np.ndarray:
    m = np.round(x / np.pi)
    s = np.sin(x - m * np.pi)
    return np.where(m % 2.0 == 0.0, s, -s)


def _cos_folded_arr(x: np.ndarray) -> np.ndarray:
    m = np.round(x / np.pi)
    c = np.cos(x - m * np.pi)
    return np.where(m % 2.0 == 0.0, c, -c)


@dataclass(frozen=True)
class SnailParameters:
    """Fabrication-level constants of the meta-material.

    Attributes:
        i0: large-junction critical current, amperes.
        r: asymmetry ratio (small over large critical current), in (0, 1).
        cg: ground capacitance per cell, farads.
        cj: effective junction capacitance per cell, farads.
        n_cells: number of SNAILs in the line.
        polarity: per-cell flux polarity pattern, entries in {+1, -1}.
            Defaults to the alternating pattern. Stored here as the single
            source of truth for the device; it only affects the time-domain
            lattice, where the sign flip of the quadratic nonlinearity is
            applied.
    """

    i0: float
    r: float
    cg: float
    cj: float
    n_cells: int
    polarity: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not (self.i0 > 0 and self.cg > 0 and self.cj > 0):
            raise ValueError("i0, cg and cj must all be positive")
        if not 0 < self.r < 1:
            raise ValueError(f"asymmetry ratio r={self.r} outside (0, 1)")
        if self.n_cells < 1:
            raise ValueError("n_cells must be at least 1")
        if not self.polarity:
            object.__setattr__(self, "polarity", alternating_polarity(self.n_cells))
        if len(self.polarity) != self.n_cells:
            raise ValueError("polarity pattern length must equal n_cells")
        if any(p not in (1, -1) for p in self.polarity):
            raise ValueError("polarity entries must be +1 or -1")


def alternating_polarity(n_cells: int) -> tuple[int, ...]:
    return tuple(1 if n % 2 == 0 else -1 for n in range(n_cells))


@dataclass(frozen=True)
class OperatingPoint:
    """All flux-derived quantities of one cell at a single bias point.

    Attributes:
        phi_ext: reduced external flux 2*pi*Phi_ext/Phi0, radians.
        phi_star: steady-state phase, radians.
        alpha, beta, gamma: dimensionless expansion coefficients.
        l_cell: cell inductance, henries.
        z_char: line impedance sqrt(L/cg), ohms.
        omega0: characteristic frequency 1/sqrt(L*cg), rad/s.
        omega_j: plasma frequency 1/sqrt(L*cj), rad/s.
        g3, g4: three- and four-wave mixing rates, rad/s.
    """

    phi_ext: float
    phi_star: float
    alpha: float
    beta: float
    gamma: float
    l_cell: float
    z_char: float
    omega0: float
    omega_j: float
    g3: float
    g4: float


def steady_state_residual(params: SnailParameters, phi: float, phi_ext: float) -> float:
    """Normalized loop current I(phi)/i0 at external flux phi_ext."""
    return params.r * _sin_folded(phi) + _sin_folded((phi - phi_ext) / 3.0)


def _residual_and_slope(params, phi, phi_ext):
    u = (phi - phi_ext) / 3.0
    res = params.r * _sin_folded(phi) + _sin_folded(u)
    slope = params.r * _cos_folded(phi) + _cos_folded(u) / 3.0
    return res, slope


def _newton(params, phi0, phi_ext):
    phi = phi0
    for _ in range(_NEWTON_CAP):
        res, slope = _residual_and_slope(params, phi, phi_ext)
        if abs(res) < _RESIDUAL_TOL:
            return phi
        if slope == 0.0 or not math.isfinite(res):
            break
        phi -= res / slope
    res, _ = _residual_and_slope(params, phi, phi_ext)
    if abs(res) < _RESIDUAL_TOL:
        return phi
    raise SteadyStateError(phi_ext, res)


def solve_steady_phase(params: SnailParameters, phi_ext: float) -> float:
    """Current-free phase phi_star at the given external flux.

    The root is tracked by continuation in phi_ext from phi_star = 0 at
    phi_ext = 0, which selects the branch adiabatically connected to the
    unbiased device.  The returned value satisfies
    |r*sin(phi_star) + sin((phi_star - phi_ext)/3)| < 1e-12.
    """
    if not math.isfinite(phi_ext):
        raise ValueError("phi_ext must be finite")
    n_steps = max(1, math.ceil(abs(phi_ext) / 0.1))
    phi = 0.0
    for j in range(1, n_steps + 1):
        target = phi_ext * j / n_steps
        # phi_star tracks phi_ext with slope ~1 on the physical branch
        phi = _newton(params, phi + (phi_ext / n_steps), target)
    return phi


def _coefficients(params, phi_star, phi_ext):
    u = (phi_star - phi_ext) / 3.0
    sp, cp = _sin_folded(phi_star), _cos_folded(phi_star)
    su, cu = _sin_folded(u), _cos_folded(u)
    alpha = params.r * cp + cu / 3.0
    beta = 0.5 * (params.r * sp + su / 9.0)
    gamma = (params.r * cp + cu / 27.0) / 6.0
    return alpha, beta, gamma


def operating_point(params: SnailParameters, phi_ext: float) -> OperatingPoint:
    """Solve the steady state and assemble every flux-derived coefficient."""
    phi_star = solve_steady_phase(params, phi_ext)
    return _operating_point_at(params, phi_star, phi_ext)


def _operating_point_at(params, phi_star, phi_ext):
    alpha, beta, gamma = _coefficients(params, phi_star, phi_ext)
    if alpha <= 0.0:
        raise UnphysicalBranchError(
            f"alpha={alpha:.4e} <= 0 at phi_ext={phi_ext!r}: negative inductance branch"
        )
    l_cell = PHI0 / (2.0 * math.pi * params.i0 * alpha)
    z_char = math.sqrt(l_cell / params.cg)
    omega0 = 1.0 / math.sqrt(l_cell * params.cg)
    omega_j = 1.0 / math.sqrt(l_cell * params.cj)
    e_c = E_CHARGE**2 / (2.0 * params.cg)
    g3 = (beta / (3.0 * alpha)) * math.sqrt(e_c * omega0 / HBAR)
    g4 = (gamma / (2.0 * alpha)) * e_c / HBAR
    return OperatingPoint(
        phi_ext=phi_ext,
        phi_star=phi_star,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        l_cell=l_cell,
        z_char=z_char,
        omega0=omega0,
        omega_j=omega_j,
        g3=g3,
        g4=g4,
    )


def flux_sweep(params: SnailParameters, n_points: int) -> list[OperatingPoint]:
    """Operating points on a uniform phi_ext grid over [0, 2*pi].

    The steady-state branch is continued across the grid so phi_star is a
    continuous function of flux.  For large grids the continuation runs on a
    coarse subgrid and the full grid is polished by vectorized Newton steps
    seeded from it; every returned point satisfies the 1e-12 residual bound.
    """
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    grid = np.linspace(0.0, 2.0 * np.pi, n_points)

    n_coarse = min(n_points, 2049)
    coarse = np.linspace(0.0, 2.0 * np.pi, n_coarse)
    roots = np.empty(n_coarse)
    phi = 0.0
    step = coarse[1] - coarse[0]
    for j, pe in enumerate(coarse):
        phi = _newton(params, phi if j == 0 else phi + step, pe)
        roots[j] = phi

    if n_points <= n_coarse:
        phis = roots
    else:
        phis = np.interp(grid, coarse, roots)
        for _ in range(8):
            u = (phis - grid) / 3.0
            res = params.r * _sin_folded_arr(phis) + _sin_folded_arr(u)
            slope = params.r * _cos_folded_arr(phis) + _cos_folded_arr(u) / 3.0
            phis = phis - res / slope
        u = (phis - grid) / 3.0
        res = params.r * _sin_folded_arr(phis) + _sin_folded_arr(u)
        bad = np.abs(res) >= _RESIDUAL_TOL * 10
        if bad.any():
            raise SteadyStateError(float(grid[bad][0]), float(res[bad][0]))

    return [_operating_point_at(params, float(p), float(pe)) for p, pe in zip(phis, grid)]


def g3_maximal_flux(params: SnailParameters, n_scan: int = 4001) -> float:
    """Flux in [0, pi] maximizing |g3|, refined by golden-section search.

    This is the natural bias for demonstrating second-harmonic physics in the
    time-domain lattice.
    """
    grid = np.linspace(0.02, np.pi - 0.02, n_scan)
    mags = np.empty(n_scan)
    phi = 0.0
    prev = 0.0
    for j, pe in enumerate(grid):
        phi = _newton(params, phi + (pe - prev), pe)
        prev = pe
        mags[j] = abs(_operating_point_at(params, phi, pe).g3)
    i = int(np.argmax(mags))
    lo, hi = grid[max(0, i - 1)], grid[min(n_scan - 1, i + 1)]

    def neg_g3(pe):
        return -abs(operating_point(params, pe).g3)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = neg_g3(c), neg_g3(d)
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = neg_g3(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = neg_g3(d)
    return 0.5 * (a + b)
