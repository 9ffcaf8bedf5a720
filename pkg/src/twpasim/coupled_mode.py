"""Four-wave-mixing gain of the nonlinear line: phase matching and propagation.

Pump-induced phase modulation
-----------------------------
A strong pump at omega_p with phase amplitude |A_p| (radians) shifts the
wavevectors of pump, signal and idler through self- and cross-phase
modulation:

    eta_s,i = (6*gamma / 8*wt_s,i) * k_p^2 * k_s,i * |A_p|^2
    eta_p   = (3*gamma / 8*wt_p)   * k_p^3         * |A_p|^2
    wt_m    = 1 - omega_m^2/omega_j^2,

where gamma is the dimensionless cubic coefficient of the wave equation for
the node phase. Writing the quartic mixing rate as
hbar*g4 = (gamma_cell/2 alpha) * E_C with E_C = e^2/(2*cg), the cubic term of
the wave equation carries the coefficient

    8*g4*R_Q/(pi*omega0*Z) = (gamma_cell/alpha) / (omega0*Z*cg) = gamma_cell/alpha,

because omega0*Z*cg = sqrt(1/(L*cg)) * sqrt(L/cg) * cg = 1 identically. Hence
gamma = gamma_cell/alpha, the only identification that keeps the eta formulas
dimensionless per cell. Its sign, the sign of the quartic nonlinearity, sets
the sign of every eta and of the Kerr mismatch

    delta_k_kerr = eta_s + eta_i - 2*eta_p,

so negative-quartic bias cancels the always-positive dispersive mismatch.

Propagation
-----------
The signal/idler pair evolves as dA/dx = M A with constant generator M. In
raw phase-amplitude variables the off-diagonal couplings are
(k_i/2k_s)*eta_s and (k_s/2k_i)*eta_i; rescaling the two modes by the
diagonal similarity that equalizes them (photon-flux normalization) gives

    M = [[-i*dk/2 - kappa_s,  +i*q],
         [-i*q*,              +i*dk/2 - kappa_i]],   q = sgn * sqrt(eta_s*eta_i)/2.

The rescaling leaves the diagonal, the eigenvalues and therefore S11 (the
signal gain) untouched, while making the lossless propagator exactly
commutator-preserving, |S11|^2 - |S12|^2 = 1, as a two-mode squeezer must be.
The lossless power gain has the closed form

    G = cosh^2(g*x) + (dk^2/4g^2) * sinh^2(g*x),   g = sqrt(eta_s*eta_i - dk^2)/2,

continued through g^2 < 0 via cos/sin; the matrix exponential reproduces it
to rounding. Pump attenuation is folded in as a position-independent
amplitude reduction |A_p| = a_p0 * exp(-kappa_p*N/2).

Validity guard: the weak-nonlinearity expansion behind the eta formulas needs
a per-cell pump phase slope k_p*|A_p| below 1 radian; the amplitude actually
entering the formulas (after pump attenuation, where applicable) is checked,
with a warning above 0.5.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _expm_pade

from .constants import PHI0
from .dispersion import LossProfile, delta_k_dispersion, kappa_from_loss, wavevector
from .errors import PumpAmplitudeError, TwpasimError
from .snail import OperatingPoint

log = logging.getLogger(__name__)

GUARD_HARD_RAD = 1.0
GUARD_WARN_RAD = 0.5


@dataclass(frozen=True)
class PumpDrive:
    """Pump tone, specified by phase amplitude or by input power.

    Exactly one of a_p0 (dimensionless phase amplitude at the input, radians)
    and input_power_dbm may be given. a_p0 = 0 is allowed and means pump off.
    """

    omega_p: float
    a_p0: float | None = None
    input_power_dbm: float | None = None

    def __post_init__(self):
        if (self.a_p0 is None) == (self.input_power_dbm is None):
            raise ValueError("give exactly one of a_p0 and input_power_dbm")
        if self.a_p0 is not None and self.a_p0 < 0:
            raise ValueError("a_p0 must be non-negative")

    def amplitude(self, op: OperatingPoint) -> float:
        """Input phase amplitude in radians, converting from power if needed."""
        if self.a_p0 is not None:
            return self.a_p0
        return pump_amplitude_from_power(op, self.omega_p, self.input_power_dbm)


def pump_amplitude_from_power(
    op: OperatingPoint, omega_p: float, power_dbm: float
) -> float:
    """Phase amplitude of a traveling pump wave carrying the given power.

    Three steps: power to current amplitude on a Z-ohm line,
    I_a = sqrt(2P/Z); current to per-cell phase drop through the cell
    inductance, delta = (2*pi/Phi0)*L*I_a; phase drop to wave amplitude,
    A_p = delta/k_p, so phi(x, t) = A_p*sin(k_p*x - omega_p*t) carries P.
    """
    k_p = wavevector(op, omega_p)
    p_watts = 1e-3 * 10.0 ** (power_dbm / 10.0)
    i_a = math.sqrt(2.0 * p_watts / op.z_char)
    delta = (2.0 * math.pi / PHI0) * op.l_cell * i_a
    return delta / k_p


def _check_guard(k_p: float, a_p: float):
    slope = k_p * a_p
    if slope >= GUARD_HARD_RAD:
        raise PumpAmplitudeError(
            f"per-cell pump phase slope k_p*A_p = {slope:.3f} rad >= "
            f"{GUARD_HARD_RAD} rad: outside the weak-nonlinearity model"
        )
    if slope > GUARD_WARN_RAD:
        warnings.warn(
            f"per-cell pump phase slope k_p*A_p = {slope:.3f} rad exceeds "
            f"{GUARD_WARN_RAD} rad; phase-modulation formulas are first order "
            f"in pump power",
            stacklevel=2,
        )


def kerr_phase_shifts(
    op: OperatingPoint, omega_s: float, omega_p: float, a_p: float
) -> tuple[float, float, float, float]:
    """Phase-modulation rates (eta_s, eta_i, eta_p) and their Kerr mismatch.

    a_p is the pump phase amplitude actually present in the medium (callers
    modeling pump attenuation pass the reduced amplitude).
    """
    omega_i = 2.0 * omega_p - omega_s
    if omega_i <= 0:
        raise ValueError("idler frequency non-positive")
    _check_guard(wavevector(op, omega_p), a_p)
    gamma = op.gamma / op.alpha
    k_p = wavevector(op, omega_p)
    k_s = wavevector(op, omega_s)
    k_i = wavevector(op, omega_i)
    wt = lambda w: 1.0 - (w / op.omega_j) ** 2
    a2 = a_p * a_p
    eta_s = (6.0 * gamma / (8.0 * wt(omega_s))) * k_p**2 * k_s * a2
    eta_i = (6.0 * gamma / (8.0 * wt(omega_i))) * k_p**2 * k_i * a2
    eta_p = (3.0 * gamma / (8.0 * wt(omega_p))) * k_p**3 * a2
    return eta_s, eta_i, eta_p, eta_s + eta_i - 2.0 * eta_p


@dataclass(frozen=True)
class CoupledModeSystem:
    """Constant generator of coupled signal/idler propagation over the line.

    delta_k is the total mismatch (dispersive plus Kerr); the etas are the
    phase-modulation rates it was built from, all sharing the sign of the
    quartic nonlinearity. kappa2_* are amplitude nepers per cell.
    """

    delta_k: float
    eta_s: float
    eta_i: float
    eta_p: float
    k_s: float
    k_i: float
    kappa2_s: float
    kappa2_i: float
    kappa2_p: float
    n_cells: int

    def __post_init__(self):
        signs = {math.copysign(1.0, e) for e in (self.eta_s, self.eta_i, self.eta_p) if e != 0.0}
        if len(signs) > 1:
            raise ValueError("eta_s, eta_i, eta_p must share the sign of the quartic term")
        if min(self.kappa2_s, self.kappa2_i, self.kappa2_p) < 0:
            raise ValueError("kappa'' components must be non-negative")
        if self.n_cells < 1:
            raise ValueError("n_cells must be at least 1")

    @classmethod
    def from_operating_point(
        cls,
        op: OperatingPoint,
        omega_s: float,
        pump: PumpDrive,
        n_cells: int,
        loss: LossProfile | None = None,
    ) -> "CoupledModeSystem":
        """Build the generator at one signal frequency.

        With a loss profile, kappa'' is interpolated at signal, idler and pump
        frequencies and the pump amplitude entering the Kerr shifts is reduced
        by exp(-kappa_p*N/2) (position-independent attenuation model).
        """
        omega_i = 2.0 * pump.omega_p - omega_s
        if omega_i <= 0:
            raise ValueError("idler frequency non-positive")
        if loss is not None:
            kap_s = kappa_from_loss(loss, n_cells, omega_s)
            kap_i = kappa_from_loss(loss, n_cells, omega_i)
            kap_p = kappa_from_loss(loss, n_cells, pump.omega_p)
        else:
            kap_s = kap_i = kap_p = 0.0
        a_eff = pump.amplitude(op) * math.exp(-kap_p * n_cells / 2.0)
        eta_s, eta_i, eta_p, dk_kerr = kerr_phase_shifts(op, omega_s, pump.omega_p, a_eff)
        dk = delta_k_dispersion(op, omega_s, pump.omega_p) + dk_kerr
        return cls(
            delta_k=dk,
            eta_s=eta_s,
            eta_i=eta_i,
            eta_p=eta_p,
            k_s=wavevector(op, omega_s),
            k_i=wavevector(op, omega_i),
            kappa2_s=kap_s,
            kappa2_i=kap_i,
            kappa2_p=kap_p,
            n_cells=n_cells,
        )

    def generator(self) -> np.ndarray:
        """Photon-flux-normalized 2x2 generator matrix (per cell)."""
        q = math.copysign(math.sqrt(self.eta_s * self.eta_i), self.eta_s) / 2.0
        return np.array(
            [
                [-0.5j * self.delta_k - self.kappa2_s, 1j * q],
                [-1j * q, 0.5j * self.delta_k - self.kappa2_i],
            ],
            dtype=complex,
        )


def _expm_2x2(m: np.ndarray, x: float) -> np.ndarray:
    """exp(m*x) for 2x2 m via the trace/deviator closed form.

    Eigenvalues are tau/2 +- q; near a defective matrix (q ~ 0) falls back to
    scaling-and-squaring, which carries a ~1e-12 error bound.
    """
    tau = 0.5 * (m[0, 0] + m[1, 1])
    dev = m - tau * np.eye(2)
    q2 = dev[0, 0] * dev[0, 0] + dev[0, 1] * dev[1, 0]
    q = np.sqrt(q2)
    if abs(q * x) < 1e-6:
        return _expm_pade(np.asarray(m) * x)
    c = np.cosh(q * x)
    s = np.sinh(q * x) / q
    return np.exp(tau * x) * (c * np.eye(2) + s * dev)


def propagate(system: CoupledModeSystem) -> np.ndarray:
    """Scattering matrix S(N) = exp(M*N) over the whole line."""
    return _expm_2x2(system.generator(), float(system.n_cells))


def analytic_gain_lossless(
    op: OperatingPoint, omega_s: float, pump: PumpDrive, n_cells: int
) -> float:
    """Closed-form lossless power gain in dB.

    G = cosh^2(g*N) + (dk^2/4g^2)*sinh^2(g*N) with g = sqrt(eta_s*eta_i - dk^2)/2,
    evaluated through the complex continuation when the radicand is negative.
    G >= 1 always, and G = 1 for a_p = 0.
    """
    a_p = pump.amplitude(op)
    eta_s, eta_i, _, dk_kerr = kerr_phase_shifts(op, omega_s, pump.omega_p, a_p)
    dk = delta_k_dispersion(op, omega_s, pump.omega_p) + dk_kerr
    g = np.sqrt(complex(eta_s * eta_i - dk * dk)) / 2.0
    gx = g * n_cells
    if abs(gx) < 1e-8:
        sinhc = n_cells * (1.0 + gx * gx / 6.0)
    else:
        sinhc = np.sinh(gx) / g
    gain = np.cosh(gx) ** 2 + (dk * dk / 4.0) * sinhc**2
    return 10.0 * math.log10(max(gain.real, 1e-300))


@dataclass(frozen=True)
class GainPoint:
    """One point of a gain profile.

    gain_db is the absolute transmission 20*log10|S11| (loss included);
    delta_k_out is the total mismatch accumulated over the device, delta_k*N.
    """

    omega_s: float
    gain_db: float
    delta_k_out: float


def gain_profile(
    op: OperatingPoint,
    pump: PumpDrive,
    loss: LossProfile,
    omega_s_grid,
    n_cells: int,
) -> list[GainPoint]:
    """Lossy gain across a signal-frequency grid.

    Points whose modes fall outside the model domain (idler non-positive,
    above cutoff, outside the loss table) are skipped with a logged
    diagnostic; all others are returned in grid order.
    """
    points = []
    for omega_s in np.atleast_1d(np.asarray(omega_s_grid, dtype=float)):
        try:
            system = CoupledModeSystem.from_operating_point(
                op, float(omega_s), pump, n_cells, loss
            )
            s = propagate(system)
        except (TwpasimError, ValueError) as exc:
            log.warning(
                "gain point skipped at omega_s/2pi=%.4f GHz: %s",
                omega_s / (2e9 * math.pi),
                exc,
            )
            continue
        gain_db = 20.0 * math.log10(max(abs(s[0, 0]), 1e-300))
        points.append(
            GainPoint(
                omega_s=float(omega_s),
                gain_db=gain_db,
                delta_k_out=system.delta_k * n_cells,
            )
        )
    return points


def total_mismatch(
    op: OperatingPoint, omega_s: float, pump: PumpDrive, a_p: float | None = None
) -> float:
    """Total delta_k (dispersive + Kerr) at one signal frequency, lossless pump."""
    if a_p is None:
        a_p = pump.amplitude(op)
    *_, dk_kerr = kerr_phase_shifts(op, omega_s, pump.omega_p, a_p)
    return delta_k_dispersion(op, omega_s, pump.omega_p) + dk_kerr


def phase_matched_frequencies(
    op: OperatingPoint, pump: PumpDrive, resolution_hz: float = 1e3
) -> list[float]:
    """Signal frequencies in (0, 2*omega_p) where the total mismatch vanishes.

    Roots are bracketed by sign changes on a dense scan below the pump and
    bisected to the requested resolution; each is returned together with its
    mirror 2*omega_p - omega_s, so the result is a symmetric set around the
    pump. With a_p = 0 the mismatch is purely dispersive and only touches
    zero at the degenerate point, which is returned alone. An empty list is a
    valid outcome (no matching at this amplitude).
    """
    a_p = pump.amplitude(op)
    omega_p = pump.omega_p
    if a_p == 0.0:
        return [omega_p]
    lo = max(1e-3 * omega_p, 2.0 * omega_p - op.omega_j * 0.999999)
    hi = omega_p
    scan = np.linspace(lo, hi, 4001)
    vals = np.array([total_mismatch(op, w, pump, a_p) for w in scan])
    roots = []
    sign = np.sign(vals)
    for j in np.flatnonzero(np.diff(sign) != 0):
        a, b = scan[j], scan[j + 1]
        fa = vals[j]
        while b - a > 2.0 * math.pi * resolution_hz:
            m = 0.5 * (a + b)
            fm = total_mismatch(op, m, pump, a_p)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b))
    out = []
    for rt in roots:
        out.extend([rt, 2.0 * omega_p - rt])
    return sorted(out)
