"""ABCD two-port analysis of the LC ladder: Bloch impedance, gaps, ripple.

The unit cell is a series inductor followed by a shunt capacitor, the same
topology as the telegrapher model used by the time-domain lattice (the Bloch
impedance of the alternative mid-shunt split differs only at second order in
omega/omega_cutoff). Periodic modulation of L and C opens a stop band at the
Bragg frequency of the modulation period; the unmodulated ladder has none.

Gain ripple from end reflections is modeled by interfering the forward wave
zeta0 = g*(1-G1)*(1-G2)*A with its first-order double-reflection correction
zeta1 = g^2*G1*G2*(1-G1)*(1-G2)*A: the peak-to-peak ripple in dB is
20*log10((1+rho)/(1-rho)) with rho = |zeta1/zeta0| = g*|G1*G2|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelValidityError


@dataclass(frozen=True)
class TwoPortABCD:
    """Standard cascade parameters; b in ohms, c in siemens."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __matmul__(self, other: "TwoPortABCD") -> "TwoPortABCD":
        return TwoPortABCD(
            a=self.a * other.a + self.b * other.c,
            b=self.a * other.b + self.b * other.d,
            c=self.c * other.a + self.d * other.c,
            d=self.c * other.b + self.d * other.d,
        )

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


IDENTITY = TwoPortABCD(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class LadderSpec:
    """Geometry of an (optionally modulated) LC ladder."""

    l_cell: float
    c_cell: float
    n_cells: int
    modulation_amplitude: float = 0.0
    modulation_period: int = 2
    modulate_inductance: bool = True
    modulate_capacitance: bool = True

    def __post_init__(self):
        if not 0.0 <= self.modulation_amplitude < 1.0:
            raise ValueError("modulation amplitude must be in [0, 1)")
        if self.modulation_amplitude > 0 and self.modulation_period < 2:
            raise ValueError("modulation period must be at least 2 cells")

    def cell_values(self, n: int) -> tuple[float, float]:
        """(L, C) of cell n with sinusoidal per-cell modulation.

        L and C are modulated in anti-phase, L*(1+m), C*(1-m): that modulates
        the local impedance sqrt(L/C), which is what opens a usable stop
        band. In-phase modulation would leave the impedance constant and only
        perturb the phase velocity, giving a vestigial gap.
        """
        if self.modulation_amplitude == 0.0:
            return self.l_cell, self.c_cell
        m = self.modulation_amplitude * math.sin(2.0 * math.pi * n / self.modulation_period)
        l = self.l_cell * (1.0 + m) if self.modulate_inductance else self.l_cell
        c = self.c_cell * (1.0 - m) if self.modulate_capacitance else self.c_cell
        return l, c

    def supercell_length(self) -> int:
        return self.modulation_period if self.modulation_amplitude > 0 else 1


def cell_abcd(l: float, c: float, omega: float) -> TwoPortABCD:
    """Series iwL followed by shunt iwC; unit determinant by reciprocity."""
    if omega < 0:
        raise ValueError("omega must be non-negative")
    z = 1j * omega * l
    y = 1j * omega * c
    return TwoPortABCD(a=1.0 + z * y, b=z, c=y, d=1.0)


def chain(cells) -> TwoPortABCD:
    """Ordered cascade of two-ports (input side first)."""
    cells = list(cells)
    if not cells:
        raise ValueError("chain of zero cells")
    total = cells[0]
    for cell in cells[1:]:
        total = total @ cell
    return total


def _supercell(spec: LadderSpec, omega: float) -> TwoPortABCD:
    return chain(
        cell_abcd(*spec.cell_values(n), omega) for n in range(spec.supercell_length())
    )


def characteristic_impedance(spec: LadderSpec, omega_grid) -> np.ndarray:
    """Bloch impedance of one (super)cell per frequency.

    Z_B = b / sqrt(((a+d)/2)^2 - 1), sign chosen for positive real part in
    the passband. Inside a stop band (|a+d|/2 > 1) the result is purely
    imaginary, which marks the point as non-propagating.
    """
    out = np.empty(len(omega_grid), dtype=complex)
    for j, omega in enumerate(np.asarray(omega_grid, dtype=float)):
        cell = _supercell(spec, omega)
        disc = ((cell.a + cell.d) / 2.0) ** 2 - 1.0
        root = cmath.sqrt(disc)
        if root == 0:
            out[j] = complex(math.inf, 0.0)
            continue
        zb = cell.b / root
        if zb.real < 0 or (zb.real == 0 and zb.imag < 0):
            zb = -zb
        out[j] = zb
    return out


def transmission(spec: LadderSpec, z0: float, omega_grid) -> np.ndarray:
    """Complex S21 of the full ladder in a z0 reference impedance."""
    if z0 <= 0:
        raise ValueError("reference impedance must be positive")
    out = np.empty(len(omega_grid), dtype=complex)
    for j, omega in enumerate(np.asarray(omega_grid, dtype=float)):
        total = chain(
            cell_abcd(*spec.cell_values(n), omega) for n in range(spec.n_cells)
        )
        out[j] = 2.0 / (total.a + total.b / z0 + total.c * z0 + total.d)
    return out


def ripple_peak_to_peak(gain_db: float, gamma1: float, gamma2: float) -> float:
    """Peak-to-peak gain ripple in dB from the two end reflections.

    Valid while the first-order correction stays below the forward wave
    (rho = g*|gamma1*gamma2| < 1).
    """
    if abs(gamma1) >= 1 or abs(gamma2) >= 1:
        raise ValueError("reflection coefficients must have magnitude < 1")
    g = 10.0 ** (gain_db / 20.0)
    rho = g * abs(gamma1 * gamma2)
    if rho >= 1.0:
        raise ModelValidityError(
            f"first-order ripple model invalid: g*|G1*G2| = {rho:.3f} >= 1"
        )
    return 20.0 * math.log10((1.0 + rho) / (1.0 - rho))


def reflection_from_impedance(z_port: float, z0: float = 50.0) -> float:
    """Gamma = (Z - Z0)/(Z + Z0) for a real port impedance."""
    return (z_port - z0) / (z_port + z0)
