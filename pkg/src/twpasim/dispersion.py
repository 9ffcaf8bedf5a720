"""Pump-off dispersion of the junction-loaded line, and measured-loss handling.

The linearized line supports waves with per-cell wavevector

    k(omega) = (omega/omega0) / sqrt(1 - omega^2/omega_j^2),

with position measured in cell index. k diverges at the plasma cutoff
omega_j. The transmitted phase through n_cells cells is theta0 + n_cells*k,
with theta0 absorbing the 2*n*pi ambiguity of wrapped phase data.

Measured |S21| tables (dB, <= 0) are converted to the imaginary wavevector
component kappa'' (amplitude nepers per cell) used by the coupled-mode and
noise models: exp(-kappa''*N) reproduces the tabulated amplitude transmission.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, LossRangeError, PlasmaCutoffError
from .snail import OperatingPoint

_LN10 = math.log(10.0)


def wavevector(op: OperatingPoint, omega: float) -> float:
    """Real wavevector in radians per cell; requires 0 <= omega < omega_j."""
    if omega < 0:
        raise ValueError("omega must be non-negative")
    if omega >= op.omega_j:
        raise PlasmaCutoffError(
            f"omega/2pi = {omega / (2 * math.pi * 1e9):.4f} GHz at or above plasma "
            f"cutoff {op.omega_j / (2 * math.pi * 1e9):.4f} GHz"
        )
    return (omega / op.omega0) / math.sqrt(1.0 - (omega / op.omega_j) ** 2)


def transmitted_phase(
    op: OperatingPoint, n_cells: int, theta0: float, omega: float
) -> float:
    """Model for fitting measured transmitted phase: theta0 + n_cells*k(omega)."""
    return theta0 + n_cells * wavevector(op, omega)


def delta_k_dispersion(op: OperatingPoint, omega_s: float, omega_p: float) -> float:
    """Linear phase mismatch k_s + k_i - 2*k_p with omega_i = 2*omega_p - omega_s.

    Non-negative for any signal below cutoff (the dispersion relation is
    strictly convex in the passband), and zero only at omega_s = omega_p.
    """
    omega_i = 2.0 * omega_p - omega_s
    if omega_i <= 0:
        raise ValueError(
            f"idler frequency non-positive for omega_s/2pi="
            f"{omega_s / (2 * math.pi * 1e9):.4f} GHz"
        )
    return (
        wavevector(op, omega_s)
        + wavevector(op, omega_i)
        - 2.0 * wavevector(op, omega_p)
    )


@dataclass(frozen=True)
class LossProfile:
    """Tabulated transmission loss |S21| in dB versus angular frequency.

    Interpolation is linear in (omega, dB). Frequencies must be strictly
    increasing and every dB entry non-positive.
    """

    omega: tuple[float, ...]
    s21_db: tuple[float, ...]

    def __post_init__(self):
        if len(self.omega) != len(self.s21_db) or len(self.omega) < 2:
            raise ValueError("loss profile needs at least two (omega, dB) pairs")
        if any(b <= a for a, b in zip(self.omega, self.omega[1:])):
            raise ValueError("loss profile frequencies must be strictly increasing")
        if any(v > 0 for v in self.s21_db):
            raise ValueError("loss profile s21_db entries must be <= 0")

    def s21_db_at(self, omega: float) -> float:
        if omega < self.omega[0] or omega > self.omega[-1]:
            raise LossRangeError(omega, self.omega[0], self.omega[-1])
        return float(np.interp(omega, self.omega, self.s21_db))

    @classmethod
    def from_csv(cls, path) -> "LossProfile":
        """Load a `freq_ghz,s21_db` table (decimal point, no separators)."""
        rows = []
        try:
            with open(path, newline="") as fh:
                reader = csv.DictReader(fh)
                if reader.fieldnames != ["freq_ghz", "s21_db"]:
                    raise DataError(
                        f"{path}: expected header 'freq_ghz,s21_db', "
                        f"got {reader.fieldnames}"
                    )
                for rec in reader:
                    rows.append(
                        (2e9 * math.pi * float(rec["freq_ghz"]), float(rec["s21_db"]))
                    )
        except OSError as exc:
            raise DataError(f"cannot read loss profile {path}: {exc}") from exc
        except ValueError as exc:
            raise DataError(f"malformed loss profile {path}: {exc}") from exc
        if not rows:
            raise DataError(f"loss profile {path} is empty")
        return cls(tuple(r[0] for r in rows), tuple(r[1] for r in rows))

    @classmethod
    def linear_slope(
        cls, db_per_ghz: float, f_min_ghz: float = 0.1, f_max_ghz: float = 25.0
    ) -> "LossProfile":
        """Flat-slope profile, e.g. the 'about 1 dB per GHz' half-flux loss."""
        return cls(
            (2e9 * math.pi * f_min_ghz, 2e9 * math.pi * f_max_ghz),
            (-db_per_ghz * f_min_ghz, -db_per_ghz * f_max_ghz),
        )


def kappa_from_loss(profile: LossProfile, n_cells: int, omega: float) -> float:
    """Imaginary wavevector component, amplitude nepers per cell.

    kappa'' = ln(10) * |S21_dB| / (20 * n_cells), so that the amplitude
    transmission exp(-kappa''*N) reproduces the tabulated dB figure.
    db_from_kappa is the exact inverse: the round trip is bit-for-bit.
    """
    return abs(profile.s21_db_at(omega)) * (_LN10 / (20.0 * n_cells))


def db_from_kappa(kappa: float, n_cells: int) -> float:
    """Reconstruct the (negative) dB figure 20*N*kappa''/ln(10) from kappa''."""
    return -(kappa / (_LN10 / (20.0 * n_cells)))
