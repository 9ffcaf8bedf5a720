"""Physical constants used across the toolkit (CODATA, via scipy)."""

from scipy import constants as _cst

H = _cst.h
HBAR = _cst.hbar
E_CHARGE = _cst.e
K_B = _cst.k

# Superconducting flux quantum h/2e and resistance quantum h/4e^2.
PHI0 = H / (2.0 * E_CHARGE)
R_Q = H / (4.0 * E_CHARGE**2)
