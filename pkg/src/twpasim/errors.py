"""Exception hierarchy.

The CLI maps these onto distinct exit codes: configuration problems (2),
missing or malformed input data (3), numerical solver failures (4) and
requests outside the validity domain of a model (5).
"""


class TwpasimError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TwpasimError):
    """Run file is missing, malformed, or contains unknown/invalid keys."""


class DataError(TwpasimError):
    """An input data file is missing, malformed, or does not cover a request."""


class LossRangeError(DataError):
    """Requested frequency lies outside the tabulated loss profile."""

    def __init__(self, omega: float, omega_min: float, omega_max: float):
        self.omega = omega
        ghz = 2e9 * 3.141592653589793
        super().__init__(
            f"frequency {omega / ghz:.4f} GHz outside the loss table "
            f"[{omega_min / ghz:.4f}, {omega_max / ghz:.4f}] GHz; "
            f"extrapolation refused"
        )


class SolverError(TwpasimError):
    """A numerical solver failed to converge."""


class SteadyStateError(SolverError):
    """Steady-state phase solve did not converge; carries the last residual."""

    def __init__(self, phi_ext: float, residual: float):
        self.phi_ext = phi_ext
        self.residual = residual
        super().__init__(
            f"steady-state solve failed at phi_ext={phi_ext!r} "
            f"(last residual {residual:.3e})"
        )


class FitAbortedError(SolverError):
    """Residual evaluator returned non-finite values; carries the parameters."""

    def __init__(self, params):
        self.params = tuple(params)
        super().__init__(f"fit aborted: non-finite residual at parameters {self.params}")


class FitDegenerateError(SolverError):
    """The fit design is rank deficient (e.g. all source temperatures equal)."""


class IntegrationUnstableError(SolverError):
    """Time-domain integration produced non-finite state; carries the time."""

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"lattice integration diverged at t={time:.3e} s")


class ModelValidityError(TwpasimError):
    """Inputs violate the validity domain of the model being evaluated."""


class UnphysicalBranchError(ModelValidityError):
    """Steady state landed on a branch with non-positive inverse inductance."""


class PlasmaCutoffError(ModelValidityError):
    """A mode frequency is at or above the plasma cutoff of the line."""


class PumpAmplitudeError(ModelValidityError):
    """Per-cell pump phase slope too large for the weak-nonlinearity model."""
