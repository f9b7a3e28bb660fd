"""Physical and numerical parameters of the coupled electron-vibration-cavity system.

Default values are the standard parameter set used throughout: N_e = N_v = 1e10
two-level systems / oscillators, an electronic transition at 0.1 a.u. driven by
a short Gaussian-enveloped pulse, and a cavity mode resonant with the
vibrational frequency at 0.01 a.u. (2195 cm^-1).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from .units import PS_TO_AU


class ParameterError(ValueError):
    """Raised when a parameter violates its constraint; names the offending key."""


DARK_SAMPLING_SCHEMES = ("midpoint-grid", "seeded-uniform")


@dataclass(frozen=True)
class Pulse:
    """Gaussian-enveloped resonant drive E(t) = E0 sin(w_e t) exp(-(t-t_start)^2/sigma^2)."""

    E0: float = 0.01          # field amplitude, a.u.
    t_start: float = 500.0    # envelope centre, a.u. (12.1 fs)
    sigma: float = 100.0      # envelope width, a.u. (2.4 fs)


@dataclass(frozen=True)
class Params:
    """All physical and numerical parameters, in Hartree atomic units.

    n_e and n_v are stored as floats: sweeps span 1e6-1e12 where integer-ness
    is irrelevant and only sqrt(n_v) and n_e enter the equations of motion.
    """

    # electronic subsystem
    omega_e: float = 0.1      # transition frequency
    d_eg: float = 0.5         # transition dipole
    d_gg: float = 0.0         # ground-state permanent dipole
    d_ee: float = 1.0         # excited-state permanent dipole
    n_e: float = 1e10         # number of two-level systems
    gamma_e: float = 1e-5     # relaxation/decoherence rate

    # vibrational subsystem
    omega_v: float = 0.01     # oscillator frequency
    d_v: float = 0.01         # vibrational transition-dipole coefficient
    n_v: float = 1e10         # number of oscillators

    # cavity
    omega_c: float = 0.01     # mode frequency
    lambda_c: float = 2e-6    # coupling strength
    gamma_c: float = 2e-5     # loss rate

    # bright-dark dephasing bath
    gamma_v_total: float = 2e-6       # coupling before 1/sqrt(n_dark) normalization
    n_dark: int = 500                 # explicit dark oscillators
    dark_omega_min: float = 0.007
    dark_omega_max: float = 0.013
    dark_sampling: str = "midpoint-grid"
    dark_seed: int = 0

    # drive
    pulse: Pulse = field(default_factory=Pulse)

    # coefficients of the collective and vibrational cross terms in the
    # effective single-TLS Hamiltonian; 2 is the mean-field-consistent value,
    # 1 reproduces the halved coefficients sometimes quoted for this model
    collective_term_factor: int = 2
    cross_term_factor: int = 2

    # integrator
    dt: float = 0.5                       # step, a.u.
    t_final: float = 5.0 * PS_TO_AU       # horizon, a.u. (5 ps)
    record_stride: int = 50               # record every this many steps

    # --- derived quantities ---

    @property
    def d_bar(self) -> float:
        """Mean permanent dipole (d_gg + d_ee)/2."""
        return 0.5 * (self.d_gg + self.d_ee)

    @property
    def delta_d(self) -> float:
        """Permanent-dipole difference d_ee - d_gg."""
        return self.d_ee - self.d_gg

    @property
    def gamma_v(self) -> float:
        """Per-mode bright-dark coupling, gamma_v_total / sqrt(n_dark)."""
        if self.n_dark == 0:
            return 0.0
        return self.gamma_v_total / math.sqrt(self.n_dark)

    def replace(self, **overrides) -> "Params":
        """Return a copy with the given fields replaced (validated)."""
        p = dataclasses.replace(self, **overrides)
        p.validate()
        return p

    def validate(self) -> None:
        """Check every invariant; raise ParameterError naming the bad key."""
        positive = {
            "omega_e": self.omega_e,
            "omega_v": self.omega_v,
            "omega_c": self.omega_c,
            "d_v": self.d_v,
            "dt": self.dt,
            "t_final": self.t_final,
        }
        for key, val in positive.items():
            if not val > 0:
                raise ParameterError(f"{key} must be > 0 (got {val})")
        nonneg = {
            "lambda_c": self.lambda_c,
            "gamma_e": self.gamma_e,
            "gamma_c": self.gamma_c,
            "gamma_v_total": self.gamma_v_total,
            "pulse.E0": self.pulse.E0,
        }
        for key, val in nonneg.items():
            if not val >= 0:
                raise ParameterError(f"{key} must be >= 0 (got {val})")
        if not self.n_e >= 1:
            raise ParameterError(f"n_e must be >= 1 (got {self.n_e})")
        if not self.n_v >= 1:
            raise ParameterError(f"n_v must be >= 1 (got {self.n_v})")
        if self.n_dark < 0 or int(self.n_dark) != self.n_dark:
            raise ParameterError(f"n_dark must be an integer >= 0 (got {self.n_dark})")
        if self.n_dark > 0 and not self.dark_omega_min < self.dark_omega_max:
            raise ParameterError(
                "dark_omega_min must be < dark_omega_max "
                f"(got {self.dark_omega_min}, {self.dark_omega_max})"
            )
        if self.dark_sampling not in DARK_SAMPLING_SCHEMES:
            raise ParameterError(
                f"dark_sampling must be one of {DARK_SAMPLING_SCHEMES} "
                f"(got {self.dark_sampling!r})"
            )
        if self.collective_term_factor not in (1, 2):
            raise ParameterError(
                f"collective_term_factor must be 1 or 2 (got {self.collective_term_factor})"
            )
        if self.cross_term_factor not in (1, 2):
            raise ParameterError(
                f"cross_term_factor must be 1 or 2 (got {self.cross_term_factor})"
            )
        if self.record_stride < 1 or int(self.record_stride) != self.record_stride:
            raise ParameterError(
                f"record_stride must be an integer >= 1 (got {self.record_stride})"
            )
        if not self.pulse.sigma > 0:
            raise ParameterError(f"pulse.sigma must be > 0 (got {self.pulse.sigma})")


def default_params() -> Params:
    """The default parameter set."""
    return Params()
