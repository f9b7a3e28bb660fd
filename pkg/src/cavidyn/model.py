"""Core physical model: dipole operators, effective Hamiltonian, pulse, initial state.

The electronic ensemble is represented by the reduced density matrix of a
single representative two-level system in the ordered basis (|g>, |e>); the
cavity mode and the collective bright/dark vibrational coordinates are
classical phase-space variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import Params, ParameterError


@dataclass
class SystemState:
    """Full dynamical state: reduced 2x2 density matrix plus classical coordinates."""

    rho: np.ndarray                 # 2x2 complex, basis (|g>, |e>)
    q_c: float = 0.0                # cavity position
    p_c: float = 0.0                # cavity momentum
    q_B: float = 0.0                # bright-mode position
    p_B: float = 0.0                # bright-mode momentum
    q_D: np.ndarray = field(default_factory=lambda: np.zeros(0))
    p_D: np.ndarray = field(default_factory=lambda: np.zeros(0))
    omega_D: np.ndarray = field(default_factory=lambda: np.zeros(0))
    t: float = 0.0

    def copy(self) -> "SystemState":
        return SystemState(
            rho=self.rho.copy(), q_c=self.q_c, p_c=self.p_c,
            q_B=self.q_B, p_B=self.p_B,
            q_D=self.q_D.copy(), p_D=self.p_D.copy(), omega_D=self.omega_D.copy(),
            t=self.t,
        )

    def validate(self) -> None:
        if self.rho.shape != (2, 2):
            raise ValueError("rho must be 2x2")
        n = len(self.omega_D)
        if len(self.q_D) != n or len(self.p_D) != n:
            raise ValueError("q_D, p_D, omega_D must have equal lengths")
        if not (np.all(np.isfinite(self.rho.view(float)))
                and np.all(np.isfinite(self.q_D)) and np.all(np.isfinite(self.p_D))
                and all(math.isfinite(v) for v in (self.q_c, self.p_c, self.q_B, self.p_B))):
            raise ValueError("state contains non-finite entries")


def electronic_dipole_matrix(params: Params) -> np.ndarray:
    """Single-TLS electronic dipole operator.

    Real symmetric, with diagonal (d_gg, d_ee) and off-diagonal d_eg; this
    fixes the sigma_z sign convention unambiguously.
    """
    return np.array([[params.d_gg, params.d_eg],
                     [params.d_eg, params.d_ee]])


def excited_projector() -> np.ndarray:
    return np.array([[0.0, 0.0], [0.0, 1.0]])


def mean_electronic_dipole(rho: np.ndarray, params: Params) -> float:
    """Per-TLS dipole expectation Re Tr(rho mu); imaginary part must vanish."""
    mu = electronic_dipole_matrix(params)
    tr = np.trace(rho @ mu)
    if abs(tr.imag) > 1e-10:
        raise ValueError(f"Tr(rho mu) has imaginary part {tr.imag:.3e}; rho not Hermitian?")
    return tr.real


def vibrational_dipole(q_B: float, params: Params) -> float:
    """Collective vibrational dipole sqrt(n_v) d_v q_B."""
    return math.sqrt(params.n_v) * params.d_v * q_B


def mean_total_dipole(state: SystemState, params: Params) -> float:
    """Total mean dipole <mu> = sqrt(n_v) d_v q_B + n_e Re Tr(rho mu_e)."""
    return vibrational_dipole(state.q_B, params) + params.n_e * mean_electronic_dipole(state.rho, params)


def pulse_field(t: float, pulse, omega_e: float) -> float:
    """Drive field E(t) = E0 sin(omega_e t) exp(-(t - t_start)^2 / sigma^2)."""
    arg = (t - pulse.t_start) / pulse.sigma
    return pulse.E0 * math.sin(omega_e * t) * math.exp(-arg * arg)


def effective_hamiltonian(state: SystemState, params: Params, t: float) -> np.ndarray:
    """Effective single-TLS Hamiltonian, including the drive as a Hamiltonian term.

    H = omega_e |e><e| + omega_c lambda_c q_c mu
        + (lambda_c^2 / 2) [mu^2 + f_coll (n_e - 1) <mu> mu + f_cross mu_v mu]
        + d_eg E(t) (sigma_+ + sigma_-)

    with <mu> = Re Tr(rho mu) and mu_v = sqrt(n_v) d_v q_B.  The default
    coefficients f_coll = f_cross = 2 are the ones consistent with the
    product-state partial trace of the collective dipole self-energy; they are
    required for the mean-field energy to be a constant of motion in the
    dissipation-free limit.
    """
    mu = electronic_dipole_matrix(params)
    m = mean_electronic_dipole(state.rho, params)
    mu_v = vibrational_dipole(state.q_B, params)
    lam = params.lambda_c
    c1 = params.omega_c * lam * state.q_c + 0.5 * lam * lam * (
        params.collective_term_factor * (params.n_e - 1.0) * m
        + params.cross_term_factor * mu_v
    )
    h = params.omega_e * excited_projector() + c1 * mu + 0.5 * lam * lam * (mu @ mu)
    drive = params.d_eg * pulse_field(t, params.pulse, params.omega_e)
    h = h + np.array([[0.0, drive], [drive, 0.0]])
    return h.astype(complex)


def dark_frequencies(params: Params) -> np.ndarray:
    """Dark-mode frequencies over [dark_omega_min, dark_omega_max].

    midpoint-grid (default): deterministic midpoints w_k = lo + (k - 1/2) dw,
    symmetric about the window centre.  seeded-uniform: n_dark independent
    uniform draws with the given seed, sorted ascending.
    """
    n = int(params.n_dark)
    if n == 0:
        return np.zeros(0)
    lo, hi = params.dark_omega_min, params.dark_omega_max
    if params.dark_sampling == "midpoint-grid":
        k = np.arange(1, n + 1)
        return lo + (k - 0.5) * (hi - lo) / n
    if params.dark_sampling == "seeded-uniform":
        rng = np.random.default_rng(params.dark_seed)
        return np.sort(rng.uniform(lo, hi, n))
    raise ParameterError(f"unknown dark_sampling scheme {params.dark_sampling!r}")


def initial_state(params: Params) -> SystemState:
    """Global ground state: rho = |g><g|, oscillators at rest, photon displaced
    by the molecular polarization, q_c = -(lambda_c/omega_c) n_e d_gg."""
    n = int(params.n_dark)
    rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    q_c = -(params.lambda_c / params.omega_c) * params.n_e * params.d_gg
    return SystemState(
        rho=rho, q_c=q_c, p_c=0.0, q_B=0.0, p_B=0.0,
        q_D=np.zeros(n), p_D=np.zeros(n), omega_D=dark_frequencies(params),
        t=0.0,
    )
