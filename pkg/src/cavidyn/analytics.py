"""Closed-form predictions for the sudden-quench photon/vibration energy gain,
an independent quench oracle validating them, and log-log power-law fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import initial_state
from .observables import energies, polariton_frequencies
from .params import Params

WEIGHT_KINDS = ("indicator", "lorentzian", "constant")


class FitError(ValueError):
    """Raised for inputs a power-law fit cannot handle."""


@dataclass(frozen=True)
class ResonanceWeight:
    """Density-of-states weight rho(omega_v - omega_c): 1 at resonance, -> 0
    at large detuning (except the constant kind, provided for reference)."""

    kind: str = "lorentzian"
    half_width: float = 1e-3

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"kind must be one of {WEIGHT_KINDS} (got {self.kind!r})")
        if self.kind != "constant" and not self.half_width > 0:
            raise ValueError(f"half_width must be > 0 (got {self.half_width})")

    def __call__(self, detuning: float) -> float:
        if self.kind == "constant":
            return 1.0
        if self.kind == "indicator":
            return 1.0 if abs(detuning) <= self.half_width else 0.0
        x = detuning / self.half_width
        return 1.0 / (1.0 + x * x)


def default_resonance_weight(params: Params) -> ResonanceWeight:
    """Lorentzian with half-width equal to half the polariton splitting: the
    hybridization bandwidth is the natural resonance scale."""
    pair = polariton_frequencies(params)
    return ResonanceWeight(kind="lorentzian", half_width=0.5 * pair.splitting)


def predicted_photon_gain(params: Params, p_e: float, re_rho_eg: float = 0.0) -> float:
    """Photon-energy gain of a sudden electronic transition from the global
    ground state to populations/coherence (P_e, Re rho_eg):

        dE_c = (1/2) lambda_c^2 n_e^2 (P_e dd + 2 d_eg Re rho_eg)^2
    """
    jump = p_e * params.delta_d + 2.0 * params.d_eg * re_rho_eg
    return 0.5 * params.lambda_c ** 2 * params.n_e ** 2 * jump * jump


def predicted_photon_gain_longtime(params: Params, p_e: float) -> float:
    """Long-time limit (coherence dephased away): (1/2) lambda_c^2 n_e^2 P_e^2 dd^2."""
    return predicted_photon_gain(params, p_e, 0.0)


def predicted_vibrational_gain(params: Params, p_e: float,
                               weight: ResonanceWeight | None = None) -> dict:
    """Vibrational energy gain, half the long-time photon gain times the
    resonance weight at the vibration-cavity detuning; also reported per
    oscillator."""
    if weight is None:
        weight = default_resonance_weight(params)
    w = weight(params.omega_v - params.omega_c)
    total = 0.5 * predicted_photon_gain_longtime(params, p_e) * w
    return {
        "total": total,
        "per_oscillator": total / params.n_v,
        "weight_value": w,
        "weight_kind": weight.kind,
        "weight_half_width": weight.half_width,
    }


def quench_oracle(params: Params, p_e: float, re_rho_eg: float = 0.0) -> float:
    """Photon-energy change of the sudden quench evaluated through the energy
    function instead of the closed form.

    The pre-quench state is the global ground state with the photon frozen at
    its polarized minimum; the density matrix is then replaced by
    [[1-P_e, c], [c, P_e]] holding q_c and q_B fixed.
    """
    before = initial_state(params)
    e_before = energies(before, params).E_c

    after = before.copy()
    after.rho = np.array([[1.0 - p_e, re_rho_eg], [re_rho_eg, p_e]], dtype=complex)
    e_after = energies(after, params).E_c
    return e_after - e_before


def fit_power_law(xs, ys) -> dict:
    """Least squares on (ln x, ln y); the exponent is the slope."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise FitError("xs and ys must be 1-d arrays of equal length")
    if len(xs) < 3:
        raise FitError("need at least 3 points for a power-law fit")
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise FitError("power-law fit requires strictly positive data")
    lx, ly = np.log(xs), np.log(ys)
    if np.ptp(lx) == 0.0:
        raise FitError("degenerate xs: all values identical")
    a = np.vstack([np.ones_like(lx), lx]).T
    coef, *_ = np.linalg.lstsq(a, ly, rcond=None)
    yhat = a @ coef
    ss_res = float(np.sum((ly - yhat) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return {"exponent": float(coef[1]), "prefactor": float(math.exp(coef[0])), "r_squared": r2}
