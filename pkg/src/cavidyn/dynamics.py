"""Equations of motion and fixed-step RK4 propagation.

The electronic density matrix obeys a Lindblad equation with amplitude
damping (jump operator |g><e|) driven by the effective single-TLS
Hamiltonian; the cavity, bright and dark coordinates obey damped classical
oscillator equations coupled through the total mean dipole.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .model import (
    SystemState,
    effective_hamiltonian,
    initial_state,
    mean_total_dipole,
)
from .params import Params

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|


class IntegrationError(RuntimeError):
    """Non-finite state encountered; carries the last valid time."""

    def __init__(self, message, last_valid_time):
        super().__init__(message)
        self.last_valid_time = last_valid_time


@dataclass
class StateDerivative:
    drho: np.ndarray
    dq_c: float
    dp_c: float
    dq_B: float
    dp_B: float
    dq_D: np.ndarray
    dp_D: np.ndarray


@dataclass
class Trajectory:
    """Recorded observables on a uniform time grid of spacing dt * record_stride."""

    times: np.ndarray
    P_e: np.ndarray
    re_rho_eg: np.ndarray
    im_rho_eg: np.ndarray
    E_e: np.ndarray
    E_c: np.ndarray
    E_B: np.ndarray
    E_D: np.ndarray
    q_c: np.ndarray
    p_c: np.ndarray
    q_B: np.ndarray
    p_B: np.ndarray
    trace_err: np.ndarray
    herm_defect: np.ndarray
    min_eig: np.ndarray
    metadata: dict = field(default_factory=dict)
    final_state: SystemState | None = None


def lindblad_dissipator(rho: np.ndarray, gamma_e: float) -> np.ndarray:
    """Amplitude-damping dissipator gamma_e (s- rho s+ - {s+ s-, rho}/2).

    The jump operator is sigma_- = |g><e|, so population decays e -> g and the
    coherence decays at gamma_e / 2.  The result is traceless analytically.
    """
    sm = SIGMA_MINUS
    sp = sm.conj().T
    n = sp @ sm
    return gamma_e * (sm @ rho @ sp - 0.5 * (n @ rho + rho @ n))


def rhs(state: SystemState, params: Params, t: float) -> StateDerivative:
    """Full right-hand side of the coupled Lindblad/Newton equations of motion."""
    h = effective_hamiltonian(state, params, t)
    drho = -1j * (h @ state.rho - state.rho @ h) + lindblad_dissipator(state.rho, params.gamma_e)

    big_m = mean_total_dipole(state, params)
    om_c, om_v, lam = params.omega_c, params.omega_v, params.lambda_c
    sqnv_dv = math.sqrt(params.n_v) * params.d_v

    dq_c = state.p_c
    dp_c = -om_c * om_c * state.q_c - om_c * lam * big_m - params.gamma_c * state.p_c
    dq_B = state.p_B
    dp_B = (-om_v * om_v * state.q_B
            - (om_c * lam * state.q_c + lam * lam * big_m) * sqnv_dv
            - params.gamma_v * np.sum(state.q_D))
    dq_D = state.p_D.copy()
    dp_D = -state.omega_D ** 2 * state.q_D - params.gamma_v * state.q_B

    d = StateDerivative(drho=drho, dq_c=dq_c, dp_c=dp_c, dq_B=dq_B, dp_B=dp_B,
                        dq_D=dq_D, dp_D=dp_D)
    if not (np.all(np.isfinite(drho.view(float))) and np.all(np.isfinite(dp_D))
            and all(math.isfinite(v) for v in (dq_c, dp_c, dq_B, dp_B))):
        raise IntegrationError(f"non-finite derivative at t = {t}", last_valid_time=t)
    return d


def _axpy(state: SystemState, deriv: StateDerivative, a: float) -> SystemState:
    return SystemState(
        rho=state.rho + a * deriv.drho,
        q_c=state.q_c + a * deriv.dq_c, p_c=state.p_c + a * deriv.dp_c,
        q_B=state.q_B + a * deriv.dq_B, p_B=state.p_B + a * deriv.dp_B,
        q_D=state.q_D + a * deriv.dq_D, p_D=state.p_D + a * deriv.dp_D,
        omega_D=state.omega_D, t=state.t + a,
    )


def rk4_step(state: SystemState, params: Params, dt: float) -> SystemState:
    """One classical 4th-order Runge-Kutta step; rho is re-hermitized afterwards."""
    t = state.t
    k1 = rhs(state, params, t)
    k2 = rhs(_axpy(state, k1, 0.5 * dt), params, t + 0.5 * dt)
    k3 = rhs(_axpy(state, k2, 0.5 * dt), params, t + 0.5 * dt)
    k4 = rhs(_axpy(state, k3, dt), params, t + dt)

    out = state.copy()
    out.rho = state.rho + (dt / 6.0) * (k1.drho + 2 * k2.drho + 2 * k3.drho + k4.drho)
    out.q_c = state.q_c + (dt / 6.0) * (k1.dq_c + 2 * k2.dq_c + 2 * k3.dq_c + k4.dq_c)
    out.p_c = state.p_c + (dt / 6.0) * (k1.dp_c + 2 * k2.dp_c + 2 * k3.dp_c + k4.dp_c)
    out.q_B = state.q_B + (dt / 6.0) * (k1.dq_B + 2 * k2.dq_B + 2 * k3.dq_B + k4.dq_B)
    out.p_B = state.p_B + (dt / 6.0) * (k1.dp_B + 2 * k2.dp_B + 2 * k3.dp_B + k4.dp_B)
    out.q_D = state.q_D + (dt / 6.0) * (k1.dq_D + 2 * k2.dq_D + 2 * k3.dq_D + k4.dq_D)
    out.p_D = state.p_D + (dt / 6.0) * (k1.dp_D + 2 * k2.dp_D + 2 * k3.dp_D + k4.dp_D)
    out.rho = 0.5 * (out.rho + out.rho.conj().T)
    out.t = t + dt

    if not np.all(np.isfinite(out.rho.view(float))):
        raise IntegrationError(f"non-finite state after step from t = {t}", last_valid_time=t)
    return out


def _plan_steps(params: Params) -> int:
    """Number of steps: smallest multiple of record_stride whose horizon
    reaches t_final, so every recorded frame (including the last) sits on the
    uniform stride grid."""
    stride = int(params.record_stride)
    nsteps = math.ceil(params.t_final / params.dt - 1e-12)
    return stride * math.ceil(nsteps / stride)


def integrate(params: Params, initial: SystemState | None = None) -> Trajectory:
    """Propagate from the global ground state (or `initial`) to t >= t_final.

    Observables are recorded every record_stride steps, including step 0 and
    the final step.  Identical Params produce bit-identical trajectories on a
    given platform.
    """
    params.validate()
    state0 = initial_state(params) if initial is None else initial
    state0.validate()

    nsteps = _plan_steps(params)
    y0 = _kernel.pack_state(state0)
    p = _kernel.pack_params(params)
    rec, y_final, status, t_last = _kernel.integrate_core(
        y0, state0.t, nsteps, params.dt, state0.omega_D, p, int(params.record_stride)
    )
    if status != _kernel.STATUS_OK:
        raise IntegrationError(
            f"integration aborted on non-finite state; last valid t = {t_last}",
            last_valid_time=t_last,
        )

    cols = {name: rec[:, i] for i, name in enumerate(_kernel.REC_COLUMNS)}
    meta = dataclasses.asdict(params)
    meta.update(dt=params.dt, record_stride=int(params.record_stride),
                n_steps=nsteps, backend="numba" if _kernel.NUMBA_COMPILED else "python")
    times = cols.pop("t")
    return Trajectory(
        times=times, metadata=meta,
        final_state=_kernel.unpack_state(y_final, state0.omega_D, t_last),
        **cols,
    )


def convergence_check(params: Params, observable: str = "E_D") -> dict:
    """Compare the named terminal observable between dt and dt/2.

    The difference is relative when the reference value is nonzero at double
    precision, absolute otherwise (fixed-point inputs).
    """
    traj1 = integrate(params)
    traj2 = integrate(params.replace(dt=params.dt / 2.0,
                                     record_stride=2 * int(params.record_stride)))
    v1 = float(getattr(traj1, observable)[-1])
    v2 = float(getattr(traj2, observable)[-1])
    scale = abs(v2)
    if scale > 1e-15:  # numerically nonzero; fixed-point runs report absolute
        diff = abs(v1 - v2) / scale
        mode = "relative"
    else:
        diff = abs(v1 - v2)
        mode = "absolute"
    return {
        "observable": observable,
        "value_dt": v1,
        "value_dt_half": v2,
        "relative_difference": diff,
        "mode": mode,
        "dt": params.dt,
    }
