"""Component energies, populations, polariton frequencies, and decay fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemState, mean_total_dipole
from .params import Params
from .units import AU_TIME_TO_FS, HARTREE_TO_CM1


class AnalysisError(RuntimeError):
    """Raised when a trajectory does not support the requested analysis."""


@dataclass(frozen=True)
class EnergyReport:
    E_e: float   # total electronic energy, n_e omega_e P_e
    E_c: float   # photonic energy in the displaced-coordinate form
    E_B: float   # bright-mode energy
    E_D: float   # summed dark-mode energy

    @property
    def total(self) -> float:
        return self.E_e + self.E_c + self.E_B + self.E_D


@dataclass(frozen=True)
class PolaritonPair:
    omega_minus: float
    omega_plus: float
    splitting: float
    mixing_angle: float  # cavity admixture of the lower normal mode, radians


def excited_population(rho: np.ndarray) -> float:
    """Re <e|rho|e>."""
    return float(rho[1, 1].real)


def energies(state: SystemState, params: Params) -> EnergyReport:
    """Component energies; the photonic energy uses the displaced form
    p_c^2/2 + omega_c^2 (q_c + lambda_c <mu>/omega_c)^2 / 2, so it vanishes at
    the polarized minimum."""
    big_m = mean_total_dipole(state, params)
    disp = state.q_c + params.lambda_c * big_m / params.omega_c
    e_e = params.n_e * params.omega_e * excited_population(state.rho)
    e_c = 0.5 * state.p_c ** 2 + 0.5 * params.omega_c ** 2 * disp * disp
    e_b = 0.5 * state.p_B ** 2 + 0.5 * params.omega_v ** 2 * state.q_B ** 2
    e_d = float(np.sum(0.5 * state.p_D ** 2 + 0.5 * (state.omega_D * state.q_D) ** 2))
    return EnergyReport(E_e=e_e, E_c=e_c, E_B=e_b, E_D=e_d)


def polariton_frequencies(params: Params) -> PolaritonPair:
    """Normal modes of the (q_c, q_B) quadratic form with the electronic
    subsystem frozen in its ground configuration.

    K = [[w_c^2, w_c l sqrt(n_v) d_v], [w_c l sqrt(n_v) d_v, w_v^2 + l^2 n_v d_v^2]]
    """
    g = params.omega_c * params.lambda_c * math.sqrt(params.n_v) * params.d_v
    a = params.omega_c ** 2
    b = params.omega_v ** 2 + params.lambda_c ** 2 * params.n_v * params.d_v ** 2
    mean = 0.5 * (a + b)
    disc = math.hypot(0.5 * (a - b), g)
    lo, hi = mean - disc, mean + disc
    if lo <= 0.0:
        raise AnalysisError(
            f"non-positive normal-mode eigenvalue {lo:.3e}; unphysical parameter regime"
        )
    # cavity admixture of the lower mode: atan2(|v_c|, |v_B|) for the lower
    # eigenvector (v_c, v_B) of K, which is (g, a - lo) up to normalization
    if g == 0.0:
        angle = 0.0 if b <= a else math.pi / 2
    else:
        angle = math.atan2(abs(g), abs(a - lo)) if a != lo else math.pi / 2
    return PolaritonPair(
        omega_minus=math.sqrt(lo), omega_plus=math.sqrt(hi),
        splitting=math.sqrt(hi) - math.sqrt(lo), mixing_angle=angle,
    )


def _two_peak_spectrum(signal: np.ndarray, dt_sample: float):
    """Positions of the two dominant, well-separated spectral peaks of a real
    signal (angular frequency), with parabolic sub-bin interpolation."""
    amp = np.abs(np.fft.rfft(signal - signal.mean()))
    freqs = np.fft.rfftfreq(signal.size, d=dt_sample) * 2.0 * math.pi
    bin_w = freqs[1] - freqs[0]

    def refine(i):
        if 0 < i < len(amp) - 1:
            denom = amp[i - 1] - 2.0 * amp[i] + amp[i + 1]
            if denom != 0.0:
                return freqs[i] + 0.5 * (amp[i - 1] - amp[i + 1]) / denom * bin_w
        return freqs[i]

    work = amp.copy()
    work[0] = 0.0
    peaks = []
    for _ in range(2):
        i = int(np.argmax(work))
        if work[i] <= 0.0:
            break
        # only accept local maxima that stand above the residual background
        if work[i] < 1e-6 * amp.max():
            break
        peaks.append((refine(i), amp[i]))
        lo = max(0, i - 3)
        hi = min(len(work), i + 4)
        work[lo:hi] = 0.0
    return peaks, bin_w


def rabi_splitting_from_trajectory(traj) -> dict:
    """Polariton beating period and Rabi splitting from the bright-mode motion.

    Takes the discrete Fourier spectrum of q_B(t) on the post-pulse window and
    returns the separation of the two dominant peaks; falls back to
    peak-to-peak timing of E_B(t) when only one spectral line resolves.
    """
    pulse_meta = traj.metadata.get("pulse", {})
    t_on = pulse_meta.get("t_start", 0.0) + 5.0 * pulse_meta.get("sigma", 0.0)
    mask = traj.times >= t_on
    q_b = traj.q_B[mask]
    if q_b.size < 16 or np.max(np.abs(q_b)) < 1e-12:
        raise AnalysisError("no polariton beating detected (bright mode never excited)")
    dt_sample = traj.times[1] - traj.times[0]

    peaks, bin_w = _two_peak_spectrum(q_b, dt_sample)
    if len(peaks) == 2 and abs(peaks[0][0] - peaks[1][0]) > 2.0 * bin_w:
        splitting = abs(peaks[0][0] - peaks[1][0])
    else:
        # fall back to beat timing on the bright-mode energy envelope
        e_b = traj.E_B[mask]
        imax = _local_maxima(e_b)
        if len(imax) < 3:
            raise AnalysisError("no polariton beating detected")
        period = np.mean(np.diff(imax)) * dt_sample
        splitting = 2.0 * math.pi / period
    period_au = 2.0 * math.pi / splitting
    return {
        "splitting_au": splitting,
        "splitting_cm1": splitting * HARTREE_TO_CM1,
        "period_au": period_au,
        "period_fs": period_au * AU_TIME_TO_FS,
        "spectral_bin_au": bin_w,
    }


def _local_maxima(x: np.ndarray):
    idx = []
    for i in range(1, len(x) - 1):
        if x[i] >= x[i - 1] and x[i] > x[i + 1]:
            idx.append(i)
    return idx


def fit_exponential_lifetime(times, values, t_min=None) -> dict:
    """Least-squares line fit of ln(values) vs time; tau = -1/slope.

    R^2 < 0.9 flags the result low-confidence; a non-decaying signal returns
    tau = inf.  Units of tau follow the units of `times`.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if t_min is not None:
        keep = times >= t_min
        times, values = times[keep], values[keep]
    if len(times) < 3:
        raise AnalysisError("too few samples for a lifetime fit")
    if np.any(values <= 0.0):
        raise AnalysisError("non-positive values in the fit window")
    y = np.log(values)
    if np.ptp(y) < 1e-13 * (1.0 + abs(float(np.mean(y)))):
        # constant signal: no decay to fit
        return {"tau": math.inf, "r_squared": 1.0, "low_confidence": True}
    a = np.vstack([np.ones_like(times), times]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    yhat = a @ coef
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    slope = float(coef[1])
    tau = math.inf if slope >= 0.0 else -1.0 / slope
    return {"tau": tau, "r_squared": r2, "low_confidence": bool(r2 < 0.9 or not math.isfinite(tau))}
