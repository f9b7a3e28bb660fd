"""Fixed-step RK4 integration kernel.

The state is one flat float64 vector: the density matrix as 8 raw reals
(row-major re/im pairs), then (q_c, p_c, q_B, p_B), then the dark positions
and momenta.  After every full RK4 step rho is re-hermitized as
(rho + rho^dagger)/2.

The hot loop is compiled with numba when importable; the pure-Python build of
the same function remains usable for tiny cross-validation runs.
"""

import math

import numpy as np

# record columns
REC_COLUMNS = (
    "t", "P_e", "re_rho_eg", "im_rho_eg",
    "E_e", "E_c", "E_B", "E_D",
    "q_c", "p_c", "q_B", "p_B",
    "trace_err", "herm_defect", "min_eig",
)

STATUS_OK = 0
STATUS_NONFINITE = 1


def pack_params(params):
    """Flatten the Params fields the kernel needs into a float64 tuple."""
    return (
        params.omega_e, params.omega_v, params.omega_c, params.lambda_c,
        params.d_eg, params.d_gg, params.d_ee, params.d_v,
        params.n_e, params.n_v,
        params.gamma_e, params.gamma_c, params.gamma_v,
        params.pulse.E0, params.pulse.t_start, params.pulse.sigma,
        float(params.collective_term_factor), float(params.cross_term_factor),
    )


def pack_state(state):
    n = len(state.omega_D)
    y = np.empty(12 + 2 * n)
    r = state.rho
    y[0] = r[0, 0].real; y[1] = r[0, 0].imag
    y[2] = r[0, 1].real; y[3] = r[0, 1].imag
    y[4] = r[1, 0].real; y[5] = r[1, 0].imag
    y[6] = r[1, 1].real; y[7] = r[1, 1].imag
    y[8] = state.q_c; y[9] = state.p_c
    y[10] = state.q_B; y[11] = state.p_B
    y[12:12 + n] = state.q_D
    y[12 + n:] = state.p_D
    return y


def unpack_state(y, omega_D, t):
    from .model import SystemState
    n = len(omega_D)
    rho = np.array([[y[0] + 1j * y[1], y[2] + 1j * y[3]],
                    [y[4] + 1j * y[5], y[6] + 1j * y[7]]])
    return SystemState(
        rho=rho, q_c=y[8], p_c=y[9], q_B=y[10], p_B=y[11],
        q_D=y[12:12 + n].copy(), p_D=y[12 + n:].copy(), omega_D=omega_D.copy(), t=t,
    )


def _rhs_flat(y, t, out, omega_D, p):
    (om_e, om_v, om_c, lam, d_eg, d_gg, d_ee, d_v, n_e, n_v,
     g_e, g_c, g_v, e0, t_start, sig, f_coll, f_cross) = p
    nd = omega_D.shape[0]

    rgg = complex(y[0], y[1])
    rge = complex(y[2], y[3])
    reg = complex(y[4], y[5])
    ree = complex(y[6], y[7])
    q_c = y[8]; p_c = y[9]; q_B = y[10]; p_B = y[11]

    # mean dipoles
    m = (d_gg * rgg + d_eg * (rge + reg) + d_ee * ree).real
    mu_v = math.sqrt(n_v) * d_v * q_B
    big_m = mu_v + n_e * m

    # effective Hamiltonian entries (real symmetric + drive)
    arg = (t - t_start) / sig
    field = e0 * math.sin(om_e * t) * math.exp(-arg * arg)
    c1 = om_c * lam * q_c + 0.5 * lam * lam * (f_coll * (n_e - 1.0) * m + f_cross * mu_v)
    hgg = c1 * d_gg + 0.5 * lam * lam * (d_gg * d_gg + d_eg * d_eg)
    hee = om_e + c1 * d_ee + 0.5 * lam * lam * (d_eg * d_eg + d_ee * d_ee)
    hge = c1 * d_eg + 0.5 * lam * lam * d_eg * (d_gg + d_ee) + d_eg * field

    # drho = -i[H, rho] + amplitude damping with jump |g><e|
    dgg = -1j * (hge * (reg - rge)) + g_e * ree
    dge = -1j * ((hgg - hee) * rge + hge * (ree - rgg)) - 0.5 * g_e * rge
    deg = -1j * ((hee - hgg) * reg + hge * (rgg - ree)) - 0.5 * g_e * reg
    dee = -1j * (hge * (rge - reg)) - g_e * ree

    out[0] = dgg.real; out[1] = dgg.imag
    out[2] = dge.real; out[3] = dge.imag
    out[4] = deg.real; out[5] = deg.imag
    out[6] = dee.real; out[7] = dee.imag

    out[8] = p_c
    out[9] = -om_c * om_c * q_c - om_c * lam * big_m - g_c * p_c
    s_d = 0.0
    for k in range(nd):
        s_d += y[12 + k]
    out[10] = p_B
    out[11] = (-om_v * om_v * q_B
               - (om_c * lam * q_c + lam * lam * big_m) * math.sqrt(n_v) * d_v
               - g_v * s_d)
    for k in range(nd):
        out[12 + k] = y[12 + nd + k]
        out[12 + nd + k] = -omega_D[k] * omega_D[k] * y[12 + k] - g_v * q_B


def _record_frame(rec, irec, y, t, omega_D, p):
    (om_e, om_v, om_c, lam, d_eg, d_gg, d_ee, d_v, n_e, n_v,
     g_e, g_c, g_v, e0, t_start, sig, f_coll, f_cross) = p
    nd = omega_D.shape[0]
    rgg_r = y[0]; ree_r = y[6]
    m = d_gg * rgg_r + d_eg * (y[2] + y[4]) + d_ee * ree_r
    mu_v = math.sqrt(n_v) * d_v * y[10]
    big_m = mu_v + n_e * m
    e_d = 0.0
    for k in range(nd):
        e_d += 0.5 * y[12 + nd + k] ** 2 + 0.5 * (omega_D[k] * y[12 + k]) ** 2
    disp = y[8] + lam * big_m / om_c
    rec[irec, 0] = t
    rec[irec, 1] = ree_r
    rec[irec, 2] = y[4]
    rec[irec, 3] = y[5]
    rec[irec, 4] = n_e * om_e * ree_r
    rec[irec, 5] = 0.5 * y[9] ** 2 + 0.5 * om_c * om_c * disp * disp
    rec[irec, 6] = 0.5 * y[11] ** 2 + 0.5 * om_v * om_v * y[10] ** 2
    rec[irec, 7] = e_d
    rec[irec, 8] = y[8]
    rec[irec, 9] = y[9]
    rec[irec, 10] = y[10]
    rec[irec, 11] = y[11]
    rec[irec, 12] = abs(complex(rgg_r + ree_r - 1.0, y[1] + y[7]))
    # hermiticity defect before the (rho + rho^dagger)/2 projection of this step
    rec[irec, 13] = math.sqrt(
        (y[2] - y[4]) ** 2 + (y[3] + y[5]) ** 2 + y[1] * y[1] + y[7] * y[7]
    )
    half_gap = 0.5 * (rgg_r - ree_r)
    mean = 0.5 * (rgg_r + ree_r)
    rec[irec, 14] = mean - math.sqrt(half_gap * half_gap + y[2] ** 2 + y[3] ** 2)


def _integrate_core(y0, t0, nsteps, dt, omega_D, p, stride):
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(n); k2 = np.empty(n); k3 = np.empty(n); k4 = np.empty(n)
    tmp = np.empty(n)
    nrec = nsteps // stride + 1
    rec = np.empty((nrec, 15))
    irec = 0
    t = t0
    status = STATUS_OK
    t_last = t0
    for istep in range(nsteps + 1):
        finite = True
        for i in range(n):
            if not math.isfinite(y[i]):
                finite = False
                break
        if not finite:
            status = STATUS_NONFINITE
            break
        t_last = t
        if istep % stride == 0:
            _record_frame(rec, irec, y, t, omega_D, p)
            irec += 1
        if istep == nsteps:
            break
        _rhs_flat(y, t, k1, omega_D, p)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * dt * k1[i]
        _rhs_flat(tmp, t + 0.5 * dt, k2, omega_D, p)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * dt * k2[i]
        _rhs_flat(tmp, t + 0.5 * dt, k3, omega_D, p)
        for i in range(n):
            tmp[i] = y[i] + dt * k3[i]
        _rhs_flat(tmp, t + dt, k4, omega_D, p)
        for i in range(n):
            y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        # re-hermitize rho <- (rho + rho^dagger)/2
        y[1] = 0.0
        y[7] = 0.0
        re_off = 0.5 * (y[2] + y[4])
        im_off = 0.5 * (y[3] - y[5])
        y[2] = re_off; y[3] = im_off
        y[4] = re_off; y[5] = -im_off
        t = t0 + (istep + 1) * dt
    return rec[:irec], y, status, t_last


try:  # compile the hot loop when numba is present
    from numba import njit

    _rhs_flat = njit(cache=True)(_rhs_flat)
    _record_frame = njit(cache=True)(_record_frame)
    integrate_core = njit(cache=True)(_integrate_core)
    NUMBA_COMPILED = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    integrate_core = _integrate_core
    NUMBA_COMPILED = False
