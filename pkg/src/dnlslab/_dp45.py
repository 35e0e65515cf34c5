"""Adaptive Dormand-Prince 5(4) stepping with quartic dense output.

One jitted accept/reject loop serves both the planar reduction (real state)
and the four-mode models (complex state); numba specialises per right-hand
side.  RHS functions have the fixed signature ``f(t, y, p) -> dy`` with a
flat float64 parameter vector so the whole loop stays inside numba.
"""

import numpy as np
from numba import njit

# Dormand & Prince (1980) tableau, FSAL form, with the quartic interpolant
# used for dense output.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    ]
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# y5 - y4 weights (includes the FSAL stage k7).
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
_P = np.array(
    [
        [
            1.0,
            -8048581381 / 2820520608,
            8663915743 / 2820520608,
            -12715105075 / 11282082432,
        ],
        [0.0, 0.0, 0.0, 0.0],
        [
            0.0,
            131558114200 / 32700410799,
            -68118460800 / 10900136933,
            87487479700 / 32700410799,
        ],
        [
            0.0,
            -1754552775 / 470086768,
            14199869525 / 1410260304,
            -10690763975 / 1880347072,
        ],
        [
            0.0,
            127303824393 / 49829197408,
            -318862633887 / 49829197408,
            701980252875 / 199316789632,
        ],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_NONFINITE = 2
STATUS_MAXSTEPS = 3

_MAX_STEPS = 50_000_000


@njit(cache=True)
def _error_norm(err, y_old, y_new, rtol, atol):
    acc = 0.0
    for i in range(err.shape[0]):
        scale = atol + rtol * max(abs(y_old[i]), abs(y_new[i]))
        r = abs(err[i]) / scale
        acc += r * r
    return np.sqrt(acc / err.shape[0])


@njit(cache=True)
def _initial_step(f, t0, y0, f0, t_end, rtol, atol, p):
    d0 = 0.0
    d1 = 0.0
    for i in range(y0.shape[0]):
        scale = atol + rtol * abs(y0[i])
        d0 = max(d0, abs(y0[i]) / scale)
        d1 = max(d1, abs(f0[i]) / scale)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1, p)
    d2 = 0.0
    for i in range(y0.shape[0]):
        scale = atol + rtol * abs(y0[i])
        d2 = max(d2, abs(f1[i] - f0[i]) / scale)
    d2 /= h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(min(100.0 * h0, h1), t_end - t0)


@njit(cache=True)
def _core(f, t0, y0, t_end, t_eval, rtol, atol, p, max_step, y_out):
    """Integrate y' = f(t, y, p), filling y_out at the times in t_eval.

    Returns (status, n_filled, t_last, y_last).
    """
    n = y0.shape[0]
    y = y0.copy()
    t = t0
    k = np.empty((7, n), dtype=y0.dtype)
    k[6] = f(t, y, p)

    idx = 0
    while idx < t_eval.shape[0] and t_eval[idx] <= t0:
        y_out[idx] = y
        idx += 1

    h = _initial_step(f, t0, y0, k[6], t_end, rtol, atol, p)
    h = min(h, max_step)
    steps = 0
    while t < t_end:
        if steps >= _MAX_STEPS:
            return STATUS_MAXSTEPS, idx, t, y
        steps += 1
        h = min(h, t_end - t)
        if h <= abs(t) * 1e-15 + 1e-300:
            return STATUS_UNDERFLOW, idx, t, y

        k[0] = k[6]  # FSAL
        for s in range(1, 6):
            acc = np.zeros(n, dtype=y0.dtype)
            for j in range(s):
                if _A[s, j] != 0.0:
                    acc += _A[s, j] * k[j]
            k[s] = f(t + _C[s] * h, y + h * acc, p)
        y_new = y + h * (
            _B[0] * k[0] + _B[2] * k[2] + _B[3] * k[3] + _B[4] * k[4] + _B[5] * k[5]
        )
        t_new = t + h
        k[6] = f(t_new, y_new, p)

        err = h * (
            _E[0] * k[0]
            + _E[2] * k[2]
            + _E[3] * k[3]
            + _E[4] * k[4]
            + _E[5] * k[5]
            + _E[6] * k[6]
        )
        finite = True
        for i in range(n):
            if not np.isfinite(abs(y_new[i])):
                finite = False
        if not finite:
            return STATUS_NONFINITE, idx, t, y
        norm = _error_norm(err, y, y_new, rtol, atol)

        if norm <= 1.0:
            while idx < t_eval.shape[0] and t_eval[idx] <= t_new:
                theta = (t_eval[idx] - t) / h
                th = theta
                b = np.zeros(7)
                for i in range(7):
                    b[i] = (
                        _P[i, 0] * th
                        + _P[i, 1] * th * th
                        + _P[i, 2] * th * th * th
                        + _P[i, 3] * th * th * th * th
                    )
                acc = np.zeros(n, dtype=y0.dtype)
                for i in range(7):
                    if b[i] != 0.0:
                        acc += b[i] * k[i]
                y_out[idx] = y + h * acc
                idx += 1
            t = t_new
            y = y_new
            if norm == 0.0:
                factor = 10.0
            else:
                factor = min(10.0, max(0.2, 0.9 * norm ** -0.2))
            h = min(h * factor, max_step)
        else:
            k[6] = k[0]  # step rejected: restore FSAL stage
            h = h * min(1.0, max(0.2, 0.9 * norm ** -0.2))
    return STATUS_OK, idx, t, y


@njit(cache=True)
def _core_lawson(f, dfreq, t0, y0, t_end, t_eval, rtol, atol, p, max_step, y_out):
    """DP45 on the per-step rotating frame z = exp(-i w tau) * y.

    ``dfreq(y, p)`` is the instantaneous per-component diagonal phase
    velocity; it is frozen at each step start and removed exactly, so the
    controller only sees the slow residual dynamics.  State must be complex.
    """
    n = y0.shape[0]
    y = y0.copy()
    t = t0
    f0 = f(t, y, p)

    idx = 0
    while idx < t_eval.shape[0] and t_eval[idx] <= t0:
        y_out[idx] = y
        idx += 1

    h = _initial_step(f, t0, y0, f0, t_end, rtol, atol, p)
    h = min(h, max_step)
    k = np.empty((7, n), dtype=y0.dtype)
    steps = 0
    while t < t_end:
        if steps >= _MAX_STEPS:
            return STATUS_MAXSTEPS, idx, t, y
        steps += 1
        h = min(h, t_end - t)
        if h <= abs(t) * 1e-15 + 1e-300:
            return STATUS_UNDERFLOW, idx, t, y

        w = dfreq(y, p)
        # stage derivatives of z(tau) = exp(-i w tau) y(t + tau), z(0) = y
        for s in range(7):
            if s < 6:
                tau = _C[s] * h
            else:
                tau = h
            if s == 0:
                z_s = y
            elif s < 6:
                acc = np.zeros(n, dtype=y0.dtype)
                for j in range(s):
                    if _A[s, j] != 0.0:
                        acc += _A[s, j] * k[j]
                z_s = y + h * acc
            else:
                z_s = y + h * (
                    _B[0] * k[0]
                    + _B[2] * k[2]
                    + _B[3] * k[3]
                    + _B[4] * k[4]
                    + _B[5] * k[5]
                )
            phase = np.exp(1j * w * tau)
            c_s = phase * z_s
            dy = f(t + tau, c_s, p)
            k[s] = np.conj(phase) * dy - 1j * w * z_s
        z_new = y + h * (
            _B[0] * k[0] + _B[2] * k[2] + _B[3] * k[3] + _B[4] * k[4] + _B[5] * k[5]
        )
        t_new = t + h
        err = h * (
            _E[0] * k[0]
            + _E[2] * k[2]
            + _E[3] * k[3]
            + _E[4] * k[4]
            + _E[5] * k[5]
            + _E[6] * k[6]
        )
        finite = True
        for i in range(n):
            if not np.isfinite(abs(z_new[i])):
                finite = False
        if not finite:
            return STATUS_NONFINITE, idx, t, y
        norm = _error_norm(err, y, z_new, rtol, atol)

        if norm <= 1.0:
            while idx < t_eval.shape[0] and t_eval[idx] <= t_new:
                theta = (t_eval[idx] - t) / h
                th = theta
                b = np.zeros(7)
                for i in range(7):
                    b[i] = (
                        _P[i, 0] * th
                        + _P[i, 1] * th * th
                        + _P[i, 2] * th * th * th
                        + _P[i, 3] * th * th * th * th
                    )
                acc = np.zeros(n, dtype=y0.dtype)
                for i in range(7):
                    if b[i] != 0.0:
                        acc += b[i] * k[i]
                y_out[idx] = np.exp(1j * w * (t_eval[idx] - t)) * (y + h * acc)
                idx += 1
            t = t_new
            y = np.exp(1j * w * h) * z_new
            if norm == 0.0:
                factor = 10.0
            else:
                factor = min(10.0, max(0.2, 0.9 * norm ** -0.2))
            h = min(h * factor, max_step)
        else:
            h = h * min(1.0, max(0.2, 0.9 * norm ** -0.2))
    return STATUS_OK, idx, t, y


class IntegrationError(RuntimeError):
    """Integration aborted; carries the last healthy time and state."""

    def __init__(self, message, t, y):
        super().__init__(f"{message} (t={t!r}, state={y!r})")
        self.t = t
        self.y = np.asarray(y)


def integrate(f, t0, y0, t_end, t_eval, p, rtol=1e-12, atol=1e-12, max_step=np.inf):
    """Drive the jitted core; returns (samples, (t_final, y_final)).

    ``t_eval`` must be nondecreasing within [t0, t_end]; samples are produced
    by the order-4 dense interpolant of accepted steps.
    """
    y0 = np.ascontiguousarray(y0)
    t_eval = np.ascontiguousarray(np.atleast_1d(np.asarray(t_eval, dtype=float)))
    if t_eval.size and (t_eval[0] < t0 - 1e-12 or t_eval[-1] > t_end + 1e-12):
        raise ValueError("t_eval must lie within [t0, t_end]")
    if np.any(np.diff(t_eval) < 0):
        raise ValueError("t_eval must be nondecreasing")
    p = np.ascontiguousarray(np.asarray(p, dtype=float))
    y_out = np.empty((t_eval.size, y0.size), dtype=y0.dtype)
    status, idx, t_last, y_last = _core(
        f, float(t0), y0, float(t_end), t_eval, float(rtol), float(atol), p,
        float(max_step), y_out,
    )
    _check_status(status, idx, t_eval.size, t_last, y_last)
    return y_out, (t_last, y_last)


def _check_status(status, idx, n_eval, t_last, y_last):
    if status == STATUS_UNDERFLOW:
        raise IntegrationError("step size underflow", t_last, y_last)
    if status == STATUS_NONFINITE:
        raise IntegrationError("non-finite state encountered", t_last, y_last)
    if status == STATUS_MAXSTEPS:
        raise IntegrationError("step budget exhausted", t_last, y_last)
    if idx != n_eval:
        raise IntegrationError("sampling incomplete", t_last, y_last)


def integrate_lawson(
    f, dfreq, t0, y0, t_end, t_eval, p, rtol=1e-12, atol=1e-12, max_step=np.inf
):
    """Rotating-frame DP45 for complex states with fast diagonal phases."""
    y0 = np.ascontiguousarray(y0).astype(np.complex128)
    t_eval = np.ascontiguousarray(np.atleast_1d(np.asarray(t_eval, dtype=float)))
    if t_eval.size and (t_eval[0] < t0 - 1e-12 or t_eval[-1] > t_end + 1e-12):
        raise ValueError("t_eval must lie within [t0, t_end]")
    if np.any(np.diff(t_eval) < 0):
        raise ValueError("t_eval must be nondecreasing")
    p = np.ascontiguousarray(np.asarray(p, dtype=float))
    y_out = np.empty((t_eval.size, y0.size), dtype=np.complex128)
    status, idx, t_last, y_last = _core_lawson(
        f, dfreq, float(t0), y0, float(t_end), t_eval, float(rtol), float(atol), p,
        float(max_step), y_out,
    )
    _check_status(status, idx, t_eval.size, t_last, y_last)
    return y_out, (t_last, y_last)
