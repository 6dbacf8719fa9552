"""Hot numeric kernels: the adaptive RK stepping loop and the fixed-step RK4 reference.

Kernels are compiled with numba when it is importable; setting the environment
variable ``LVCORRIDOR_DISABLE_NUMBA=1`` selects the pure-Python fallback path
instead. Both paths execute the same source with IEEE semantics (no fastmath),
so results are bit-identical; the flag trades compilation for speed only.

``python -m lvcorridor.benchmark`` times the two paths side by side.
"""

import os

__all__ = [
    "NUMBA_ENABLED",
    "field",
    "rk45_advance",
    "rk4_final",
    "RK_OK",
    "RK_CHUNK_FULL",
    "RK_UNDERFLOW",
    "RK_BREACH",
]


def _numba_disabled_by_env() -> bool:
    return os.environ.get("LVCORRIDOR_DISABLE_NUMBA", "").strip().lower() in {
        "1", "true", "yes", "on",
    }


NUMBA_ENABLED = False
if not _numba_disabled_by_env():
    try:
        from numba import njit as _njit
        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def _jit(fn):
    if NUMBA_ENABLED:
        return _njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# vector field
# ---------------------------------------------------------------------------

def _field_impl(a12, a21, rho, L, S):
    return L * (1.0 - L - a12 * S), rho * S * (1.0 - S - a21 * L)


field = _jit(_field_impl)


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) tableau (the ode45 method family), FSAL
# ---------------------------------------------------------------------------

A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656

# 5th-order propagating weights (B2 = B7 = 0)
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84

# embedded 4th-order error weights, e = b - bhat (E2 = 0)
E1, E3, E4, E5, E6, E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)

# quartic dense-output interpolant: y(t0 + x h) = y0 + h * sum_j Q[:, j] x^(j+1)
# with Q = K^T P; column 0 of P is (1, 0, ..., 0) so Q[:, 0] = k1.
# P row for stage 2 is identically zero.
P01, P02, P03 = (
    -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432,
)
P21, P22, P23 = (
    131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799,
)
P31, P32, P33 = (
    -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072,
)
P41, P42, P43 = (
    127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632,
)
P51, P52, P53 = (
    -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844,
)
P61, P62, P63 = (
    40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423,
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0

# rk45_advance status codes
RK_OK = 0           # reached t_bound
RK_CHUNK_FULL = 1   # output arrays exhausted; resume with returned state
RK_UNDERFLOW = 2    # controller step fell below min_step
RK_BREACH = 3       # accepted state left the unit square beyond slack


def _rk45_advance_impl(a12, a21, rho, t, L, S, fL, fS, h, t_bound,
                       rtol, atol, max_step, slack, min_step,
                       ts, Ls, Ss, qs):
    """Advance the Dormand-Prince 5(4) integration until t_bound, failure,
    or the chunk arrays fill up.

    (t, L, S) is the current accepted point, (fL, fS) the field there (FSAL),
    h the proposed step. Accepted steps append the step end point to
    ts/Ls/Ss and the dense-output coefficients (2x4) to qs.

    Returns (status, n_acc, n_rej, nfev, t, L, S, fL, fS, h); on RK_BREACH
    the returned point is the offending state, not an accepted one.
    """
    cap = ts.shape[0]
    n_acc = 0
    n_rej = 0
    nfev = 0
    rejected = False

    while True:
        if t >= t_bound:
            return RK_OK, n_acc, n_rej, nfev, t, L, S, fL, fS, h
        if n_acc >= cap:
            return RK_CHUNK_FULL, n_acc, n_rej, nfev, t, L, S, fL, fS, h
        if h > max_step:
            h = max_step
        if h < min_step:
            return RK_UNDERFLOW, n_acc, n_rej, nfev, t, L, S, fL, fS, h

        hs = h
        tn = t + hs
        if tn >= t_bound:
            tn = t_bound
            hs = t_bound - t
        if tn == t:
            return RK_UNDERFLOW, n_acc, n_rej, nfev, t, L, S, fL, fS, h

        k1L = fL
        k1S = fS
        yL = L + hs * (A21 * k1L)
        yS = S + hs * (A21 * k1S)
        k2L, k2S = field(a12, a21, rho, yL, yS)
        yL = L + hs * (A31 * k1L + A32 * k2L)
        yS = S + hs * (A31 * k1S + A32 * k2S)
        k3L, k3S = field(a12, a21, rho, yL, yS)
        yL = L + hs * (A41 * k1L + A42 * k2L + A43 * k3L)
        yS = S + hs * (A41 * k1S + A42 * k2S + A43 * k3S)
        k4L, k4S = field(a12, a21, rho, yL, yS)
        yL = L + hs * (A51 * k1L + A52 * k2L + A53 * k3L + A54 * k4L)
        yS = S + hs * (A51 * k1S + A52 * k2S + A53 * k3S + A54 * k4S)
        k5L, k5S = field(a12, a21, rho, yL, yS)
        yL = L + hs * (A61 * k1L + A62 * k2L + A63 * k3L + A64 * k4L + A65 * k5L)
        yS = S + hs * (A61 * k1S + A62 * k2S + A63 * k3S + A64 * k4S + A65 * k5S)
        k6L, k6S = field(a12, a21, rho, yL, yS)
        y5L = L + hs * (B1 * k1L + B3 * k3L + B4 * k4L + B5 * k5L + B6 * k6L)
        y5S = S + hs * (B1 * k1S + B3 * k3S + B4 * k4S + B5 * k5S + B6 * k6S)
        k7L, k7S = field(a12, a21, rho, y5L, y5S)
        nfev += 6

        errL = hs * (E1 * k1L + E3 * k3L + E4 * k4L + E5 * k5L + E6 * k6L + E7 * k7L)
        errS = hs * (E1 * k1S + E3 * k3S + E4 * k4S + E5 * k5S + E6 * k6S + E7 * k7S)
        scL = atol + rtol * max(abs(L), abs(y5L))
        scS = atol + rtol * max(abs(S), abs(y5S))
        err_norm = max(abs(errL) / scL, abs(errS) / scS)

        if err_norm <= 1.0:
            if err_norm == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err_norm ** -0.2
                if factor > MAX_FACTOR:
                    factor = MAX_FACTOR
                elif factor < MIN_FACTOR:
                    factor = MIN_FACTOR
            if rejected and factor > 1.0:
                factor = 1.0
            rejected = False

            if not (-slack <= y5L <= 1.0 + slack and -slack <= y5S <= 1.0 + slack):
                return RK_BREACH, n_acc, n_rej, nfev, tn, y5L, y5S, k7L, k7S, h

            ts[n_acc] = tn
            Ls[n_acc] = y5L
            Ss[n_acc] = y5S
            qs[n_acc, 0, 0] = k1L
            qs[n_acc, 1, 0] = k1S
            qs[n_acc, 0, 1] = (P01 * k1L + P21 * k3L + P31 * k4L
                               + P41 * k5L + P51 * k6L + P61 * k7L)
            qs[n_acc, 1, 1] = (P01 * k1S + P21 * k3S + P31 * k4S
                               + P41 * k5S + P51 * k6S + P61 * k7S)
            qs[n_acc, 0, 2] = (P02 * k1L + P22 * k3L + P32 * k4L
                               + P42 * k5L + P52 * k6L + P62 * k7L)
            qs[n_acc, 1, 2] = (P02 * k1S + P22 * k3S + P32 * k4S
                               + P42 * k5S + P52 * k6S + P62 * k7S)
            qs[n_acc, 0, 3] = (P03 * k1L + P23 * k3L + P33 * k4L
                               + P43 * k5L + P53 * k6L + P63 * k7L)
            qs[n_acc, 1, 3] = (P03 * k1S + P23 * k3S + P33 * k4S
                               + P43 * k5S + P53 * k6S + P63 * k7S)
            n_acc += 1

            t = tn
            L = y5L
            S = y5S
            fL = k7L
            fS = k7S
            h = hs * factor
        else:
            factor = SAFETY * err_norm ** -0.2
            if factor < MIN_FACTOR:
                factor = MIN_FACTOR
            h = hs * factor
            n_rej += 1
            rejected = True


rk45_advance = _jit(_rk45_advance_impl)


# ---------------------------------------------------------------------------
# classical fixed-step RK4 (independent reference path)
# ---------------------------------------------------------------------------

def _rk4_final_impl(a12, a21, rho, L, S, h, n_steps):
    """Final state after n_steps classical RK4 steps of size h."""
    for _ in range(n_steps):
        k1L, k1S = field(a12, a21, rho, L, S)
        k2L, k2S = field(a12, a21, rho, L + 0.5 * h * k1L, S + 0.5 * h * k1S)
        k3L, k3S = field(a12, a21, rho, L + 0.5 * h * k2L, S + 0.5 * h * k2S)
        k4L, k4S = field(a12, a21, rho, L + h * k3L, S + h * k3S)
        L = L + (h / 6.0) * (k1L + 2.0 * k2L + 2.0 * k3L + k4L)
        S = S + (h / 6.0) * (k1S + 2.0 * k2S + 2.0 * k3S + k4S)
    return L, S


rk4_final = _jit(_rk4_final_impl)
