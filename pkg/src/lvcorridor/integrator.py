"""Adaptive Dormand-Prince 5(4) integration of the competition system.

The stepping loop lives in ``_kernels`` (numba-compiled when available);
this module owns the user-facing machinery: tolerance configuration, the
densely evaluable ``Trajectory`` record, event root-finding on the dense
output, and convergence-time measurement against the coexistence point.

Per-step local error is accepted when ``|err_i| <= abs_tol + rel_tol * |y_i|``
componentwise. Every accepted state is monitored against the unit square;
violations beyond the configured slack raise instead of being clamped,
because the square is invariant for the exact flow and a breach means the
solver was misused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from ._kernels import _field_impl
from .errors import (
    ConvergenceLostError,
    HorizonExceededError,
    InvalidStateError,
    InvarianceBreachError,
    StepSizeUnderflowError,
)
from .model import Params, require_interior

__all__ = [
    "SolverConfig",
    "EventSpec",
    "EventHit",
    "Trajectory",
    "integrate",
    "dense_eval",
    "convergence_time",
    "bracketed_root",
    "EVENT_LOCATION_TOL",
]

EVENT_LOCATION_TOL = 1e-10
_CHUNK = 4096


@dataclass(frozen=True)
class SolverConfig:
    """Integration controls.

    ``rel_tol``/``abs_tol`` follow the tolerance class of the runs they
    reproduce (1e-6 / 1e-8). ``t_max`` is the horizon; the default 200 is
    an artifact choice, long enough for every moderately coupled
    configuration studied here (near-critical sweeps pass a larger one).
    """

    rel_tol: float = 1e-6
    abs_tol: float = 1e-8
    t_max: float = 200.0
    initial_step: Optional[float] = None
    max_step: Optional[float] = None
    invariance_slack: float = 1e-6

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError("t_max must be positive and finite")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive when given")
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be positive when given")
        if self.invariance_slack < 0:
            raise ValueError("invariance_slack must be nonnegative")


@dataclass(frozen=True)
class EventSpec:
    """Scalar event g(tau, state) whose sign changes are located on the
    dense output. ``direction`` filters crossings ('rising', 'falling',
    'both'); a terminal event truncates the trajectory where it fires."""

    fn: Callable[[float, np.ndarray], float]
    direction: str = "both"
    terminal: bool = False

    def __post_init__(self):
        if self.direction not in ("rising", "falling", "both"):
            raise ValueError(f"direction must be rising/falling/both, "
                             f"got {self.direction!r}")


@dataclass(frozen=True)
class EventHit:
    time: float
    state: np.ndarray
    rising: bool


@dataclass(frozen=True)
class Trajectory:
    """Accepted-mesh solution with per-step quartic interpolants.

    ``hs[i]`` is the original length of step i; it equals ``ts[i+1]-ts[i]``
    except for a final step shortened by a terminal event, where the
    interpolant still spans the original step. ``events`` holds, per input
    EventSpec, the located crossings in time order.
    """

    params: Params
    config: SolverConfig
    ts: np.ndarray
    ys: np.ndarray
    hs: np.ndarray
    qs: np.ndarray
    n_rejected: int
    n_fev: int
    events: tuple = dc_field(default=())

    @property
    def n_accepted(self) -> int:
        return len(self.hs)

    @property
    def t0(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])


def _rms(a, b):
    return math.sqrt(0.5 * (a * a + b * b))


def _initial_step(p, L, S, fL, fS, rtol, atol, t_bound, max_step):
    """Automatic first-step heuristic from the local field magnitude
    (the standard two-probe estimate); one extra field evaluation."""
    scL = atol + rtol * abs(L)
    scS = atol + rtol * abs(S)
    d0 = _rms(L / scL, S / scS)
    d1 = _rms(fL / scL, fS / scS)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    gL, gS = _field_impl(p.a12, p.a21, p.rho, L + h0 * fL, S + h0 * fS)
    d2 = _rms((gL - fL) / scL, (gS - fS) / scS) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, t_bound, max_step)


def _step_state(t_left, y_left, h, q, tau):
    """Evaluate one step's interpolant at tau within [t_left, t_left + h]."""
    x = (tau - t_left) / h
    x2 = x * x
    x3 = x2 * x
    x4 = x3 * x
    return y_left + h * (q[:, 0] * x + q[:, 1] * x2 + q[:, 2] * x3 + q[:, 3] * x4)


def bracketed_root(fn, a, b, fa, fb, xtol=EVENT_LOCATION_TOL):
    """Root of fn in [a, b] given fn(a)=fa, fn(b)=fb with a sign change
    (fb may be exactly zero). Alternates secant proposals with bisection,
    so the bracket provably shrinks; returns the bracket midpoint once its
    width is below xtol."""
    if fb == 0.0:
        return b
    if fa == 0.0:
        return a
    use_secant = True
    for _ in range(256):
        if b - a <= xtol:
            break
        m = 0.0
        ok = False
        if use_secant and fb != fa:
            m = b - fb * (b - a) / (fb - fa)
            ok = a < m < b
        if not ok:
            m = 0.5 * (a + b)
        use_secant = not use_secant
        fm = fn(m)
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fb > 0.0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


class _EventTracker:
    """Per-event sign state plus located hits, fed step by step."""

    def __init__(self, spec: EventSpec, t0: float, y0: np.ndarray):
        self.spec = spec
        self.g_prev = float(spec.fn(t0, y0))
        self.hits: list = []

    def feed(self, t_left, y_left, h, q, t_right, y_right):
        g_new = float(self.spec.fn(t_right, y_right))
        g_old = self.g_prev
        self.g_prev = g_new
        rising = g_old < 0.0 and g_new >= 0.0
        falling = g_old > 0.0 and g_new <= 0.0
        if not (rising or falling):
            return None
        if self.spec.direction == "rising" and not rising:
            return None
        if self.spec.direction == "falling" and not falling:
            return None

        def g_of(tau):
            return float(self.spec.fn(tau, _step_state(t_left, y_left, h, q, tau)))

        t_hit = bracketed_root(g_of, t_left, t_right, g_old, g_new)
        hit = EventHit(time=t_hit,
                       state=_step_state(t_left, y_left, h, q, t_hit),
                       rising=rising)
        self.hits.append(hit)
        return hit


def _check_initial_state(x0, slack):
    L, S = float(x0[0]), float(x0[1])
    if not (math.isfinite(L) and math.isfinite(S)):
        raise InvalidStateError(f"initial state must be finite, got ({L}, {S})")
    if not (-slack <= L <= 1.0 + slack and -slack <= S <= 1.0 + slack):
        raise InvarianceBreachError(0.0, (L, S))
    return L, S


def integrate(p: Params, x0, cfg: Optional[SolverConfig] = None,
              events=()) -> Trajectory:
    """Integrate from x0 over [0, cfg.t_max] with adaptive error control.

    Event crossings are detected by sign change of g over each accepted
    step and refined on the dense output to within 1e-10 in tau. A terminal
    event truncates the trajectory at the located time. Identical inputs
    produce bit-identical trajectories.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    slack = cfg.invariance_slack
    L, S = _check_initial_state(x0, slack)
    events = tuple(events)

    fL, fS = _field_impl(p.a12, p.a21, p.rho, L, S)
    n_fev = 1
    max_step = cfg.max_step if cfg.max_step is not None else math.inf
    if cfg.initial_step is not None:
        h = min(cfg.initial_step, cfg.t_max, max_step)
    else:
        h = _initial_step(p, L, S, fL, fS, cfg.rel_tol, cfg.abs_tol,
                          cfg.t_max, max_step)
        n_fev += 1
    min_step = 1e-14 * cfg.t_max

    y0 = np.array([L, S])
    trackers = [_EventTracker(spec, 0.0, y0) for spec in events]

    ts_parts = [np.array([0.0])]
    ys_parts = [y0.reshape(1, 2)]
    hs_parts: list = []
    qs_parts: list = []
    n_rejected = 0
    t = 0.0
    prev_t = 0.0
    prev_y = y0
    terminal_time = None

    while True:
        ts_c = np.empty(_CHUNK)
        Ls_c = np.empty(_CHUNK)
        Ss_c = np.empty(_CHUNK)
        qs_c = np.empty((_CHUNK, 2, 4))
        status, n_acc, n_rej, nf, t, L, S, fL, fS, h = _kernels.rk45_advance(
            p.a12, p.a21, p.rho, t, L, S, fL, fS, h, cfg.t_max,
            cfg.rel_tol, cfg.abs_tol, max_step, slack, min_step,
            ts_c, Ls_c, Ss_c, qs_c,
        )
        n_rejected += n_rej
        n_fev += nf

        if n_acc > 0:
            ts_new = ts_c[:n_acc].copy()
            ys_new = np.column_stack((Ls_c[:n_acc], Ss_c[:n_acc]))
            qs_new = qs_c[:n_acc].copy()
            hs_new = np.empty(n_acc)
            hs_new[0] = ts_new[0] - prev_t
            hs_new[1:] = np.diff(ts_new)
            ts_parts.append(ts_new)
            ys_parts.append(ys_new)
            hs_parts.append(hs_new)
            qs_parts.append(qs_new)

            if trackers:
                pt, py = prev_t, prev_y
                for i in range(n_acc):
                    t_right = ts_new[i]
                    y_right = ys_new[i]
                    for tr in trackers:
                        hit = tr.feed(pt, py, hs_new[i], qs_new[i],
                                      t_right, y_right)
                        if hit is not None and tr.spec.terminal:
                            if terminal_time is None or hit.time < terminal_time:
                                terminal_time = hit.time
                    pt, py = t_right, y_right
                    if terminal_time is not None:
                        break
            prev_t = float(ts_new[-1])
            prev_y = ys_new[-1]

        if status == _kernels.RK_BREACH:
            raise InvarianceBreachError(t, (L, S))
        if status == _kernels.RK_UNDERFLOW:
            raise StepSizeUnderflowError(
                f"step size underflow at tau={t}: required step fell below "
                f"{min_step:.3e}; the configuration is effectively stiff for "
                f"this explicit method"
            )
        if terminal_time is not None:
            break
        if status == _kernels.RK_OK:
            break

    ts = np.concatenate(ts_parts)
    ys = np.concatenate(ys_parts)
    hs = np.concatenate(hs_parts) if hs_parts else np.empty(0)
    qs = np.concatenate(qs_parts) if qs_parts else np.empty((0, 2, 4))

    if terminal_time is not None:
        ts, ys, hs, qs = _truncate(ts, ys, hs, qs, terminal_time)

    hit_lists = []
    for tr in trackers:
        hits = tr.hits
        if terminal_time is not None:
            hits = [hh for hh in hits if hh.time <= terminal_time]
        hit_lists.append(tuple(hits))

    return Trajectory(params=p, config=cfg, ts=ts, ys=ys, hs=hs, qs=qs,
                      n_rejected=n_rejected, n_fev=n_fev,
                      events=tuple(hit_lists))


def _truncate(ts, ys, hs, qs, t_stop):
    """Cut the mesh at t_stop, interpolating the final state; the last
    step keeps its original length so its interpolant stays valid."""
    i = int(np.searchsorted(ts, t_stop, side="left")) - 1
    i = max(i, 0)
    if t_stop == ts[i + 1]:
        return (ts[:i + 2].copy(), ys[:i + 2].copy(),
                hs[:i + 1].copy(), qs[:i + 1].copy())
    y_stop = _step_state(ts[i], ys[i], hs[i], qs[i], t_stop)
    ts_out = np.append(ts[:i + 1], t_stop)
    ys_out = np.vstack((ys[:i + 1], y_stop))
    return ts_out, ys_out, hs[:i + 1].copy(), qs[:i + 1].copy()


def dense_eval(traj: Trajectory, tau):
    """Evaluate the trajectory at ``tau`` (scalar or array) via the
    per-step quartic interpolants. ``tau`` must lie within the mesh range;
    mesh points reproduce the stored states."""
    ts, hs, ys, qs = traj.ts, traj.hs, traj.ys, traj.qs
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < ts[0]) or np.any(tau_arr > ts[-1]):
        raise ValueError(
            f"tau outside trajectory range [{ts[0]}, {ts[-1]}]"
        )
    scalar = tau_arr.ndim == 0
    tt = np.atleast_1d(tau_arr)
    idx = np.searchsorted(ts, tt, side="right") - 1
    idx = np.clip(idx, 0, len(hs) - 1)
    x = (tt - ts[idx]) / hs[idx]
    q = qs[idx]
    xp = x.copy()
    poly = q[:, :, 0] * xp[:, None]
    for j in (1, 2, 3):
        xp = xp * x
        poly = poly + q[:, :, j] * xp[:, None]
    out = ys[idx] + hs[idx][:, None] * poly
    return out[0] if scalar else out


def convergence_time(p: Params, x0, delta: float,
                     cfg: Optional[SolverConfig] = None) -> float:
    """First time the trajectory enters the max-norm delta-ball around the
    coexistence point, located by event detection.

    The run continues to the horizon; if the ball is left again within
    [T, min(t_max, 11 T)] the first entry was spurious and
    ConvergenceLostError is raised. Never entering before the horizon
    raises HorizonExceededError carrying the closest approach over the
    accepted mesh.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    cfg = cfg if cfg is not None else SolverConfig()
    eq = require_interior(p)
    Ls, Ss = float(eq[0]), float(eq[1])
    d0 = max(abs(float(x0[0]) - Ls), abs(float(x0[1]) - Ss))
    if d0 <= delta:
        return 0.0

    def ball_gap(tau, y):
        return max(abs(y[0] - Ls), abs(y[1] - Ss)) - delta

    spec = EventSpec(fn=ball_gap, direction="both", terminal=False)
    traj = integrate(p, x0, cfg, events=(spec,))
    hits = traj.events[0]
    entries = [hh for hh in hits if not hh.rising]
    if not entries:
        dists = np.max(np.abs(traj.ys - np.array([Ls, Ss])), axis=1)
        k = int(np.argmin(dists))
        raise HorizonExceededError(
            f"never entered the delta={delta} ball around ({Ls}, {Ss}) "
            f"within t_max={cfg.t_max}; closest approach {dists[k]:.6e} "
            f"at tau={traj.ts[k]}",
            closest_approach=float(dists[k]),
            at_time=float(traj.ts[k]),
        )
    t_conv = entries[0].time
    window_end = min(cfg.t_max, 11.0 * t_conv)
    for hh in hits:
        if hh.rising and t_conv < hh.time <= window_end:
            raise ConvergenceLostError(
                f"left the delta={delta} ball at tau={hh.time} after first "
                f"entry at tau={t_conv}; first entry is not a convergence time"
            )
    return t_conv
