"""Equilibrium gap, normalized deviation indicator, and corridor dwell
structure.

The gap ``eps = |L* - S*|`` measures the intrinsic asymmetry of the
coexistence point; the indicator ``gamma(tau) = |L(tau) - S(tau)| / eps``
rescales the instantaneous imbalance by it. Stretches with gamma <= 1 are
the corridor intervals: phases where the two components stay as close to
each other as the equilibrium itself is balanced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateGapError, TrajectoryMismatchError
from .integrator import Trajectory, bracketed_root, dense_eval
from .model import Params, require_interior, _as_state

__all__ = [
    "EPS_MIN",
    "CorridorSeries",
    "equilibrium_gap",
    "indicator",
    "corridor_analysis",
]

EPS_MIN = 1e-9

# The gamma <= 1 test gets an absolute slack on |L - S| of this many
# multiples of the solver tolerance scale (abs_tol + rel_tol). A converged
# trajectory sits at the coexistence point only up to that scale, so its
# tail hovers within it of gamma = 1; without the slack the tail shatters
# into tolerance-noise fragments whose count says nothing about the flow.
BOUNDARY_SLACK_FACTOR = 4.0

DEFAULT_SAMPLES = 20001


@dataclass(frozen=True)
class CorridorSeries:
    """Sampled indicator plus the maximal closed intervals where it stays
    at or below 1 (endpoints refined by root location on the dense output;
    the trajectory ends may open or close an interval without a crossing)."""

    gap_epsilon: float
    taus: np.ndarray
    gammas: np.ndarray
    intervals: np.ndarray  # (k, 2) entry/exit times, disjoint, sorted
    dwell_total: float
    dwell_fraction: float

    @property
    def horizon(self) -> float:
        return float(self.taus[-1] - self.taus[0])


def equilibrium_gap(p: Params) -> float:
    """|L* - S*|, the asymmetry of the coexistence point; equals
    |a21 - a12| / eta. Requires the coexistence point to exist; a zero gap
    (symmetric coefficients) is returned as a value and rejected only by
    the indicator-based operations."""
    eq = require_interior(p)
    return abs(float(eq[0]) - float(eq[1]))


def _checked_gap(p: Params, eps_min: float) -> float:
    gap = equilibrium_gap(p)
    if gap < eps_min:
        raise DegenerateGapError(
            f"equilibrium gap {gap:.3e} is below {eps_min:.1e}: "
            f"(near-)symmetric coefficients a12={p.a12}, a21={p.a21} make "
            f"the normalized deviation undefined"
        )
    return gap


def indicator(p: Params, x, eps_min: float = EPS_MIN) -> float:
    """Normalized deviation |L - S| / eps at one state; 1 at the
    coexistence point, 0 on the diagonal."""
    gap = _checked_gap(p, eps_min)
    L, S = _as_state(x)
    return abs(L - S) / gap


def corridor_analysis(p: Params, traj: Trajectory,
                      n_samples: int = DEFAULT_SAMPLES,
                      eps_min: float = EPS_MIN,
                      boundary_slack: Optional[float] = None) -> CorridorSeries:
    """Sample the indicator on a uniform mesh over the trajectory's range
    and extract the corridor intervals.

    Sampling uses the dense output rather than the accepted mesh, because
    adaptive steps grow long in the slow phase and would under-resolve
    crossings. A sample counts as inside when |L - S| <= eps +
    boundary_slack, where the slack defaults to solver resolution
    (BOUNDARY_SLACK_FACTOR times the trajectory's tolerance scale); interval
    endpoints are then refined to within 1e-10 in tau on that padded
    threshold. Tangencies without an inside sample contribute nothing.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be at least 2, got {n_samples}")
    if traj.params != p:
        raise TrajectoryMismatchError(
            f"trajectory was integrated under {traj.params}, not {p}"
        )
    gap = _checked_gap(p, eps_min)

    taus = np.linspace(traj.t0, traj.t_end, n_samples)
    states = dense_eval(traj, taus)
    dev = np.abs(states[:, 0] - states[:, 1])
    gammas = dev / gap

    if boundary_slack is None:
        cfg = traj.config
        boundary_slack = BOUNDARY_SLACK_FACTOR * (cfg.abs_tol + cfg.rel_tol)
    eps_edge = gap + boundary_slack
    inside = dev <= eps_edge

    def edge_gap(tau):
        st = dense_eval(traj, tau)
        return abs(float(st[0]) - float(st[1])) - eps_edge

    intervals = []
    open_t = float(taus[0]) if inside[0] else None
    for i in range(n_samples - 1):
        if inside[i] == inside[i + 1]:
            continue
        t_cross = bracketed_root(edge_gap, float(taus[i]), float(taus[i + 1]),
                                 float(dev[i] - eps_edge),
                                 float(dev[i + 1] - eps_edge))
        if inside[i + 1]:
            open_t = t_cross
        else:
            if open_t is not None and t_cross > open_t:
                intervals.append((open_t, t_cross))
            open_t = None
    if open_t is not None and float(taus[-1]) > open_t:
        intervals.append((open_t, float(taus[-1])))

    iv = np.array(intervals, dtype=float).reshape(-1, 2)
    dwell_total = float(np.sum(iv[:, 1] - iv[:, 0])) if len(iv) else 0.0
    horizon = float(taus[-1] - taus[0])
    dwell_fraction = dwell_total / horizon if horizon > 0 else 0.0
    return CorridorSeries(gap_epsilon=gap, taus=taus, gammas=gammas,
                          intervals=iv, dwell_total=dwell_total,
                          dwell_fraction=dwell_fraction)
