import numpy as np
import pytest

from lvcorridor import Params, SolverConfig, Trajectory

# §-style reference parameter sets used throughout: near-threshold, and the
# two asymmetric configurations.
PANEL_A = Params(0.48, 0.55, 1.0)
PANEL_B = Params(0.50, 0.70, 1.0)
PANEL_C = Params(0.75, 0.45, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_params(rng, n, lo=0.05, hi=0.95):
    """n Params drawn strictly inside the open unit square with log-uniform
    adjustment rates."""
    a12 = rng.uniform(lo, hi, n)
    a21 = rng.uniform(lo, hi, n)
    rho = 10.0 ** rng.uniform(-1.0, 1.0, n)
    return [Params(float(a), float(b), float(r))
            for a, b, r in zip(a12, a21, rho)]


def constant_trajectory(p, state, t_end=200.0, n_steps=4):
    """Synthetic trajectory frozen at one state: zero interpolant slopes,
    uniform mesh."""
    ts = np.linspace(0.0, t_end, n_steps + 1)
    ys = np.tile(np.asarray(state, dtype=float), (n_steps + 1, 1))
    hs = np.diff(ts)
    qs = np.zeros((n_steps, 2, 4))
    return Trajectory(params=p, config=SolverConfig(t_max=t_end),
                      ts=ts, ys=ys, hs=hs, qs=qs,
                      n_rejected=0, n_fev=0, events=())


def piecewise_linear_trajectory(p, ts, states):
    """Synthetic trajectory interpolating linearly between the given
    states: q[:, 0] carries the slope, higher interpolant orders are zero."""
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(states, dtype=float)
    hs = np.diff(ts)
    qs = np.zeros((len(hs), 2, 4))
    qs[:, :, 0] = np.diff(ys, axis=0) / hs[:, None]
    return Trajectory(params=p, config=SolverConfig(t_max=float(ts[-1])),
                      ts=ts, ys=ys, hs=hs, qs=qs,
                      n_rejected=0, n_fev=0, events=())
