"""Classification of the interaction-parameter plane by coexistence
equilibrium structure, plus the analytic overlay curves.

Every point of the open unit square (a12, a21) admits a coexistence
equilibrium; cells are classified by its asymmetry and capacity:

  state-leaning          L* > S* (equivalently a21 > a12)
  society-leaning        S* > L*
  corridor-core          |L* - S*| < eps_balance and min(L*, S*) > gamma_capacity
  balanced-low-capacity  |L* - S*| < eps_balance and min(L*, S*) <= gamma_capacity

``eps_balance`` is a fixed classification threshold, a different quantity
from the per-run corridor gap |L* - S*|; likewise ``gamma_capacity`` is a
threshold on equilibrium levels, unrelated to the time-dependent deviation
indicator. The overlay curves (symmetry line, gap contour, capacity
contours) are computed from closed forms, not marched from the raster, so
they double as independent oracles for the cell classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "MapThresholds",
    "RegimeClass",
    "RegimeGrid",
    "classify_point",
    "sweep",
    "gap_contour",
    "capacity_contour",
    "symmetry_line",
]


@dataclass(frozen=True)
class MapThresholds:
    """Classification thresholds for the parameter-plane map.

    The defaults are artifact choices (no canonical values exist) under the
    constraint that all four classes are realizable: because
    L* + S* = 1 + (1-a12)(1-a21)/eta > 1 everywhere, a balanced cell has
    min(L*, S*) > (1 - eps_balance)/2, so gamma_capacity must exceed that
    bound (with eps_balance = 0.1: 0.45, and > 0.5 for the threshold to cut
    the symmetric diagonal) for the low-capacity class to be non-empty.
    """

    eps_balance: float = 0.1
    gamma_capacity: float = 0.6

    def __post_init__(self):
        if not self.eps_balance > 0:
            raise ValueError(f"eps_balance must be > 0, got {self.eps_balance}")
        if not 0.0 < self.gamma_capacity < 1.0:
            raise ValueError(
                f"gamma_capacity must lie in (0, 1), got {self.gamma_capacity}"
            )


class RegimeClass(IntEnum):
    STATE_LEANING = 1
    SOCIETY_LEANING = 2
    CORRIDOR_CORE = 3
    BALANCED_LOW_CAPACITY = 4


def _equilibrium_values(a12, a21):
    eta = 1.0 - a12 * a21
    return (1.0 - a12) / eta, (1.0 - a21) / eta, eta


def _classify_values(l_star, s_star, th: MapThresholds):
    gap = np.abs(l_star - s_star)
    low = np.minimum(l_star, s_star)
    balanced_code = np.where(low > th.gamma_capacity,
                             int(RegimeClass.CORRIDOR_CORE),
                             int(RegimeClass.BALANCED_LOW_CAPACITY))
    leaning_code = np.where(l_star > s_star,
                            int(RegimeClass.STATE_LEANING),
                            int(RegimeClass.SOCIETY_LEANING))
    return np.where(gap < th.eps_balance, balanced_code, leaning_code)


def classify_point(a12: float, a21: float,
                   th: MapThresholds = MapThresholds()) -> RegimeClass:
    """Class of one interior point of the parameter square. Precedence:
    the balanced band (strict gap < eps_balance) is split by capacity with
    ties falling to the low-capacity side; outside the band the larger
    equilibrium component decides."""
    if not (0.0 < a12 < 1.0 and 0.0 < a21 < 1.0):
        raise ValueError(
            f"(a12, a21) must lie in (0, 1)^2, got ({a12}, {a21})"
        )
    l_star, s_star, _ = _equilibrium_values(float(a12), float(a21))
    return RegimeClass(int(_classify_values(l_star, s_star, th)))


@dataclass(frozen=True)
class RegimeGrid:
    """Raster over the open parameter square plus overlay polylines.

    Arrays are indexed [i, j] = (a12=axis[i], a21=axis[j]); the axis holds
    the N cell centers (i + 1/2)/N, so all cells sit at least half a cell
    width inside the square. Overlays map curve name to an (k, 2) array of
    (a12, a21) points.
    """

    axis: np.ndarray
    l_star: np.ndarray
    s_star: np.ndarray
    eta: np.ndarray
    classes: np.ndarray
    thresholds: MapThresholds
    overlays: dict

    @property
    def resolution(self) -> int:
        return len(self.axis)


def sweep(n: int, th: MapThresholds = MapThresholds(),
          overlay_points: int = 1025) -> RegimeGrid:
    """Classify the n x n cell-center grid and attach the overlay curves.

    Cell values depend only on (a12, a21); the relative adjustment rate
    plays no role in equilibrium locations, so none is accepted here.
    """
    if n < 2:
        raise ValueError(f"resolution must be at least 2, got {n}")
    axis = (np.arange(n) + 0.5) / n
    a12g, a21g = np.meshgrid(axis, axis, indexing="ij")
    l_star, s_star, eta = _equilibrium_values(a12g, a21g)
    classes = _classify_values(l_star, s_star, th).astype(np.int8)
    upper, lower = gap_contour(th, overlay_points)
    overlays = {
        "symmetry": symmetry_line(overlay_points),
        "gap_upper": upper,
        "gap_lower": lower,
        "capacity_L": capacity_contour(th, "L", overlay_points),
        "capacity_S": capacity_contour(th, "S", overlay_points),
    }
    return RegimeGrid(axis=axis, l_star=l_star, s_star=s_star, eta=eta,
                      classes=classes, thresholds=th, overlays=overlays)


def _open_samples(n_points: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n_points + 2)[1:-1]


def symmetry_line(n_points: int = 1025) -> np.ndarray:
    t = _open_samples(n_points)
    return np.column_stack((t, t))


def gap_contour(th: MapThresholds, n_points: int = 1025):
    """The two branches of |L* - S*| = eps_balance, solved explicitly.

    The gap equals |a21 - a12| / (1 - a12 a21), so the branches are
    a21 = (a12 +/- e) / (1 +/- e a12); points falling outside the open
    square are dropped (an empty branch is a value, not an error).
    """
    e = th.eps_balance
    a12 = _open_samples(n_points)
    upper = (a12 + e) / (1.0 + e * a12)
    lower = (a12 - e) / (1.0 - e * a12)
    up = np.column_stack((a12, upper))
    lo = np.column_stack((a12, lower))
    up = up[(up[:, 1] > 0.0) & (up[:, 1] < 1.0)]
    lo = lo[(lo[:, 1] > 0.0) & (lo[:, 1] < 1.0)]
    return up, lo


def capacity_contour(th: MapThresholds, which: str = "L",
                     n_points: int = 1025) -> np.ndarray:
    """The curve L* = gamma_capacity (which="L") or S* = gamma_capacity
    (which="S"): a12 = (1 - g)/(1 - g a21) and the role-swapped form."""
    if which not in ("L", "S"):
        raise ValueError(f'which must be "L" or "S", got {which!r}')
    g = th.gamma_capacity
    free = _open_samples(n_points)
    dep = (1.0 - g) / (1.0 - g * free)
    if which == "L":
        pts = np.column_stack((dep, free))
    else:
        pts = np.column_stack((free, dep))
    mask = (pts[:, 0] > 0.0) & (pts[:, 0] < 1.0) \
        & (pts[:, 1] > 0.0) & (pts[:, 1] < 1.0)
    return pts[mask]
