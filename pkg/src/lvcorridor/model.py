"""Closed-form structure of the normalized two-species competition system.

The state (L, S) lives in the unit square and evolves under

    dL/dtau = L (1 - L - a12 S)
    dS/dtau = rho S (1 - S - a21 L)

This module holds everything that is available in closed form: the vector
field and its Jacobian, the boundary and coexistence equilibria, their
spectra and stability classes, and the near-critical parameter families
where the product a12*a21 approaches 1 from below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ._kernels import _field_impl
from .errors import InvalidStateError, NoInteriorEquilibriumError

__all__ = [
    "Params",
    "StabilityClass",
    "EquilibriumInfo",
    "EquilibriumReport",
    "SpectralSummary",
    "vector_field",
    "jacobian",
    "interior_equilibrium",
    "require_interior",
    "boundary_spectra",
    "interior_spectrum",
    "equilibrium_report",
    "near_critical_family",
    "classify_eigenvalues",
]


@dataclass(frozen=True)
class Params:
    """Model constants: cross-interaction coefficients and the relative
    adjustment rate of S.

    ``a12`` and ``a21`` must be nonnegative (zero decouples the system into
    two logistic equations, kept admissible as the standard validation
    configuration) and ``rho`` strictly positive. The proximity parameter
    ``eta = 1 - a12*a21`` is always derived, never stored.
    """

    a12: float
    a21: float
    rho: float = 1.0

    def __post_init__(self):
        for name in ("a12", "a21", "rho"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.a12 < 0 or self.a21 < 0:
            raise ValueError(
                f"cross-interaction coefficients must be >= 0, "
                f"got a12={self.a12}, a21={self.a21}"
            )
        if self.rho <= 0:
            raise ValueError(f"adjustment rate rho must be > 0, got {self.rho}")

    @property
    def eta(self) -> float:
        """Distance 1 - a12*a21 to the coexistence threshold."""
        return 1.0 - self.a12 * self.a21


class StabilityClass(Enum):
    STABLE_NODE = "stable node"
    STABLE_FOCUS = "stable focus"
    SADDLE = "saddle"
    UNSTABLE_NODE = "unstable node"
    UNSTABLE_FOCUS = "unstable focus"
    NON_HYPERBOLIC = "non-hyperbolic"


@dataclass(frozen=True)
class EquilibriumInfo:
    """One fixed point with its local linearization."""

    point: np.ndarray
    jacobian: np.ndarray
    eigenvalues: tuple
    stability: StabilityClass


@dataclass(frozen=True)
class EquilibriumReport:
    """All fixed points of one parameter set: the three corner/axis points
    and, when it exists, the coexistence point."""

    interior: Optional[EquilibriumInfo]
    boundary: tuple


@dataclass(frozen=True)
class SpectralSummary:
    """Eigenstructure at the coexistence equilibrium, ordered by magnitude
    (|lambda_fast| >= |lambda_slow|; the convention is this artifact's
    choice and is applied consistently everywhere)."""

    lambda_fast: float
    lambda_slow: float
    eta: float
    slow_estimate: float
    timescale_ratio: float


def _as_state(x) -> tuple:
    L, S = float(x[0]), float(x[1])
    if not (math.isfinite(L) and math.isfinite(S)):
        raise InvalidStateError(f"state must be finite, got ({L}, {S})")
    return L, S


def vector_field(p: Params, x) -> tuple:
    """Right-hand side (dL/dtau, dS/dtau) at an arbitrary point.

    Bounds are not enforced here; adaptive integration legitimately
    evaluates the field slightly outside the unit square.
    """
    L, S = _as_state(x)
    return _field_impl(p.a12, p.a21, p.rho, L, S)


def jacobian(p: Params, x) -> np.ndarray:
    """Jacobian matrix of the vector field at an arbitrary point."""
    L, S = _as_state(x)
    return np.array([
        [1.0 - 2.0 * L - p.a12 * S, -p.a12 * L],
        [-p.rho * p.a21 * S, p.rho * (1.0 - 2.0 * S - p.a21 * L)],
    ])


def interior_equilibrium(p: Params) -> Optional[np.ndarray]:
    """Coexistence point ((1-a12)/eta, (1-a21)/eta), or None when the
    coefficients do not place it inside the unit square (a12 >= 1 or
    a21 >= 1). Absence is a value, not an error.

    The location does not depend on rho.
    """
    if p.a12 >= 1.0 or p.a21 >= 1.0:
        return None
    eta = p.eta
    return np.array([(1.0 - p.a12) / eta, (1.0 - p.a21) / eta])


def require_interior(p: Params) -> np.ndarray:
    """Like interior_equilibrium, but absence raises a typed error."""
    eq = interior_equilibrium(p)
    if eq is None:
        raise NoInteriorEquilibriumError(
            f"no coexistence equilibrium inside the unit square for "
            f"a12={p.a12}, a21={p.a21} (both must lie in [0, 1))"
        )
    return eq


def _eig2(tr: float, det: float) -> tuple:
    """Eigenvalues of a 2x2 matrix from its trace and determinant, ordered
    by descending magnitude.

    Uses the cancellation-free quadratic formula: the larger-magnitude root
    is computed from the discriminant, the other from the product, so the
    small root stays accurate when det << tr^2.
    """
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        s = math.sqrt(disc)
        if tr >= 0.0:
            big = 0.5 * (tr + s)
        else:
            big = 0.5 * (tr - s)
        if big == 0.0:
            return 0.0, 0.0
        return big, det / big
    im = 0.5 * math.sqrt(-disc)
    re = 0.5 * tr
    return complex(re, im), complex(re, -im)


def classify_eigenvalues(lam1, lam2) -> StabilityClass:
    """Stability class of a fixed point from its eigenvalue pair. Handles
    complex-conjugate pairs even though the coexistence spectrum of this
    system is provably real."""
    if isinstance(lam1, complex) or isinstance(lam2, complex):
        re = complex(lam1).real
        if re == 0.0:
            return StabilityClass.NON_HYPERBOLIC
        if complex(lam1).imag != 0.0 or complex(lam2).imag != 0.0:
            return StabilityClass.STABLE_FOCUS if re < 0 else StabilityClass.UNSTABLE_FOCUS
        lam1, lam2 = complex(lam1).real, complex(lam2).real
    if lam1 == 0.0 or lam2 == 0.0:
        return StabilityClass.NON_HYPERBOLIC
    if lam1 < 0 and lam2 < 0:
        return StabilityClass.STABLE_NODE
    if lam1 > 0 and lam2 > 0:
        return StabilityClass.UNSTABLE_NODE
    return StabilityClass.SADDLE


def _info(p: Params, point, eigenvalues) -> EquilibriumInfo:
    return EquilibriumInfo(
        point=np.asarray(point, dtype=float),
        jacobian=jacobian(p, point),
        eigenvalues=eigenvalues,
        stability=classify_eigenvalues(*eigenvalues),
    )


def boundary_spectra(p: Params) -> tuple:
    """The three axis fixed points with their closed-form eigenvalues.

    For coefficients in (0, 1) these are an unstable node at the origin and
    saddles at (1, 0) and (0, 1); the eigenvalues below are exact for any
    admissible parameters and the class is derived from them.
    """
    return (
        _info(p, (0.0, 0.0), (1.0, p.rho)),
        _info(p, (1.0, 0.0), (-1.0, p.rho * (1.0 - p.a21))),
        _info(p, (0.0, 1.0), (1.0 - p.a12, -p.rho)),
    )


def interior_spectrum(p: Params) -> SpectralSummary:
    """Eigenstructure at the coexistence point via the trace/determinant
    quadratic (exact for 2x2, no general eigensolver involved).

    ``slow_estimate`` is the leading-order small eigenvalue
    -rho L* S* eta / (L* + rho S*), which the true slow eigenvalue
    approaches as eta -> 0.
    """
    Lstar, Sstar = require_interior(p)
    tr = -(Lstar + p.rho * Sstar)
    det = p.rho * Lstar * Sstar * p.eta
    lam_fast, lam_slow = _eig2(tr, det)
    return SpectralSummary(
        lambda_fast=lam_fast,
        lambda_slow=lam_slow,
        eta=p.eta,
        slow_estimate=det / tr,
        timescale_ratio=abs(lam_fast) / abs(lam_slow),
    )


def equilibrium_report(p: Params) -> EquilibriumReport:
    """All equilibria with Jacobians, eigenvalues, and stability classes."""
    interior = None
    eq = interior_equilibrium(p)
    if eq is not None:
        spec = interior_spectrum(p)
        interior = _info(p, eq, (spec.lambda_fast, spec.lambda_slow))
    return EquilibriumReport(interior=interior, boundary=boundary_spectra(p))


def near_critical_family(eta: float, a12: Optional[float] = None,
                         rho: float = 1.0) -> Params:
    """Parameters at prescribed distance ``eta`` from the coexistence
    threshold: a21 is chosen as (1-eta)/a12 so that a12*a21 = 1-eta.

    ``a12`` must lie in (1-eta, 1), which keeps both coefficients in that
    interval and hence the coexistence equilibrium inside the unit square.
    When ``a12`` is omitted, the symmetric member sqrt(1-eta) is used.
    """
    if not (0.0 < eta < 1.0):
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    if a12 is None:
        a12 = math.sqrt(1.0 - eta)
    if not (1.0 - eta < a12 < 1.0):
        raise ValueError(
            f"a12={a12} must lie in (1-eta, 1) = ({1.0 - eta}, 1); outside "
            f"that interval the partner coefficient a21=(1-eta)/a12 would "
            f"leave (0, 1) and the coexistence equilibrium would not exist"
        )
    return Params(a12=a12, a21=(1.0 - eta) / a12, rho=rho)
