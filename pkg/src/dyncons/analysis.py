"""Stability analysis of the fixed points of the discrete maps.

Closed-form Jacobians at the interior fixed point, Schur-Cohn/Jury style
root-location reports, eigenvalue-modulus classification, step-size
thresholds for the Euler-forward maps, and a simulation-based stability
oracle that classifies long orbits without reference to any linearization.

Notation used throughout (interior fixed point):

    N* = (1 + alpha*delta - delta) / (1 + alpha*delta),   P* = delta * N*
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .errors import ConditionError, DomainError, ExistenceError
from .models import Equilibrium, ModelParams, ScalarModelParams, State, interior_equilibrium
from .oracle import quadratic_eigen
from .schemes import DiscreteMap

UNIT_MODULUS_BAND = 1e-9


@dataclass(frozen=True)
class Jacobian2:
    """A 2x2 Jacobian with finite entries."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"Jacobian entry {name} is not finite")

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


@dataclass(frozen=True)
class JuryReport:
    """The three root-location conditions for lambda^2 - tr*lambda + det.

    All eigenvalues lie strictly inside the unit circle iff
    ``cond_det`` (1 - det > 0), ``cond_flip`` (1 - tr + det > 0) and
    ``cond_fold`` (1 + tr + det > 0) hold simultaneously.
    """

    det: float
    trace: float
    cond_det: bool
    cond_flip: bool
    cond_fold: bool

    @classmethod
    def from_jacobian(cls, jac: Jacobian2) -> "JuryReport":
        tr, det = jac.trace, jac.det
        return cls(
            det=det,
            trace=tr,
            cond_det=1.0 - det > 0.0,
            cond_flip=1.0 - tr + det > 0.0,
            cond_fold=1.0 + tr + det > 0.0,
        )

    def to_dict(self) -> dict:
        return {
            "det": self.det,
            "trace": self.trace,
            "cond_det": self.cond_det,
            "cond_flip": self.cond_flip,
            "cond_fold": self.cond_fold,
        }


class Classification(str, Enum):
    STABLE = "Stable"
    SADDLE = "Saddle"
    SOURCE = "Source"
    NON_HYPERBOLIC = "NonHyperbolic"


@dataclass(frozen=True)
class StabilityReport:
    jacobian: Jacobian2
    eigenvalues: Tuple[complex, complex]
    moduli: Tuple[float, float]
    jury: JuryReport
    classification: Classification

    def to_dict(self) -> dict:
        j = self.jacobian
        return {
            "jacobian": [[j.a11, j.a12], [j.a21, j.a22]],
            "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in self.eigenvalues],
            "moduli": list(self.moduli),
            "jury": self.jury.to_dict(),
            "classification": self.classification.value,
        }


def classify(jac: Jacobian2) -> StabilityReport:
    """Classify a fixed point from the eigenvalue moduli of its Jacobian.

    Any modulus within ``UNIT_MODULUS_BAND`` of 1 yields ``NonHyperbolic``;
    otherwise both inside -> ``Stable``, both outside -> ``Source``,
    one of each -> ``Saddle``.
    """
    eigs = quadratic_eigen(jac.trace, jac.det)
    moduli = (abs(eigs[0]), abs(eigs[1]))
    if any(abs(m - 1.0) < UNIT_MODULUS_BAND for m in moduli):
        label = Classification.NON_HYPERBOLIC
    else:
        inside = sum(1 for m in moduli if m < 1.0)
        label = (
            Classification.STABLE
            if inside == 2
            else Classification.SOURCE
            if inside == 0
            else Classification.SADDLE
        )
    return StabilityReport(
        jacobian=jac,
        eigenvalues=eigs,
        moduli=moduli,
        jury=JuryReport.from_jacobian(jac),
        classification=label,
    )


def continuous_stability(params: ModelParams) -> Tuple[bool, bool]:
    """(interior rest point exists, it is locally asymptotically stable).

    Existence requires 1 + alpha*delta > delta; stability additionally
    requires delta*(2 + alpha*delta) < (1 + alpha*delta)^2 * (1 + beta*delta).
    """
    a, b, d = params.alpha, params.beta, params.delta
    q = 1.0 + a * d
    exists = q > d
    stable = exists and d * (2.0 + a * d) < q * q * (1.0 + b * d)
    return (exists, stable)


def _require_interior(params: ModelParams) -> Equilibrium:
    eq = interior_equilibrium(params)
    if eq is None:
        raise ExistenceError(
            "interior rest point requires 1 + alpha*delta > delta "
            f"(alpha={params.alpha}, delta={params.delta})"
        )
    return eq


def nsfd_jacobian_at_interior(params: ModelParams, h: float) -> Jacobian2:
    """Jacobian of the positivity-preserving map at the interior fixed point.

    With S = N* + alpha*P*, G = (1 + h + h*S)*S and H = (1 + beta*delta*h)*N*:

        a11 = 1 + N*h*(1 - 2N* - alpha*delta*N*)/G
        a12 = N*h*(alpha - alpha*N* - 1)/G
        a21 = beta*delta^2*h*N*/H
        a22 = 1 - beta*delta*h*N*/H
    """
    if not (h > 0.0):
        raise ValueError("h must be positive")
    a, b, d = params.alpha, params.beta, params.delta
    ns, ps = _require_interior(params).state
    mix = ns + a * ps
    g = (1.0 + h + h * mix) * mix
    hh = (1.0 + b * d * h) * ns
    return Jacobian2(
        a11=1.0 + ns * h * (1.0 - 2.0 * ns - a * d * ns) / g,
        a12=ns * h * (a - a * ns - 1.0) / g,
        a21=b * d * d * h * ns / hh,
        a22=1.0 - b * d * h * ns / hh,
    )


def euler_jacobian_at_interior(params: ModelParams, h: float) -> Jacobian2:
    """Jacobian of the Euler-forward map at the interior fixed point.

    With S = N* + alpha*P*:

        a11 = 1 - h*N*(1 - P*/S^2)      a12 = -h*(N*/S)^2
        a21 = h*beta*(P*/N*)^2          a22 = 1 - h*beta*P*/N*
    """
    if not (h > 0.0):
        raise ValueError("h must be positive")
    a, b = params.alpha, params.beta
    ns, ps = _require_interior(params).state
    mix = ns + a * ps
    return Jacobian2(
        a11=1.0 - h * ns * (1.0 - ps / (mix * mix)),
        a12=-h * (ns / mix) ** 2,
        a21=h * b * (ps / ns) ** 2,
        a22=1.0 - h * b * ps / ns,
    )


@dataclass(frozen=True)
class EulerThreshold:
    """Step-size bound below which the Euler-forward map keeps the interior
    fixed point linearly stable.

    g_euler = (1 + alpha*delta)^2 * (1 + beta*delta) - delta*(2 + alpha*delta)
    h_euler = beta*delta*(1 + alpha*delta - delta)*(1 + alpha*delta)

    The bound is the smaller of two branches: ``h_det_bound`` = g/h (where
    the Jacobian determinant reaches 1) and ``h_flip_bound`` =
    2*(1 + alpha*delta)^2/g (a sufficient bound for the remaining root
    condition); ``h_max = min(h_det_bound, h_flip_bound)``.
    """

    g_euler: float
    h_euler: float
    h_det_bound: float
    h_flip_bound: float
    h_max: float

    def to_dict(self) -> dict:
        return {
            "g_euler": self.g_euler,
            "h_euler": self.h_euler,
            "h_det_bound": self.h_det_bound,
            "h_flip_bound": self.h_flip_bound,
            "h_max": self.h_max,
        }


def euler_threshold(params: ModelParams) -> EulerThreshold:
    """Closed-form Euler step-size bound (requires a stable interior point)."""
    exists, stable = continuous_stability(params)
    if not exists:
        raise ConditionError("interior rest point does not exist for these parameters")
    if not stable:
        raise ConditionError(
            "threshold formula requires the interior rest point of the "
            "continuous system to be stable"
        )
    a, b, d = params.alpha, params.beta, params.delta
    q = 1.0 + a * d
    g = q * q * (1.0 + b * d) - d * (2.0 + a * d)
    h_small = b * d * (q - d) * q
    det_bound = g / h_small
    flip_bound = 2.0 * q * q / g
    return EulerThreshold(
        g_euler=g,
        h_euler=h_small,
        h_det_bound=det_bound,
        h_flip_bound=flip_bound,
        h_max=min(det_bound, flip_bound),
    )


def euler_critical_step(
    params: ModelParams, lo: float = 1e-6, hi: float = 1e3, iters: int = 80
) -> float:
    """Exact loss-of-stability step for the Euler-forward map, by bisection
    on max |eigenvalue| = 1 of the interior Jacobian.

    This is the true critical step; the closed-form ``euler_threshold`` is a
    sufficient (never larger) bound for it.
    """
    exists, stable = continuous_stability(params)
    if not (exists and stable):
        raise ConditionError("critical step requires a stable interior rest point")

    def excess(h: float) -> float:
        jac = euler_jacobian_at_interior(params, h)
        eigs = quadratic_eigen(jac.trace, jac.det)
        return max(abs(eigs[0]), abs(eigs[1])) - 1.0

    if excess(lo) >= 0.0 or excess(hi) <= 0.0:
        raise ConditionError("modulus crossing is not bracketed by [lo, hi]")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def logistic_euler_threshold(sp: ScalarModelParams) -> float:
    """Step bound 2/r for Euler on the logistic equation (the map derivative
    at the carrying capacity is 1 - h*r, which leaves [-1, 1] at h = 2/r)."""
    return 2.0 / sp.r


class Outcome(str, Enum):
    """Labels produced by the simulation stability oracle."""

    CONVERGED_TO_INTERIOR = "ConvergedToInterior"
    OSCILLATORY = "Oscillatory"
    DIVERGED = "Diverged"
    CONVERGED_ELSEWHERE = "ConvergedElsewhere"


@dataclass(frozen=True)
class OrbitProbe:
    """Raw material behind an oracle label: the post-transient window and,
    for diverged orbits, the failure index."""

    outcome: Outcome
    fail_index: Optional[int]
    window: np.ndarray  # shape (window, dim); empty when the orbit diverged


def probe_orbit(m: DiscreteMap, s0, transient: int, window: int, tol: float) -> OrbitProbe:
    """Iterate ``transient`` steps, then collect ``window`` further states
    and classify the tail.

    Divergence (NaN/overflow or a domain exit) anywhere yields ``Diverged``.
    Otherwise, if every window state is within ``tol`` of the map's target
    rest point the orbit ``ConvergedToInterior``; failing that, a
    peak-to-peak amplitude above ``tol`` in any component is ``Oscillatory``
    and the remainder is ``ConvergedElsewhere`` (settled, but not on the
    target point).
    """
    if transient < 0:
        raise ValueError("transient must be nonnegative")
    if window < 1:
        raise ValueError("window must be at least 1")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    scalar = m.scheme.is_scalar
    dim = m.dim
    cur = float(s0) if scalar else State(*s0)
    empty = np.empty((0, dim))

    def _advance(value):
        try:
            out = m.step(value)
        except DomainError:
            return None
        vals = (out,) if scalar else out
        if not all(math.isfinite(v) for v in vals):
            return None
        return out

    for k in range(transient):
        cur = _advance(cur)
        if cur is None:
            return OrbitProbe(Outcome.DIVERGED, k + 1, empty)
    win = np.empty((window, dim))
    win[0] = cur
    for j in range(1, window):
        cur = _advance(cur)
        if cur is None:
            return OrbitProbe(Outcome.DIVERGED, transient + j, empty)
        win[j] = cur

    target = m.fixed_point_target()
    if target is not None:
        dist = np.sqrt(((win - target) ** 2).sum(axis=1))
        if float(dist.max()) < tol:
            return OrbitProbe(Outcome.CONVERGED_TO_INTERIOR, None, win)
    amplitude = float((win.max(axis=0) - win.min(axis=0)).max())
    if amplitude > tol:
        return OrbitProbe(Outcome.OSCILLATORY, None, win)
    return OrbitProbe(Outcome.CONVERGED_ELSEWHERE, None, win)


def simulation_stability_oracle(
    m: DiscreteMap, s0, transient: int, window: int, tol: float
) -> Outcome:
    """Simulation-only stability label for an orbit (see ``probe_orbit``)."""
    if transient < 1:
        raise ValueError("transient must be at least 1")
    return probe_orbit(m, s0, transient, window, tol).outcome
