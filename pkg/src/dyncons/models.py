"""Continuous-time population models and their closed-form equilibria.

Two scalar benchmarks (logistic growth, exponential decay) and the planar
predator-prey system with a ratio-dependent functional response:

    dN/dt = N (1 - N) - N P / (N + alpha * P)
    dP/dt = beta * P * (delta - P / N)

N is the prey density, P the predator density; all three parameters are
positive.  The system has a predator-free rest point at (1, 0) and, when
``1 + alpha*delta > delta``, a unique interior rest point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .errors import DomainError


class State(NamedTuple):
    """A prey/predator density pair (also reused for derivative pairs)."""

    n: float
    p: float


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the predator-prey system.

    alpha : predator interference in the functional response
    beta  : intrinsic growth rate of the predator
    delta : predator-to-prey carrying ratio
    """

    alpha: float
    beta: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "delta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class ScalarModelParams:
    """Parameters of the scalar benchmarks.

    r, k : growth rate and carrying capacity of the logistic equation
    lam  : rate constant of exponential decay dx/dt = -lam * x
    """

    r: float = 1.0
    k: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        for name in ("r", "k", "lam"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


class EquilibriumKind(str, Enum):
    PREDATOR_FREE = "PredatorFree"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class Equilibrium:
    state: State
    kind: EquilibriumKind


def rhs_predprey(params: ModelParams, s: State) -> State:
    """Vector field of the predator-prey system, returned as (dN/dt, dP/dt).

    Requires N > 0 (the predator equation divides by N) and N + alpha*P != 0.
    """
    n, p = s
    if not (n > 0.0):
        raise DomainError(f"prey density must be positive, got N={n!r}")
    mix = n + params.alpha * p
    if mix == 0.0:
        raise DomainError("N + alpha*P must be nonzero")
    dn = n * (1.0 - n) - n * p / mix
    dp = params.beta * p * (params.delta - p / n)
    return State(dn, dp)


def rhs_logistic(sp: ScalarModelParams, x: float) -> float:
    """dx/dt = r * x * (1 - x/k)."""
    return sp.r * x * (1.0 - x / sp.k)


def rhs_decay(sp: ScalarModelParams, x: float) -> float:
    """dx/dt = -lam * x."""
    return -sp.lam * x


def predator_free_equilibrium() -> Equilibrium:
    """The rest point (1, 0): prey at carrying capacity, no predators."""
    return Equilibrium(State(1.0, 0.0), EquilibriumKind.PREDATOR_FREE)


def interior_equilibrium(params: ModelParams) -> Optional[Equilibrium]:
    """Closed-form interior rest point, or None when it does not exist.

    N* = (1 + alpha*delta - delta) / (1 + alpha*delta),  P* = delta * N*.

    The point is admissible (both components positive) precisely when
    1 + alpha*delta > delta.
    """
    a, d = params.alpha, params.delta
    denom = 1.0 + a * d
    if not (denom > d):
        return None
    n_star = (denom - d) / denom
    return Equilibrium(State(n_star, d * n_star), EquilibriumKind.INTERIOR)
