"""One-step discretizations and a continuous reference integrator.

Discrete maps
-------------
For the predator-prey system two fixed-step maps are provided.

The positivity-preserving map uses nonlocal products in the reaction terms;
solving the resulting update rules for the new densities gives the explicit
form

    N' = N * (1 + h + h*(N + alpha*P)) * (N + alpha*P)
         / [ (1 + 2*h*N + alpha*h*P) * (N + alpha*P) + h*P ]

    P' = P * N * (1 + beta*delta*h) / (N + beta*h*P)

Both numerator and denominator are positive whenever N > 0, P >= 0 and
h > 0, so positive states stay positive for every step size.

The Euler-forward map applies the plain explicit rule to both components
and preserves positivity only for sufficiently small h.

Scalar benchmarks (Euler-forward on logistic growth and exponential decay)
are included for threshold experiments.

Continuous reference
--------------------
``integrate_continuous`` / ``integrate_logistic`` integrate the underlying
ODEs with an embedded Dormand-Prince 5(4) pair and PI step-size control and
return the solution sampled on a uniform time grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, NonFiniteError, StepFailure
from .models import (
    ModelParams,
    ScalarModelParams,
    State,
    rhs_logistic,
    rhs_predprey,
)

ITERATE_STORAGE_CAP = 1_000_000


class Scheme(str, Enum):
    """Identifiers for the available one-step maps."""

    NSFD = "nsfd"
    EULER_PREDPREY = "euler"
    EULER_LOGISTIC = "euler-logistic"
    EULER_DECAY = "euler-decay"

    @property
    def is_scalar(self) -> bool:
        return self in (Scheme.EULER_LOGISTIC, Scheme.EULER_DECAY)


def _check_predprey_state(n: float, p: float) -> None:
    if not (n > 0.0):
        raise DomainError(f"prey density must be positive, got N={n!r}")
    if not (p >= 0.0):
        raise DomainError(f"predator density must be nonnegative, got P={p!r}")


def nsfd_step(params: ModelParams, h: float, s: State) -> State:
    """One step of the positivity-preserving map (see module docstring)."""
    n, p = s
    _check_predprey_state(n, p)
    a, b, d = params.alpha, params.beta, params.delta
    mix = n + a * p
    n_next = (n * (1.0 + h + h * mix) * mix) / ((1.0 + 2.0 * h * n + a * h * p) * mix + h * p)
    p_next = p * n * (1.0 + b * d * h) / (n + b * h * p)
    return State(n_next, p_next)


def euler_predprey_step(params: ModelParams, h: float, s: State) -> State:
    """One Euler-forward step: s' = s + h * f(s)."""
    n, p = s
    _check_predprey_state(n, p)
    dn, dp = rhs_predprey(params, s)
    return State(n + h * dn, p + h * dp)


def euler_logistic_step(sp: ScalarModelParams, h: float, x: float) -> float:
    """x' = x + h * r * x * (1 - x/k)."""
    return x + h * rhs_logistic(sp, x)


def euler_decay_step(sp: ScalarModelParams, h: float, x: float) -> float:
    """x' = (1 - lam*h) * x."""
    return (1.0 - sp.lam * h) * x


AnyParams = Union[ModelParams, ScalarModelParams]


@dataclass(frozen=True)
class DiscreteMap:
    """A one-step map: a scheme bound to a step size and parameter set."""

    scheme: Scheme
    h: float
    params: AnyParams

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise ValueError(f"step size h must be positive and finite, got {self.h!r}")
        want = ScalarModelParams if self.scheme.is_scalar else ModelParams
        if not isinstance(self.params, want):
            raise ValueError(
                f"scheme {self.scheme.value!r} requires {want.__name__}, "
                f"got {type(self.params).__name__}"
            )

    @property
    def dim(self) -> int:
        return 1 if self.scheme.is_scalar else 2

    @property
    def components(self) -> tuple[str, ...]:
        return ("x",) if self.scheme.is_scalar else ("N", "P")

    def step(self, value):
        """Apply the map once.  Takes/returns a float for scalar schemes,
        a (N, P) pair otherwise."""
        if self.scheme is Scheme.NSFD:
            return nsfd_step(self.params, self.h, State(*value))
        if self.scheme is Scheme.EULER_PREDPREY:
            return euler_predprey_step(self.params, self.h, State(*value))
        if self.scheme is Scheme.EULER_LOGISTIC:
            return euler_logistic_step(self.params, self.h, float(value))
        return euler_decay_step(self.params, self.h, float(value))

    def fixed_point_target(self):
        """The attracting rest point the orbit is expected to settle on,
        as an array (None when the interior rest point does not exist)."""
        from .models import interior_equilibrium  # local import avoids cycle churn

        if self.scheme is Scheme.EULER_LOGISTIC:
            return np.array([self.params.k])
        if self.scheme is Scheme.EULER_DECAY:
            return np.array([0.0])
        eq = interior_equilibrium(self.params)
        return None if eq is None else np.array([eq.state.n, eq.state.p])


@dataclass
class Trajectory:
    """States on a uniform time grid t_k = t0 + k*h for k = k0, k0+1, ...

    ``states`` has shape (m, 2) for planar systems and (m,) for scalar ones.
    ``k0`` is the index of the first stored state (nonzero when an iteration
    kept only the tail of a long run).
    """

    t0: float
    h: float
    states: np.ndarray
    k0: int = 0

    @property
    def times(self) -> np.ndarray:
        return self.t0 + (self.k0 + np.arange(len(self.states))) * self.h

    @property
    def final(self):
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


def iterate(m: DiscreteMap, s0, steps: int, cap: int = ITERATE_STORAGE_CAP) -> Trajectory:
    """Iterate a map ``steps`` times from ``s0``.

    Keeps at most ``cap`` most recent states (the returned trajectory's
    ``k0`` records how many leading states were dropped).  Raises
    :class:`NonFiniteError` / :class:`DomainError` carrying the failure
    index and the partial trajectory when the orbit leaves the admissible
    domain or overflows.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    scalar = m.scheme.is_scalar
    cur = float(s0) if scalar else State(*s0)
    kept: list = [cur]
    k0 = 0

    def _pack() -> np.ndarray:
        return np.asarray(kept, dtype=float)

    for k in range(steps):
        try:
            cur = m.step(cur)
        except DomainError as exc:
            raise DomainError(str(exc), index=k + 1, partial=_pack()) from None
        bad = not math.isfinite(cur) if scalar else not (
            math.isfinite(cur.n) and math.isfinite(cur.p)
        )
        if bad:
            raise NonFiniteError(
                f"non-finite state at iteration {k + 1}", index=k + 1, partial=_pack()
            )
        kept.append(cur)
        if len(kept) > cap:
            kept.pop(0)
            k0 += 1
    return Trajectory(t0=0.0, h=m.h, states=_pack(), k0=k0)


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) with PI step-size control (reference solutions)
# ---------------------------------------------------------------------------

_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# Difference between the 5th- and embedded 4th-order weights.
_DP_E = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_MIN_STEP = 1e-12


def _hinit(f, y, f0, rtol, atol, span):
    """Starting step size: standard two-derivative estimate."""
    sk = [atol + rtol * abs(v) for v in y]
    dnf = sum((g / s) ** 2 for g, s in zip(f0, sk))
    dny = sum((v / s) ** 2 for v, s in zip(y, sk))
    if dnf <= 1e-10 or dny <= 1e-10:
        h = 1e-6
    else:
        h = math.sqrt(dny / dnf) * 0.01
    h = min(h, span)
    try:
        y1 = [v + h * g for v, g in zip(y, f0)]
        f1 = f(y1)
        der2 = math.sqrt(sum(((g1 - g0) / s) ** 2 for g1, g0, s in zip(f1, f0, sk))) / h
    except DomainError:
        der2 = 0.0
    der12 = max(der2, math.sqrt(dnf))
    if der12 <= 1e-15:
        h1 = max(1e-6, h * 1e-3)
    else:
        h1 = (0.01 / der12) ** 0.2
    return min(100.0 * h, h1, span)


def _dopri45(f, y0: Sequence[float], sample_times: np.ndarray, rtol: float, atol: float) -> np.ndarray:
    """Integrate dy/dt = f(y) from t=0, returning y at each sample time."""
    dim = len(y0)
    y = [float(v) for v in y0]
    t = 0.0
    out = np.empty((len(sample_times), dim))
    out[0] = y
    k1 = f(y)
    span = float(sample_times[-1])
    h = _hinit(f, y, k1, rtol, atol, span)
    facold = 1e-4
    safe, beta = 0.9, 0.04
    expo1 = 0.2 - beta * 0.75
    facc1, facc2 = 1.0 / 0.2, 1.0 / 10.0  # step-ratio bounds [0.2, 10]

    for idx in range(1, len(sample_times)):
        target = float(sample_times[idx])
        while target - t > 1e-12 * max(1.0, abs(target)):
            h = min(h, target - t)
            if h < _MIN_STEP:
                raise StepFailure(f"step size underflow ({h:.3e}) at t={t:.6g}")
            ks = [k1]
            y_new = None
            try:
                for stage in range(1, 7):
                    arg = [
                        y[i] + h * sum(a * ks[j][i] for j, a in enumerate(_DP_A[stage]))
                        for i in range(dim)
                    ]
                    ks.append(f(arg))
                y_new = [
                    y[i] + h * sum(a * ks[j][i] for j, a in enumerate(_DP_A[6]))
                    for i in range(dim)
                ]
                finite = all(math.isfinite(v) for v in y_new)
            except DomainError:
                finite = False
            if not finite:
                h *= 0.5
                continue
            # Scaled RMS error of the embedded difference.
            err = 0.0
            for i in range(dim):
                e_i = h * sum(e * ks[j][i] for j, e in enumerate(_DP_E) if e != 0.0)
                sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
                err += (e_i / sc) ** 2
            err = math.sqrt(err / dim)
            fac11 = err**expo1
            if err <= 1.0:
                t += h
                y = y_new
                k1 = ks[6]  # first-same-as-last
                facold = max(err, 1e-4)
                fac = max(facc2, min(facc1, (fac11 / facold**beta) / safe))
                h = h / fac
            else:
                h = h / min(facc1, fac11 / safe)
        out[idx] = y
    return out


def _check_tols(rel_tol: float, abs_tol: float) -> None:
    for name, tol in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not (0.0 < tol <= 1e-2):
            raise ValueError(f"{name} must lie in (0, 1e-2], got {tol!r}")


def _sample_grid(t_end: float, samples: Optional[int]) -> np.ndarray:
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise ValueError(f"t_end must be positive and finite, got {t_end!r}")
    if samples is None:
        samples = 201
    if samples < 2:
        raise ValueError("samples must be at least 2")
    return np.linspace(0.0, t_end, samples)


def integrate_continuous(
    params: ModelParams,
    s0: State,
    t_end: float,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
    samples: Optional[int] = None,
) -> Trajectory:
    """Reference solution of the predator-prey ODE on a uniform sample grid."""
    _check_tols(rel_tol, abs_tol)
    grid = _sample_grid(t_end, samples)
    s0 = State(*s0)
    _check_predprey_state(s0.n, s0.p)

    def f(y):
        d = rhs_predprey(params, State(y[0], y[1]))
        return [d.n, d.p]

    states = _dopri45(f, [s0.n, s0.p], grid, rel_tol, abs_tol)
    return Trajectory(t0=0.0, h=float(grid[1] - grid[0]), states=states)


def integrate_logistic(
    sp: ScalarModelParams,
    x0: float,
    t_end: float,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
    samples: Optional[int] = None,
) -> Trajectory:
    """Reference solution of the logistic ODE on a uniform sample grid."""
    _check_tols(rel_tol, abs_tol)
    grid = _sample_grid(t_end, samples)

    def f(y):
        return [rhs_logistic(sp, y[0])]

    states = _dopri45(f, [float(x0)], grid, rel_tol, abs_tol)
    return Trajectory(t0=0.0, h=float(grid[1] - grid[0]), states=states[:, 0])
