"""Independent numerical cross-checks for maps and Jacobians.

Everything here is deliberately derivation-free: finite differences for
Jacobians, residuals of the defining update rules for the
positivity-preserving map, and the direct quadratic formula for 2x2
eigenvalues.  Analytical results elsewhere in the package are validated
against these routines rather than against themselves.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Tuple

import numpy as np

from .models import ModelParams, State


def fd_jacobian(step: Callable[[State], State], s: State, eps: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a planar map at ``s``.

    ``eps`` is the relative perturbation; each coordinate is displaced by
    ``eps * max(1, |coordinate|)``.
    """
    if not (eps > 0.0):
        raise ValueError("eps must be positive")
    s = State(*s)
    jac = np.empty((2, 2))
    for j, base in enumerate(s):
        delta = eps * max(1.0, abs(base))
        lo = list(s)
        hi = list(s)
        lo[j] = base - delta
        hi[j] = base + delta
        span = hi[j] - lo[j]  # the realized perturbation, not 2*delta
        f_lo = step(State(*lo))
        f_hi = step(State(*hi))
        for i in range(2):
            jac[i, j] = (f_hi[i] - f_lo[i]) / span
    return jac


def implicit_residual(params: ModelParams, h: float, s: State, s_next: State) -> Tuple[float, float]:
    """Residuals of the update rules that define the positivity-preserving map.

    The map is constructed by writing the two balance laws

        (N' - N)/h = N - N*N' - N'*P/(N + alpha*P) + (N - N')*(N + alpha*P)
        (P' - P)/h = beta*delta*P - beta*P'*P/N

    and solving for (N', P').  Feeding a state and its image back in must
    therefore return residuals at rounding level; any disagreement flags a
    divergence between the closed-form step and its defining relations.
    """
    n0, p0 = State(*s)
    n1, p1 = State(*s_next)
    a, b, d = params.alpha, params.beta, params.delta
    mix = n0 + a * p0
    r1 = (n1 - n0) / h - (n0 - n0 * n1 - n1 * p0 / mix + (n0 - n1) * mix)
    r2 = (p1 - p0) / h - (b * d * p0 - b * p1 * p0 / n0)
    return (r1, r2)


def quadratic_eigen(trace: float, det: float) -> Tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from its trace and determinant.

    Roots of ``lambda^2 - trace*lambda + det``, larger modulus first.
    Conjugate pairs are returned with the positive-imaginary root first.
    """
    if not (math.isfinite(trace) and math.isfinite(det)):
        raise ValueError("trace and det must be finite")
    disc = trace * trace - 4.0 * det
    if disc >= 0.0:
        root = math.sqrt(disc)
        l1 = (trace + root) / 2.0
        l2 = (trace - root) / 2.0
        pair = (complex(l1), complex(l2))
    else:
        im = math.sqrt(-disc) / 2.0
        pair = (complex(trace / 2.0, im), complex(trace / 2.0, -im))
    if abs(pair[1]) > abs(pair[0]):
        pair = (pair[1], pair[0])
    return pair
