"""Shared test utilities.

``general_nsfd_jacobian`` is a quotient-rule Jacobian of the
positivity-preserving map at an *arbitrary* admissible state.  It lives in
the tests on purpose: the package only ships fixed-point Jacobians, and the
finite-difference oracle needs an independent general-point formula to be
checked against.
"""

from __future__ import annotations

import numpy as np

from dyncons import ModelParams


def general_nsfd_jacobian(params: ModelParams, h: float, s) -> np.ndarray:
    a, b, d = params.alpha, params.beta, params.delta
    n, p = s
    mix = n + a * p
    one = 1.0 + h + h * mix
    lin = 1.0 + 2.0 * h * n + a * h * p
    u = n * one * mix
    v = lin * mix + h * p
    du_dn = one * mix + n * (h * mix + one)
    du_dp = a * n * (h * mix + one)
    dv_dn = 2.0 * h * mix + lin
    dv_dp = a * (h * mix + lin) + h
    j11 = (du_dn * v - u * dv_dn) / v**2
    j12 = (du_dp * v - u * dv_dp) / v**2
    w = p * n * (1.0 + b * d * h)
    z = n + b * h * p
    j21 = (p * (1.0 + b * d * h) * z - w) / z**2
    j22 = (n * (1.0 + b * d * h) * z - w * b * h) / z**2
    return np.array([[j11, j12], [j21, j22]])


def sample_existing_params(rng, margin: float = 1e-2) -> ModelParams:
    """Random parameters whose interior rest point exists (with a margin
    so nearby float arithmetic cannot flip the inequality)."""
    while True:
        a = rng.uniform(0.05, 3.0)
        b = rng.uniform(0.05, 3.0)
        d = rng.uniform(0.05, 3.0)
        if 1.0 + a * d > d * (1.0 + margin):
            return ModelParams(a, b, d)


def sample_stable_params(rng, margin: float = 1e-2) -> ModelParams:
    """Random parameters with an (interior, continuously stable) rest point."""
    while True:
        p = sample_existing_params(rng, margin)
        a, b, d = p.alpha, p.beta, p.delta
        q = 1.0 + a * d
        if d * (2.0 + a * d) < q * q * (1.0 + b * d) * (1.0 - margin):
            return p


def rel_err(got, want) -> float:
    """Max entrywise |got-want| / max(1, |want|)."""
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want))))
