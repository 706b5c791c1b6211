"""Vector fields, parameter validation, and closed-form equilibria."""

import math

import numpy as np
import pytest

from dyncons import (
    DomainError,
    EquilibriumKind,
    ModelParams,
    ScalarModelParams,
    State,
    interior_equilibrium,
    predator_free_equilibrium,
    rhs_decay,
    rhs_logistic,
    rhs_predprey,
)
from helpers import sample_existing_params

DEMO = ModelParams(alpha=0.7, beta=0.9, delta=0.6)


def test_params_validation():
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            ModelParams(alpha=bad, beta=0.9, delta=0.6)
        with pytest.raises(ValueError):
            ModelParams(alpha=0.7, beta=bad, delta=0.6)
        with pytest.raises(ValueError):
            ModelParams(alpha=0.7, beta=0.9, delta=bad)
        with pytest.raises(ValueError):
            ScalarModelParams(r=bad)


def test_rhs_predprey_frozen_values():
    # Exact rational arithmetic gives (18/425, -9/125) at (0.2, 0.2).
    dn, dp = rhs_predprey(DEMO, State(0.2, 0.2))
    assert math.isclose(dn, 18.0 / 425.0, rel_tol=5e-15)
    assert math.isclose(dp, -9.0 / 125.0, rel_tol=5e-15)


def test_rhs_predprey_rest_points():
    dn, dp = rhs_predprey(DEMO, State(1.0, 0.0))
    assert dn == 0.0 and dp == 0.0
    eq = interior_equilibrium(DEMO)
    dn, dp = rhs_predprey(DEMO, eq.state)
    assert abs(dn) < 1e-15 and abs(dp) < 1e-15


def test_rhs_domain_errors():
    with pytest.raises(DomainError):
        rhs_predprey(DEMO, State(0.0, 0.2))
    with pytest.raises(DomainError):
        rhs_predprey(DEMO, State(-0.5, 0.2))
    # N + alpha*P = 0 is reachable only with a negative predator density.
    with pytest.raises(DomainError):
        rhs_predprey(ModelParams(0.5, 1.0, 1.0), State(1.0, -2.0))


def test_interior_equilibrium_reference_values():
    eq = interior_equilibrium(DEMO)
    assert eq.kind is EquilibriumKind.INTERIOR
    assert round(eq.state.n, 4) == 0.5775
    assert round(eq.state.p, 4) == 0.3465
    # Closed form: N* = (1 + a*d - d)/(1 + a*d), P* = d*N*.
    assert math.isclose(eq.state.n, 0.82 / 1.42, rel_tol=1e-14)
    assert math.isclose(eq.state.p, 0.6 * 0.82 / 1.42, rel_tol=1e-14)

    eq = interior_equilibrium(ModelParams(1.0, 1.0, 3.0))
    assert math.isclose(eq.state.n, 0.25, rel_tol=1e-15)
    assert math.isclose(eq.state.p, 0.75, rel_tol=1e-15)


def test_interior_equilibrium_is_rest_point_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        params = sample_existing_params(rng)
        eq = interior_equilibrium(params)
        assert eq is not None
        dn, dp = rhs_predprey(params, eq.state)
        assert abs(dn) < 1e-12 and abs(dp) < 1e-12
        assert eq.state.n > 0.0 and eq.state.p > 0.0


def test_interior_equilibrium_absent_when_ratio_too_large():
    # 1 + alpha*delta = delta exactly on the boundary, and below it.
    assert interior_equilibrium(ModelParams(0.5, 1.0, 2.0)) is None
    assert interior_equilibrium(ModelParams(0.5, 1.0, 2.5)) is None
    assert interior_equilibrium(ModelParams(0.5, 1.0, 1.9)) is not None


def test_interior_equilibrium_independent_of_beta():
    states = {
        interior_equilibrium(ModelParams(0.7, b, 0.6)).state for b in (0.1, 1.0, 10.0)
    }
    assert len(states) == 1


def test_predator_free_equilibrium():
    eq = predator_free_equilibrium()
    assert eq.state == State(1.0, 0.0)
    assert eq.kind is EquilibriumKind.PREDATOR_FREE


def test_scalar_rhs():
    sp = ScalarModelParams(r=3.0, k=50.0, lam=2.0)
    assert rhs_logistic(sp, 50.0) == 0.0
    assert math.isclose(rhs_logistic(sp, 10.0), 3.0 * 10.0 * 0.8, rel_tol=1e-15)
    assert rhs_decay(sp, 4.0) == -8.0
    assert rhs_decay(sp, 0.0) == 0.0
