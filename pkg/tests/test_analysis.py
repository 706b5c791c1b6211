"""Stability analysis: Jacobians, classification, thresholds, oracle labels."""

import math

import numpy as np
import pytest

from dyncons import (
    Classification,
    ConditionError,
    DiscreteMap,
    ExistenceError,
    Jacobian2,
    JuryReport,
    ModelParams,
    Outcome,
    ScalarModelParams,
    Scheme,
    State,
    classify,
    continuous_stability,
    euler_critical_step,
    euler_jacobian_at_interior,
    euler_logistic_step,
    euler_threshold,
    fd_jacobian,
    interior_equilibrium,
    logistic_euler_threshold,
    nsfd_jacobian_at_interior,
    nsfd_step,
    euler_predprey_step,
    probe_orbit,
    simulation_stability_oracle,
)
from helpers import rel_err, sample_stable_params

DEMO = ModelParams(alpha=0.7, beta=0.9, delta=0.6)

# alpha and delta such that the stability inequality has a boundary in beta:
# beta* = [delta*(2 + alpha*delta)/(1 + alpha*delta)^2 - 1]/delta.
BOUNDARY_ALPHA = 0.42 / 1.3
BOUNDARY_DELTA = 1.3


def _boundary_beta() -> float:
    a, d = BOUNDARY_ALPHA, BOUNDARY_DELTA
    q = 1.0 + a * d
    return (d * (2.0 + a * d) / (q * q) - 1.0) / d


def test_continuous_stability_reference():
    assert continuous_stability(DEMO) == (True, True)
    # No interior rest point when 1 + alpha*delta <= delta.
    assert continuous_stability(ModelParams(0.5, 1.0, 2.0)) == (False, False)
    assert continuous_stability(ModelParams(0.1, 1.0, 2.0)) == (False, False)


def test_continuous_stability_boundary_in_beta():
    beta_star = _boundary_beta()
    assert beta_star > 0.0
    below = ModelParams(BOUNDARY_ALPHA, beta_star * (1.0 - 1e-6), BOUNDARY_DELTA)
    above = ModelParams(BOUNDARY_ALPHA, beta_star * (1.0 + 1e-6), BOUNDARY_DELTA)
    assert continuous_stability(below) == (True, False)
    assert continuous_stability(above) == (True, True)


def test_jacobian2_validation():
    with pytest.raises(ValueError):
        Jacobian2(float("nan"), 0.0, 0.0, 1.0)
    jac = Jacobian2(1.0, 2.0, 3.0, 4.0)
    assert jac.trace == 5.0 and jac.det == -2.0


def test_nsfd_jacobian_matches_fd_oracle():
    rng = np.random.default_rng(41)
    cases = [DEMO] + [sample_stable_params(rng) for _ in range(20)]
    for params in cases:
        eq = interior_equilibrium(params).state
        for h in (0.1, 2.0, 10.0):
            want = fd_jacobian(lambda s: nsfd_step(params, h, s), eq)
            got = nsfd_jacobian_at_interior(params, h)
            assert rel_err(got.as_array(), want) < 1e-6


def test_euler_jacobian_matches_fd_oracle():
    rng = np.random.default_rng(43)
    cases = [DEMO] + [sample_stable_params(rng) for _ in range(20)]
    for params in cases:
        eq = interior_equilibrium(params).state
        for h in (0.1, 2.0, 10.0):
            want = fd_jacobian(lambda s: euler_predprey_step(params, h, s), eq)
            got = euler_jacobian_at_interior(params, h)
            assert rel_err(got.as_array(), want) < 1e-6


def test_jacobians_approach_identity_for_small_h():
    for fn in (nsfd_jacobian_at_interior, euler_jacobian_at_interior):
        jac = fn(DEMO, 1e-12)
        assert rel_err(jac.as_array(), np.eye(2)) < 1e-10


def test_jacobian_existence_error():
    bad = ModelParams(0.5, 1.0, 2.5)
    with pytest.raises(ExistenceError):
        nsfd_jacobian_at_interior(bad, 0.1)
    with pytest.raises(ExistenceError):
        euler_jacobian_at_interior(bad, 0.1)


def test_euler_flip_margin_identity():
    # 1 - tr + det of the Euler interior Jacobian equals h^2*beta*P* exactly.
    rng = np.random.default_rng(47)
    cases = [DEMO] + [sample_stable_params(rng) for _ in range(20)]
    for params in cases:
        ps = interior_equilibrium(params).state.p
        for h in (0.1, 2.0, 10.0):
            jac = euler_jacobian_at_interior(params, h)
            got = 1.0 - jac.trace + jac.det
            want = h * h * params.beta * ps
            assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_nsfd_flip_margin_identity():
    # Same margin for the positivity-preserving map:
    # beta*delta*h^2*N*^2*(1 + alpha*delta - delta) / (G*H) with
    # G = (1 + h + h*S)*S and H = (1 + beta*delta*h)*N*.
    rng = np.random.default_rng(53)
    cases = [DEMO] + [sample_stable_params(rng) for _ in range(20)]
    for params in cases:
        a, b, d = params.alpha, params.beta, params.delta
        ns, ps = interior_equilibrium(params).state
        mix = ns + a * ps
        for h in (0.1, 2.0, 10.0):
            jac = nsfd_jacobian_at_interior(params, h)
            got = 1.0 - jac.trace + jac.det
            g = (1.0 + h + h * mix) * mix
            hh = (1.0 + b * d * h) * ns
            want = b * d * h * h * ns * ns * (1.0 + a * d - d) / (g * hh)
            assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_classify_reference_matrices():
    rep = classify(Jacobian2(1.0, 0.0, 0.0, 1.0))
    assert rep.classification is Classification.NON_HYPERBOLIC
    rep = classify(Jacobian2(0.5, 0.0, 0.0, 0.5))
    assert rep.classification is Classification.STABLE
    assert rep.moduli == (0.5, 0.5)
    rep = classify(Jacobian2(2.0, 0.0, 0.0, 0.5))
    assert rep.classification is Classification.SADDLE
    rep = classify(Jacobian2(1.5, 0.0, 0.0, 2.0))
    assert rep.classification is Classification.SOURCE
    # rotation by 90 degrees: both moduli exactly 1
    rep = classify(Jacobian2(0.0, -1.0, 1.0, 0.0))
    assert rep.classification is Classification.NON_HYPERBOLIC


def test_classify_agrees_with_jury_conditions():
    # Stable <=> all three root-location conditions hold (outside the
    # non-hyperbolicity band).
    rng = np.random.default_rng(59)
    checked = 0
    for _ in range(1000):
        jac = Jacobian2(*rng.uniform(-2.0, 2.0, size=4))
        rep = classify(jac)
        if rep.classification is Classification.NON_HYPERBOLIC:
            continue
        jury = rep.jury
        all_hold = jury.cond_det and jury.cond_flip and jury.cond_fold
        assert all_hold == (rep.classification is Classification.STABLE)
        checked += 1
    assert checked > 900


def test_jury_report_fields():
    jac = Jacobian2(0.9, -0.05, 0.03, 0.95)
    jury = JuryReport.from_jacobian(jac)
    assert jury.trace == jac.trace and jury.det == jac.det
    assert jury.cond_det == (1.0 - jac.det > 0.0)
    assert jury.cond_flip == (1.0 - jac.trace + jac.det > 0.0)
    assert jury.cond_fold == (1.0 + jac.trace + jac.det > 0.0)


def test_euler_threshold_reference_values():
    thr = euler_threshold(DEMO)
    assert round(thr.g_euler, 4) == 1.6533
    assert round(thr.h_det_bound, 4) == 2.6293
    assert round(thr.h_flip_bound, 4) == 2.4393
    assert thr.h_max == min(thr.h_det_bound, thr.h_flip_bound)
    assert round(thr.h_max, 4) == 2.4393


def test_euler_threshold_small_beta_binds_flip_branch():
    thr = euler_threshold(ModelParams(0.7, 1e-3, 0.6))
    assert thr.h_det_bound > thr.h_flip_bound
    assert thr.h_max == thr.h_flip_bound


def test_euler_threshold_condition_errors():
    with pytest.raises(ConditionError):
        euler_threshold(ModelParams(0.5, 1.0, 2.5))  # no interior point
    beta_star = _boundary_beta()
    unstable = ModelParams(BOUNDARY_ALPHA, beta_star * 0.9, BOUNDARY_DELTA)
    with pytest.raises(ConditionError):
        euler_threshold(unstable)
    with pytest.raises(ConditionError):
        euler_critical_step(unstable)


def test_classification_stable_below_closed_bound():
    thr = euler_threshold(DEMO)
    rep = classify(euler_jacobian_at_interior(DEMO, thr.h_max - 1e-3))
    assert rep.classification is Classification.STABLE
    rep = classify(euler_jacobian_at_interior(DEMO, 0.1))
    assert rep.classification is Classification.STABLE
    assert max(rep.moduli) < 1.0


def test_euler_critical_step_is_modulus_crossing():
    h_c = euler_critical_step(DEMO)
    jac = euler_jacobian_at_interior(DEMO, h_c)
    eigs = classify(jac).moduli
    assert abs(max(eigs) - 1.0) < 1e-9
    below = classify(euler_jacobian_at_interior(DEMO, h_c * (1.0 - 1e-3)))
    above = classify(euler_jacobian_at_interior(DEMO, h_c * (1.0 + 1e-3)))
    assert below.classification is Classification.STABLE
    assert above.classification is not Classification.STABLE


def test_euler_critical_step_never_below_closed_bound():
    # The closed-form bound is sufficient, so the true crossing cannot be
    # smaller.
    rng = np.random.default_rng(61)
    for _ in range(100):
        params = sample_stable_params(rng)
        thr = euler_threshold(params)
        h_c = euler_critical_step(params)
        assert h_c >= thr.h_max - 1e-6


def test_nsfd_elementary_stability():
    # 100 random continuously-stable parameter sets x 5 step sizes.
    rng = np.random.default_rng(67)
    for _ in range(100):
        params = sample_stable_params(rng)
        for h in (0.01, 0.1, 1.0, 10.0, 100.0):
            rep = classify(nsfd_jacobian_at_interior(params, h))
            assert rep.classification is Classification.STABLE


def test_logistic_euler_threshold():
    assert round(logistic_euler_threshold(ScalarModelParams(r=3.0)), 4) == 0.6667
    assert logistic_euler_threshold(ScalarModelParams(r=2.0)) == 1.0
    assert logistic_euler_threshold(ScalarModelParams(r=4.0)) == 0.5
    # Map derivative at the carrying capacity is 1 - h*r: at the threshold
    # it reaches -1 (checked by finite differences on the scalar map).
    sp = ScalarModelParams(r=3.0, k=50.0)
    h = logistic_euler_threshold(sp)
    d = (euler_logistic_step(sp, h, 50.0 + 1e-6) - euler_logistic_step(sp, h, 50.0 - 1e-6)) / 2e-6
    assert d == pytest.approx(-1.0, abs=1e-6)


def test_oracle_labels_demo_cases():
    nsfd = DiscreteMap(Scheme.NSFD, 2.67, DEMO)
    assert simulation_stability_oracle(nsfd, State(0.2, 0.2), 2000, 128, 1e-6) is (
        Outcome.CONVERGED_TO_INTERIOR
    )
    euler_big = DiscreteMap(Scheme.EULER_PREDPREY, 2.67, DEMO)
    assert simulation_stability_oracle(euler_big, State(0.2, 0.2), 2000, 128, 1e-6) is (
        Outcome.OSCILLATORY
    )
    euler_ok = DiscreteMap(Scheme.EULER_PREDPREY, 2.0, DEMO)
    assert simulation_stability_oracle(euler_ok, State(0.2, 0.2), 2000, 128, 1e-6) is (
        Outcome.CONVERGED_TO_INTERIOR
    )


def test_oracle_label_converged_elsewhere():
    # Starting with no predators, orbits settle on the predator-free point
    # (1, 0) rather than the interior one.
    for scheme in (Scheme.NSFD, Scheme.EULER_PREDPREY):
        m = DiscreteMap(scheme, 0.5, DEMO)
        assert simulation_stability_oracle(m, State(0.2, 0.0), 2000, 64, 1e-6) is (
            Outcome.CONVERGED_ELSEWHERE
        )


def test_oracle_label_diverged():
    m = DiscreteMap(Scheme.EULER_DECAY, 4.0, ScalarModelParams(lam=1.0))
    probe = probe_orbit(m, 1.0, 2000, 64, 1e-6)
    assert probe.outcome is Outcome.DIVERGED
    assert probe.fail_index is not None and probe.window.size == 0
    m = DiscreteMap(Scheme.EULER_PREDPREY, 3.0, DEMO)
    probe = probe_orbit(m, State(0.2, 0.2), 2000, 64, 1e-6)
    assert probe.outcome is Outcome.DIVERGED
    assert probe.fail_index == 2


def test_oracle_label_decay_converges_to_origin():
    m = DiscreteMap(Scheme.EULER_DECAY, 0.5, ScalarModelParams(lam=1.0))
    assert simulation_stability_oracle(m, 3.0, 100, 16, 1e-6) is Outcome.CONVERGED_TO_INTERIOR


def test_oracle_window_shape_and_validation():
    m = DiscreteMap(Scheme.NSFD, 0.1, DEMO)
    probe = probe_orbit(m, State(0.2, 0.2), 50, 16, 1e-6)
    assert probe.window.shape == (16, 2)
    with pytest.raises(ValueError):
        probe_orbit(m, State(0.2, 0.2), -1, 16, 1e-6)
    with pytest.raises(ValueError):
        probe_orbit(m, State(0.2, 0.2), 10, 0, 1e-6)
    with pytest.raises(ValueError):
        simulation_stability_oracle(m, State(0.2, 0.2), 0, 16, 1e-6)
    with pytest.raises(ValueError):
        probe_orbit(m, State(0.2, 0.2), 10, 16, 0.0)
