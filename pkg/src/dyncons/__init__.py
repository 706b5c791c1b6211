"""dyncons: dynamic-consistency toolkit for discretized predator-prey models.

The package provides two fixed-step discretizations of a ratio-dependent
predator-prey system (a positivity-preserving map and Euler-forward),
closed-form stability analysis of their fixed points, simulation-based
stability labelling, step-size bifurcation sweeps, and an adaptive
continuous reference integrator — plus a CLI (``dyncons``) that writes
CSV/JSON reports, gnuplot scripts and matplotlib figures.
"""

__version__ = "0.1.0"

from .errors import (
    ConditionError,
    DomainError,
    DynconsError,
    ExistenceError,
    NonFiniteError,
    StepFailure,
)
from .models import (
    Equilibrium,
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
from .schemes import (
    DiscreteMap,
    Scheme,
    Trajectory,
    euler_decay_step,
    euler_logistic_step,
    euler_predprey_step,
    integrate_continuous,
    integrate_logistic,
    iterate,
    nsfd_step,
)
from .analysis import (
    Classification,
    EulerThreshold,
    Jacobian2,
    JuryReport,
    Outcome,
    StabilityReport,
    classify,
    continuous_stability,
    euler_critical_step,
    euler_jacobian_at_interior,
    euler_threshold,
    logistic_euler_threshold,
    nsfd_jacobian_at_interior,
    probe_orbit,
    simulation_stability_oracle,
)
from .bifurcation import BifurcationDataset, SweepConfig, SweepPoint, cluster_count, sweep
from .oracle import fd_jacobian, implicit_residual, quadratic_eigen

__all__ = [
    "__version__",
    "BifurcationDataset",
    "Classification",
    "ConditionError",
    "DiscreteMap",
    "DomainError",
    "DynconsError",
    "Equilibrium",
    "EquilibriumKind",
    "EulerThreshold",
    "ExistenceError",
    "Jacobian2",
    "JuryReport",
    "ModelParams",
    "NonFiniteError",
    "Outcome",
    "ScalarModelParams",
    "Scheme",
    "StabilityReport",
    "State",
    "StepFailure",
    "SweepConfig",
    "SweepPoint",
    "Trajectory",
    "classify",
    "cluster_count",
    "continuous_stability",
    "euler_critical_step",
    "euler_decay_step",
    "euler_jacobian_at_interior",
    "euler_logistic_step",
    "euler_predprey_step",
    "euler_threshold",
    "fd_jacobian",
    "implicit_residual",
    "integrate_continuous",
    "integrate_logistic",
    "interior_equilibrium",
    "iterate",
    "logistic_euler_threshold",
    "nsfd_jacobian_at_interior",
    "nsfd_step",
    "predator_free_equilibrium",
    "probe_orbit",
    "quadratic_eigen",
    "rhs_decay",
    "rhs_logistic",
    "rhs_predprey",
    "simulation_stability_oracle",
    "sweep",
]
