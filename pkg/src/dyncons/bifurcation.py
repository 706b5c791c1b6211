"""Step-size bifurcation sweeps.

A sweep runs one long orbit per step size on a uniform h grid — always a
fresh start from the same initial state, never warm-started from the
previous h — records a post-transient sample window per component, and
attaches the simulation-oracle label.  Rows are independent, so they can
be fanned out across worker processes; results are merged back in grid
order, which keeps the output bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .analysis import Outcome, probe_orbit
from .models import ModelParams, ScalarModelParams, State
from .schemes import DiscreteMap, Scheme

DEFAULT_TRANSIENT = 2000
DEFAULT_SAMPLES = 128
DEFAULT_ORACLE_TOL = 1e-6
DEFAULT_CLUSTER_TOL = 1e-5


@dataclass(frozen=True)
class SweepConfig:
    """Grid and orbit settings for one sweep.

    ``steps`` is the number of grid points (h_min and h_max inclusive);
    ``transient`` iterations are discarded before ``samples`` states are
    recorded; ``tol`` is handed to the stability oracle.
    """

    scheme: Scheme
    h_min: float
    h_max: float
    steps: int
    s0: tuple
    transient: int = DEFAULT_TRANSIENT
    samples: int = DEFAULT_SAMPLES
    tol: float = DEFAULT_ORACLE_TOL

    def __post_init__(self):
        if not (math.isfinite(self.h_min) and math.isfinite(self.h_max)):
            raise ValueError("h_min and h_max must be finite")
        if not (0.0 < self.h_min < self.h_max):
            raise ValueError("need 0 < h_min < h_max")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")
        if self.transient < 0:
            raise ValueError("transient must be nonnegative")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")

    def grid(self) -> np.ndarray:
        return np.linspace(self.h_min, self.h_max, self.steps)


@dataclass(frozen=True)
class SweepPoint:
    """Result for one step size: oracle label, failure index for diverged
    orbits, and the sampled window per component (empty when diverged)."""

    h: float
    outcome: Outcome
    fail_index: Optional[int]
    values: Dict[str, np.ndarray]


@dataclass
class BifurcationDataset:
    config: SweepConfig
    params: object
    points: List[SweepPoint] = field(default_factory=list)

    @property
    def components(self) -> Tuple[str, ...]:
        return ("x",) if self.config.scheme.is_scalar else ("N", "P")

    def rows(self) -> Iterator[Tuple[float, str, float, str]]:
        """Flat (h, component, value, label) records in grid order."""
        for pt in self.points:
            for comp in self.components:
                for value in pt.values.get(comp, ()):
                    yield (pt.h, comp, float(value), pt.outcome.value)

    def first_nonconverged(self) -> Optional[float]:
        """Smallest h whose label is not ConvergedToInterior."""
        for pt in self.points:
            if pt.outcome is not Outcome.CONVERGED_TO_INTERIOR:
                return pt.h
        return None


def _sweep_point(config: SweepConfig, params, h: float) -> SweepPoint:
    m = DiscreteMap(scheme=config.scheme, h=h, params=params)
    if config.scheme.is_scalar:
        raw = config.s0
        s0 = float(raw[0]) if isinstance(raw, (tuple, list)) else float(raw)
    else:
        s0 = State(*config.s0)
    probe = probe_orbit(m, s0, config.transient, config.samples, config.tol)
    comps = m.components
    if probe.outcome is Outcome.DIVERGED:
        values = {c: np.empty(0) for c in comps}
    else:
        values = {c: probe.window[:, i].copy() for i, c in enumerate(comps)}
    return SweepPoint(h=h, outcome=probe.outcome, fail_index=probe.fail_index, values=values)


def _sweep_point_star(args) -> SweepPoint:
    return _sweep_point(*args)


def sweep(config: SweepConfig, params, jobs: int = 1) -> BifurcationDataset:
    """Run the sweep, optionally across ``jobs`` worker processes.

    The merge preserves grid order, so the dataset (and any file written
    from it) is identical whatever ``jobs`` is.
    """
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    want = ScalarModelParams if config.scheme.is_scalar else ModelParams
    if not isinstance(params, want):
        raise ValueError(f"scheme {config.scheme.value!r} requires {want.__name__}")
    hs = [float(h) for h in config.grid()]
    if jobs == 1 or len(hs) < 4:
        points = [_sweep_point(config, params, h) for h in hs]
    else:
        tasks = [(config, params, h) for h in hs]
        chunk = max(1, len(hs) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_sweep_point_star, tasks, chunksize=chunk))
    return BifurcationDataset(config=config, params=params, points=points)


def cluster_count(values: np.ndarray, tol: float = DEFAULT_CLUSTER_TOL) -> int:
    """Number of single-linkage clusters of a 1-D sample set.

    Sorted values are split wherever the gap between neighbours exceeds
    ``tol``; for samples of a settled periodic orbit this counts the
    period (1 for a fixed point, 2 for a 2-cycle, ...).
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        return 0
    if not np.isfinite(arr).all():
        raise ValueError("values must be finite")
    srt = np.sort(arr)
    return 1 + int((np.diff(srt) > tol).sum())
