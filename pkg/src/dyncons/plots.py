"""Matplotlib figure rendering (Agg backend, file output only)."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bifurcation import BifurcationDataset
from .schemes import Trajectory


def save_timeseries_figure(path, traj: Trajectory, components: Sequence[str], title: str = "") -> Path:
    """One line per component against time."""
    path = Path(path)
    states = np.asarray(traj.states, dtype=float)
    if states.ndim == 1:
        states = states[:, None]
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for i, comp in enumerate(components):
        ax.plot(traj.times, states[:, i], lw=1.2, label=comp)
    ax.set_xlabel("t")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_phase_figure(
    path,
    named_series: Sequence[Tuple[str, np.ndarray]],
    equilibrium: Optional[Tuple[float, float]] = None,
    title: str = "",
) -> Path:
    """Prey-predator phase portrait for several trajectories, with an
    optional marker on the rest point they should approach."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.4, 5.0))
    for label, states in named_series:
        states = np.asarray(states, dtype=float)
        ax.plot(states[:, 0], states[:, 1], lw=1.0, label=label)
    if equilibrium is not None:
        ax.plot([equilibrium[0]], [equilibrium[1]], "k*", ms=11, label="rest point")
    ax.set_xlabel("N")
    ax.set_ylabel("P")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_bifurcation_figure(path, ds: BifurcationDataset, component: Optional[str] = None, title: str = "") -> Path:
    """Scatter of sampled post-transient values against step size."""
    path = Path(path)
    comp = component or ds.components[0]
    if comp not in ds.components:
        raise ValueError(f"unknown component {comp!r}")
    hs, vals = [], []
    for pt in ds.points:
        for v in pt.values.get(comp, ()):
            hs.append(pt.h)
            vals.append(v)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(hs, vals, ",k", ms=1)
    ax.set_xlabel("h")
    ax.set_ylabel(comp)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
