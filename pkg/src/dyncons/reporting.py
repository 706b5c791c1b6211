"""File output: CSV trajectories and sweeps, run manifests, gnuplot scripts.

All floating-point values are printed with 17 significant digits so that a
round-trip through the file reproduces the binary doubles exactly.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .bifurcation import BifurcationDataset
from .schemes import Trajectory


def fmt17(x: float) -> str:
    """Shortest exact decimal form with up to 17 significant digits."""
    return format(float(x), ".17g")


def write_trajectory_csv(
    path,
    traj: Trajectory,
    components: Sequence[str],
    comment: Optional[str] = None,
) -> Path:
    """Write `k,t,<components...>` rows; an optional trailing `#` comment
    records diagnostics such as where an orbit left the domain."""
    path = Path(path)
    states = np.asarray(traj.states, dtype=float)
    if states.ndim == 1:
        states = states[:, None]
    lines = ["k,t," + ",".join(components)]
    for i in range(len(states)):
        k = traj.k0 + i
        t = traj.t0 + k * traj.h
        row = [str(k), fmt17(t)] + [fmt17(v) for v in states[i]]
        lines.append(",".join(row))
    if comment:
        lines.append(f"# {comment}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_bifurcation_csv(path, ds: BifurcationDataset) -> Path:
    """Write `h,component,value,label` rows in grid order; step sizes whose
    orbit diverged contribute no data rows, only a trailing comment noting
    the failure index."""
    path = Path(path)
    lines = ["h,component,value,label"]
    for h, comp, value, label in ds.rows():
        lines.append(f"{fmt17(h)},{comp},{fmt17(value)},{label}")
    for pt in ds.points:
        if pt.fail_index is not None:
            lines.append(f"# diverged: h={fmt17(pt.h)} at k={pt.fail_index}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_gnuplot_script(
    path,
    csv_path,
    kind: str,
    components: Sequence[str],
    png_path=None,
    title: str = "",
) -> Path:
    """Emit a standalone gnuplot script that renders a CSV written by this
    package.  ``kind`` is "trajectory" (t on the x axis) or "sweep"
    (h on the x axis, one dot per sampled value)."""
    if kind not in ("trajectory", "sweep"):
        raise ValueError("kind must be 'trajectory' or 'sweep'")
    path = Path(path)
    csv_name = Path(csv_path).name
    png_name = Path(png_path).name if png_path else f"{path.stem}_gp.png"
    lines = [
        "set datafile separator ','",
        "set terminal pngcairo size 900,600",
        f"set output '{png_name}'",
        f"set title '{title}'" if title else "unset title",
        "set key top right",
    ]
    if kind == "trajectory":
        lines.append("set xlabel 't'")
        plots = [
            f"'{csv_name}' every ::1 using 2:{3 + i} with lines title '{comp}'"
            for i, comp in enumerate(components)
        ]
    else:
        lines.append("set xlabel 'h'")
        plots = [
            f"'{csv_name}' every ::1 using "
            f"(strcol(2) eq '{comp}' ? $1 : 1/0):3 with dots title '{comp}'"
            for comp in components
        ]
    lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("\n".join(lines) + "\n")
    return path


def run_manifest(command: str, parameters: dict, outputs: Iterable) -> dict:
    """Provenance record for one CLI run: inputs, outputs, tool version."""
    return {
        "tool": "dyncons",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "outputs": [Path(p).name for p in outputs],
        "determinism": (
            "outputs are a pure function of the recorded parameters; "
            "no randomness is involved"
        ),
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
