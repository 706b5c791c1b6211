"""Command-line interface.

Subcommands
-----------
simulate    iterate one discrete map and write a ``k,t,...`` CSV
stability   print a JSON stability report for the interior fixed point
bifurcate   run a step-size sweep and write a ``h,component,value,label`` CSV
compare     continuous reference vs. both discrete maps on an aligned grid
repro       regenerate the full demo output set into one directory

Exit codes: 0 on success, 2 for invalid arguments or parameters
(message on stderr), 3 when a run fails mid-trajectory (partial output
is still flushed, with a trailing ``#`` comment naming the failure index).

Every artifact-producing command also writes a JSON run manifest next to
its outputs.  ``--config FILE`` reads defaults from a flat JSON object;
explicit flags take precedence over config values.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime
from pathlib import Path
from types import SimpleNamespace

from . import __version__
from .analysis import (
    Outcome,
    classify,
    euler_jacobian_at_interior,
    euler_threshold,
    nsfd_jacobian_at_interior,
    probe_orbit,
)
from .bifurcation import SweepConfig, sweep
from .errors import ConditionError, DomainError, ExistenceError, NonFiniteError, StepFailure
from .models import ModelParams, ScalarModelParams, State, interior_equilibrium
from .plots import save_bifurcation_figure, save_phase_figure, save_timeseries_figure
from .reporting import (
    run_manifest,
    write_bifurcation_csv,
    write_gnuplot_script,
    write_manifest,
    write_trajectory_csv,
)
from .schemes import DiscreteMap, Scheme, Trajectory, integrate_continuous, integrate_logistic, iterate

PREDPREY_SCHEMES = ("nsfd", "euler")
ALL_SCHEMES = ("nsfd", "euler", "euler-logistic", "euler-decay")

_SIM_DEFAULTS = dict(
    scheme="nsfd",
    alpha=0.7,
    beta=0.9,
    delta=0.6,
    r=3.0,
    k=50.0,
    lam=1.0,
    h=0.1,
    n0=0.2,
    p0=0.2,
    x0=0.4,
    steps=5000,
    out="simulate.csv",
    figure=None,
)
_STAB_DEFAULTS = dict(scheme="euler", alpha=0.7, beta=0.9, delta=0.6, h=0.1)
_BIF_DEFAULTS = dict(
    scheme="euler",
    alpha=0.7,
    beta=0.9,
    delta=0.6,
    r=3.0,
    k=50.0,
    lam=1.0,
    h_min=0.1,
    h_max=3.0,
    grid=291,
    transient=2000,
    samples=128,
    tol=1e-6,
    n0=0.2,
    p0=0.2,
    x0=0.4,
    out="bifurcation.csv",
    plot_script=None,
    figure=None,
    jobs=None,
)
_CMP_DEFAULTS = dict(
    alpha=0.7,
    beta=0.9,
    delta=0.6,
    h=0.1,
    n0=0.2,
    p0=0.2,
    t_end=500.0,
    rel_tol=1e-8,
    abs_tol=1e-10,
    prefix="compare",
    figure=None,
)
_REPRO_DEFAULTS = dict(out_dir=None, jobs=None)


def _merge_config(ns: argparse.Namespace, defaults: dict) -> SimpleNamespace:
    """Resolve option values: explicit flag > config file > built-in default."""
    cfg = {}
    config_path = getattr(ns, "config", None)
    if config_path:
        cfg = json.loads(Path(config_path).read_text())
        if not isinstance(cfg, dict):
            raise ValueError("config file must contain a JSON object")
        unknown = sorted(set(cfg) - set(defaults))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    merged = {}
    for key, fallback in defaults.items():
        flag = getattr(ns, key, None)
        merged[key] = flag if flag is not None else cfg.get(key, fallback)
    return SimpleNamespace(**merged)


def _resolve_jobs(jobs) -> int:
    if jobs is None:
        env = os.environ.get("DYNCONS_JOBS")
        if env is not None:
            jobs = env
        else:
            return os.cpu_count() or 1
    try:
        jobs = int(jobs)
    except (TypeError, ValueError):
        raise ValueError(f"jobs must be an integer, got {jobs!r}") from None
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    return jobs


def _model_params(o) -> ModelParams:
    return ModelParams(alpha=o.alpha, beta=o.beta, delta=o.delta)


def _scalar_params(o) -> ScalarModelParams:
    return ScalarModelParams(r=o.r, k=o.k, lam=o.lam)


def _manifest_path(out: Path) -> Path:
    return out.parent / (out.stem + ".manifest.json")


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(ns: argparse.Namespace) -> int:
    o = _merge_config(ns, _SIM_DEFAULTS)
    scheme = Scheme(o.scheme)
    params = _scalar_params(o) if scheme.is_scalar else _model_params(o)
    m = DiscreteMap(scheme=scheme, h=o.h, params=params)
    s0 = o.x0 if scheme.is_scalar else State(o.n0, o.p0)
    out = Path(o.out)
    outputs = [out]
    code = 0
    comment = None
    try:
        traj = iterate(m, s0, int(o.steps))
    except NonFiniteError as exc:
        traj = Trajectory(t0=0.0, h=o.h, states=exc.partial)
        comment = f"nonfinite at k={exc.index}"
        print(f"error: orbit became non-finite at k={exc.index}", file=sys.stderr)
        code = 3
    except DomainError as exc:
        traj = Trajectory(t0=0.0, h=o.h, states=exc.partial)
        comment = f"domain exit at k={exc.index}"
        print(f"error: orbit left the admissible domain at k={exc.index}", file=sys.stderr)
        code = 3
    write_trajectory_csv(out, traj, m.components, comment=comment)
    if o.figure:
        save_timeseries_figure(o.figure, traj, m.components, title=f"{scheme.value}, h={o.h:g}")
        outputs.append(Path(o.figure))
    params_dict = vars(o).copy()
    params_dict.pop("figure", None)
    write_manifest(_manifest_path(out), run_manifest("simulate", params_dict, outputs))
    return code


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------


def cmd_stability(ns: argparse.Namespace) -> int:
    o = _merge_config(ns, _STAB_DEFAULTS)
    scheme = Scheme(o.scheme)
    params = _model_params(o)
    if scheme is Scheme.NSFD:
        jac = nsfd_jacobian_at_interior(params, o.h)
    else:
        jac = euler_jacobian_at_interior(params, o.h)
    report = classify(jac)
    eq = interior_equilibrium(params)
    payload = {
        "scheme": scheme.value,
        "h": o.h,
        "params": {"alpha": o.alpha, "beta": o.beta, "delta": o.delta},
        "equilibrium": {"n": eq.state.n, "p": eq.state.p},
        "report": report.to_dict(),
    }
    if scheme is Scheme.EULER_PREDPREY:
        try:
            payload["threshold"] = euler_threshold(params).to_dict()
        except ConditionError:
            payload["threshold"] = None
    print(json.dumps(payload, indent=2))
    return 0


# ---------------------------------------------------------------------------
# bifurcate
# ---------------------------------------------------------------------------


def cmd_bifurcate(ns: argparse.Namespace) -> int:
    o = _merge_config(ns, _BIF_DEFAULTS)
    scheme = Scheme(o.scheme)
    params = _scalar_params(o) if scheme.is_scalar else _model_params(o)
    s0 = (o.x0,) if scheme.is_scalar else (o.n0, o.p0)
    config = SweepConfig(
        scheme=scheme,
        h_min=o.h_min,
        h_max=o.h_max,
        steps=int(o.grid),
        s0=s0,
        transient=int(o.transient),
        samples=int(o.samples),
        tol=o.tol,
    )
    jobs = _resolve_jobs(o.jobs)
    ds = sweep(config, params, jobs=jobs)
    out = Path(o.out)
    outputs = [write_bifurcation_csv(out, ds)]
    if o.plot_script:
        outputs.append(
            write_gnuplot_script(
                o.plot_script,
                out,
                "sweep",
                ds.components,
                title=f"{scheme.value} sweep",
            )
        )
    if o.figure:
        outputs.append(save_bifurcation_figure(o.figure, ds, title=f"{scheme.value} sweep"))
    params_dict = vars(o).copy()
    params_dict["jobs"] = jobs
    write_manifest(_manifest_path(out), run_manifest("bifurcate", params_dict, outputs))
    return 0


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def _series_summary(traj, eq, outcome=None):
    n, p = float(traj.states[-1][0]), float(traj.states[-1][1])
    entry = {"terminal": [n, p]}
    if eq is not None:
        entry["terminal_distance"] = float(
            ((n - eq.state.n) ** 2 + (p - eq.state.p) ** 2) ** 0.5
        )
    else:
        entry["terminal_distance"] = None
    if outcome is not None:
        entry["outcome"] = outcome
    return entry


def cmd_compare(ns: argparse.Namespace) -> int:
    o = _merge_config(ns, _CMP_DEFAULTS)
    params = _model_params(o)
    s0 = State(o.n0, o.p0)
    steps = max(1, round(o.t_end / o.h))
    t_end = steps * o.h  # align the reference grid with the discrete one
    cont = integrate_continuous(
        params, s0, t_end, rel_tol=o.rel_tol, abs_tol=o.abs_tol, samples=steps + 1
    )
    eq = interior_equilibrium(params)
    prefix = Path(o.prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    outputs = []
    code = 0

    def _out(tag: str) -> Path:
        return prefix.parent / f"{prefix.name}_{tag}.csv"

    outputs.append(write_trajectory_csv(_out("continuous"), cont, ("N", "P")))
    summary = {
        "params": {"alpha": o.alpha, "beta": o.beta, "delta": o.delta},
        "h": o.h,
        "t_end": t_end,
        "steps": steps,
        "equilibrium": None if eq is None else {"n": eq.state.n, "p": eq.state.p},
        "series": {"continuous": _series_summary(cont, eq)},
    }
    window = max(1, min(128, steps // 4)) if steps >= 4 else 1
    named = [("continuous", cont.states)]
    for tag, scheme in (("nsfd", Scheme.NSFD), ("euler", Scheme.EULER_PREDPREY)):
        m = DiscreteMap(scheme=scheme, h=o.h, params=params)
        try:
            traj = iterate(m, s0, steps)
            outcome = probe_orbit(m, s0, steps - window, window, 1e-4).outcome.value
            comment = None
        except (NonFiniteError, DomainError) as exc:
            traj = Trajectory(t0=0.0, h=o.h, states=exc.partial)
            outcome = Outcome.DIVERGED.value
            kind = "nonfinite" if isinstance(exc, NonFiniteError) else "domain exit"
            comment = f"{kind} at k={exc.index}"
            print(f"error: {tag} orbit failed at k={exc.index}", file=sys.stderr)
            code = 3
        outputs.append(write_trajectory_csv(_out(tag), traj, ("N", "P"), comment=comment))
        summary["series"][tag] = _series_summary(traj, eq, outcome)
        if len(traj.states):
            named.append((tag, traj.states))
    summary_path = prefix.parent / f"{prefix.name}_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    outputs.append(summary_path)
    if o.figure:
        marker = None if eq is None else (eq.state.n, eq.state.p)
        outputs.append(
            save_phase_figure(o.figure, named, equilibrium=marker, title=f"h={o.h:g}")
        )
    write_manifest(_manifest_path(prefix), run_manifest("compare", vars(o).copy(), outputs))
    return code


# ---------------------------------------------------------------------------
# repro
# ---------------------------------------------------------------------------


def cmd_repro(ns: argparse.Namespace) -> int:
    o = _merge_config(ns, _REPRO_DEFAULTS)
    out_dir = Path(o.out_dir or f"repro-{datetime.now():%Y%m%d-%H%M%S}")
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = _resolve_jobs(o.jobs)
    params = ModelParams(alpha=0.7, beta=0.9, delta=0.6)
    logistic = ScalarModelParams(r=3.0, k=50.0, lam=1.0)
    outputs = []

    def record(path):
        outputs.append(Path(path))
        print(f"wrote {path}")
        return Path(path)

    # 1. Continuous logistic benchmark.
    traj = integrate_logistic(logistic, x0=0.4, t_end=10.0)
    csv = record(write_trajectory_csv(out_dir / "01_logistic_continuous.csv", traj, ("x",)))
    record(write_gnuplot_script(out_dir / "01_logistic_continuous.gp", csv, "trajectory", ("x",)))
    record(save_timeseries_figure(out_dir / "01_logistic_continuous.png", traj, ("x",),
                                  title="logistic growth, continuous"))

    # 2. Step-size sweep of Euler on the logistic equation.
    cfg = SweepConfig(
        scheme=Scheme.EULER_LOGISTIC, h_min=0.1, h_max=1.0, steps=181,
        s0=(0.4,), transient=1000, samples=64,
    )
    ds = sweep(cfg, logistic, jobs=jobs)
    csv = record(write_bifurcation_csv(out_dir / "02_logistic_euler_sweep.csv", ds))
    record(write_gnuplot_script(out_dir / "02_logistic_euler_sweep.gp", csv, "sweep", ("x",)))
    record(save_bifurcation_figure(out_dir / "02_logistic_euler_sweep.png", ds,
                                   title="Euler on logistic growth"))

    # 3. Reference vs. both maps at a small step.
    s0 = State(0.2, 0.2)
    eq = interior_equilibrium(params)
    steps = 5000
    cont = integrate_continuous(params, s0, steps * 0.1, samples=steps + 1)
    named = []
    for tag, traj in (
        ("continuous", cont),
        ("nsfd", iterate(DiscreteMap(Scheme.NSFD, 0.1, params), s0, steps)),
        ("euler", iterate(DiscreteMap(Scheme.EULER_PREDPREY, 0.1, params), s0, steps)),
    ):
        record(write_trajectory_csv(out_dir / f"03_compare_h0.1_{tag}.csv", traj, ("N", "P")))
        named.append((tag, traj.states))
    record(save_phase_figure(out_dir / "03_compare_h0.1_phase.png", named,
                             equilibrium=(eq.state.n, eq.state.p), title="h=0.1"))

    # 4. Step-size sweep of Euler on the predator-prey system.
    cfg = SweepConfig(scheme=Scheme.EULER_PREDPREY, h_min=0.1, h_max=3.0, steps=291, s0=(0.2, 0.2))
    ds = sweep(cfg, params, jobs=jobs)
    csv = record(write_bifurcation_csv(out_dir / "04_euler_sweep.csv", ds))
    record(write_gnuplot_script(out_dir / "04_euler_sweep.gp", csv, "sweep", ("N", "P")))
    record(save_bifurcation_figure(out_dir / "04_euler_sweep.png", ds, title="Euler sweep"))

    # 5. Same sweep for the positivity-preserving map over a wide h range.
    cfg = SweepConfig(scheme=Scheme.NSFD, h_min=0.1, h_max=30.0, steps=300, s0=(0.2, 0.2))
    ds = sweep(cfg, params, jobs=jobs)
    csv = record(write_bifurcation_csv(out_dir / "05_nsfd_sweep.csv", ds))
    record(write_gnuplot_script(out_dir / "05_nsfd_sweep.gp", csv, "sweep", ("N", "P")))
    record(save_bifurcation_figure(out_dir / "05_nsfd_sweep.png", ds,
                                   title="positivity-preserving sweep"))

    # 6. Large-step time series for both maps.
    for tag, scheme, h in (
        ("nsfd_h2", Scheme.NSFD, 2.0),
        ("euler_h2", Scheme.EULER_PREDPREY, 2.0),
        ("nsfd_h2.67", Scheme.NSFD, 2.67),
        ("euler_h2.67", Scheme.EULER_PREDPREY, 2.67),
    ):
        m = DiscreteMap(scheme=scheme, h=h, params=params)
        traj = iterate(m, s0, 200)
        record(write_trajectory_csv(out_dir / f"06_{tag}.csv", traj, ("N", "P")))
        record(save_timeseries_figure(out_dir / f"06_{tag}.png", traj, ("N", "P"),
                                      title=f"{scheme.value}, h={h:g}"))

    manifest = run_manifest(
        "repro",
        {"alpha": 0.7, "beta": 0.9, "delta": 0.6, "r": 3.0, "k": 50.0, "jobs": jobs},
        outputs,
    )
    write_manifest(out_dir / "manifest.json", manifest)
    print(f"wrote {out_dir / 'manifest.json'}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_model_flags(sp):
    sp.add_argument("--alpha", type=float, help="predator interference (default 0.7)")
    sp.add_argument("--beta", type=float, help="predator growth rate (default 0.9)")
    sp.add_argument("--delta", type=float, help="predator/prey carrying ratio (default 0.6)")


def _add_scalar_flags(sp):
    sp.add_argument("--r", type=float, help="logistic growth rate (default 3)")
    sp.add_argument("--k", type=float, help="logistic carrying capacity (default 50)")
    sp.add_argument("--lambda", dest="lam", type=float, help="decay rate (default 1)")


def _add_state_flags(sp):
    sp.add_argument("--n0", type=float, help="initial prey density (default 0.2)")
    sp.add_argument("--p0", type=float, help="initial predator density (default 0.2)")
    sp.add_argument("--x0", type=float, help="initial value for scalar schemes (default 0.4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyncons",
        description="Discretizations of a ratio-dependent predator-prey model: "
        "simulation, stability reports, and step-size bifurcation sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"dyncons {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="iterate one discrete map and write a CSV")
    sp.add_argument("--scheme", choices=ALL_SCHEMES, help="map to iterate (default nsfd)")
    _add_model_flags(sp)
    _add_scalar_flags(sp)
    _add_state_flags(sp)
    sp.add_argument("--h", type=float, help="step size (default 0.1)")
    sp.add_argument("--steps", type=int, help="number of iterations (default 5000)")
    sp.add_argument("--out", help="output CSV path (default simulate.csv)")
    sp.add_argument("--figure", help="also render a PNG time-series figure")
    sp.add_argument("--config", help="JSON file with default option values")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("stability", help="JSON stability report for the interior fixed point")
    sp.add_argument("--scheme", choices=PREDPREY_SCHEMES, help="map to analyze (default euler)")
    _add_model_flags(sp)
    sp.add_argument("--h", type=float, help="step size (default 0.1)")
    sp.add_argument("--config", help="JSON file with default option values")
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("bifurcate", help="step-size sweep with oracle labels")
    sp.add_argument("--scheme", choices=ALL_SCHEMES, help="map to sweep (default euler)")
    _add_model_flags(sp)
    _add_scalar_flags(sp)
    _add_state_flags(sp)
    sp.add_argument("--h-min", dest="h_min", type=float, help="smallest step size (default 0.1)")
    sp.add_argument("--h-max", dest="h_max", type=float, help="largest step size (default 3.0)")
    sp.add_argument("--grid", type=int, help="number of grid points (default 291)")
    sp.add_argument("--transient", type=int, help="iterations discarded before sampling (default 2000)")
    sp.add_argument("--samples", type=int, help="post-transient samples per h (default 128)")
    sp.add_argument("--tol", type=float, help="stability-oracle tolerance (default 1e-6)")
    sp.add_argument("--out", help="output CSV path (default bifurcation.csv)")
    sp.add_argument("--plot-script", dest="plot_script", help="also write a gnuplot script")
    sp.add_argument("--figure", help="also render a PNG scatter figure")
    sp.add_argument("--jobs", type=int, help="worker processes (default: all cores; env DYNCONS_JOBS)")
    sp.add_argument("--config", help="JSON file with default option values")
    sp.set_defaults(func=cmd_bifurcate)

    sp = sub.add_parser("compare", help="continuous reference vs. both discrete maps")
    _add_model_flags(sp)
    sp.add_argument("--h", type=float, help="discrete step size (default 0.1)")
    sp.add_argument("--n0", type=float, help="initial prey density (default 0.2)")
    sp.add_argument("--p0", type=float, help="initial predator density (default 0.2)")
    sp.add_argument("--t-end", dest="t_end", type=float, help="time horizon (default 500)")
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, help="reference relative tolerance (default 1e-8)")
    sp.add_argument("--abs-tol", dest="abs_tol", type=float, help="reference absolute tolerance (default 1e-10)")
    sp.add_argument("--prefix", help="output path prefix (default compare)")
    sp.add_argument("--figure", help="also render a PNG phase portrait")
    sp.add_argument("--config", help="JSON file with default option values")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("repro", help="regenerate the demo CSVs, scripts and figures")
    sp.add_argument("--out-dir", dest="out_dir", help="output directory (default repro-<timestamp>)")
    sp.add_argument("--jobs", type=int, help="worker processes (default: all cores; env DYNCONS_JOBS)")
    sp.add_argument("--config", help="JSON file with default option values")
    sp.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (ValueError, ConditionError, ExistenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StepFailure, NonFiniteError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
