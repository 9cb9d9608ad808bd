"""Monte Carlo sweep driver: seeded trials, aggregation and CSV emission.

Two sweep families are supported: the interference-uncertainty ratio
sweep (T/P on a grid, antenna counts fixed) and the relay antenna split
sweep (receive count on a grid, total relay antennas and T fixed).
Common random numbers are used across sweep points: trial t draws its
channels from a seed derived from (master seed, t) only, so per-trial
monotonicity in T carries over to the averages exactly and the
half-duplex mean is constant across the T grid by construction.

Monte Carlo channel draws follow the usual link-simulation convention of
unit-variance real and imaginary parts per entry (total entry variance
2); set ``entry_variance=1.0`` to average over the unit-total-variance
draws that ``sample_channel`` produces natively.
"""

import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import SystemConfig, sample_channel
from .errors import InvalidConfigError
from .fullduplex import fd_rate, mode_select
from .halfduplex import hd_rate

SWEEP_T_OVER_P = "t-over-p"
SWEEP_KR_SPLIT = "kr-split"


@dataclass
class ExperimentSpec:
    """One sweep: base configuration, grid, trial count, seed, output."""

    config: SystemConfig
    sweep: str
    grid: np.ndarray
    trials: int
    seed: int
    out_path: str | None = None
    entry_variance: float = 2.0
    jobs: int = 1
    progress: bool = False

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.sweep not in (SWEEP_T_OVER_P, SWEEP_KR_SPLIT):
            raise InvalidConfigError(f"unknown sweep kind {self.sweep!r}")
        if self.trials < 1:
            raise InvalidConfigError("trials must be >= 1")
        if self.entry_variance <= 0.0:
            raise InvalidConfigError("entry_variance must be positive")
        if self.sweep == SWEEP_T_OVER_P:
            if np.any(self.grid < 0.0):
                raise InvalidConfigError("T/P grid values must be >= 0")
        else:
            total = self.config.Kt + self.config.Kr
            ints = np.rint(self.grid).astype(int)
            if np.any(np.abs(self.grid - ints) > 0):
                raise InvalidConfigError("Kr grid values must be integers")
            if np.any(ints < 1) or np.any(ints > total - 1):
                raise InvalidConfigError(
                    f"Kr grid values must lie in [1, {total - 1}] to leave both frontends an antenna"
                )


@dataclass
class SweepPoint:
    sweep_param: float
    hd_mean: float
    fd_mean: float
    selected_mean: float
    stderr: float
    trials: int


@dataclass
class RateReport:
    sweep: str
    points: list[SweepPoint] = field(default_factory=list)


def _point_configs(spec: ExperimentSpec) -> list[SystemConfig]:
    cfg = spec.config
    configs = []
    if spec.sweep == SWEEP_T_OVER_P:
        for ratio in spec.grid:
            configs.append(replace(cfg, T=float(ratio) * cfg.Ps))
    else:
        total = cfg.Kt + cfg.Kr
        for k in np.rint(spec.grid).astype(int):
            configs.append(replace(cfg, Kr=int(k), Kt=int(total - k)))
    return configs


def _trial_seed(master_seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([master_seed, trial]).generate_state(1, dtype=np.uint64)[0])


def _run_trial(args):
    """Rates for one trial across every sweep point: (hd[], fd[], sel[])."""
    spec, configs, trial = args
    scale = np.sqrt(spec.entry_variance)
    n_pts = len(configs)
    hd_vals = np.empty(n_pts)
    fd_vals = np.empty(n_pts)
    sel_vals = np.empty(n_pts)
    seed = _trial_seed(spec.seed, trial)

    if spec.sweep == SWEEP_T_OVER_P:
        # One channel draw shared by every grid point.
        ch = sample_channel(spec.config, seed)
        ch.H1 *= scale
        ch.H2 *= scale
        hd = hd_rate(ch, configs[0])
        for j, cfg in enumerate(configs):
            fd = fd_rate(ch, cfg)
            _, sel = mode_select(hd, fd)
            hd_vals[j] = hd.rate
            fd_vals[j] = fd.rate
            sel_vals[j] = sel
    else:
        # Antenna counts change per point; the same trial seed keeps the
        # draws coupled as far as their shapes allow.
        for j, cfg in enumerate(configs):
            ch = sample_channel(cfg, seed)
            ch.H1 *= scale
            ch.H2 *= scale
            hd = hd_rate(ch, cfg)
            fd = fd_rate(ch, cfg)
            _, sel = mode_select(hd, fd)
            hd_vals[j] = hd.rate
            fd_vals[j] = fd.rate
            sel_vals[j] = sel
    return trial, hd_vals, fd_vals, sel_vals


def run_sweep(spec: ExperimentSpec) -> RateReport:
    """Run every (sweep point, trial) pair and aggregate the rates.

    Deterministic for a fixed seed and trial count regardless of the
    number of worker processes: results are stored by trial index and
    reduced with numpy's pairwise summation.
    """
    if spec.out_path:
        _probe_writable(spec.out_path)
    configs = _point_configs(spec)
    n_pts = len(configs)
    L = spec.trials
    hd_all = np.empty((n_pts, L))
    fd_all = np.empty((n_pts, L))
    sel_all = np.empty((n_pts, L))

    tasks = ((spec, configs, t) for t in range(L))
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = pool.map(_run_trial, tasks, chunksize=max(1, L // (8 * spec.jobs)))
            for done, (trial, hd_vals, fd_vals, sel_vals) in enumerate(results):
                hd_all[:, trial] = hd_vals
                fd_all[:, trial] = fd_vals
                sel_all[:, trial] = sel_vals
                _progress(spec, done + 1)
    else:
        for done, task in enumerate(tasks):
            trial, hd_vals, fd_vals, sel_vals = _run_trial(task)
            hd_all[:, trial] = hd_vals
            fd_all[:, trial] = fd_vals
            sel_all[:, trial] = sel_vals
            _progress(spec, done + 1)

    report = RateReport(sweep=spec.sweep)
    for j in range(n_pts):
        sel = sel_all[j]
        stderr = float(np.std(sel, ddof=1) / np.sqrt(L)) if L > 1 else 0.0
        report.points.append(SweepPoint(
            sweep_param=float(spec.grid[j]),
            hd_mean=float(np.mean(hd_all[j])),
            fd_mean=float(np.mean(fd_all[j])),
            selected_mean=float(np.mean(sel)),
            stderr=stderr,
            trials=L,
        ))
    return report


def _progress(spec: ExperimentSpec, done: int):
    if not spec.progress:
        return
    step = max(1, spec.trials // 50)
    if done % step == 0 or done == spec.trials:
        print(f"\r{done}/{spec.trials} trials", end="", file=sys.stderr, flush=True)
        if done == spec.trials:
            print(file=sys.stderr)


def _probe_writable(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise OSError(f"output directory does not exist: {parent}")
    try:
        with open(path, "a", encoding="utf-8"):
            pass
    except OSError as exc:
        raise OSError(f"output path not writable: {path}") from exc


def emit_csv(report: RateReport, path: str):
    """Write the report: one header line plus one row per sweep point.

    Floats are rendered with 17 significant digits so a parse round-trip
    is exact; the newline is a bare \\n and the encoding UTF-8.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("sweep_param,hd_mean,fd_mean,selected_mean,stderr,trials\n")
            for p in report.points:
                fh.write(
                    f"{p.sweep_param:.17g},{p.hd_mean:.17g},{p.fd_mean:.17g},"
                    f"{p.selected_mean:.17g},{p.stderr:.17g},{p.trials}\n"
                )
    except OSError as exc:
        raise OSError(f"failed to write report to {path}: {exc}") from exc
