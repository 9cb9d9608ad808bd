"""Command-line front end.

Two subcommands: ``sweep`` runs a Monte Carlo sweep and writes the CSV
report (plus a rendered figure next to it unless --no-plot), ``verify``
runs the matrix-level oracle suite that backs the scalar solver.  Flags
may be pre-loaded from a flat key=value config file; explicit flags win.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 I/O error.
"""

import argparse
import os
import sys

import numpy as np

from .channel import SystemConfig
from .errors import InvalidConfigError, InvalidInputError
from .harness import SWEEP_KR_SPLIT, SWEEP_T_OVER_P, ExperimentSpec, emit_csv, run_sweep
from .majorize import fiedler_bounds, majorization_report, spectral_reduction_equiv, common_basis_covariance


def _parse_grid(text: str) -> np.ndarray:
    """Parse 'start:step:stop' (inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidConfigError(f"grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise InvalidConfigError("grid step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise InvalidConfigError(f"empty grid {text!r}")
        return start + step * np.arange(n)
    return np.array([float(p) for p in text.split(",") if p.strip()])


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InvalidConfigError(f"{path}:{lineno}: expected key = value")
                key, value = (s.strip() for s in line.split("=", 1))
                values[key.replace("-", "_")] = value
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robust-relay")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a Monte Carlo sweep and write a CSV report")
    sw.add_argument("--config", help="flat key=value file with defaults for the flags below")
    sw.add_argument("--M", type=int, help="source antennas")
    sw.add_argument("--Kt", type=int, help="relay transmit antennas")
    sw.add_argument("--Kr", type=int, help="relay receive antennas")
    sw.add_argument("--N", type=int, help="destination antennas")
    sw.add_argument("--Ps", type=float, help="source power budget")
    sw.add_argument("--Pr", type=float, help="relay power budget")
    sw.add_argument("--T", type=float, default=None,
                    help="interference uncertainty bound (kr-split sweep)")
    sw.add_argument("--sweep", choices=[SWEEP_T_OVER_P, SWEEP_KR_SPLIT], help="sweep kind")
    sw.add_argument("--grid", help="grid as start:step:stop or comma list")
    sw.add_argument("--trials", type=int, default=10000, help="Monte Carlo trials per point")
    sw.add_argument("--seed", type=int, default=0, help="master seed")
    sw.add_argument("--out", help="CSV output path")
    sw.add_argument("--entry-variance", type=float, default=2.0,
                    help="per-entry channel variance used by the simulation")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    sw.add_argument("--progress", action="store_true", help="report progress on stderr")
    sw.add_argument("--no-plot", action="store_true", help="skip the rendered figure")

    vf = sub.add_parser("verify", help="run the matrix-level oracle suite")
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--pairs", type=int, default=200, help="random matrix pairs per check")
    vf.add_argument("--instances", type=int, default=3,
                    help="2x2 instances for the full matrix search")
    vf.add_argument("--samples", type=int, default=20000,
                    help="adversary samples per 2x2 instance")
    return parser


def _merge_config_file(argv, parser):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    file_values = _load_config_file(known.config)
    # Anything not overridden on the command line is injected as a flag.
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    extra = []
    for key, value in file_values.items():
        if key not in given:
            extra.append(f"--{key.replace('_', '-')}={value}")
    return list(argv) + extra


def _cmd_sweep(args) -> int:
    required = {"M": args.M, "Kt": args.Kt, "Kr": args.Kr, "N": args.N,
                "Ps": args.Ps, "Pr": args.Pr, "sweep": args.sweep,
                "grid": args.grid, "out": args.out}
    missing = [k for k, v in required.items() if v is None]
    if missing:
        raise InvalidConfigError(f"missing required options: {', '.join('--' + m for m in missing)}")
    if args.sweep == SWEEP_KR_SPLIT and args.T is None:
        raise InvalidConfigError("kr-split sweeps need --T")
    cfg = SystemConfig(M=args.M, Kt=args.Kt, Kr=args.Kr, N=args.N,
                       Ps=args.Ps, Pr=args.Pr, T=args.T if args.T is not None else 0.0)
    spec = ExperimentSpec(
        config=cfg,
        sweep=args.sweep,
        grid=_parse_grid(args.grid),
        trials=args.trials,
        seed=args.seed,
        out_path=args.out,
        entry_variance=args.entry_variance,
        jobs=args.jobs,
        progress=args.progress,
    )
    report = run_sweep(spec)
    emit_csv(report, args.out)
    print(f"wrote {args.out}")
    if not args.no_plot:
        from .plots import render_sweep_figure

        fig_path = os.path.splitext(args.out)[0] + ".png"
        title = (f"M={cfg.M} Kt={cfg.Kt} Kr={cfg.Kr} N={cfg.N} "
                 f"Ps={cfg.Ps:g} Pr={cfg.Pr:g}")
        render_sweep_figure(report, fig_path, title=title)
        print(f"wrote {fig_path}")
    return 0


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True

    def check(name, passed):
        nonlocal ok
        ok = ok and passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}")

    n = 4
    good = True
    for _ in range(args.pairs):
        A = _random_psd(rng, n)
        B = _random_psd(rng, n) + 0.5 * np.eye(n)
        lo, val, hi = fiedler_bounds(A, B)
        slack = 1e-8 * max(1.0, abs(val))
        if not (lo <= val + slack and val <= hi + slack):
            good = False
            break
    check(f"determinant sandwich on {args.pairs} random pairs", good)

    good = True
    for _ in range(args.pairs):
        Q = _random_psd(rng, n)
        H = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * np.sqrt(0.5)
        Qp = common_basis_covariance(Q, H)
        link = np.linalg.eigvalsh(H @ Q @ H.conj().T)
        link_p = np.linalg.eigvalsh(H @ Qp @ H.conj().T)
        if np.max(np.abs(link - link_p)) > 1e-8 * max(1.0, link.max()):
            good = False
            break
        if np.trace(Qp).real > np.trace(Q).real + 1e-9:
            good = False
            break
        rep = majorization_report(np.linalg.eigvalsh(Qp), np.linalg.eigvalsh(Q), tol=1e-7)
        if not rep.weakly_majorized:
            good = False
            break
    check(f"common-basis construction on {args.pairs} random pairs", good)

    good = True
    for k in range(args.instances):
        cfg = SystemConfig(M=2, Kt=2, Kr=2, N=2, Ps=5.0, Pr=5.0,
                           T=float(rng.uniform(0.5, 5.0)))
        if not spectral_reduction_equiv(cfg, rng_seed=args.seed + 1000 + k,
                                        n_samples=args.samples):
            good = False
            break
    check(f"matrix search does not beat the stream solution ({args.instances} instances)", good)

    return 0 if ok else 1


def _random_psd(rng, n):
    X = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * np.sqrt(0.5)
    return X @ X.conj().T / n


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _merge_config_file(argv, parser)
        args = parser.parse_args(argv)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_verify(args)
    except (InvalidConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
