"""Command-line entry point.

Subcommands: solve, exp-lipschitz, exp-nonuniform, op-suite, bch-order.
Exit codes: 0 on success, 1 on an invariant failure, 2 on configuration
errors.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments
from .burgers import AnsatzConfig, SolverConfig, ansatz_pair, solve
from .errors import ParatorusError
from .flow import FlowConfig, bch_truncation_residual
from .grid import PeriodicGrid, SpectralFunction
from .spectral import high_frequency_cut
from .suite import run_suite
from .symbols import Symbol, gauge_symbol, transport_symbol
from .tables import write_order_fits, write_trajectory

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="paratorus")
    top.add_argument("--config", default=None, help="key = value config file")
    top.add_argument("--out", default=None, help="output CSV path")
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--n-jobs", type=int, default=1)
    sub = top.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", help="integrate the dispersive equation")
    sub.add_parser("exp-lipschitz", help="zero-mean flow-map ratio sweep")
    sub.add_parser("exp-nonuniform", help="general-mean separation sweep")
    suite = sub.add_parser("op-suite", help="run all registered invariants")
    suite.add_argument("--n", type=int, default=128)
    bch = sub.add_parser("bch-order", help="commutator-truncation order fits")
    bch.add_argument("--n", type=int, default=512)
    bch.add_argument("--alpha", type=float, default=1.5)
    bch.add_argument("--truncation", type=int, default=1)
    return top


def _load_experiment(args, name: str) -> experiments.ExperimentConfig:
    overrides = {"experiment": name, "seed": args.seed}
    if args.out:
        overrides["out_path"] = args.out
    if args.config:
        return experiments.load_config(args.config, overrides)
    if name == "nonuniform":
        overrides.setdefault("lambdas", (8, 16, 32, 64, 128, 256))
        overrides.setdefault("t_end", 3.2)
        overrides.setdefault("dt", 5e-3)
    return experiments.ExperimentConfig(**overrides)


def _cmd_solve(args) -> int:
    cfg = {"alpha": 1.5, "n": 256, "dt": 1e-3, "t_end": 0.5, "ic": "cos",
           "amplitude": 1.0, "lam": 8, "eps": 0.25, "s": 3.0, "store_stride": 0}
    if args.config:
        import configparser

        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        if not parser.read(args.config) or "solve" not in parser:
            raise ParatorusError("solve needs a [solve] config section")
        sec = parser["solve"]
        for key in cfg:
            if key in sec:
                cast = type(cfg[key])
                cfg[key] = cast(sec.get(key)) if cast is not str else sec.get(key)
    grid = PeriodicGrid(int(cfg["n"]))
    if cfg["ic"] == "cos":
        u0 = SpectralFunction.from_values(
            grid, cfg["amplitude"] * np.cos(grid.nodes))
    elif cfg["ic"] == "ansatz":
        u0, _ = ansatz_pair(AnsatzConfig(lam=int(cfg["lam"]), eps=cfg["eps"],
                                         s=cfg["s"]), grid)
        u0 = high_frequency_cut(u0, grid.n_points // 3)
    else:
        raise ParatorusError(f"unknown initial condition {cfg['ic']!r}")
    scfg = SolverConfig(alpha=cfg["alpha"], n_points=grid.n_points,
                        dt=cfg["dt"], t_end=cfg["t_end"],
                        store_stride=int(cfg["store_stride"]))
    traj = solve(u0, scfg)
    out = args.out or "trajectory.csv"
    note = (f"alpha={scfg.alpha} n={scfg.n_points} dt={scfg.dt} "
            f"t_end={scfg.t_end} ic={cfg['ic']} seed={args.seed}")
    write_trajectory(out, traj, note)
    print(f"wrote {out} ({len(traj.times)} stored states, "
          f"mean drift {traj.mean_drift():.3e}, "
          f"L2 drift {traj.l2_relative_drift():.3e})")
    return EXIT_OK


def _cmd_lipschitz(args) -> int:
    cfg = _load_experiment(args, "lipschitz")
    rows = experiments.run_lipschitz(cfg, n_jobs=args.n_jobs)
    experiments.write_experiment(cfg.out_path, cfg, rows,
                                 experiments.LIPSCHITZ_HEADER)
    print(f"wrote {cfg.out_path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_nonuniform(args) -> int:
    cfg = _load_experiment(args, "nonuniform")
    rows = experiments.run_nonuniform(cfg, n_jobs=args.n_jobs)
    experiments.write_experiment(cfg.out_path, cfg, rows,
                                 experiments.NONUNIFORM_HEADER)
    print(f"wrote {cfg.out_path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_suite(args) -> int:
    results = run_suite(n=args.n, seed=args.seed)
    failed = [r for r in results if not r.passed]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    if failed:
        print(f"{len(failed)} invariant(s) failed, first: {failed[0].name}",
              file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_bch(args) -> int:
    grid = PeriodicGrid(args.n)
    v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
    p = gauge_symbol(v, args.alpha)
    b = transport_symbol(v).scaled_by_i()
    cfg = FlowConfig(tau_target=1.0, n_substeps=128)
    freqs = [f for f in (16, 32, 64, 128) if f <= args.n // 4]
    report = bch_truncation_residual(p, b, cfg, args.truncation, freqs)
    out = args.out or "bch_order.csv"
    write_order_fits(out, [report],
                     note=f"n={args.n} alpha={args.alpha} "
                          f"truncation={args.truncation} seed={args.seed}")
    print(f"wrote {out}: fitted {report.fitted_exponent:.3f}, "
          f"predicted {report.predicted_exponent:.3f}")
    return EXIT_OK


COMMANDS = {
    "solve": _cmd_solve,
    "exp-lipschitz": _cmd_lipschitz,
    "exp-nonuniform": _cmd_nonuniform,
    "op-suite": _cmd_suite,
    "bch-order": _cmd_bch,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParatorusError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
