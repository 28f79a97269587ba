"""Command-line front end: ``lapreg <subcommand> [--config PATH] ...``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import harness
from .errors import ConfigError, InvalidArgumentError, LapRegError, NumericalFailureError
from .graph import fiedler_value, generate_geometric_graph, is_connected, laplacian, write_edge_list
from .solver import LAPLACIAN, RIDGE
from .synth import block_rng

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _gen_graph(cfg, args):
    threshold = cfg.threshold_grid[0]
    g = generate_geometric_graph(cfg.m, cfg.bandwidth, threshold, block_rng(cfg.master_seed, "graph"))
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "graph.txt")
    write_edge_list(g, path)
    connected = is_connected(g)
    lam2 = fiedler_value(laplacian(g)) if cfg.m >= 2 else float("nan")
    print(f"wrote {path}: m={cfg.m} connected={connected} lambda2={lam2:.6g}")


def _check_args(cfg, args):
    alpha, n, trial = (getattr(args, name, None) for name in ("alpha", "n", "trial"))
    if alpha is not None and not alpha >= 0:
        raise ConfigError(f"--alpha must be nonnegative, got {alpha}")
    if n is not None and n < cfg.k:
        raise ConfigError(f"--n must be at least k={cfg.k}, got {n}")
    if trial is not None and trial < 0:
        raise ConfigError(f"--trial must be nonnegative, got {trial}")


def _simulate(cfg, args):
    res = harness.simulate(cfg, n=args.n, alpha=args.alpha, kind=args.kind, trial=args.trial)
    row = res.rows[0]
    print(f"{row.kind} n={row.n} alpha={row.alpha:.6g} error={row.empirical_error:.6g} "
          f"bound={row.bound_value:.6g} status={row.status}")
    if row.status != "ok":
        raise NumericalFailureError(row.status)


def _sweep_n(cfg, args):
    res = harness.sweep_sample_size(cfg)
    for s in res.summary:
        print(f"{s['kind']:>9} n={s['n']:>5} alpha={s['alpha']:.3g} "
              f"error={s['error_mean']:.4g}±{s['error_std']:.2g} bound={s['bound_mean']:.4g}")
    print(f"wrote {res.paths['csv']}")


def _sweep_density(cfg, args):
    res = harness.sweep_density(cfg, n=args.n)
    for s in res.summary:
        print(f"threshold={s['threshold']:.3g} lambda2={s['lambda2_mean']:.4g} "
              f"error={s['error_mean']:.4g} bound={s['bound_mean']:.4g} connected={s['connected_trials']}")
    print(f"wrote {res.paths['csv']}")


def _tune_alpha(cfg, args):
    n = cfg.reference_n if args.n is None else args.n
    os.makedirs(cfg.out_dir, exist_ok=True)
    for kind in ([args.kind] if args.kind else [LAPLACIAN, RIDGE]):
        tr = harness.tune_alpha(cfg, kind, n)
        path = os.path.join(cfg.out_dir, f"tune_{kind}_n{n}.csv")
        harness.write_tuning_table(tr, path)
        print(f"{kind}: best alpha={tr.best_alpha:.6g} (n={n}); wrote {path}")


def _compare(cfg, args):
    res = harness.compare_estimators(cfg, n=args.n, estimator_graph=args.estimator_graph,
                                     theta_prior=args.theta_prior)
    s = res.summary[0]
    print(f"n={s['n']} laplacian={s['mean_error_laplacian']:.4g} ridge={s['mean_error_ridge']:.4g} "
          f"wins={s['laplacian_wins']}/{s['laplacian_wins'] + s['ridge_wins'] + s['ties']} "
          f"sign-test p={s['sign_test_p']:.3g}")
    print(f"wrote {res.paths['csv']}")


def _check_lemmas(cfg, args):
    res = harness.check_lemmas(cfg, n=args.n)
    for key, value in res.summary[0].items():
        print(f"{key}: {value}")
    print(f"wrote {res.paths['csv']}")


COMMANDS = {
    "gen-graph": (_gen_graph, "write a random geometric graph as an edge list"),
    "simulate": (_simulate, "run a single seeded trial"),
    "sweep-n": (_sweep_n, "error and bound versus sample size"),
    "sweep-density": (_sweep_density, "error and Fiedler value versus graph threshold"),
    "tune-alpha": (_tune_alpha, "grid-search the regularization parameter"),
    "compare": (_compare, "paired Laplacian versus ridge comparison"),
    "check-lemmas": (_check_lemmas, "empirical lemma diagnostics"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="lapreg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON object of experiment settings")
        p.add_argument("--seed", type=int, help="master RNG seed (unsigned 64-bit)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--trials", type=int, help="repetitions per grid point")
        if name in ("simulate", "sweep-density", "tune-alpha", "compare", "check-lemmas"):
            p.add_argument("--n", type=int, help="sample size (default: grid point nearest 500)")
        if name in ("simulate", "tune-alpha"):
            p.add_argument("--kind", choices=[LAPLACIAN, RIDGE], default=LAPLACIAN if name == "simulate" else None)
        if name == "simulate":
            p.add_argument("--alpha", type=float, help="regularization (default: smallest admissible)")
            p.add_argument("--trial", type=int, default=0)
        if name == "compare":
            p.add_argument("--estimator-graph", choices=["data", "identity"], default="data")
            p.add_argument("--theta-prior", choices=["smooth", "iid"], default="smooth")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = harness.load_config(args.config, master_seed=args.seed, out_dir=args.out, trials=args.trials)
        _check_args(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        COMMANDS[args.command][0](cfg, args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LapRegError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
