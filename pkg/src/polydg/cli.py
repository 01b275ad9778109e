"""Command-line interface: mesh generation, runs, convergence, norms."""

import argparse
import configparser
import os
import sys

import numpy as np

from . import cases, discretization, harness, mesh as meshmod
from .errors import (ConfigurationError, InadmissibleStateError,
                     InvalidParameterError, NumericalFailureError,
                     PredictorDivergenceError)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

CONFIG_KEYS = ("order", "h", "seed", "tf", "cfl", "threads", "out_dir",
               "mu", "reduced", "backend", "output_every")


def _load_config(path, case):
    """Flat key=value file; [<case>] sections override the defaults."""
    if not os.path.exists(path):
        raise ConfigurationError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            text = fh.read()
        # allow a bare key=value preamble before any section header
        cp.read_string("[DEFAULT]\n" + text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from exc
    out = dict(cp.defaults())
    if case and cp.has_section(case):
        out.update(dict(cp.items(case)))
    for k in out:
        if k not in CONFIG_KEYS:
            raise ConfigurationError(f"unknown config key {k!r} in {path}")
    return out


def _merge(args, cfg):
    """Explicit command-line flags win over config-file values."""
    conv = {"order": int, "h": str, "seed": int, "tf": float, "cfl": float,
            "threads": int, "out_dir": str, "mu": float,
            "reduced": lambda s: s.lower() in ("1", "true", "yes"),
            "backend": str, "output_every": int}
    for key, fn in conv.items():
        if getattr(args, key, None) is None and key in cfg:
            try:
                setattr(args, key, fn(cfg[key]))
            except ValueError as exc:
                raise ConfigurationError(
                    f"bad config value {key}={cfg[key]!r}") from exc


def _parse_h_list(spec):
    try:
        return [float(tok) for tok in str(spec).split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"bad mesh-size list {spec!r}") from exc


def _get_case(args):
    try:
        return cases.get_case(args.case, mu=args.mu, reduced=args.reduced)
    except TypeError:
        return cases.get_case(args.case)


def _print_norms(l2, linf, stream=None):
    stream = stream or sys.stdout
    print(f"{'variable':>10} {'L2':>14} {'Linf':>14}", file=stream)
    for var in harness.VARIABLE_NAMES:
        print(f"{var:>10} {l2[var]:>14.6e} {linf[var]:>14.6e}", file=stream)


def cmd_mesh(args):
    cfg = _get_case(args)
    th = _parse_h_list(args.h)[0] if args.h else cfg.target_h
    m = meshmod.generate_mesh(cfg.domain, th, args.seed or cfg.seed,
                              cfg.periodic)
    stats = meshmod.mesh_statistics(m)
    for k, v in stats.items():
        print(f"{k}: {v}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        meshmod.write_mesh_vtk(m, os.path.join(args.out_dir,
                                               f"{args.case}_mesh.vtk"))
    return EXIT_OK


def cmd_run(args):
    cfg = _get_case(args)
    th = _parse_h_list(args.h)[0] if args.h else None
    rep = harness.run(cfg, target_h=th, N=args.order, seed=args.seed,
                      t_final=args.tf, cfl=args.cfl, out_dir=args.out_dir,
                      backend=args.backend,
                      output_every=args.output_every or 0,
                      log_stream=sys.stdout if args.verbose else None)
    print(f"case={rep.case} N={rep.N} cells={rep.n_cells} "
          f"h_max={rep.h_mesh:.4e} h_mean={rep.h_mean:.4e}")
    print(f"steps={rep.n_steps} t_final={rep.t_final:.6e} "
          f"wall={rep.wall_time:.2f}s")
    for k, v in rep.phase_times.items():
        print(f"  time[{k}] = {v:.2f}s")
    if rep.errors_l2 is not None:
        _print_norms(rep.errors_l2, rep.errors_linf)
    return EXIT_OK


def cmd_convergence(args):
    targets = _parse_h_list(args.h) if args.h else (10 / 12, 10 / 18, 10 / 24)
    if len(targets) < 2:
        raise ConfigurationError("convergence needs at least two mesh sizes")
    out_csv = None
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        out_csv = os.path.join(args.out_dir,
                               f"{args.case}_N{args.order}_convergence.csv")
    table = harness.convergence_study(
        args.case, args.order if args.order is not None else 2,
        targets=targets, t_final=args.tf, seed=args.seed or 0,
        out_csv=out_csv, backend=args.backend)
    print(f"case={table.case} N={table.N}")
    print(f"{'h':>12} {'L2_rho':>14} {'order':>8}")
    orders = [None] + table.orders()
    for row, o in zip(table.rows, orders):
        otxt = f"{o:8.3f}" if o is not None else "       -"
        print(f"{row[0]:>12.4e} {row[1]['rho']:>14.6e} {otxt}")
    print(f"least-squares order: {table.fit_order():.3f}")
    if out_csv:
        print(f"wrote {out_csv}")
    return EXIT_OK


def cmd_norms(args):
    cfg = _get_case(args)
    if cfg.exact is None:
        raise ConfigurationError(f"case {args.case} has no exact solution")
    th = _parse_h_list(args.h)[0] if args.h else None
    tf = args.tf if args.tf is not None else cfg.t_final
    if tf == 0.0:
        # norms of the bare initial-condition projection
        _, disc, _, U = cfg.build(target_h=th, N=args.order, seed=args.seed,
                                  backend=args.backend)
        l2, linf = harness.error_norms(disc, U, cfg.exact, cfg.gas, 0.0)
    else:
        rep = harness.run(cfg, target_h=th, N=args.order, seed=args.seed,
                          t_final=tf, cfl=args.cfl, backend=args.backend)
        l2, linf = rep.errors_l2, rep.errors_linf
    _print_norms(l2, linf)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="polydg",
        description="High-order polygonal discontinuous Galerkin flow solver")
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, fn in (("mesh", cmd_mesh), ("run", cmd_run),
                     ("convergence", cmd_convergence), ("norms", cmd_norms)):
        sp = sub.add_parser(verb)
        sp.set_defaults(func=fn)
        sp.add_argument("--case", required=True, choices=cases.CASE_IDS)
        sp.add_argument("--order", type=int, default=None,
                        help="polynomial degree N (0..3)")
        sp.add_argument("--h", default=None,
                        help="target mesh size (comma list for convergence)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--tf", type=float, default=None)
        sp.add_argument("--cfl", type=float, default=None)
        sp.add_argument("--out-dir", dest="out_dir", default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--config", metavar="FILE", default=None)
        sp.add_argument("--mu", type=float, default=None)
        sp.add_argument("--reduced", action="store_const", const=True,
                        default=None, help="use the smaller preset mesh")
        sp.add_argument("--backend", choices=("numba", "numpy"), default=None)
        sp.add_argument("--output-every", dest="output_every", type=int,
                        default=None)
        sp.add_argument("--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            _merge(args, _load_config(args.config, args.case))
        if args.order is not None and not 0 <= args.order <= 3:
            raise ConfigurationError(f"order {args.order} outside 0..3")
        if args.threads:
            os.environ["OMP_NUM_THREADS"] = str(args.threads)
            try:
                import numba
                numba.set_num_threads(args.threads)
            except (ImportError, ValueError):
                pass
        if args.reduced is None:
            args.reduced = False
        return args.func(args)
    except (ConfigurationError, InvalidParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InadmissibleStateError, PredictorDivergenceError,
            NumericalFailureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
