"""Command-line entry point: ``nippas {run, experiment, eval, oracle}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__, kernels
from .driver import run
from .experiments import EXPERIMENTS, run_experiment
from .io import ConfigError, dump_surrogate, load_config, load_surrogate, read_points, write_csv, write_history
from .oracles import SUITES

log = logging.getLogger("nippas")

EXIT_OK, EXIT_ERROR, EXIT_STALLED = 0, 1, 2


def _manifest(path, **kw):
    doc = {"version": __version__, "kernel_backend": kernels.BACKEND, **kw}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, default=str)


def cmd_run(args) -> int:
    try:
        parsed = load_config(args.config, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    os.makedirs(args.out_dir, exist_ok=True)
    t0 = time.perf_counter()
    result = run(parsed.run)
    files = {"history": os.path.join(args.out_dir, "history.csv"),
             "surrogate": os.path.join(args.out_dir, "surrogate.json"),
             "manifest": os.path.join(args.out_dir, "manifest.json")}
    write_history(files["history"], result.history, parsed.run.domain.dim)
    dump_surrogate(result.state, result.samples, files["surrogate"])
    _manifest(files["manifest"], command="run", config=parsed.text, seeds=parsed.seeds,
              status=result.status, message=result.message, n_nodes=len(result.samples),
              resyncs=result.state.resyncs, outputs=files, seconds=time.perf_counter() - t0)
    print(f"{result.status}: {len(result.samples)} nodes, "
          f"last residual max {result.history[-1].residual_max:.3e}" if result.history else result.status)
    if result.message:
        print(result.message, file=sys.stderr)
    if result.status == "failed":
        return EXIT_ERROR
    return EXIT_STALLED if result.status == "stalled" else EXIT_OK


def cmd_experiment(args) -> int:
    if args.name not in EXPERIMENTS:
        print(f"unknown experiment {args.name!r}; valid: {', '.join(EXPERIMENTS)}", file=sys.stderr)
        return EXIT_ERROR
    kw = {"full_scale": args.full_scale}
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.max_nodes is not None:
        kw["max_nodes"] = args.max_nodes
    if args.n_mc is not None:
        kw["n_mc"] = args.n_mc
    if args.pdfs is not None:
        if args.name != "uad-pdf-study":
            print("--pdfs applies only to uad-pdf-study", file=sys.stderr)
            return EXIT_ERROR
        kw["n_pdfs"] = args.pdfs
    t0 = time.perf_counter()
    res = run_experiment(args.name, args.out_dir, **kw)
    path = os.path.join(args.out_dir, f"{args.name}_manifest.json")
    _manifest(path, command="experiment", name=args.name, options=kw, summary=res.summary,
              outputs=res.files, seconds=time.perf_counter() - t0)
    print(json.dumps(res.summary, indent=1, default=str))
    for f in res.files + [path]:
        print(f"wrote {f}")
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        sur = load_surrogate(args.surrogate)
        P = read_points(args.points)
        if P.size and P.shape[1] != sur.dim:
            raise ValueError(f"points have dimension {P.shape[1]}, surrogate has {sur.dim}")
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    U = sur(P) if P.size else np.zeros((0, sur.coeffs.shape[1]))
    header = [f"u{j}" for j in range(U.shape[1])]
    if args.output:
        write_csv(args.output, header, U.tolist())
    else:
        import csv
        w = csv.writer(sys.stdout)
        w.writerow(header)
        for row in U:
            w.writerow([f"{v:.17e}" for v in row])
    return EXIT_OK


def cmd_oracle(args) -> int:
    ok = True
    for name in args.suites:
        for c in SUITES[name]():
            flag = "PASS" if c.passed else "FAIL"
            print(f"{flag}  {name:<10} {c.name}: {c.value:.3e} (tol {c.tol:.1e})")
            ok &= c.passed
    return EXIT_OK if ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nippas", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="adaptive run from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--out-dir", default="nippas_out")
    r.add_argument("--seed", type=int, default=None, help="override [run] seed")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="named convergence study")
    e.add_argument("name", help=", ".join(EXPERIMENTS))
    e.add_argument("--out-dir", default="nippas_out")
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--full-scale", action="store_true", help="published sizes instead of desk scale")
    e.add_argument("--pdfs", type=int, default=None, help="ensemble size for uad-pdf-study")
    e.add_argument("--max-nodes", type=int, default=None)
    e.add_argument("--n-mc", type=int, default=None)
    e.set_defaults(func=cmd_experiment)

    v = sub.add_parser("eval", help="evaluate a dumped surrogate at points from a CSV file")
    v.add_argument("surrogate")
    v.add_argument("points")
    v.add_argument("-o", "--output", default=None)
    v.set_defaults(func=cmd_eval)

    o = sub.add_parser("oracle", help="run brute-force cross-checks")
    o.add_argument("suites", nargs="*", choices=list(SUITES), default=list(SUITES))
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # surface as a diagnostic and exit code 1
        log.debug("unhandled error", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
