"""Command-line driver.

Exit codes: 0 success, 2 usage or config error, 3 runtime numeric error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import harness
from .config import ConfigError, ExperimentConfig, load_config
from .maps import ChaoticMap, MapOverflowError, NoFixedPointError, State2, distance

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
SEED_ENV = "CHAOS_TARGET_SEED"

BATCH_COLUMNS = ("n_steps", "mu", "epsilon", "best", "worst", "mean", "std", "sr_percent", "aven", "n_runs", "seed")
RUN_COLUMNS = ("n_steps", "mu", "epsilon", "run_index", "seed", "best_fitness", "success_generation")


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Shortest text that parses back to the same value; None becomes NA."""
    if v is None:
        return "NA"
    if isinstance(v, int):
        return str(v)
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _parse_pair(text: str, what: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be two comma-separated reals, got {text!r}") from None
    return a, b


def cmd_fixed_point(args) -> int:
    m = ChaoticMap.henon(args.p, args.q)
    try:
        x = m.fixed_point()
    except NoFixedPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    residual = distance(m.step(x), x)
    print(f"{fmt(x.x1)} {fmt(x.x2)}")
    print(f"residual {fmt(residual)}")
    return EXIT_OK


def cmd_uncontrolled(args) -> int:
    try:
        m = ChaoticMap.from_name(args.map, None if args.params is None else _parse_pair(args.params, "--params"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    x0 = State2(*_parse_pair(args.x0, "--x0")) if args.x0 else State2(*{"henon": (0.0, 0.0), "ushio": (0.6, -0.3)}[m.name])
    if args.target.lower() == "fixed-point":
        try:
            target = m.fixed_point()
        except NoFixedPointError as exc:
            raise UsageError(str(exc)) from None
    else:
        target = State2(*_parse_pair(args.target, "--target"))
    eps_values = args.eps or [0.02, 0.001, 0.00001]
    if min(eps_values) <= 0 or args.max_iter < 1:
        raise UsageError("--eps must be positive and --max-iter >= 1")
    rows = harness.uncontrolled_baseline(m, x0, target, eps_values, args.max_iter)
    _emit(_csv_text(("epsilon", "needed_iterations"), rows), args.out)
    return EXIT_OK


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    if os.environ.get(SEED_ENV):
        try:
            cfg.seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an unsigned integer") from None
    if args.seed is not None:
        cfg.seed = args.seed
    if not 0 <= cfg.seed < 2**64:
        raise UsageError("seed must be an unsigned 64-bit integer")
    if getattr(args, "format", None):
        cfg.format = args.format
    return cfg


def _row_dict(row: harness.SweepRow) -> dict:
    d = {"n_steps": row.n_steps, "mu": row.mu, "epsilon": row.epsilon}
    s, m = row.stats, row.metrics
    d.update(
        best=s.best if s else None,
        worst=s.worst if s else None,
        mean=s.mean if s else None,
        std=s.std if s else None,
        sr_percent=m.sr_percent if m else None,
        aven=m.aven if m else None,
        n_runs=s.n_runs if s else None,
        seed=row.seed,
    )
    d["n_success"] = m.n_success if m else None
    d["n_overflow"] = s.n_overflow if s else None
    d["error"] = row.error
    return d


def _run_dicts(rows) -> list[dict]:
    out = []
    for row in rows:
        for i, r in enumerate(row.records or ()):
            out.append(
                {
                    "n_steps": row.n_steps,
                    "mu": row.mu,
                    "epsilon": row.epsilon,
                    "run_index": i,
                    "seed": r.seed,
                    "best_fitness": r.best_fitness,
                    "success_generation": r.success_generation,
                }
            )
    return out


def cmd_batch(args) -> int:
    cfg = _load(args)
    keep = bool(args.runs_out)
    rows = harness.sweep(
        cfg.base_problem(), cfg.tlbo_config(), cfg.horizons, cfg.mus, cfg.epsilons,
        cfg.n_runs, cfg.seed, jobs=args.jobs, keep_records=keep,
    )
    dicts = [_row_dict(r) for r in rows]
    if cfg.format == "json":
        doc = {"std_convention": harness.STD_CONVENTION, "map": cfg.map.name, "params": list(cfg.map.params), "rows": dicts}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _csv_text(BATCH_COLUMNS, ([d[c] for c in BATCH_COLUMNS] for d in dicts))
    _emit(text, args.out)
    if keep:
        runs = _run_dicts(rows)
        if cfg.format == "json":
            Path(args.runs_out).write_text(json.dumps(runs, indent=2) + "\n", encoding="utf-8")
        else:
            Path(args.runs_out).write_text(
                _csv_text(RUN_COLUMNS, ([r[c] for c in RUN_COLUMNS] for r in runs)), encoding="utf-8"
            )
    for row in rows:
        if row.error:
            print(f"error: N={row.n_steps} mu={fmt(row.mu)} eps={fmt(row.epsilon)}: {row.error}", file=sys.stderr)
    return EXIT_NUMERIC if any(r.error for r in rows) else EXIT_OK


def curve_filename(n_steps: int, mu: float) -> str:
    return f"curve_N{n_steps}_mu{fmt(mu)}.csv"


def cmd_curves(args) -> int:
    cfg = _load(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    base, tcfg = cfg.base_problem(), cfg.tlbo_config()
    eps = cfg.epsilons[0]
    for n in sorted(set(cfg.horizons)):
        for mu in sorted(set(cfg.mus)):
            p = base.with_params(horizon=n, mu=mu, epsilon=eps)
            res = harness.run_batch(p, tcfg, cfg.n_runs, cfg.seed, jobs=args.jobs)
            points = harness.mean_curve(res.records)
            text = _csv_text(("generation", "mean_best_fitness"), ((c.generation, c.mean_best_fitness) for c in points))
            (out_dir / curve_filename(n, mu)).write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaos-target", description="Direct chaotic orbits to a target with TLBO.")
    sub = parser.add_subparsers(dest="command", required=True)

    fp = sub.add_parser("fixed-point", help="positive fixed point of the Hénon map")
    fp.add_argument("--p", type=float, default=1.4)
    fp.add_argument("--q", type=float, default=0.3)
    fp.set_defaults(func=cmd_fixed_point)

    un = sub.add_parser("uncontrolled", help="iterations needed without control")
    un.add_argument("--map", default="henon", choices=("henon", "ushio"))
    un.add_argument("--params", help="two comma-separated map parameters")
    un.add_argument("--x0", help="initial state 'x1,x2'")
    un.add_argument("--target", default="fixed-point", help="'x1,x2' or fixed-point")
    un.add_argument("--eps", type=float, action="append", help="repeatable; default 0.02, 0.001, 1e-5")
    un.add_argument("--max-iter", type=int, default=10_000_000)
    un.add_argument("--out")
    un.set_defaults(func=cmd_uncontrolled)

    for name, func, help_text in (
        ("batch", cmd_batch, "batch statistics for every (N, mu, epsilon) cell"),
        ("sweep", cmd_batch, "alias of batch"),
    ):
        b = sub.add_parser(name, help=help_text)
        b.add_argument("--config", required=True)
        b.add_argument("--out")
        b.add_argument("--format", choices=("csv", "json"))
        b.add_argument("--seed", type=_u64)
        b.add_argument("--jobs", type=int, default=1)
        b.add_argument("--runs-out", help="also write one line per run to this file")
        b.set_defaults(func=func)

    cv = sub.add_parser("curves", help="mean convergence curve per (N, mu) cell")
    cv.add_argument("--config", required=True)
    cv.add_argument("--out", required=True, help="output directory")
    cv.add_argument("--seed", type=_u64)
    cv.add_argument("--jobs", type=int, default=1)
    cv.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MapOverflowError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
