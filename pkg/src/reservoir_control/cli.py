"""Command-line front end: ``simulate``, ``batch`` and ``compare``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .controller import VARIANTS
from .errors import InvalidConfigError
from .harness import (compare_variants, rmse, run_batch, run_episode, write_metadata, write_rmse_csv,
                      write_summary_csv, write_trace_csv)

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 2, 3


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, args.profile)
    out = _out_dir(args.out)
    trace = run_episode(cfg, args.seed)
    stem = f"trace_{cfg.fingerprint()[:12]}_seed{args.seed}"
    write_trace_csv(trace, out / f"{stem}.csv", learner_columns=args.learner_trace)
    divergence = {} if trace.completed else {args.seed: trace.message}
    write_metadata(out / f"{stem}.meta.json", cfg, [args.seed], divergence, status=trace.status)
    if not trace.completed:
        print(f"diverged: seed {args.seed}: {trace.message}", file=sys.stderr)
        return EXIT_DIVERGED
    value = rmse(trace, cfg.scenario.skip_ticks, cfg.scenario.metric_output)
    print(f"rmse {value:.6g}")
    return EXIT_OK


def cmd_batch(args) -> int:
    cfg = load_config(args.config, args.profile)
    out = _out_dir(args.out)
    summary = run_batch(cfg, args.seeds, args.base_seed, workers=args.workers)
    stem = f"batch_{cfg.fingerprint()[:12]}_base{args.base_seed}_n{args.seeds}"
    write_summary_csv(summary, out / f"{stem}_summary.csv")
    write_rmse_csv(summary, out / f"{stem}_rmse.csv")
    write_metadata(out / f"{stem}.meta.json", cfg, summary.seeds, summary.diverged,
                   completed=summary.n_completed)
    for seed, msg in summary.diverged.items():
        print(f"diverged: seed {seed}: {msg}", file=sys.stderr)
    print(f"completed {summary.n_completed}/{len(summary.seeds)}  "
          f"rmse {summary.mean_rmse:.6g} +/- {summary.std_rmse:.6g}")
    return EXIT_OK if summary.n_completed else EXIT_DIVERGED


def format_table(rows) -> str:
    lines = [f"{'variant':<12}{'mean rmse':>12}{'std':>12}{'vs linear+pd':>15}{'completed':>11}"]
    for r in rows:
        lines.append(f"{r['variant']:<12}{r['mean_rmse']:>12.4g}{r['std_rmse']:>12.4g}"
                     f"{r['improvement_pct']:>14.1f}%{r['completed']:>11d}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    cfg = load_config(args.config, args.profile)
    out = _out_dir(args.out)
    rows = compare_variants(cfg, args.variants, args.seeds, args.base_seed, workers=args.workers)
    stem = f"compare_{cfg.fingerprint()[:12]}_base{args.base_seed}_n{args.seeds}"
    with (out / f"{stem}.csv").open("w") as fh:
        fh.write("variant,mean_rmse,std_rmse,improvement_pct,completed,diverged\n")
        for r in rows:
            fh.write(f"{r['variant']},{r['mean_rmse']!r},{r['std_rmse']!r},{r['improvement_pct']!r},"
                     f"{r['completed']},{r['diverged']}\n")
    write_metadata(out / f"{stem}.meta.json", cfg, list(range(args.base_seed, args.base_seed + args.seeds)),
                   variants=list(args.variants))
    print(format_table(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reservoir-control", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="scenario INI file")
        p.add_argument("--profile", default=None, help="override scenario.profile")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("simulate", help="run one seeded episode")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learner-trace", action="store_true", help="add RLS error and weight norm columns")
    p.set_defaults(func=cmd_simulate)

    for name, func, helptext in (("batch", cmd_batch, "run a multi-seed batch"),
                                 ("compare", cmd_compare, "compare controller variants on identical seeds")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--seeds", type=int, default=100, help="number of seeds")
        p.add_argument("--base-seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        if name == "compare":
            p.add_argument("--variants", nargs="+", choices=VARIANTS,
                           default=["esn+pd", "linear+pd", "pd"])
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
