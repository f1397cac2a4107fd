"""Command line entry point: ``conesobolev validate|run|batch``.

Exit status is 0 when every requested task ran, 1 when a configuration or
its exponents are invalid, and 2 when at least one task raised an error.
Skipped tasks do not change the exit status.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import check_scenario, load_config
from .errors import ConfigError
from .report import emit_report, run_scenario

EXIT_OK, EXIT_INVALID, EXIT_TASK_ERROR = 0, 1, 2


def _formats(text):
    out = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in out if f not in ("text", "csv")]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"formats must be a subset of text,csv (got {text!r})")
    return out


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="conesobolev", description="Weighted Sobolev inequalities on convex cones.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multiple=False):
        if multiple:
            p.add_argument("--config", action="append", required=True,
                           help="scenario file or directory of *.ini files (repeatable)")
            p.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: one per scenario, capped by CPU count)")
        else:
            p.add_argument("--config", required=True, help="scenario file")
        p.add_argument("--seed", type=_seed, default=None)
        p.add_argument("--samples", type=_positive, default=None)
        p.add_argument("--grid", type=_positive, default=None)

    v = sub.add_parser("validate", help="parse a scenario and check its exponents")
    common(v)
    for name, multiple in (("run", False), ("batch", True)):
        p = sub.add_parser(name, help=f"{name} scenario tasks and write reports")
        common(p, multiple)
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument("--format", type=_formats, default=("text", "csv"), help="comma list from text,csv")
    return parser


def _load(path, args):
    s = load_config(path)
    return s.with_knobs(seed=args.seed, samples=args.samples, grid=args.grid)


def _run_one(scenario, out, formats):
    report = run_scenario(scenario)
    files = emit_report(report, out, formats)
    status = EXIT_TASK_ERROR if report.failed else EXIT_OK
    summary = [f"{r.task}: {r.status}" for r in report.results]
    return status, files, summary


def _expand(paths):
    found = []
    for p in paths:
        if os.path.isdir(p):
            found += sorted(os.path.join(p, f) for f in os.listdir(p) if f.endswith(".ini"))
        else:
            found.append(p)
    return found


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            s = _load(args.config, args)
            exps, msg = check_scenario(s)
            if exps is None:
                print(f"{s.name}: invalid exponents, {msg}")
            else:
                print(f"{s.name}: valid (q={exps.q:.12g}, n_a={exps.n_a:.12g})")
            return EXIT_OK if exps is not None else EXIT_INVALID
        if args.command == "run":
            s = _load(args.config, args)
            status, files, summary = _run_one(s, args.out, args.format)
            for line in summary:
                print(line)
            for f in files:
                print(f"wrote {f}")
            return status
        scenarios = [_load(p, args) for p in _expand(args.config)]
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        print("error: scenario names in a batch must be unique", file=sys.stderr)
        return EXIT_INVALID
    jobs = args.jobs or max(1, min(len(scenarios), os.cpu_count() or 1))
    if jobs == 1:
        outcomes = [_run_one(s, args.out, args.format) for s in scenarios]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, s, args.out, args.format) for s in scenarios]
            outcomes = [f.result() for f in futures]
    worst = EXIT_OK
    for s, (status, files, summary) in zip(scenarios, outcomes):
        print(f"[{s.name}] " + "; ".join(summary))
        worst = max(worst, status)
    return worst


if __name__ == "__main__":
    sys.exit(main())
