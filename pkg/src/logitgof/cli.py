"""Command-line front end.

A run is described by a JSON config file, by flags, or by a config file
with flag overrides on top. Exit codes are scripting-stable: 0 success,
1 usage or configuration problem, 2 data validation problem, 3 numerical
failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, DataError, NumericalError
from .experiment import DEFAULT_NUM_SIMULATIONS, ExperimentConfig, emit_report, run_experiment

_STAT_HELP = (
    "comma-separated statistic labels. Plain: deviance, freeman-tukey, "
    "pearson-chi2, euclidean, half-abs-sum. Ordered: ks:<o> and kuiper:<o> "
    "with <o> one of mu-full, mu-tested, residual, given. Grouped: "
    "hl:<groups>:mu-full or hl:<groups>:mu-tested."
)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through our exit-code scheme."""

    def error(self, message):
        raise ConfigError(message)


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> _Parser:
    p = _Parser(
        prog="logitgof",
        description=(
            "Goodness-of-fit tests for logistic regression with "
            "simulation-exact P-values."
        ),
    )
    p.add_argument("--config", metavar="PATH", help="JSON config file; flags override its keys")
    p.add_argument("--dataset", metavar="SRC", help="CSV path, or 'finney' for the built-in dataset")
    p.add_argument("--dependent", metavar="NAME", help="name of the 0/1 outcome column")
    p.add_argument("--tested", metavar="NAMES",
                   help="comma-separated tested-model covariates; empty for intercept-only")
    p.add_argument("--full", metavar="NAMES",
                   help="comma-separated full-model covariates; default: all columns")
    p.add_argument("--inject-uniform", type=int, metavar="N",
                   help="append N pseudo-random uniform covariates u1..uN")
    p.add_argument("--inject-seed", type=int, metavar="SEED",
                   help="seed for the injected covariates")
    p.add_argument("--statistics", metavar="LABELS", help=_STAT_HELP)
    p.add_argument("--num-simulations", type=int, metavar="I",
                   help=f"Monte-Carlo sample size (default {DEFAULT_NUM_SIMULATIONS})")
    p.add_argument("--master-seed", type=int, metavar="SEED",
                   help="seed for the simulation stream (default 0)")
    p.add_argument("--workers", type=int, default=1, metavar="W",
                   help="worker threads; results are identical for any value")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text",
                   help="report format (default text)")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--progress", action="store_true",
                   help="print simulation progress to stderr")
    return p


def _load_config_doc(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return doc


def _merge(args) -> ExperimentConfig:
    doc = _load_config_doc(args.config) if args.config else {}
    if args.dataset is not None:
        doc["dataset"] = args.dataset
    if args.dependent is not None:
        doc["dependent"] = args.dependent
    if args.tested is not None:
        doc["tested"] = _split_list(args.tested)
    if args.full is not None:
        doc["full"] = _split_list(args.full)
    if args.inject_uniform is not None:
        doc["inject_uniform"] = args.inject_uniform
    if args.inject_seed is not None:
        doc["inject_seed"] = args.inject_seed
    if args.statistics is not None:
        doc["statistics"] = _split_list(args.statistics)
    if args.num_simulations is not None:
        doc["num_simulations"] = args.num_simulations
    if args.master_seed is not None:
        doc["master_seed"] = args.master_seed
    return ExperimentConfig.from_dict(doc)


def _progress_printer(done: int, total: int) -> None:
    sys.stderr.write(f"\r{done}/{total} simulations")
    if done >= total:
        sys.stderr.write("\n")
    sys.stderr.flush()


def _run(argv) -> int:
    args = build_parser().parse_args(argv)
    cfg = _merge(args)
    report = run_experiment(
        cfg,
        workers=args.workers,
        progress=_progress_printer if args.progress else None,
    )
    payload = emit_report(report, args.format)
    if args.output:
        try:
            with open(args.output, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            raise ConfigError(f"cannot write {args.output}: {exc}") from None
    else:
        sys.stdout.buffer.write(payload)
    return 0


def main(argv=None) -> int:
    try:
        return _run(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
