"""Command-line entry point.

Subcommands::

    dmccrf train      --config run.yaml [--edge chain|dm|both] [--output DIR]
    dmccrf predict    --model DIR/model-dm.txt --input new.csv --output pred.csv
    dmccrf benchmark  --config run.yaml [--output DIR] [--jobs N]
    dmccrf grid       [--output grid.csv]
    dmccrf synth      --seed 0 --output series.csv [--n 240]

Exit status is 0 on success, 1 on any operational failure and 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_config
from .dataset import (
    chronological_split,
    load_csv,
    load_features,
    scale_apply,
    scale_fit,
    write_csv,
)
from .elm import crossfit_predictions, scenario_grid, train_kernel_elm
from .errors import DmccrfError
from .evaluation import run_scenarios
from .gcrf import Edge
from .inference import predict_with_std
from .modelfile import CrfModel, load_model, save_model
from .synthetic import SCHEMA, ar1_dataset
from .training import fit

log = logging.getLogger("dmccrf")

BASELINE_FILE = "baseline.npz"


class StageError(Exception):
    """An operational failure tagged with the pipeline stage it came from."""

    def __init__(self, stage, exc):
        self.stage = stage
        super().__init__(f"{stage}: {exc}")


def _stage(stage, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except (DmccrfError, ConfigError, OSError, ValueError, ArithmeticError) as exc:
        raise StageError(stage, exc) from exc


def _edges(arg, default):
    if arg is None:
        return default
    return (Edge.CHAIN, Edge.DM) if arg == "both" else (Edge.parse(arg),)


def model_filename(edge):
    return f"model-{Edge.parse(edge).value}.txt"


def cmd_train(args):
    cfg = _stage("config", load_config, args.config)
    out_dir = Path(args.output) if args.output else cfg.output_dir
    data = _stage("parse", load_csv, cfg.csv, cfg.schema)
    train, _ = _stage("split", chronological_split, data, cfg.train_fraction)
    scaling = scale_fit(train)
    strain = scale_apply(train, scaling)
    baseline = _stage("solve", train_kernel_elm, strain, cfg.elm)
    if cfg.crossfit_folds:
        f_train = _stage(
            "solve", crossfit_predictions, strain.features, strain.targets, cfg.elm, cfg.crossfit_folds
        )
    else:
        f_train = baseline.predict(strain.features)

    fits = {}
    for edge in _edges(args.edge, cfg.edges):
        fits[edge] = _stage("fit", fit, strain.targets, f_train, edge, cfg.train)

    out_dir.mkdir(parents=True, exist_ok=True)
    baseline.save(out_dir / BASELINE_FILE)
    for edge, result in fits.items():
        model = CrfModel(
            edge, result.params, scaling, cfg.schema, cfg.elm, BASELINE_FILE,
            result.final_log_likelihood,
        )
        path = out_dir / model_filename(edge)
        save_model(path, model)
        log.info(
            "%s: alpha=%s edge_weight=%.6g loglik=%.6g (%d iterations, converged=%s) -> %s",
            edge.value, result.params.alpha.tolist(), result.params.edge_weight,
            result.final_log_likelihood, result.iterations_used, result.converged, path,
        )
    return 0


def cmd_predict(args):
    model = _stage("model", load_model, args.model)
    baseline = _stage("model", model.load_baseline, args.model)
    stamps, X = _stage("parse", load_features, args.input, model.schema)
    f = _stage("solve", baseline.predict, model.scaling.scale_features(X))
    mean, std = _stage("solve", predict_with_std, f, model.params, model.edge)

    scale = model.scaling.target_range
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["timestamp", "baseline", "prediction", "std"])
    for t, b, m, s in zip(
        stamps, model.scaling.unscale_target(f), model.scaling.unscale_target(mean), std * scale
    ):
        w.writerow([t, repr(float(b)), repr(float(m)), repr(float(s))])
    _write(args.output, out.getvalue())
    return 0


def cmd_benchmark(args):
    cfg = _stage("config", load_config, args.config)
    out_dir = Path(args.output) if args.output else cfg.output_dir
    data = _stage("parse", load_csv, cfg.csv, cfg.schema)
    train, test = _stage("split", chronological_split, data, cfg.train_fraction)
    report = _stage(
        "benchmark",
        run_scenarios,
        train,
        test,
        cfg.grid,
        cfg.train,
        jobs=args.jobs,
        indices=cfg.grid_indices,
        crossfit_folds=cfg.crossfit_folds,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    _write(out_dir / "report.txt", report.to_text())
    _write(out_dir / "report.csv", report.to_csv())
    sys.stdout.write(report.to_text())
    return 0


def cmd_grid(args):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scenario", "kernel_param", "reg_coeff"])
    for i, c in enumerate(scenario_grid(), 1):
        w.writerow([i, repr(c.kernel_param), repr(c.reg_coeff)])
    if args.output:
        _write(args.output, out.getvalue())
    else:
        sys.stdout.write(out.getvalue())
    return 0


def cmd_synth(args):
    _stage("write", write_csv, args.output, ar1_dataset(args.seed, n=args.n), SCHEMA)
    return 0


def _write(path, text):
    _stage("write", Path(path).write_text, text, encoding="utf-8")


def build_parser():
    p = argparse.ArgumentParser(prog="dmccrf", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="fit the baseline and CRF model(s)")
    t.add_argument("--config", required=True)
    t.add_argument("--edge", choices=["chain", "dm", "both"])
    t.add_argument("--output", help="output directory (overrides output.dir)")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="predict a CSV with a trained model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--input", required=True)
    pr.add_argument("--output", required=True)
    pr.set_defaults(func=cmd_predict)

    b = sub.add_parser("benchmark", help="run the ELM / CCRF / DM-CCRF scenario sweep")
    b.add_argument("--config", required=True)
    b.add_argument("--output", help="output directory (overrides output.dir)")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_benchmark)

    g = sub.add_parser("grid", help="write the baseline scenario grid as CSV")
    g.add_argument("--output")
    g.set_defaults(func=cmd_grid)

    s = sub.add_parser("synth", help="write a synthetic AR(1) series as CSV")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=240)
    s.add_argument("--output", required=True)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error [{exc}]", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
