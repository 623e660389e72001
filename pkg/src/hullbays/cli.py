"""Command line: ``hullbays {extract,train,eval,sweep}``.

Options may also come from a JSON config file (``--config``) whose keys are
the long option names with dashes replaced by underscores; command-line flags
win over the file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .dataset import DEFAULT_THRESHOLD
from .errors import HullbaysError
from .mlp import TrainConfig

IO_ERROR_EXIT = 11

DEFAULTS = {
    "threshold": DEFAULT_THRESHOLD,
    "limit": None,
    "workers": 1,
    "learning_rate": 0.8,
    "momentum": 0.7,
    "epochs": 50,
    "hidden": 110,
    "hidden_dims": list(pipeline.DEFAULT_HIDDEN_DIMS),
    "seed": 0,
    "no_shuffle": False,
    "patience": None,
}


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _add_training_flags(p):
    p.add_argument("--learning-rate", type=float, help="default 0.8")
    p.add_argument("--momentum", type=float, help="default 0.7")
    p.add_argument("--epochs", type=int, help="default 50")
    p.add_argument("--seed", type=int, help="default 0")
    p.add_argument("--no-shuffle", action="store_true", default=None)
    p.add_argument("--patience", type=int, help="stop after this many epochs without training-accuracy gain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hullbays", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, help="JSON file of option defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="binarise IDX images and write the 125-feature matrix")
    p.add_argument("--images", type=Path, required=True)
    p.add_argument("--labels", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--threshold", type=int, help="object iff gray > threshold (default 127)")
    p.add_argument("--limit", type=int, help="keep only the first N samples")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("train", help="train an MLP on a feature file")
    p.add_argument("--features", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="model file")
    p.add_argument("--log", type=Path, help="per-epoch metrics CSV")
    p.add_argument("--hidden", type=int, help="hidden units (default 110)")
    _add_training_flags(p)

    p = sub.add_parser("eval", help="evaluate a model on a feature file")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--features", type=Path, required=True)
    p.add_argument("--out", type=Path, help="JSON report")
    p.add_argument("--confusion", type=Path, help="confusion matrix CSV")

    p = sub.add_parser("sweep", help="train and evaluate one model per hidden size")
    p.add_argument("--train-features", type=Path, required=True)
    p.add_argument("--test-features", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="sweep CSV")
    p.add_argument("--hidden-dims", type=_int_list, help="e.g. 80,85,90 (default 80..120 step 5)")
    p.add_argument("--models-dir", type=Path)
    p.add_argument("--workers", type=int)
    _add_training_flags(p)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags (in rising priority)."""
    opts = dict(DEFAULTS)
    if args.config is not None:
        opts.update(json.loads(args.config.read_text()))
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    return opts


def train_config(opts: dict, hidden: int) -> TrainConfig:
    return TrainConfig(
        learning_rate=opts["learning_rate"],
        momentum=opts["momentum"],
        epochs=opts["epochs"],
        hidden_dim=hidden,
        seed=opts["seed"],
        shuffle=not opts["no_shuffle"],
        patience=opts["patience"],
    )


def run(opts: dict) -> int:
    cmd = opts["command"]
    if cmd == "extract":
        pipeline.run_extract(
            opts["images"], opts["labels"], opts["out"],
            threshold=opts["threshold"], limit=opts["limit"], workers=opts["workers"],
        )
    elif cmd == "train":
        pipeline.run_train(opts["features"], train_config(opts, opts["hidden"]), opts["out"], opts.get("log"))
    elif cmd == "eval":
        report = pipeline.run_eval(opts["model"], opts["features"])
        if opts.get("out"):
            Path(opts["out"]).write_text(report.to_json())
        if opts.get("confusion"):
            Path(opts["confusion"]).write_text(report.confusion_csv())
        print(report.summary())
    elif cmd == "sweep":
        rows = pipeline.run_sweep(
            opts["train_features"], opts["test_features"], opts["hidden_dims"],
            train_config(opts, opts["hidden"]), opts["out"],
            workers=opts["workers"], model_dir=opts.get("models_dir"),
        )
        for h, test_acc, train_acc, epochs, seed in rows:
            print(f"{h:4d}  test {test_acc:6.2f}%  train {train_acc:6.2f}%  ({epochs} epochs, seed {seed})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(resolve(args))
    except HullbaysError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
