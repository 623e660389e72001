"""Extract, train, evaluate and sweep workflows over feature files."""

from __future__ import annotations

import csv
import dataclasses
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import mlp
from .dataset import DEFAULT_THRESHOLD, load_split
from .errors import EmptyImage, LayoutVersionMismatch
from .features import BLOCK_SIZE, LAYOUT_VERSION, N_FEATURES, extract_feature_vector, read_feature_matrix, write_feature_matrix
from .report import EvalReport

log = logging.getLogger(__name__)

DEFAULT_HIDDEN_DIMS = tuple(range(80, 121, 5))
SWEEP_COLUMNS = ("hidden_dim", "test_accuracy", "train_accuracy", "epochs", "seed")


def _features_or_zero(img) -> np.ndarray:
    try:
        return extract_feature_vector(img)
    except EmptyImage:
        return np.zeros(N_FEATURES)


def extract_images(images, workers: int = 1) -> np.ndarray:
    """Feature matrix for a stack of binary images, rows in input order."""
    if workers > 1 and len(images) > 1:
        chunk = max(1, len(images) // (workers * 8))
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_features_or_zero, images, chunksize=chunk))
    else:
        rows = [_features_or_zero(img) for img in images]
    return np.array(rows).reshape(len(images), N_FEATURES)


def run_extract(image_path, label_path, out_path, threshold=DEFAULT_THRESHOLD, limit=None, workers=1):
    split = load_split(image_path, label_path, threshold=threshold, limit=limit)
    start = time.perf_counter()
    features = extract_images(split.images, workers)
    elapsed = time.perf_counter() - start
    # a non-degenerate hull always has boundary pixels on the object
    perimeter = features[:, BLOCK_SIZE - 1 :: BLOCK_SIZE]
    log.info(
        "extracted %d samples in %.1fs (%.0f/s); degenerate global hulls: %d, degenerate quadrant blocks: %d",
        len(split),
        elapsed,
        len(split) / max(elapsed, 1e-9),
        int(np.sum(perimeter[:, 0] == 0)),
        int(np.sum(perimeter[:, 1:] == 0)),
    )
    write_feature_matrix(out_path, split.labels, features)
    return features


def run_train(features_path, config: mlp.TrainConfig, model_path, log_path=None):
    labels, features = read_feature_matrix(features_path)

    def on_epoch(metrics):
        log.info("epoch %d: mse %.5f, train accuracy %.2f%%", metrics["epoch"], metrics["mse"], 100 * metrics["accuracy"])

    model, history = mlp.train(features, labels, config, log=on_epoch)
    mlp.save_model(model, model_path)
    if log_path is not None:
        write_training_log(log_path, history)
    return model, history


def write_training_log(path, history) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "mse", "train_accuracy"])
        for row in history:
            w.writerow([row["epoch"], repr(row["mse"]), repr(100 * row["accuracy"])])


def evaluate(model: mlp.MlpModel, labels, features) -> EvalReport:
    return EvalReport.from_predictions(labels, mlp.predict_batch(model, features), model.dims[2])


def run_eval(model_path, features_path) -> EvalReport:
    model = mlp.load_model(model_path)
    if model.feature_layout != LAYOUT_VERSION:
        raise LayoutVersionMismatch(
            f"{model_path}: model trained on layout {model.feature_layout!r}, expected {LAYOUT_VERSION!r}"
        )
    labels, features = read_feature_matrix(features_path)
    return evaluate(model, labels, features)


def _sweep_one(args):
    hidden_dim, config, train, test, model_dir = args
    run_config = dataclasses.replace(config, hidden_dim=hidden_dim, seed=config.seed + hidden_dim)
    model, history = mlp.train(train[1], train[0], run_config)
    if model_dir is not None:
        mlp.save_model(model, Path(model_dir) / f"model_h{hidden_dim}.json")
    test_acc = evaluate(model, *test).accuracy
    train_acc = evaluate(model, *train).accuracy
    log.info("hidden %d: test %.2f%%, train %.2f%%", hidden_dim, test_acc, train_acc)
    return (hidden_dim, test_acc, train_acc, len(history), run_config.seed)


def run_sweep(train_path, test_path, hidden_dims, config: mlp.TrainConfig, out_path, workers=1, model_dir=None):
    """Train one model per hidden size and tabulate test/train accuracy.

    Run ``h`` uses seed ``config.seed + h``.  Rows come out sorted by hidden
    size whatever order the runs finish in.
    """
    hidden_dims = sorted(set(int(h) for h in hidden_dims))
    train_labels, train_features = read_feature_matrix(train_path)
    test_labels, test_features = read_feature_matrix(test_path)
    if model_dir is not None:
        Path(model_dir).mkdir(parents=True, exist_ok=True)
    jobs = [
        (h, config, (train_labels, train_features), (test_labels, test_features), model_dir)
        for h in hidden_dims
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(job) for job in jobs]
    write_sweep(out_path, rows)
    return rows


def write_sweep(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for h, test_acc, train_acc, epochs, seed in rows:
            w.writerow([h, f"{test_acc:.4f}", f"{train_acc:.4f}", epochs, seed])


def read_sweep(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [
            {
                "hidden_dim": int(r["hidden_dim"]),
                "test_accuracy": float(r["test_accuracy"]),
                "train_accuracy": float(r["train_accuracy"]),
                "epochs": int(r["epochs"]),
                "seed": int(r["seed"]),
            }
            for r in csv.DictReader(fh)
        ]
