"""Confusion-matrix evaluation reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EvalReport:
    confusion: np.ndarray  # rows: true class, columns: predicted class

    @classmethod
    def from_predictions(cls, labels, predictions, n_classes: int = 10) -> "EvalReport":
        confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
        np.add.at(confusion, (np.asarray(labels, int), np.asarray(predictions, int)), 1)
        return cls(confusion)

    @property
    def n_samples(self) -> int:
        return int(self.confusion.sum())

    @property
    def class_counts(self) -> np.ndarray:
        return self.confusion.sum(axis=1)

    @property
    def class_correct(self) -> np.ndarray:
        return np.diag(self.confusion).copy()

    @property
    def accuracy(self) -> float:
        """Overall accuracy in percent."""
        if self.n_samples == 0:
            return 0.0
        return 100.0 * int(np.trace(self.confusion)) / self.n_samples

    @property
    def per_class_accuracy(self) -> np.ndarray:
        counts = self.class_counts
        return np.where(counts > 0, 100.0 * self.class_correct / np.maximum(counts, 1), 0.0)

    def to_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "accuracy": self.accuracy,
            "per_class": [
                {"class": c, "count": int(n), "correct": int(k), "accuracy": float(a)}
                for c, (n, k, a) in enumerate(
                    zip(self.class_counts, self.class_correct, self.per_class_accuracy)
                )
            ],
            "confusion": self.confusion.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def confusion_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = self.confusion.shape[0]
        w.writerow(["true\\pred", *range(n)])
        for c, row in enumerate(self.confusion):
            w.writerow([c, *row.tolist()])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"samples: {self.n_samples}", f"accuracy: {self.accuracy:.2f}%"]
        for c, (n, a) in enumerate(zip(self.class_counts, self.per_class_accuracy)):
            lines.append(f"  class {c}: {a:6.2f}% of {n}")
        return "\n".join(lines)
