"""Confusion matrix and classification metrics with fake (label 0) as positive."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import FAKE
from .errors import ValidationError
from .mlp import predict

REPORT_FORMAT = "fakepoi-metrics"
REPORT_VERSION = 1


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValidationError("confusion counts must be nonnegative")

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn


@dataclass
class MetricsReport:
    confusion: ConfusionMatrix
    accuracy: float
    precision: float
    recall: float
    f1: float
    rmse: float = None
    degenerate: list = field(default_factory=list)

    def to_dict(self):
        c = self.confusion
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "confusion": {"tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn},
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "rmse": self.rmse,
            "degenerate": list(self.degenerate),
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != REPORT_FORMAT or d.get("version") != REPORT_VERSION:
            raise ValidationError("not a metrics report document")
        return cls(ConfusionMatrix(**d["confusion"]), d["accuracy"], d["precision"],
                   d["recall"], d["f1"], d["rmse"], list(d["degenerate"]))

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    def render(self):
        """Plain-text confusion table plus metric lines."""
        c = self.confusion
        w = max(6, len(str(max(c.tp, c.fp, c.fn, c.tn))))
        lines = [
            f"{'':16}{'Actual Fake':>{w + 6}}{'Actual Real':>{w + 6}}",
            f"{'Predicted Fake':16}{c.tp:>{w + 6}}{c.fp:>{w + 6}}",
            f"{'Predicted Real':16}{c.fn:>{w + 6}}{c.tn:>{w + 6}}",
            "",
            f"{'Accuracy':10}{self.accuracy:.4f}",
            f"{'Recall':10}{self.recall:.4f}",
            f"{'Precision':10}{self.precision:.4f}",
            f"{'F1':10}{self.f1:.4f}",
        ]
        if self.rmse is not None:
            lines.append(f"{'RMSE':10}{self.rmse:.4f}")
        if self.degenerate:
            lines.append(f"degenerate (zero denominator): {', '.join(self.degenerate)}")
        return "\n".join(lines)


def confusion(predictions, labels):
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise ValidationError(f"length mismatch: {predictions.shape} vs {labels.shape}")
    if predictions.size == 0:
        raise ValidationError("nothing to tally")
    pred_fake = predictions == FAKE
    actual_fake = labels == FAKE
    return ConfusionMatrix(
        tp=int(np.sum(pred_fake & actual_fake)),
        fp=int(np.sum(pred_fake & ~actual_fake)),
        fn=int(np.sum(~pred_fake & actual_fake)),
        tn=int(np.sum(~pred_fake & ~actual_fake)),
    )


def _ratio(num, den, name, degenerate):
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def rmse(prob_fake, labels):
    """Root mean squared error of P(fake) against the indicator ``label == fake``."""
    prob_fake = np.asarray(prob_fake, dtype=float)
    target = (np.asarray(labels) == FAKE).astype(float)
    if prob_fake.shape != target.shape:
        raise ValidationError("probability and label lengths differ")
    return float(math.sqrt(np.mean((prob_fake - target) ** 2)))


def metrics(cm, probs=None, labels=None):
    if cm.total < 1:
        raise ValidationError("confusion matrix is empty")
    degenerate = []
    tp, fp, fn, tn = cm.tp, cm.fp, cm.fn, cm.tn
    accuracy = (tp + tn) / cm.total
    recall = _ratio(tp, tp + fn, "recall", degenerate)
    precision = _ratio(tp, tp + fp, "precision", degenerate)
    f1 = _ratio(2 * tp, 2 * tp + fp + fn, "f1", degenerate)
    err = None
    if probs is not None:
        if labels is None:
            raise ValidationError("labels are required to compute rmse")
        err = rmse(probs, labels)
    return MetricsReport(cm, accuracy, precision, recall, f1, err, degenerate)


def evaluate(net, data):
    """Predict every row of an :class:`EncodedDataset` and assemble the report."""
    if len(data) == 0:
        raise ValidationError("cannot evaluate an empty dataset")
    if data.matrix.shape[1] != net.layer_sizes[0]:
        raise ValidationError(f"data width {data.matrix.shape[1]} != network input {net.layer_sizes[0]}")
    classes, prob_fake = predict(net, data.matrix)
    return metrics(confusion(classes, data.labels), prob_fake, data.labels)
