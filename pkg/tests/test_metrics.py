import json
import math

import numpy as np
import pytest

from fakepoi import mlp
from fakepoi.errors import ValidationError
from fakepoi.features import EncodedDataset
from fakepoi.metrics import ConfusionMatrix, MetricsReport, confusion, evaluate, metrics, rmse


def test_perfect_prediction():
    assert confusion([0, 0, 1], [0, 0, 1]) == ConfusionMatrix(tp=2, fp=0, fn=0, tn=1)


def test_all_wrong():
    assert confusion([1, 1, 1, 1], [0, 0, 0, 0]).fn == 4


def test_confusion_matches_loop_oracle(rng):
    preds = rng.integers(0, 2, 567)
    labels = rng.integers(0, 2, 567)
    tally = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    for p, t in zip(preds, labels):
        if p == 0 and t == 0:
            tally["tp"] += 1
        elif p == 0:
            tally["fp"] += 1
        elif t == 0:
            tally["fn"] += 1
        else:
            tally["tn"] += 1
    assert confusion(preds, labels) == ConfusionMatrix(**tally)


def test_reference_counts():
    rep = metrics(ConfusionMatrix(365, 23, 11, 168))
    assert round(rep.accuracy, 3) == 0.940
    assert round(rep.precision, 3) == 0.941
    assert round(rep.recall, 3) == 0.971
    assert round(rep.f1, 3) == 0.955


def test_symmetric_counts():
    rep = metrics(ConfusionMatrix(25, 25, 25, 25))
    assert rep.accuracy == rep.precision == rep.recall == rep.f1 == 0.5


def test_rmse_uniform():
    assert rmse(np.array([0.5, 0.5]), np.array([0, 1])) == 0.5
    assert rmse(np.array([1.0, 0.0]), np.array([0, 1])) == 0.0


def test_degenerate_flags():
    rep = metrics(ConfusionMatrix(0, 0, 0, 5))
    assert rep.precision == 0 and rep.recall == 0 and rep.f1 == 0
    assert set(rep.degenerate) >= {"precision", "recall"}


def test_length_mismatch():
    with pytest.raises(ValidationError):
        confusion([0, 1], [0])


def test_single_fake_row():
    net = mlp.Network((1, 2), [np.zeros((2, 1))], [np.array([1.0, 0.0])])
    rep = evaluate(net, EncodedDataset(np.zeros((1, 1)), np.array([0])))
    assert rep.accuracy == 1.0


def test_untrained_zero_net():
    net = mlp.Network((3, 2), [np.zeros((2, 3))], [np.zeros(2)])
    data = EncodedDataset(np.random.default_rng(0).normal(size=(10, 3)), np.array([0, 1] * 5))
    rep = evaluate(net, data)
    assert rep.rmse == 0.5


def test_evaluate_is_composition(rng):
    net = mlp.init((3, 5, 2), seed=4)
    X = rng.normal(size=(40, 3))
    y = rng.integers(0, 2, 40)
    cls, prob = mlp.predict(net, X)
    manual = metrics(confusion(cls, y), prob, y)
    assert evaluate(net, EncodedDataset(X, y)) == manual


def test_json_roundtrip(tmp_path):
    rep = metrics(ConfusionMatrix(3, 1, 2, 4), np.array([0.9, 0.2]), np.array([0, 1]))
    text = rep.to_json(tmp_path / "m.json")
    assert MetricsReport.from_dict(json.loads(text)) == rep
    assert (tmp_path / "m.json").read_text() == text


def test_render_layout():
    out = metrics(ConfusionMatrix(365, 23, 11, 168)).render()
    assert "Predicted Fake" in out and "365" in out and "F1" in out
