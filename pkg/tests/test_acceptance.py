"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or directly
with ``python3 tests/test_acceptance.py``.
"""

import hashlib
import math
import sys
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from fakepoi import ablation, cli, mlp, pipeline, synth
from fakepoi import data as D
from fakepoi.config import RunConfig
from fakepoi.features import EncodedDataset
from fakepoi.metrics import ConfusionMatrix, metrics
from fakepoi.smote import nearest_neighbors, oversample
from fakepoi.train import TrainConfig, train_hogwild, train_sequential

SEEDS = (0, 1, 2, 3, 4)


def _report(criterion, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    sys.stdout.flush()
    return ok


def _merged():
    real = D.load_csv(synth.bundled_path())
    return synth.merge_labeled(real, synth.generate_fake(500, seed=0))


# -- 1: metric formulas on reference confusion counts --------------------------

COUNTS = dict(tp=365, fp=23, fn=11, tn=168)
TARGET = {"accuracy": 0.94, "precision": 0.94, "recall": 0.97, "f1": 0.95}


def _rational_oracle(tp, fp, fn, tn):
    tp, fp, fn, tn = (Fraction(v) for v in (tp, fp, fn, tn))
    return {
        "accuracy": (tp + tn) / (tp + fp + fn + tn),
        "precision": tp / (tp + fp),
        "recall": tp / (tp + fn),
        "f1": 2 * tp / (2 * tp + fp + fn),
    }


def _criterion_1():
    rep = metrics(ConfusionMatrix(**COUNTS))
    oracle = _rational_oracle(**COUNTS)
    exact = all(getattr(rep, k) == float(v) for k, v in oracle.items())
    got = {k: round(getattr(rep, k), 2) for k in TARGET}
    return rep, exact, got


def test_criterion_1_metric_formulas():
    rep, exact, got = _criterion_1()
    mismatched = sorted(k for k in TARGET if got[k] != TARGET[k])
    # 2*365 / (2*365 + 23 + 11) = 0.95550 rounds to 0.96; the target 0.95 is not
    # reachable from these counts with the F1 formula, so the line reports FAIL.
    _report(1, exact and not mismatched,
            f"rounded {got} vs target {TARGET}; exact rational oracle match: {exact}; "
            f"mismatched: {mismatched or 'none'}")
    assert exact
    assert all(got[k] == TARGET[k] for k in ("accuracy", "precision", "recall"))


@pytest.mark.xfail(strict=True, reason="F1 from these counts is 0.9555, which rounds to 0.96")
def test_criterion_1_target_f1_rounding():
    _, _, got = _criterion_1()
    assert got["f1"] == TARGET["f1"]


# -- 2: analytic gradients vs central differences ---------------------------------

def _oracle_loss(params, x, t, l1, l2):
    """Independent forward pass and penalized cross-entropy for a 1-hidden-layer net."""
    w1, w2, b1, b2 = params
    h = np.maximum(0.0, w1 @ x + b1)
    z = w2 @ h + b2
    e = np.exp(z - z.max())
    o = np.clip(e / e.sum(), 1e-15, 1 - 1e-15)
    ce = -np.sum(t * np.log(o) + (1 - t) * np.log(1 - o))
    penalty = sum(l1 * np.abs(w).sum() + l2 * np.square(w).sum() for w in (w1, w2))
    return ce + penalty


def test_criterion_2_gradient_check():
    started = time.perf_counter()
    rng = np.random.default_rng(0)
    h = 1e-5
    total = good = 0
    for trial in range(100):
        lam = (0.0, 1e-5)[trial % 2]
        net = mlp.init((4, 8, 2), seed=trial)
        # wider weights than the default init so ReLUs actually switch
        for p in net.params():
            p[...] = rng.normal(scale=0.5, size=p.shape)
        x = rng.normal(size=4)
        t = np.eye(2)[rng.integers(2)]
        cfg = mlp.LossConfig(lam, lam)
        grads = mlp.backward(net, mlp.forward(net, x), t, cfg).params()
        params = net.params()
        for p, g in zip(params, grads):
            for idx in np.ndindex(p.shape):
                orig = p[idx]
                p[idx] = orig + h
                up = _oracle_loss(params, x, t, lam, lam)
                p[idx] = orig - h
                down = _oracle_loss(params, x, t, lam, lam)
                p[idx] = orig
                num = (up - down) / (2 * h)
                err = abs(num - g[idx])
                scale = max(abs(num), abs(g[idx]))
                total += 1
                good += err < 1e-7 or err / scale < 1e-4
    elapsed = time.perf_counter() - started
    frac = good / total
    ok = frac >= 0.99 and elapsed < 10
    _report(2, ok, f"{good}/{total} coordinates agree ({frac:.4%}), {elapsed:.1f}s")
    assert ok


# -- 3: Hogwild reduction and convex equivalence ----------------------------------

def _blobs(seed, n=600, d=10):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    mu = rng.normal(size=d) * 0.3
    X = rng.normal(size=(n, d)) + np.where(y[:, None] == 1, mu, -mu)
    return EncodedDataset(X, y)


def test_criterion_3_hogwild():
    started = time.perf_counter()
    # (a) bitwise reduction on the real pipeline's data shape
    data = _blobs(99, n=300)
    net = mlp.init((10, 16, 2), seed=7)
    cfg = TrainConfig(epochs=3, seed=11)
    a, _ = train_sequential(net, data, cfg)
    b, _ = train_hogwild(net, data, replace(cfg, nodes=1, cores_per_node=1,
                                            samples_per_iteration=len(data)))
    bitwise = all(np.array_equal(p, q) for p, q in zip(a.params(), b.params()))

    # (b) convex task, 4 nodes x 4 cores
    gaps = []
    for seed in SEEDS:
        data = _blobs(seed)
        net = mlp.init((10, 2), seed=seed)
        cfg = TrainConfig(epochs=20, hidden_layers=0, dropout_ratio=0.0, seed=seed)
        _, seq = train_sequential(net, data, cfg)
        _, par = train_hogwild(net, data, replace(cfg, nodes=4, cores_per_node=4))
        gaps.append(abs(par.train_loss[-1] - seq.train_loss[-1]) / seq.train_loss[-1])
    elapsed = time.perf_counter() - started
    ok = bitwise and max(gaps) <= 0.05 and elapsed < 60
    _report(3, ok, f"(a) bitwise={bitwise}; (b) relative loss gaps "
                   f"{[round(g, 5) for g in gaps]}; {elapsed:.1f}s")
    assert ok


# -- 4 and 7: end-to-end runs on the bundled data -------------------------------

@pytest.fixture(scope="module")
def e2e_runs():
    merged = _merged()
    cfg = RunConfig()
    started = time.perf_counter()
    runs = []
    for seed in SEEDS:
        res = pipeline.run(merged, cfg, seed=seed)
        logistic = pipeline.fit_model(res.data, cfg.train, seed, **pipeline.logistic_overrides())
        runs.append((res, pipeline.report(logistic, res.data.test)))
    return runs, time.perf_counter() - started


def test_criterion_4_end_to_end(e2e_runs):
    runs, elapsed = e2e_runs
    wins = 0
    details = []
    for res, lr in runs:
        f1 = res.test_report.f1
        wins += f1 >= 0.85 and f1 > lr.f1
        details.append(f"{f1:.3f}/{lr.f1:.3f}")
    ok = wins >= 4 and elapsed < 120
    _report(4, ok, f"{wins}/5 seeds with F1>=0.85 and above logistic (mlp/logistic: "
                   f"{', '.join(details)}); {elapsed:.1f}s")
    assert ok


def test_criterion_7_learning_curve(e2e_runs):
    runs, _ = e2e_runs
    gaps = [abs(r.run_log.val_loss[-1] - r.run_log.train_loss[-1]) for r, _ in runs]
    mean_gap = float(np.mean(gaps))
    ok = mean_gap <= 0.1 and all(len(r.run_log) == 10 for r, _ in runs)
    _report(7, ok, f"mean |val - train| final loss {mean_gap:.4f} (per seed "
                   f"{[round(g, 4) for g in gaps]})")
    assert ok


# -- 5: SMOTE properties ---------------------------------------------------------------

def _brute_neighbors(points, k):
    n = len(points)
    out = []
    for i in range(n):
        d = []
        for j in range(n):
            if j != i:
                d.append((sum((points[i][c] - points[j][c]) ** 2 for c in range(len(points[i]))), j))
        d.sort()
        out.append([j for _, j in d[:k]])
    return np.array(out)


def test_criterion_5_smote():
    started = time.perf_counter()
    rng = np.random.default_rng(5)
    neighbors_ok = True
    for trial in range(10):
        pts = rng.normal(size=(50, 6))
        if trial % 2:
            pts = np.round(pts, 0)  # many exact ties
        neighbors_ok &= np.array_equal(nearest_neighbors(pts, 5), _brute_neighbors(pts.tolist(), 5))

    interval_ok = ratio_ok = True
    for trial in range(10):
        n_maj, n_min = 200, int(rng.integers(10, 120))
        X = rng.normal(size=(n_maj + n_min, 4))
        y = np.array([1] * n_maj + [0] * n_min)
        target = float(rng.uniform(n_min / n_maj + 0.05, 1.0))
        Xn, yn, parents = oversample(X, y, k=5, target_ratio=target, seed=trial)
        syn = Xn[len(X):]
        lo = np.minimum(X[parents[:, 0]], X[parents[:, 1]])
        hi = np.maximum(X[parents[:, 0]], X[parents[:, 1]])
        interval_ok &= bool(np.all((syn >= lo) & (syn <= hi)))
        ratio_ok &= abs((yn == 0).sum() - target * n_maj) <= 1
    elapsed = time.perf_counter() - started
    ok = neighbors_ok and interval_ok and ratio_ok and elapsed < 5
    _report(5, ok, f"neighbors={neighbors_ok} interval={interval_ok} ratio={ratio_ok}; {elapsed:.1f}s")
    assert ok


# -- 6: ablation ordering -------------------------------------------------------------

def test_criterion_6_ablation():
    started = time.perf_counter()
    variant = ablation.AblationVariant.of(("STR_ADD", "U", "MUN", "PR", "PC"))
    rep = ablation.run_ablation(_merged(), [variant], RunConfig(), SEEDS)
    full = rep.row("FDM").mean
    reduced = rep.row(variant.name).mean
    elapsed = time.perf_counter() - started
    ok = reduced >= full and elapsed < 600
    _report(6, ok, f"mean RMSE {variant.name} {reduced:.4f} vs FDM {full:.4f}; {elapsed:.1f}s")
    assert ok


# -- 8: determinism ------------------------------------------------------------------

def _digest(path):
    data = Path(path).read_bytes()
    if path.name.endswith(".runlog.csv"):
        # the wall-clock column is the only nondeterministic field
        data = b"\n".join(b",".join(line.split(b",")[:3]) for line in data.splitlines())
    return hashlib.sha256(data).hexdigest()


def _pipeline_outputs(root):
    root.mkdir()
    steps = [
        ["generate", "--n", "500", "--seed", "0", "--out", str(root / "fake.csv")],
        ["train", "--fake", str(root / "fake.csv"), "--seed", "3", "--model-out",
         str(root / "model.json"), "--split-dir", str(root / "split")],
        ["evaluate", "--model", str(root / "model.json"), "--data",
         str(root / "split" / "test.csv"), "--json-out", str(root / "metrics.json")],
    ]
    for argv in steps:
        assert cli.main(argv) == 0
    return {p.relative_to(root).as_posix(): _digest(p) for p in sorted(root.rglob("*")) if p.is_file()}


def test_criterion_8_determinism(tmp_path, capsys):
    started = time.perf_counter()
    first = _pipeline_outputs(tmp_path / "a")
    second = _pipeline_outputs(tmp_path / "b")
    capsys.readouterr()
    elapsed = time.perf_counter() - started
    differing = sorted(k for k in first if first[k] != second.get(k))
    ok = first.keys() == second.keys() and not differing and len(first) >= 8 and elapsed < 180
    with capsys.disabled():
        _report(8, ok, f"{len(first)} output files, differing: {differing or 'none'}; {elapsed:.1f}s")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
