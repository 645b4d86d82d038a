import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fakepoi.errors import DataError, ValidationError
from fakepoi.features import EncodedDataset
from fakepoi.smote import SMOTE, nearest_neighbors, oversample, smote


def brute_force_neighbors(points, k):
    out = []
    for i, p in enumerate(points):
        dists = sorted((float(np.sum((p - q) ** 2)), j) for j, q in enumerate(points) if j != i)
        out.append([j for _, j in dists[:k]])
    return np.array(out)


def test_two_points_on_segment():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [5, 5], [6, 6], [7, 7], [8, 8]])
    y = np.array([0, 0, 1, 1, 1, 1])
    Xn, yn, parents = oversample(X, y, k=1, target_ratio=1.0, seed=0)
    syn = Xn[len(X):]
    assert len(syn) == 2 and set(yn[len(X):]) == {0}
    assert np.allclose(syn[:, 0], syn[:, 1])
    assert ((syn >= 0) & (syn <= 1)).all()


def test_synthetic_count():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    y = np.array([0] * 10 + [1] * 30)
    Xn, yn, parents = oversample(X, y, k=5, seed=1)
    assert len(Xn) - len(X) == 20 == len(parents)
    assert (yn == 0).sum() == 30
    assert np.array_equal(Xn[:40], X)


def test_neighbors_match_brute_force(rng):
    pts = rng.normal(size=(50, 4))
    assert np.array_equal(nearest_neighbors(pts, 5), brute_force_neighbors(pts, 5))


def test_neighbors_ties_lower_index():
    pts = np.array([[0.0], [1.0], [-1.0], [2.0]])
    assert list(nearest_neighbors(pts, 2)[0]) == [1, 2]


@settings(max_examples=30, deadline=None)
@given(st.integers(6, 40), st.integers(41, 90), st.floats(0.0, 1.0), st.integers(0, 10**6))
def test_properties(n_min, n_maj, frac, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_min + n_maj, 3))
    y = np.array([0] * n_min + [1] * n_maj)
    lo_ratio = n_min / n_maj
    target = lo_ratio + (1 - lo_ratio) * max(frac, 1e-3)
    Xn, yn, parents = oversample(X, y, k=5, target_ratio=target, seed=seed)
    syn = Xn[len(X):]
    a, b = X[parents[:, 0]], X[parents[:, 1]]
    assert ((syn >= np.minimum(a, b)) & (syn <= np.maximum(a, b))).all()
    assert (y[parents] == 0).all()
    assert abs((yn == 0).sum() - target * n_maj) <= 1
    # each partner is among its parent's k nearest minority neighbours
    nn = nearest_neighbors(X[:n_min], 5)
    assert all(q in nn[p] for p, q in parents)


def test_deterministic(rng):
    X = rng.normal(size=(30, 2))
    y = np.array([0] * 8 + [1] * 22)
    a = oversample(X, y, seed=5)
    b = oversample(X, y, seed=5)
    assert all(np.array_equal(u, v) for u, v in zip(a, b))


def test_too_few_minority():
    X = np.zeros((10, 2))
    y = np.array([0] * 3 + [1] * 7)
    with pytest.raises(DataError):
        oversample(X, y, k=5)


def test_bad_target():
    X = np.random.default_rng(0).normal(size=(30, 2))
    y = np.array([0] * 10 + [1] * 20)
    with pytest.raises(ValidationError):
        oversample(X, y, target_ratio=0.2)
    with pytest.raises(ValidationError):
        oversample(X, y, target_ratio=1.5)


def test_estimator_and_dataset_wrapper(rng):
    X = rng.normal(size=(30, 2))
    y = np.array([0] * 10 + [1] * 20)
    sm = SMOTE(k_neighbors=3, random_state=2)
    Xn, yn = sm.fit_resample(X, y)
    assert sm.n_synthetic_ == 10 and sm.get_params()["k_neighbors"] == 3
    enc = smote(EncodedDataset(X, y), k=3, seed=2)
    assert np.array_equal(enc.matrix, Xn)
