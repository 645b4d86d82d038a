"""End-to-end pipeline: merge, clean, split, encode, SMOTE, train, evaluate."""

from dataclasses import dataclass, replace

import numpy as np

from . import data as D
from .estimator import FakePOIClassifier
from .features import EncodedDataset, PoiEncoder, ablate, encode_dataset
from .metrics import MetricsReport, confusion, metrics
from .smote import SMOTE
from .train import STREAM_SMOTE, STREAM_SPLIT, derive_seed, resolve_seed


@dataclass
class PreparedData:
    train_records: D.Dataset
    val_records: D.Dataset
    test_records: D.Dataset
    encoder: PoiEncoder
    train: EncodedDataset
    train_original: EncodedDataset
    val: EncodedDataset
    test: EncodedDataset
    cleaning_log: D.CleaningLog
    split: D.SplitIndices
    # deduplicated records before coordinate imputation, indexed by ``split``
    records: D.Dataset
    coordinate_medians: dict


@dataclass
class PipelineResult:
    seed: int
    data: PreparedData
    model: FakePOIClassifier
    test_report: MetricsReport
    val_report: MetricsReport

    @property
    def run_log(self):
        return self.model.run_log_


def prepare(merged, cfg, seed, removed=()):
    """Clean and split ``merged``; fit the encoder on train only; SMOTE the train part.

    Coordinate medians for imputation come from the training part alone.
    """
    ds, clean_log = D.clean(merged, D.CleaningPolicy(impute_coordinates=False))
    parts = D.split(ds, cfg.split_ratios, seed=derive_seed(seed, STREAM_SPLIT))
    medians = D.coordinate_medians(ds.subset(parts.train))
    policy = D.CleaningPolicy(coordinate_medians=medians)
    train_ds, _ = D.clean(ds.subset(parts.train), policy)
    val_ds, _ = D.clean(ds.subset(parts.validation), policy)
    test_ds, _ = D.clean(ds.subset(parts.test), policy)

    encoder = PoiEncoder(cfg.features.active_attributes, cfg.features.hash_dims).fit(train_ds)
    if removed:
        encoder = PoiEncoder.from_spec(ablate(encoder.spec_, removed))
    spec = encoder.spec_
    train_enc = encode_dataset(train_ds, spec)
    return PreparedData(
        train_ds, val_ds, test_ds, encoder,
        balance(train_enc, cfg, derive_seed(seed, STREAM_SMOTE)), train_enc,
        encode_dataset(val_ds, spec), encode_dataset(test_ds, spec),
        clean_log, parts, ds, medians,
    )


def balance(encoded, cfg, seed):
    """SMOTE the minority class up to ``cfg.features.smote_ratio`` (no-op if already there)."""
    counts = np.bincount(encoded.labels, minlength=2)
    if counts.min() / counts.max() >= cfg.features.smote_ratio:
        return encoded
    X, y = SMOTE(cfg.features.smote_k, cfg.features.smote_ratio, seed).fit_resample(
        encoded.matrix, encoded.labels)
    return EncodedDataset(X, y, encoded.spec)


def report(model, encoded):
    proba = model.predict_proba(encoded.matrix)
    return metrics(confusion(model.predict(encoded.matrix), encoded.labels),
                   proba[:, 0], encoded.labels)


def fit_model(prepared, train_cfg, seed, **overrides):
    model = FakePOIClassifier.from_config(replace(train_cfg, seed=seed))
    if overrides:
        model.set_params(**overrides)
    return model.fit(prepared.train.matrix, prepared.train.labels,
                     prepared.val.matrix, prepared.val.labels)


def run(merged, cfg, seed=None, removed=(), **overrides):
    """Full pipeline on a labeled dataset for one seed (``None``: ``cfg.train.seed``)."""
    seed = resolve_seed(cfg.train.seed if seed is None else seed)
    prepared = prepare(merged, cfg, seed, removed)
    model = fit_model(prepared, cfg.train, seed, **overrides)
    return PipelineResult(seed, prepared, model, report(model, prepared.test),
                          report(model, prepared.val))


def logistic_overrides():
    """Parameters that turn the MLP into the no-hidden-layer comparator."""
    return {"hidden_layers": 0, "dropout_ratio": 0.0}


def cross_validate(merged, cfg, k=5, seed=0):
    """Stratified k-fold estimate; returns one held-out report per fold."""
    ds, _ = D.clean(merged, D.CleaningPolicy(impute_coordinates=False))
    folds = D.kfold(ds, k, seed=derive_seed(seed, STREAM_SPLIT))
    reports = []
    for i in range(k):
        train_idx, held_idx = folds.fold(i)
        policy = D.CleaningPolicy(coordinate_medians=D.coordinate_medians(ds.subset(train_idx)))
        train_ds, _ = D.clean(ds.subset(train_idx), policy)
        held_ds, _ = D.clean(ds.subset(held_idx), policy)
        encoder = PoiEncoder(cfg.features.active_attributes, cfg.features.hash_dims).fit(train_ds)
        tr = balance(encode_dataset(train_ds, encoder.spec_), cfg, derive_seed(seed, STREAM_SMOTE, i))
        model = FakePOIClassifier.from_config(replace(cfg.train, seed=derive_seed(seed, i)))
        model.fit(tr.matrix, tr.labels)
        reports.append(report(model, encode_dataset(held_ds, encoder.spec_)))
    return reports
