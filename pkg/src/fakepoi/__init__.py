"""Detect fabricated point-of-interest records with a small neural network."""

from .ablation import AblationReport, AblationVariant, run_ablation, sweep_regularization, table6_variants
from .bundle import ModelBundle
from .config import FeatureConfig, RunConfig
from .data import Dataset, PoiRecord, clean, kfold, load_csv, split, write_csv
from .errors import DataError, DivergenceError, FakePoiError, MissingColumnError, ValidationError
from .estimator import FakePOIClassifier
from .features import EncodedDataset, FeatureSpec, PoiEncoder, encode_dataset, fit_encoder
from .metrics import ConfusionMatrix, MetricsReport, confusion, evaluate, metrics, rmse
from .mlp import Network
from .smote import SMOTE, oversample
from .synth import FakeProfile, bundled_path, generate_fake, merge_labeled
from .train import TrainConfig, train, train_hogwild, train_sequential

__version__ = "0.1.0"

__all__ = [
    "AblationReport", "AblationVariant", "ConfusionMatrix", "DataError", "Dataset",
    "DivergenceError", "EncodedDataset", "FakePOIClassifier", "FakePoiError", "FakeProfile",
    "FeatureConfig", "FeatureSpec", "MetricsReport", "MissingColumnError", "ModelBundle",
    "Network", "PoiEncoder", "PoiRecord", "RunConfig", "SMOTE", "TrainConfig", "ValidationError",
    "bundled_path", "clean", "confusion", "encode_dataset", "evaluate", "fit_encoder",
    "generate_fake", "kfold", "load_csv", "merge_labeled", "metrics", "oversample", "rmse",
    "run_ablation", "split", "sweep_regularization", "table6_variants", "train", "train_hogwild",
    "train_sequential", "write_csv",
]
