"""Attribute-removal ablations and regularization sweeps over several seeds."""

import csv
import json
import re
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

from joblib import Parallel, delayed

from . import pipeline
from .data import ATTRIBUTES
from .errors import ValidationError
from .features import canonical

BASE_NAME = "FDM"

# Removed-attribute sets of the reference ablation table, in its row order.
TABLE6 = (
    (),
    ("LM_ID",),
    ("X", "Y"),
    ("LM_NAME",),
    ("CATE",),
    ("STR_ADD",),
    ("MUN",),
    ("PR",),
    ("PC",),
    ("STR_ADD", "U"),
    ("MUN", "PC"),
    ("MUN", "PR", "PC"),
    ("STR_ADD", "U", "MUN"),
    ("STR_ADD", "U", "MUN", "PR"),
    ("STR_ADD", "U", "MUN", "PR", "PC"),
)


def variant_name(removed):
    removed = canonical(removed)
    if not removed:
        return BASE_NAME
    return f"{BASE_NAME} ({', '.join(f'{a} -' for a in removed)})"


@dataclass(frozen=True)
class AblationVariant:
    name: str
    removed: tuple

    @classmethod
    def of(cls, removed):
        removed = canonical(removed)
        return cls(variant_name(removed), removed)

    @classmethod
    def parse(cls, name):
        """Inverse of :func:`variant_name`; tolerates ``PC-`` without a space."""
        name = name.strip()
        if name == BASE_NAME:
            return cls.of(())
        m = re.fullmatch(rf"{BASE_NAME}\s*\((.*)\)", name)
        if not m:
            raise ValidationError(f"not a variant name: {name!r}")
        removed = []
        for part in m.group(1).split(","):
            attr = part.strip().rstrip("-").strip()
            if attr not in ATTRIBUTES:
                raise ValidationError(f"unknown attribute {attr!r} in {name!r}")
            removed.append(attr)
        return cls.of(removed)


def table6_variants():
    return [AblationVariant.of(r) for r in TABLE6]


def _summary(values):
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


@dataclass
class AblationRow:
    variant: str
    removed: tuple
    rmse: list

    @property
    def mean(self):
        return _summary(self.rmse)[0]

    @property
    def sd(self):
        return _summary(self.rmse)[1]


@dataclass
class AblationReport:
    rows: list
    seeds: list
    config: dict = field(default_factory=dict)

    def row(self, name):
        for r in self.rows:
            if r.variant == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        return {
            "seeds": list(self.seeds),
            "config": self.config,
            "rows": [{"variant": r.variant, "removed": list(r.removed), "rmse": r.rmse,
                      "mean_rmse": r.mean, "sd_rmse": r.sd} for r in self.rows],
        }

    def to_json(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["variant", "mean_rmse", "sd_rmse"] + [f"seed_{s}" for s in self.seeds])
            for r in self.rows:
                w.writerow([r.variant, repr(r.mean), repr(r.sd)] + [repr(v) for v in r.rmse])


def _test_rmse(ds, cfg, seed, removed):
    return pipeline.run(ds, cfg, seed=seed, removed=removed).test_report.rmse


def run_ablation(data, variants, cfg, seeds, n_jobs=1):
    """Retrain with each variant's attributes removed; report test RMSE per seed.

    ``data`` is the merged, labeled dataset. The full-feature baseline row is
    always included (first).
    """
    variants = list(variants)
    seeds = list(seeds)
    if not variants:
        raise ValidationError("no ablation variants given")
    if not seeds:
        raise ValidationError("no seeds given")
    active = set(cfg.features.active_attributes)
    for v in variants:
        extra = set(v.removed) - active
        if extra:
            raise ValidationError(f"{v.name}: removes inactive attributes {sorted(extra)}")
        if not active - set(v.removed):
            raise ValidationError(f"{v.name}: removal would empty the feature set")
    if not any(v.removed == () for v in variants):
        variants.insert(0, AblationVariant.of(()))
    jobs = [(v, s) for v in variants for s in seeds]
    results = Parallel(n_jobs=n_jobs)(delayed(_test_rmse)(data, cfg, s, v.removed) for v, s in jobs)
    rows, it = [], iter(results)
    for v in variants:
        rows.append(AblationRow(v.name, v.removed, [next(it) for _ in seeds]))
    return AblationReport(rows, seeds, cfg.to_dict())


@dataclass
class SweepReport:
    axis: str
    values: list
    rmse: list
    seeds: list
    config: dict = field(default_factory=dict)

    def rows(self):
        return [(v, *_summary(r)) for v, r in zip(self.values, self.rmse)]

    def to_dict(self):
        return {
            "axis": self.axis, "seeds": list(self.seeds), "config": self.config,
            "rows": [{"value": v, "mean_rmse": m, "sd_rmse": s, "rmse": r}
                     for (v, m, s), r in zip(self.rows(), self.rmse)],
        }

    def to_json(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([self.axis, "mean_rmse", "sd_rmse"])
            for v, m, s in self.rows():
                w.writerow([repr(v), repr(m), repr(s)])


def sweep_regularization(data, cfg, axis, values, seeds, n_jobs=1):
    """Vary one of L1/L2 with the other held at its configured value."""
    axis = axis.lower()
    if axis not in ("l1", "l2"):
        raise ValidationError(f"axis must be L1 or L2, got {axis!r}")
    values = [float(v) for v in values]
    seeds = list(seeds)
    if not values:
        raise ValidationError("no sweep values given")
    if any(v < 0 for v in values):
        raise ValidationError("regularization coefficients must be nonnegative")
    configs = [replace(cfg, train=replace(cfg.train, **{axis: v})) for v in values]
    results = Parallel(n_jobs=n_jobs)(delayed(_test_rmse)(data, c, s, ()) for c in configs for s in seeds)
    it = iter(results)
    rmse = [[next(it) for _ in seeds] for _ in values]
    return SweepReport(axis.upper(), values, rmse, seeds, cfg.to_dict())
