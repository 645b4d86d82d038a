"""POI record schema, CSV ingestion, cleaning and stratified partitioning."""

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DataError, MissingColumnError, ValidationError

ATTRIBUTES = (
    "LM_ID", "X", "Y", "LM_NAME", "CATE", "STR_ADD",
    "U", "MUN", "PR", "PC", "PHONE", "WEBSITE",
)
LABEL_COLUMN = "LABEL"
COORDINATES = ("X", "Y")
FIELD_OF = {
    "LM_ID": "lm_id", "X": "x", "Y": "y", "LM_NAME": "lm_name", "CATE": "cate",
    "STR_ADD": "str_add", "U": "unit", "MUN": "mun", "PR": "pr", "PC": "pc",
    "PHONE": "phone", "WEBSITE": "website",
}
MISSING = "<MISSING>"

REAL = 1
FAKE = 0


@dataclass(frozen=True)
class PoiRecord:
    lm_id: str
    x: float
    y: float
    lm_name: str = ""
    cate: str = ""
    str_add: str = ""
    unit: str = ""
    mun: str = ""
    pr: str = ""
    pc: str = ""
    phone: str = ""
    website: str = ""
    label: int = REAL
    # attributes that were absent in the source row (set by clean)
    missing: frozenset = frozenset()

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValidationError(f"label must be 0 or 1, got {self.label!r}")

    def get(self, attribute):
        return getattr(self, FIELD_OF[attribute])

    def row(self, with_label=True):
        out = []
        for attribute in ATTRIBUTES:
            value = self.get(attribute)
            if attribute in COORDINATES:
                value = "" if math.isnan(value) else repr(float(value))
            out.append(value)
        if with_label:
            out.append(str(self.label))
        return out


@dataclass(frozen=True)
class Dataset:
    records: tuple
    provenance: str = "bundled"

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, item):
        return self.records[item]

    @property
    def labels(self):
        return np.array([r.label for r in self.records], dtype=np.int64)

    def subset(self, indices):
        return Dataset(tuple(self.records[i] for i in indices), self.provenance)


@dataclass(frozen=True)
class SplitIndices:
    train: np.ndarray
    validation: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray
    k: int

    def fold(self, i):
        """Return ``(train_idx, held_out_idx)`` for fold ``i``."""
        held = np.flatnonzero(self.fold_of == i)
        rest = np.flatnonzero(self.fold_of != i)
        return rest, held


def _parse_coordinate(text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        return math.nan
    return value if math.isfinite(value) else math.nan


def load_csv(path, schema=ATTRIBUTES, default_label=None, provenance="bundled"):
    """Read POI rows from a CSV file.

    Columns outside ``schema`` may be absent and load as empty strings. A
    ``LABEL`` column is required unless ``default_label`` is given.
    Coordinates that do not parse become NaN and are left for :func:`clean`.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    unknown = set(schema) - set(ATTRIBUTES)
    if unknown:
        raise ValidationError(f"unknown schema attributes: {sorted(unknown)}")
    records = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file", row=1) from None
        except csv.Error as exc:
            raise DataError(f"{path}: row 1: {exc}", row=1) from None
        for column in schema:
            if column not in header:
                raise MissingColumnError(column)
        has_label = LABEL_COLUMN in header
        if not has_label and default_label is None:
            raise MissingColumnError(LABEL_COLUMN)
        position = {name: i for i, name in enumerate(header)}
        while True:
            try:
                cells = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                raise DataError(f"{path}: row {reader.line_num}: {exc}", row=reader.line_num) from None
            row_no = reader.line_num
            if not cells:
                continue
            if len(cells) != len(header):
                raise DataError(
                    f"{path}: row {row_no}: expected {len(header)} fields, got {len(cells)}",
                    row=row_no,
                )
            values = {}
            for attribute in ATTRIBUTES:
                raw = cells[position[attribute]].strip() if attribute in position else ""
                if attribute in COORDINATES:
                    values[FIELD_OF[attribute]] = _parse_coordinate(raw)
                else:
                    values[FIELD_OF[attribute]] = raw
            if has_label:
                raw_label = cells[position[LABEL_COLUMN]].strip()
                if raw_label not in ("0", "1"):
                    raise DataError(
                        f"{path}: row {row_no}: LABEL must be 0 or 1, got {raw_label!r}",
                        row=row_no, column=LABEL_COLUMN,
                    )
                label = int(raw_label)
            else:
                label = int(default_label)
            records.append(PoiRecord(label=label, **values))
    return Dataset(tuple(records), provenance)


def write_csv(ds, path, with_label=True):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(ATTRIBUTES) + ([LABEL_COLUMN] if with_label else []))
        for rec in ds:
            writer.writerow(rec.row(with_label))


@dataclass(frozen=True)
class CleaningPolicy:
    sentinel: str = MISSING
    impute_coordinates: bool = True
    # medians fitted elsewhere (the training part); None -> from ``ds`` itself
    coordinate_medians: Optional[dict] = None


@dataclass(frozen=True)
class CleaningAction:
    action: str
    row: int
    attribute: Optional[str]
    detail: str

    def to_dict(self):
        return {"action": self.action, "row": self.row,
                "attribute": self.attribute, "detail": self.detail}


@dataclass
class CleaningLog:
    actions: list = field(default_factory=list)

    def add(self, action, row, attribute=None, detail=""):
        self.actions.append(CleaningAction(action, row, attribute, detail))

    def count(self, action):
        return sum(a.action == action for a in self.actions)

    def to_jsonl(self, path):
        with Path(path).open("w", encoding="utf-8") as fh:
            for a in self.actions:
                fh.write(json.dumps(a.to_dict(), sort_keys=True) + "\n")


def coordinate_medians(ds):
    """Median of the finite values of each coordinate attribute."""
    out = {}
    for attribute in COORDINATES:
        values = np.array([r.get(attribute) for r in ds], dtype=float)
        values = values[np.isfinite(values)]
        if values.size == 0:
            raise DataError(f"no finite values for {attribute}; cannot impute")
        out[attribute] = float(np.median(values))
    return out


def clean(ds, policy=CleaningPolicy()):
    """Deduplicate on ``lm_id``, fill missing text and impute coordinates.

    Returns the cleaned :class:`Dataset` and a :class:`CleaningLog`.
    """
    log = CleaningLog()
    kept = []
    first_seen = {}
    for row, rec in enumerate(ds):
        if not rec.lm_id or rec.lm_id == policy.sentinel:
            log.add("dropped_no_id", row, "LM_ID", "empty landmark id")
            continue
        if rec.lm_id in first_seen:
            first_row, first = first_seen[rec.lm_id]
            same = all(
                (a == b) or (math.isnan(a) and math.isnan(b))
                for a, b in ((rec.x, first.x), (rec.y, first.y))
            )
            if not same:
                log.add("id_conflict", row, "LM_ID",
                        f"{rec.lm_id} differs in coordinates from row {first_row}; kept first")
            log.add("duplicate_removed", row, "LM_ID", f"duplicate of row {first_row}")
            continue
        first_seen[rec.lm_id] = (row, rec)
        kept.append((row, rec))

    if not kept:
        raise DataError("dataset is empty after cleaning")

    medians = policy.coordinate_medians
    needs_impute = policy.impute_coordinates and any(
        math.isnan(rec.x) or math.isnan(rec.y) for _, rec in kept
    )
    if needs_impute and medians is None:
        medians = coordinate_medians(Dataset(tuple(rec for _, rec in kept)))

    out = []
    for row, rec in kept:
        changes = {}
        missing = set(rec.missing)
        for attribute, name in FIELD_OF.items():
            value = getattr(rec, name)
            if attribute in COORDINATES:
                if math.isnan(value) and policy.impute_coordinates:
                    changes[name] = medians[attribute]
                    missing.add(attribute)
                    log.add("coordinate_imputed", row, attribute, f"median {medians[attribute]!r}")
            elif value == "":
                changes[name] = policy.sentinel
                missing.add(attribute)
                log.add("missing_filled", row, attribute, policy.sentinel)
        if changes or missing != rec.missing:
            rec = replace(rec, missing=frozenset(missing), **changes)
        out.append(rec)
    return Dataset(tuple(out), ds.provenance), log


def _labels_of(ds):
    if isinstance(ds, Dataset):
        return ds.labels
    return np.asarray(ds, dtype=np.int64)


def _stratified_order(labels, rng):
    # Each class shuffled, then interleaved by fractional rank so that any
    # contiguous slice of the order is (near) stratified.
    keys = np.empty(len(labels))
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        members = members[rng.permutation(len(members))]
        keys[members] = (np.arange(len(members)) + 0.5) / len(members)
    return np.lexsort((labels, keys))


def split(ds, ratios=(0.70, 0.15, 0.15), seed=0):
    """Stratified train/validation/test partition of ``ds`` (a Dataset or labels)."""
    labels = _labels_of(ds)
    n = len(labels)
    if len(ratios) != 3 or any(r < 0 for r in ratios) or not math.isclose(sum(ratios), 1.0):
        raise ValidationError(f"ratios must be three nonnegative fractions summing to 1, got {ratios}")
    if n < 20:
        raise DataError(f"need at least 20 records to split, got {n}")
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) < 2:
        raise DataError("both labels must be present before splitting")
    if counts.min() < 3:
        raise DataError(f"label {classes[counts.argmin()]} has {counts.min()} records; too small to stratify")
    order = _stratified_order(labels, np.random.default_rng(seed))
    n_train = int(round(ratios[0] * n))
    n_val = int(round(ratios[1] * n))
    return SplitIndices(
        train=np.sort(order[:n_train]),
        validation=np.sort(order[n_train:n_train + n_val]),
        test=np.sort(order[n_train + n_val:]),
    )


def kfold(ds, k=5, seed=0):
    """Stratified k-fold assignment; fold sizes differ by at most one."""
    labels = _labels_of(ds)
    n = len(labels)
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}")
    if n < k:
        raise DataError(f"cannot make {k} folds from {n} records")
    if len(np.unique(labels)) < 2:
        raise DataError("both labels must be present")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        members = members[rng.permutation(len(members))]
        fold_of[members] = (offset + np.arange(len(members))) % k
        offset += len(members)
    return FoldAssignment(fold_of, k)


def concat(datasets: Iterable[Dataset], provenance="merged"):
    records = []
    for ds in datasets:
        records.extend(ds.records)
    return Dataset(tuple(records), provenance)


def label_counts(ds):
    labels = _labels_of(ds)
    return {FAKE: int((labels == FAKE).sum()), REAL: int((labels == REAL).sum())}


def is_partition(n, parts: Sequence[np.ndarray]):
    """True when ``parts`` partition ``range(n)`` exactly."""
    joined = np.concatenate(parts) if parts else np.array([], dtype=int)
    return len(joined) == n and np.array_equal(np.sort(joined), np.arange(n))
