"""Seeded generators for fake POI records and the bundled reference sample."""

import json
import string
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import lexicon
from .data import FAKE, REAL, Dataset, PoiRecord, concat
from .errors import DataError, ValidationError
from .patterns import PHONE, POSTAL_CODE

_LETTERS = string.ascii_uppercase
_ALNUM = string.ascii_uppercase + string.digits


def _default_name_lexicon():
    regional = lexicon.MUNICIPALITIES.values()
    areas = sorted({a for m in regional for a in m["areas"]})
    streets = sorted({s for m in regional for s in m["streets"]})
    made_up = [f"{name} {suffix}" for name, suffix in zip(lexicon.SURNAMES, lexicon.STREET_SUFFIXES * 4)]
    return {
        "places": areas + list(lexicon.SURNAMES[:10]),
        "nouns": sorted({n for nouns in lexicon.CATEGORY_NOUNS.values() for n in nouns}),
        "streets": streets + made_up[:10],
    }


@dataclass
class FakeProfile:
    """Knobs controlling how fabricated records deviate from real ones.

    ``local_*`` rates give the chance that a fake borrows a regional value
    (one of the real municipalities, province ``ON``, a regional postal
    prefix) instead of an arbitrary one; borrowed values are still drawn
    independently of each other and of the coordinates.
    """

    coord_box: tuple = lexicon.REGION_BOX
    out_of_box_rate: float = 0.25
    valid_postal_rate: float = 0.75
    valid_phone_rate: float = 0.75
    local_municipality_rate: float = 0.75
    local_province_rate: float = 0.85
    local_postal_rate: float = 0.75
    local_website_rate: float = 0.3
    missing_unit_rate: float = 0.6
    category_pool: list = field(default_factory=lambda: list(lexicon.CATEGORIES))
    name_lexicon: dict = field(default_factory=_default_name_lexicon)

    def __post_init__(self):
        self.validate()

    def validate(self):
        rates = ("out_of_box_rate", "valid_postal_rate", "valid_phone_rate",
                 "local_municipality_rate", "local_province_rate", "local_postal_rate",
                 "local_website_rate", "missing_unit_rate")
        for name in rates:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")
        if len(self.coord_box) != 4:
            raise ValidationError("coord_box must be (x_min, x_max, y_min, y_max)")
        x_min, x_max, y_min, y_max = self.coord_box
        if not (x_min < x_max and y_min < y_max):
            raise ValidationError(f"coord_box is not well ordered: {self.coord_box}")
        if not self.category_pool:
            raise ValidationError("category_pool is empty")
        for key in ("places", "nouns", "streets"):
            if not self.name_lexicon.get(key):
                raise ValidationError(f"name_lexicon needs a nonempty {key!r} list")
        return self

    def to_dict(self):
        d = asdict(self)
        d["coord_box"] = list(self.coord_box)
        return d

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown FakeProfile keys: {sorted(unknown)}")
        d = dict(d)
        if "coord_box" in d:
            d["coord_box"] = tuple(d["coord_box"])
        if "name_lexicon" in d:
            d["name_lexicon"] = {**_default_name_lexicon(), **d["name_lexicon"]}
        return cls(**d).validate()

    @classmethod
    def from_json(cls, path):
        with Path(path).open(encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _digits(rng, n):
    return "".join(str(int(d)) for d in rng.integers(0, 10, size=n))


def _postal_tail(rng):
    return f"{int(rng.integers(10))}{_pick(rng, _LETTERS)}{int(rng.integers(10))}"


def _random_fsa(rng):
    return f"{_pick(rng, _LETTERS)}{int(rng.integers(10))}{_pick(rng, _LETTERS)}"


def _invalid_postal(rng):
    while True:
        code = "".join(_pick(rng, _ALNUM) for _ in range(int(rng.integers(4, 8))))
        if not POSTAL_CODE.match(code):
            return code


def _invalid_phone(rng):
    while True:
        shape = int(rng.integers(3))
        if shape == 0:
            phone = _digits(rng, int(rng.integers(5, 10)))
        elif shape == 1:
            phone = f"{_digits(rng, 3)}-{_digits(rng, 2)}-{_digits(rng, int(rng.integers(2, 4)))}"
        else:
            phone = f"x{_digits(rng, int(rng.integers(3, 6)))}"
        if not PHONE.match(phone):
            return phone


def _valid_phone(rng, area_codes):
    area = _pick(rng, area_codes)
    body = f"{int(rng.integers(200, 1000))}-{_digits(rng, 4)}"
    style = int(rng.integers(3))
    if style == 0:
        return f"{area}-{body}"
    if style == 1:
        return f"({area}) {body}"
    return f"+1-{area}-{body}"


def _point_in(rng, box):
    x_min, x_max, y_min, y_max = box
    return round(float(rng.uniform(x_min, x_max)), 6), round(float(rng.uniform(y_min, y_max)), 6)


def _point_outside(rng, box):
    x_min, x_max, y_min, y_max = box
    wx, wy = x_max - x_min, y_max - y_min
    wide = (x_min - 3 * wx, x_max + 3 * wx, y_min - 3 * wy, y_max + 3 * wy)
    while True:
        x, y = _point_in(rng, wide)
        if not (x_min <= x <= x_max and y_min <= y <= y_max):
            return x, y


def _slug(text):
    return "".join(ch for ch in text.lower() if ch.isalnum())


def generate_fake(n, profile=None, seed=0):
    """Return ``n`` fabricated records (label 0) drawn deterministically from ``seed``."""
    profile = (profile or FakeProfile()).validate()
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    words = profile.name_lexicon
    local_names = tuple(lexicon.MUNICIPALITIES)
    local_fsas = tuple(f for m in lexicon.MUNICIPALITIES.values() for f in m["fsa"])
    records = []
    for i in range(n):
        if rng.random() < profile.out_of_box_rate:
            x, y = _point_outside(rng, profile.coord_box)
        else:
            x, y = _point_in(rng, profile.coord_box)
        cate = _pick(rng, profile.category_pool)
        name = f"{_pick(rng, words['places'])} {_pick(rng, words['nouns'])}"
        street = f"{int(rng.integers(*lexicon.STREET_NUMBER_RANGE))} {_pick(rng, words['streets'])}"
        if rng.random() < profile.missing_unit_rate:
            unit = ""
        else:
            unit = f"{_pick(rng, lexicon.FAKE_UNIT_PREFIXES)} {int(rng.integers(1, 40))}"
        if rng.random() < profile.local_municipality_rate:
            mun = _pick(rng, local_names)
        else:
            mun = _pick(rng, lexicon.CITIES)
        pr = "ON" if rng.random() < profile.local_province_rate else _pick(rng, lexicon.PROVINCES)
        if rng.random() < profile.valid_postal_rate:
            fsa = _pick(rng, local_fsas) if rng.random() < profile.local_postal_rate else _random_fsa(rng)
            pc = f"{fsa} {_postal_tail(rng)}"
        else:
            pc = _invalid_postal(rng)
        if rng.random() < profile.valid_phone_rate:
            phone = _valid_phone(rng, lexicon.AREA_CODES)
        else:
            phone = _invalid_phone(rng)
        scheme = "https" if rng.random() < 0.8 else "http"
        roll = rng.random()
        if roll < profile.local_website_rate:
            site = lexicon.MUNICIPALITIES[_pick(rng, local_names)]["site"]
            website = f"{scheme}://{site}/{_slug(name.split()[0])}"
        elif roll < 0.5 + profile.local_website_rate / 2:
            website = f"{scheme}://www.{_slug(name)}.{_pick(rng, ('ca', 'com'))}"
        else:
            domain = f"{_pick(rng, lexicon.SURNAMES)}{_pick(rng, lexicon.SURNAMES)}".lower()
            website = f"{scheme}://www.{domain}.{_pick(rng, lexicon.WEB_TLDS)}"
        records.append(PoiRecord(
            lm_id=f"F-{i + 1:05d}", x=x, y=y, lm_name=name, cate=cate, str_add=street,
            unit=unit, mun=mun, pr=pr, pc=pc, phone=phone, website=website, label=FAKE,
        ))
    return Dataset(tuple(records), "generated")


def merge_labeled(real, fake):
    """Concatenate real (label 1) and fake (label 0) records, real first."""
    if len(real) == 0 or len(fake) == 0:
        raise DataError("both a real and a fake dataset are required")
    for i, rec in enumerate(real):
        if rec.label != REAL:
            raise DataError(f"real-side record {i} ({rec.lm_id}) is labeled {rec.label}", row=i)
    for i, rec in enumerate(fake):
        if rec.label != FAKE:
            raise DataError(f"fake-side record {i} ({rec.lm_id}) is labeled {rec.label}", row=i)
    return concat([real, fake], provenance="merged")


def generate_reference(n=1300, seed=20240607, duplicates=12, missing_coordinates=4):
    """Build the regional reference sample that ships as the bundled dataset.

    Records are internally consistent (coordinates, postal prefix and website
    all agree with the municipality). ``duplicates`` extra rows repeat earlier
    ids and ``missing_coordinates`` rows have a blank X, so the raw file
    exercises the cleaning stage.
    """
    rng = np.random.default_rng(seed)
    names = tuple(lexicon.MUNICIPALITIES)
    shares = np.array([lexicon.MUNICIPALITIES[m]["share"] for m in names])
    records = []
    for i in range(n):
        mun = names[int(rng.choice(len(names), p=shares / shares.sum()))]
        info = lexicon.MUNICIPALITIES[mun]
        x, y = _point_in(rng, info["x"] + info["y"])
        cate = _pick(rng, lexicon.CATEGORIES)
        area = _pick(rng, info["areas"])
        name = f"{area} {_pick(rng, lexicon.CATEGORY_NOUNS[cate])}"
        street = f"{int(rng.integers(1, 12000))} {_pick(rng, info['streets'])}"
        unit = "" if rng.random() < 0.8 else f"{_pick(rng, lexicon.UNIT_PREFIXES)} {int(rng.integers(1, 30))}"
        pc = f"{_pick(rng, info['fsa'])} {_postal_tail(rng)}"
        phone = "" if rng.random() < 0.06 else _valid_phone(rng, lexicon.LOCAL_AREA_CODES)
        roll = rng.random()
        if roll < 0.08:
            website = ""
        elif roll < 0.6:
            website = f"https://{info['site']}/{_slug(area)}"
        else:
            scheme = "https" if rng.random() < 0.8 else "http"
            website = f"{scheme}://www.{_slug(name)}.{_pick(rng, ('ca', 'com'))}"
        records.append(PoiRecord(
            lm_id=str(100001 + i), x=x, y=y, lm_name=name, cate=cate, str_add=street,
            unit=unit, mun=mun, pr="ON", pc=pc, phone=phone, website=website, label=REAL,
        ))
    for _ in range(duplicates):
        j = int(rng.integers(n))
        records.insert(int(rng.integers(j + 1, len(records) + 1)), records[j])
    for j in rng.choice(len(records), size=missing_coordinates, replace=False):
        rec = records[int(j)]
        records[int(j)] = PoiRecord(**{**rec.__dict__, "x": float("nan")})
    return Dataset(tuple(records), "bundled")


def bundled_path():
    return Path(__file__).parent / "resources" / "peel_poi_sample.csv"
