"""Sparkov-format transactions: loading, feature engineering, synthetic generation, splits.

Engineered columns follow the variable table ordering (ascending correlation
with the label).  Per-card history features look only at a card's earlier
transactions; fraud-rate encoders only see labels of the rows they are fit on.
"""
from __future__ import annotations

import bisect
import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, fields
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

RAW_COLUMNS = (
    "trans_date_trans_time",
    "cc_num",
    "merchant",
    "category",
    "amt",
    "first",
    "last",
    "gender",
    "street",
    "city",
    "state",
    "zip",
    "lat",
    "long",
    "city_pop",
    "job",
    "dob",
    "trans_num",
    "unix_time",
    "merch_lat",
    "merch_long",
    "is_fraud",
)

FEATURE_COLUMNS = (
    "cc_num",
    "city_pop",
    "merch_lat",
    "lat",
    "time_since_first",
    "long",
    "merch_long",
    "F",
    "M",
    "age",
    "state_fraud_rate",
    "hour",
    "time_since_last",
    "trans_7d",
    "job_fraud_rate",
    "trans_30d",
    "zip_fraud_rate",
    "category_fraud_rate",
    "merchant_fraud_rate",
    "dollar",
)
LABEL_COLUMN = "is_fraud"
RATE_KEYS = ("zip", "state", "job", "category", "merchant")

TIME_FORMAT = "%Y-%m-%d %H:%M:%S"
DATE_FORMAT = "%Y-%m-%d"
EPOCH = datetime(1970, 1, 1)
DAY = 86400
SECONDS_PER_YEAR = 365.25 * DAY


class MissingColumnError(ValueError):
    pass


class RowValidationError(ValueError):
    """Raised with every failing row, as ``(line_number, message)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"line {ln}: {msg}" for ln, msg in self.errors[:10])
        more = f" (+{len(self.errors) - 10} more)" if len(self.errors) > 10 else ""
        super().__init__(f"{len(self.errors)} invalid row(s): {lines}{more}")


@dataclass(frozen=True)
class RawTransaction:
    trans_date_trans_time: datetime
    cc_num: int
    merchant: str
    category: str
    amt: float
    first: str
    last: str
    gender: str
    street: str
    city: str
    state: str
    zip: str
    lat: float
    long: float
    city_pop: int
    job: str
    dob: date
    trans_num: str
    unix_time: int
    merch_lat: float
    merch_long: float
    is_fraud: int

    def validate(self):
        if self.is_fraud not in (0, 1):
            raise ValueError(f"is_fraud must be 0 or 1, got {self.is_fraud}")
        if not self.amt > 0:
            raise ValueError(f"amt must be > 0, got {self.amt}")
        for name, bound in (("lat", 90), ("merch_lat", 90), ("long", 180), ("merch_long", 180)):
            v = getattr(self, name)
            if not -bound <= v <= bound:
                raise ValueError(f"{name}={v} outside [-{bound}, {bound}]")
        if self.gender not in ("F", "M"):
            raise ValueError(f"gender must be F or M, got {self.gender!r}")
        if self.city_pop < 0:
            raise ValueError(f"city_pop must be >= 0, got {self.city_pop}")

    @property
    def timestamp(self) -> int:
        return int((self.trans_date_trans_time - EPOCH).total_seconds())


_PARSERS = {
    "trans_date_trans_time": lambda s: datetime.strptime(s, TIME_FORMAT),
    "cc_num": int,
    "amt": float,
    "lat": float,
    "long": float,
    "city_pop": int,
    "dob": lambda s: datetime.strptime(s, DATE_FORMAT).date(),
    "unix_time": int,
    "merch_lat": float,
    "merch_long": float,
    "is_fraud": int,
}


def _format(value) -> str:
    if isinstance(value, datetime):
        return value.strftime(TIME_FORMAT)
    if isinstance(value, date):
        return value.strftime(DATE_FORMAT)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_row(row: dict) -> RawTransaction:
    values = {}
    for name in RAW_COLUMNS:
        text = row[name].strip()
        try:
            values[name] = _PARSERS.get(name, str)(text)
        except ValueError as exc:
            raise ValueError(f"column {name!r}: cannot parse {text!r}") from exc
    rec = RawTransaction(**values)
    rec.validate()
    return rec


def load_raw(path, on_error: str = "raise") -> list:
    """Read a Sparkov CSV (a leading unnamed index column is tolerated).

    Invalid rows are collected; with ``on_error="raise"`` they are reported
    together in a :class:`RowValidationError`, with ``"skip"`` they are logged
    and dropped.
    """
    records, errors = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for name in RAW_COLUMNS:
            if name not in header:
                raise MissingColumnError(f"{path}: missing column {name!r}")
        for row in reader:
            try:
                records.append(parse_row(row))
            except (ValueError, TypeError) as exc:
                errors.append((reader.line_num, str(exc)))
    if errors:
        if on_error == "raise":
            raise RowValidationError(errors)
        for ln, msg in errors:
            log.warning("skipping line %d: %s", ln, msg)
    return records


def write_raw(records: Sequence[RawTransaction], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_COLUMNS)
        for r in records:
            w.writerow([_format(getattr(r, name)) for name in RAW_COLUMNS])


@dataclass(frozen=True)
class FraudRateEncoder:
    """Group key -> fraud rate; unseen keys map to the global rate of the fit set.

    ``transform`` only ever sees group keys, never labels.
    """

    group_key: str
    rates: dict
    default: float

    def transform(self, keys: Sequence[str]) -> np.ndarray:
        return np.array([self.rates.get(k, self.default) for k in keys], dtype=float)

    def transform_records(self, records: Sequence[RawTransaction]) -> np.ndarray:
        return self.transform([getattr(r, self.group_key) for r in records])


def fraud_rate_encode(records: Sequence[RawTransaction], group_key: str, fit_on=None) -> FraudRateEncoder:
    if group_key not in RATE_KEYS:
        raise ValueError(f"group_key must be one of {RATE_KEYS}, got {group_key!r}")
    idx = range(len(records)) if fit_on is None else [int(i) for i in fit_on]
    frauds = defaultdict(int)
    counts = defaultdict(int)
    total = n_fraud = 0
    for i in idx:
        r = records[i]
        key = getattr(r, group_key)
        counts[key] += 1
        frauds[key] += r.is_fraud
        total += 1
        n_fraud += r.is_fraud
    if total == 0:
        raise ValueError("cannot fit a fraud-rate encoder on an empty set")
    rates = {k: frauds[k] / counts[k] for k in counts}
    return FraudRateEncoder(group_key, rates, n_fraud / total)


@dataclass(frozen=True, eq=False)
class EngineeredDataset:
    features: np.ndarray
    labels: np.ndarray
    columns: tuple = FEATURE_COLUMNS

    def __len__(self):
        return self.labels.size

    def column(self, name: str) -> np.ndarray:
        return self.features[:, self.columns.index(name)]

    def subset(self, idx) -> "EngineeredDataset":
        idx = np.asarray(idx)
        return EngineeredDataset(self.features[idx], self.labels[idx], self.columns)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(self.columns) + [LABEL_COLUMN])
            for row, y in zip(self.features, self.labels):
                w.writerow([repr(float(v)) for v in row] + [int(y)])

    @classmethod
    def from_csv(cls, path) -> "EngineeredDataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [r for r in reader]
        if header[-1] != LABEL_COLUMN:
            raise MissingColumnError(f"{path}: last column must be {LABEL_COLUMN!r}")
        data = np.array([[float(v) for v in r[:-1]] for r in rows]).reshape(len(rows), len(header) - 1)
        labels = np.array([int(r[-1]) for r in rows], dtype=int)
        return cls(data, labels, tuple(header[:-1]))


def card_history(records: Sequence[RawTransaction]) -> np.ndarray:
    """Per-record (time since first, time since last, # in past 7 days, # in past 30 days).

    Windows are trailing and exclude the current transaction; a card's first
    transaction has time-since-last 0.
    """
    out = np.zeros((len(records), 4))
    by_card = defaultdict(list)
    for i, r in enumerate(records):
        by_card[r.cc_num].append(i)
    for idx in by_card.values():
        idx.sort(key=lambda i: (records[i].timestamp, i))
        seen = []
        for i in idx:
            t = records[i].timestamp
            if seen:
                out[i, 0] = t - seen[0]
                out[i, 1] = t - seen[-1]
                out[i, 2] = len(seen) - bisect.bisect_left(seen, t - 7 * DAY)
                out[i, 3] = len(seen) - bisect.bisect_left(seen, t - 30 * DAY)
            seen.append(t)
    return out


def age_years(when: datetime, dob: date) -> float:
    born = datetime(dob.year, dob.month, dob.day)
    return (when - born).total_seconds() / SECONDS_PER_YEAR


def engineer(records: Sequence[RawTransaction], rate_fit_on=None) -> EngineeredDataset:
    """Build the 20 engineered features plus label.

    Fraud-rate columns are fit on ``rate_fit_on`` (indices into ``records``);
    ``None`` fits them on every record.
    """
    n = len(records)
    if n == 0:
        raise ValueError("no records to engineer")
    hist = card_history(records)
    rates = {key: fraud_rate_encode(records, key, rate_fit_on).transform_records(records) for key in RATE_KEYS}
    cols = {
        "cc_num": [float(r.cc_num) for r in records],
        "city_pop": [float(r.city_pop) for r in records],
        "merch_lat": [r.merch_lat for r in records],
        "lat": [r.lat for r in records],
        "time_since_first": hist[:, 0],
        "long": [r.long for r in records],
        "merch_long": [r.merch_long for r in records],
        "F": [1.0 if r.gender == "F" else 0.0 for r in records],
        "M": [1.0 if r.gender == "M" else 0.0 for r in records],
        "age": [age_years(r.trans_date_trans_time, r.dob) for r in records],
        "state_fraud_rate": rates["state"],
        "hour": [float(r.trans_date_trans_time.hour) for r in records],
        "time_since_last": hist[:, 1],
        "trans_7d": hist[:, 2],
        "job_fraud_rate": rates["job"],
        "trans_30d": hist[:, 3],
        "zip_fraud_rate": rates["zip"],
        "category_fraud_rate": rates["category"],
        "merchant_fraud_rate": rates["merchant"],
        "dollar": [r.amt for r in records],
    }
    features = np.column_stack([np.asarray(cols[c], dtype=float) for c in FEATURE_COLUMNS])
    labels = np.array([r.is_fraud for r in records], dtype=int)
    return EngineeredDataset(features, labels)


def pearson_corr(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need two equal-length vectors with at least 2 entries")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("correlation undefined for a constant vector")
    return float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))


def contingency_table(a, b) -> np.ndarray:
    _, ia = np.unique(np.asarray(a), return_inverse=True)
    _, ib = np.unique(np.asarray(b), return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1))
    np.add.at(table, (ia, ib), 1)
    return table


def cramers_v(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("categorical vectors differ in length")
    table = contingency_table(a, b)
    if min(table.shape) < 2:
        raise ValueError("Cramer's V needs at least two categories in each variable")
    n = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    chi2 = float(np.sum((table - expected) ** 2 / expected))
    return math.sqrt(chi2 / (n * (min(table.shape) - 1)))


def pcc_table(ds: EngineeredDataset) -> list:
    """(column, PCC with the label) sorted ascending; constant columns are skipped."""
    out = []
    for name in ds.columns:
        try:
            out.append((name, pearson_corr(ds.column(name), ds.labels)))
        except ValueError:
            continue
    return sorted(out, key=lambda t: abs(t[1]))


def subsample_to_ratio(labels, r: float, n_anomalies: int = 100, rng=None) -> np.ndarray:
    """Indices of ``n_anomalies`` anomalies plus ``round(n_anomalies (1 - r) / r)`` normals."""
    if not 0 < r <= 1:
        raise ValueError(f"anomaly ratio must lie in (0, 1], got {r}")
    rng = np.random.default_rng(rng)
    labels = np.asarray(labels)
    anomalies = np.flatnonzero(labels == 1)
    normals = np.flatnonzero(labels == 0)
    n_normal = int(round(n_anomalies * (1 - r) / r))
    if anomalies.size < n_anomalies or normals.size < n_normal:
        raise ValueError(
            f"pool too small for r={r}: need {n_anomalies} anomalies / {n_normal} normals, "
            f"have {anomalies.size} / {normals.size}"
        )
    picked = np.concatenate(
        [rng.choice(anomalies, n_anomalies, replace=False), rng.choice(normals, n_normal, replace=False)]
    )
    return np.sort(picked)


@dataclass(frozen=True, eq=False)
class DatasetSplit:
    train: np.ndarray
    test: np.ndarray
    anomaly_ratio: float
    seed: int | None = None


def _shuffled_by_class(labels, rng) -> list:
    labels = np.asarray(labels)
    return [rng.permutation(np.flatnonzero(labels == c)) for c in np.unique(labels)[::-1]]


def split(labels, test_fraction: float = 0.1, rng=None) -> DatasetSplit:
    """Stratified train/test split over positions ``0..len(labels)-1``."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = np.random.default_rng(rng)
    labels = np.asarray(labels)
    train, test = [], []
    for idx in _shuffled_by_class(labels, rng):
        n_test = int(round(idx.size * test_fraction))
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    train = np.sort(np.concatenate(train))
    test = np.sort(np.concatenate(test))
    if train.size == 0 or test.size == 0:
        raise ValueError(f"{labels.size} samples are too few for test_fraction={test_fraction}")
    return DatasetSplit(train, test, float(np.mean(labels == 1)), seed)


def kfold(labels, k: int = 10, rng=None) -> list:
    """Stratified folds: each class is shuffled then dealt round-robin across folds."""
    labels = np.asarray(labels)
    if k < 2 or k > labels.size:
        raise ValueError(f"cannot make {k} folds from {labels.size} samples")
    rng = np.random.default_rng(rng)
    order = np.concatenate(_shuffled_by_class(labels, rng))
    return [np.sort(order[f::k]) for f in range(k)]


@dataclass
class Standardizer:
    """Per-feature z-score fit on training rows, then clip to 3 sigma and divide by 3."""

    mean: np.ndarray | None = None
    scale: np.ndarray | None = None
    warnings: list = field(default_factory=list)

    def fit(self, x) -> "Standardizer":
        x = np.asarray(x, dtype=float)
        self.mean = x.mean(axis=0)
        std = x.std(axis=0)
        flat = std == 0
        if flat.any():
            cols = np.flatnonzero(flat).tolist()
            self.warnings.append(f"zero-variance feature(s) {cols}: mean subtraction only")
            log.warning("zero-variance feature(s) %s: mean subtraction only", cols)
        self.scale = np.where(flat, 1.0, std)
        return self

    def zscore(self, x) -> np.ndarray:
        if self.mean is None:
            raise RuntimeError("Standardizer used before fit")
        return (np.asarray(x, dtype=float) - self.mean) / self.scale

    def apply(self, x) -> np.ndarray:
        return np.clip(self.zscore(x), -3.0, 3.0) / 3.0


def standardize_fit(x) -> Standardizer:
    return Standardizer().fit(x)


def standardize_apply(scaler: Standardizer, x) -> np.ndarray:
    return scaler.apply(x)


# --- synthetic generator ---------------------------------------------------

CATEGORIES = (
    "entertainment",
    "food_dining",
    "gas_transport",
    "grocery_net",
    "grocery_pos",
    "health_fitness",
    "home",
    "kids_pets",
    "misc_net",
    "misc_pos",
    "personal_care",
    "shopping_net",
    "shopping_pos",
    "travel",
)
_NORMAL_CATEGORY_WEIGHT = np.array([7, 7, 10, 4, 9, 6, 9, 9, 5, 6, 7, 7, 9, 3], dtype=float)
_FRAUD_CATEGORY_WEIGHT = np.array([2, 2, 4, 1, 24, 1, 2, 2, 14, 3, 2, 30, 10, 1], dtype=float)
_CATEGORY_SPEND = np.array([60, 50, 65, 50, 115, 55, 58, 57, 75, 60, 45, 85, 75, 110], dtype=float)

_FIRST_F = ("Jennifer", "Mary", "Linda", "Susan", "Karen", "Lisa", "Nancy", "Sarah", "Amanda", "Rachel")
_FIRST_M = ("James", "John", "Robert", "Michael", "David", "William", "Thomas", "Daniel", "Mark", "Paul")
_LAST = ("Smith", "Johnson", "Brown", "Garcia", "Miller", "Davis", "Wilson", "Moore", "Taylor", "Clark",
         "Lewis", "Walker", "Young", "Allen", "King", "Wright", "Hill", "Green", "Baker", "Adams")
_STREETS = ("Oak", "Pine", "Maple", "Cedar", "Elm", "Lake", "Hill", "River", "Park", "Forest")
_JOBS = ("Accountant", "Architect", "Chemist", "Designer", "Economist", "Engineer", "Farmer",
         "Journalist", "Lawyer", "Librarian", "Nurse", "Pharmacist", "Physicist", "Pilot",
         "Surveyor", "Teacher", "Therapist", "Veterinarian", "Writer", "Zoologist")
_MERCHANT_WORDS = ("Rippin", "Heller", "Lind", "Kutch", "Keeling", "Haley", "Kuhn", "Stokes",
                   "Bauch", "Ziemann", "Koepp", "Boyer", "Schmitt", "Kris", "Durgan", "Hermann")
# (city, state, zip, lat, long, population)
_CITIES = (
    ("Moravian Falls", "NC", "28654", 36.0788, -81.1781, 3495),
    ("Orient", "WA", "99160", 48.8878, -118.2105, 149),
    ("Malad City", "ID", "83252", 42.1808, -112.262, 4154),
    ("Boulder", "MT", "59632", 46.2306, -112.1138, 1939),
    ("Doe Hill", "VA", "24433", 38.4207, -79.4629, 99),
    ("Dublin", "PA", "18917", 40.375, -75.2045, 2158),
    ("Holcomb", "KS", "67851", 37.9931, -100.9893, 2691),
    ("Edinburg", "VA", "22824", 38.8432, -78.6003, 6018),
    ("Manor", "PA", "15665", 40.3359, -79.6607, 1472),
    ("Clarksville", "TN", "37040", 36.522, -87.349, 151785),
    ("Houston", "TX", "77070", 29.9601, -95.5661, 2906700),
    ("Columbus", "OH", "43215", 39.9672, -83.0045, 1312034),
    ("Fresno", "CA", "93721", 36.7372, -119.7844, 628794),
    ("Oakland", "CA", "94607", 37.8063, -122.295, 754209),
    ("Bronx", "NY", "10472", 40.8295, -73.8696, 1385402),
    ("Dallas", "TX", "75218", 32.8457, -96.6942, 1263321),
)


_STATES = ("AL", "AR", "CA", "CO", "FL", "GA", "IA", "IL", "IN", "KS", "KY", "MI", "MN", "MO", "MS",
           "NC", "NE", "NY", "OH", "OK", "PA", "SC", "TN", "TX", "VA", "WI", "WV")


def _make_towns(rng, n: int) -> list:
    """The fixed town table, then made-up towns spread over the contiguous US."""
    towns = list(_CITIES[:n])
    while len(towns) < n:
        lat = float(np.clip(rng.normal(38.5, 4.5), 25.5, 48.8))
        lon = float(np.clip(rng.normal(-90.0, 11.0), -123.0, -68.0))
        pop = int(np.exp(rng.normal(math.log(2500), 1.6)))
        name = f"{rng.choice(_STREETS)} {rng.choice(('Falls', 'City', 'Springs', 'Grove', 'Ridge', 'Valley'))}"
        zip_code = f"{int(rng.integers(1000, 99950)):05d}"
        towns.append((name, str(rng.choice(_STATES)), zip_code, round(lat, 4), round(lon, 4), pop))
    return towns


def synth_generate(seed: int, n_normal: int, n_anomalies: int) -> list:
    """Sparkov-shaped transactions with planted fraud structure.

    Frauds cluster at night, carry larger amounts, favour a few categories,
    merchants, jobs and towns, and come in short bursts on one card.
    """
    if n_normal < 0 or n_anomalies < 0:
        raise ValueError("counts must be >= 0")
    rng = np.random.default_rng(seed)
    start = datetime(2019, 1, 1)
    span = 2 * 365 * DAY

    n_cards = max(8, (n_normal + n_anomalies) // 80)
    towns = _make_towns(rng, max(len(_CITIES), n_cards // 2))
    cards = []
    for c in range(n_cards):
        gender = "F" if rng.random() < 0.55 else "M"
        city = towns[int(rng.integers(len(towns)))]
        birth = date(1930, 1, 1) + timedelta(days=int(rng.integers(0, 72 * 365)))
        cards.append(
            {
                "cc_num": int(rng.integers(10**14, 10**16)),
                "first": str(rng.choice(_FIRST_F if gender == "F" else _FIRST_M)),
                "last": str(rng.choice(_LAST)),
                "gender": gender,
                "street": f"{int(rng.integers(1, 9999))} {rng.choice(_STREETS)} St",
                "city": city[0],
                "state": city[1],
                "zip": city[2],
                "lat": round(city[3] + float(rng.normal(0, 0.05)), 4),
                "long": round(city[4] + float(rng.normal(0, 0.05)), 4),
                "city_pop": city[5],
                "job": str(rng.choice(_JOBS)),
                "dob": birth,
            }
        )
    job_risk = {j: float(rng.lognormal(0, 1.0)) for j in _JOBS}
    town_risk = {c[2]: float(rng.lognormal(0, 0.8)) for c in towns}
    card_weight = np.array([job_risk[c["job"]] * town_risk[c["zip"]] for c in cards])
    card_weight /= card_weight.sum()

    merchants = []
    for m in range(10 * len(CATEGORIES)):
        words = rng.choice(_MERCHANT_WORDS, 2, replace=False)
        merchants.append((f"fraud_{words[0]}-{words[1]} {m}", CATEGORIES[m % len(CATEGORIES)]))
    by_category = defaultdict(list)
    for i, (_, cat) in enumerate(merchants):
        by_category[cat].append(i)
    merchant_risk = rng.lognormal(0, 2.0, len(merchants))

    def pick_merchant(cat_idx, fraud):
        pool = by_category[CATEGORIES[cat_idx]]
        w = merchant_risk[pool] if fraud else np.ones(len(pool))
        return pool[int(rng.choice(len(pool), p=w / w.sum()))]

    day_hours = np.array([1, 1, 1, 1, 1, 2, 4, 6, 8, 9, 10, 10, 11, 11, 10, 10, 10, 10, 9, 8, 6, 4, 3, 2], float)
    night = np.array([22, 23, 0, 1, 2, 3])

    events = []  # (seconds from start, card index, fraud flag)
    for _ in range(n_normal):
        hour = int(rng.choice(24, p=day_hours / day_hours.sum()))
        day = int(rng.integers(0, span // DAY))
        t = day * DAY + hour * 3600 + int(rng.integers(0, 3600))
        events.append((t, int(rng.choice(n_cards)), 0))
    remaining = n_anomalies
    while remaining > 0:
        burst = min(remaining, 1 if rng.random() < 0.15 else int(rng.integers(3, 15)))
        card = int(rng.choice(n_cards, p=card_weight))
        day0 = int(rng.integers(0, span // DAY - 3))
        for _ in range(burst):
            hour = int(rng.choice(night)) if rng.random() < 0.85 else int(rng.integers(0, 24))
            t = (day0 + int(rng.integers(0, 2))) * DAY + hour * 3600 + int(rng.integers(0, 3600))
            events.append((t, card, 1))
        remaining -= burst

    events.sort()
    records = []
    for t, card_idx, fraud in events:
        card = cards[card_idx]
        weights = _FRAUD_CATEGORY_WEIGHT if fraud else _NORMAL_CATEGORY_WEIGHT
        cat_idx = int(rng.choice(len(CATEGORIES), p=weights / weights.sum()))
        m = pick_merchant(cat_idx, fraud)
        if fraud:
            if rng.random() < 0.1:
                amt = float(rng.uniform(1.0, 25.0))
            else:
                amt = float(rng.lognormal(math.log(6 * _CATEGORY_SPEND[cat_idx]), 0.5))
        else:
            amt = float(rng.lognormal(math.log(_CATEGORY_SPEND[cat_idx]), 0.6))
        when = start + timedelta(seconds=int(t))
        records.append(
            RawTransaction(
                trans_date_trans_time=when,
                cc_num=card["cc_num"],
                merchant=merchants[m][0],
                category=merchants[m][1],
                amt=max(0.01, round(amt, 2)),
                first=card["first"],
                last=card["last"],
                gender=card["gender"],
                street=card["street"],
                city=card["city"],
                state=card["state"],
                zip=card["zip"],
                lat=card["lat"],
                long=card["long"],
                city_pop=card["city_pop"],
                job=card["job"],
                dob=card["dob"],
                trans_num=rng.bytes(16).hex(),
                unix_time=int((when - EPOCH).total_seconds()),
                merch_lat=round(card["lat"] + float(rng.uniform(-1, 1)), 6),
                merch_long=round(card["long"] + float(rng.uniform(-1, 1)), 6),
                is_fraud=fraud,
            )
        )
    return records


def raw_field_names() -> tuple:
    return tuple(f.name for f in fields(RawTransaction))
