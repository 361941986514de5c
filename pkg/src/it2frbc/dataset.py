"""Dataset representation, CSV ingestion, normalization, splitting, and the
two synthetic non-linear benchmark generators.

Feature matrices are float64 numpy arrays of shape ``(n, num_features)``.
Labels are integer class indices ``0..num_classes-1``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError

MISSING_MARKS = ("", "?")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Pattern:
    """One observation: a feature vector and an optional class index."""

    features: np.ndarray
    label: int | None = None

    def __post_init__(self):
        vec = np.asarray(self.features, dtype=float)
        if vec.ndim != 1:
            raise DataError("pattern features must be a 1-D vector")
        if not np.all(np.isfinite(vec)):
            raise DataError("pattern features must be finite")
        object.__setattr__(self, "features", _freeze(vec))


@dataclass(frozen=True)
class Dataset:
    """A labeled point set: features ``(n, num_features)``, labels ``(n,)``.

    ``labels`` holds class indices below ``num_classes``; ``class_names``
    gives the display string per index.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise DataError("features must be a 2-D array")
        if y.shape != (X.shape[0],):
            raise DataError("labels must be one per pattern")
        if not np.all(np.isfinite(X)):
            raise DataError("features must be finite")
        if len(self.class_names) < 1:
            raise DataError("at least one class name required")
        if y.size and (y.min() < 0 or y.max() >= len(self.class_names)):
            raise DataError("label outside 0..num_classes-1")
        object.__setattr__(self, "features", _freeze(X))
        object.__setattr__(self, "labels", _freeze(y))
        object.__setattr__(self, "class_names", tuple(str(c) for c in self.class_names))

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def pattern(self, i: int) -> Pattern:
        return Pattern(self.features[i], int(self.labels[i]))

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)


@dataclass(frozen=True)
class NormalizationParams:
    """Per-feature min/max fitted on training data; maps features to [0,1].

    Out-of-range values are NOT clamped (normalized test values may fall
    outside [0,1]) so distances keep their true geometry. A constant
    feature (min == max) maps to 0.5.
    """

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.minimum, dtype=float)
        hi = np.asarray(self.maximum, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DataError("min/max must be 1-D vectors of equal length")
        if np.any(lo > hi):
            raise DataError("per-feature min must not exceed max")
        object.__setattr__(self, "minimum", _freeze(lo))
        object.__setattr__(self, "maximum", _freeze(hi))

    @property
    def num_features(self) -> int:
        return self.minimum.shape[0]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Normalize a feature matrix (or single feature vector)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != self.num_features:
            raise DataError(
                f"input has {X.shape[1]} features but normalizer expects {self.num_features}"
            )
        span = self.maximum - self.minimum
        out = np.empty_like(X)
        const = span == 0
        out[:, ~const] = (X[:, ~const] - self.minimum[~const]) / span[~const]
        out[:, const] = 0.5
        return out[0] if single else out

    def invert(self, X: np.ndarray) -> np.ndarray:
        """Map normalized coordinates back to original units."""
        X = np.asarray(X, dtype=float)
        return X * (self.maximum - self.minimum) + self.minimum


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic shuffled train/test split specification."""

    train_fraction: float = 0.5
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in the open interval (0,1)")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")


def _parse_number(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def load_csv(path, label_column: int, missing_policy: str = "drop_row") -> Dataset:
    """Load a delimiter-separated file into a Dataset.

    The label column may hold strings; labels are mapped to indices in
    first-appearance order. A non-numeric first row is treated as a header.
    Missing values (empty field or "?") are handled per ``missing_policy``:
    "drop_row" removes the row, "error" raises.
    """
    if missing_policy not in ("drop_row", "error"):
        raise ConfigError(f"unknown missing_policy {missing_policy!r}")
    try:
        with open(path, newline="") as fh:
            rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError("empty dataset")

    width = len(rows[0][1])
    if width < 2:
        raise DataError("need at least one feature column and one label column")
    label_idx = label_column if label_column >= 0 else width + label_column
    if not 0 <= label_idx < width:
        raise ConfigError(f"label column {label_column} out of range for {width} columns")

    # Header row: some feature cell is neither numeric nor a missing mark.
    first = rows[0][1]
    is_header = any(
        _parse_number(cell) is None and cell.strip() not in MISSING_MARKS
        for i, cell in enumerate(first)
        if i != label_idx
    )
    if is_header:
        rows = rows[1:]
        if not rows:
            raise DataError("empty dataset")

    feats: list[list[float]] = []
    raw_labels: list[str] = []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"line {lineno}: expected {width} fields, found {len(row)}")
        cells = [c.strip() for c in row]
        if any(c in MISSING_MARKS for c in cells):
            if missing_policy == "error":
                raise DataError(f"line {lineno}: missing value")
            continue
        vec = []
        for i, cell in enumerate(cells):
            if i == label_idx:
                continue
            val = _parse_number(cell)
            if val is None:
                raise DataError(f"line {lineno}: non-numeric feature value {cell!r}")
            vec.append(val)
        feats.append(vec)
        raw_labels.append(cells[label_idx])

    if not feats:
        raise DataError("empty dataset")

    name_to_idx: dict[str, int] = {}
    for name in raw_labels:
        if name not in name_to_idx:
            name_to_idx[name] = len(name_to_idx)
    labels = np.array([name_to_idx[n] for n in raw_labels], dtype=np.int64)
    return Dataset(np.array(feats), labels, tuple(name_to_idx))


def load_features_csv(path) -> np.ndarray:
    """Load an unlabeled CSV (all columns numeric features)."""
    try:
        with open(path, newline="") as fh:
            rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError("empty dataset")
    if any(_parse_number(c) is None for c in rows[0][1]):
        rows = rows[1:]
        if not rows:
            raise DataError("empty dataset")
    width = len(rows[0][1])
    out = []
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"line {lineno}: expected {width} fields, found {len(row)}")
        vec = [_parse_number(c) for c in row]
        if any(v is None for v in vec):
            raise DataError(f"line {lineno}: non-numeric value")
        out.append(vec)
    return np.array(out, dtype=float)


def save_csv(ds: Dataset, path) -> None:
    """Write a dataset in the same CSV shape load_csv accepts (label last)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(ds.num_features)] + ["label"])
        for x, y in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in x] + [ds.class_names[y]])


def fit_normalizer(ds: Dataset) -> NormalizationParams:
    """Per-feature min/max over the dataset."""
    if len(ds) == 0:
        raise DataError("cannot fit normalizer on an empty dataset")
    return NormalizationParams(ds.features.min(axis=0), ds.features.max(axis=0))


def apply_normalizer(params: NormalizationParams, p: Pattern) -> Pattern:
    """Map one pattern into normalized feature space."""
    return Pattern(params.apply(p.features), p.label)


def normalize_dataset(params: NormalizationParams, ds: Dataset) -> Dataset:
    """Map a whole dataset into normalized feature space."""
    return Dataset(params.apply(ds.features), ds.labels, ds.class_names)


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Shuffle and divide into train/test; deterministic in spec.seed."""
    n = len(ds)
    if n < 2:
        raise DataError("need at least 2 patterns to split")
    rng = np.random.default_rng(spec.seed)

    if spec.stratified:
        train_idx: list[np.ndarray] = []
        test_idx: list[np.ndarray] = []
        for j in range(ds.num_classes):
            members = np.flatnonzero(ds.labels == j)
            k = int(np.floor(len(members) * spec.train_fraction + 0.5))
            if len(members) and k == 0:
                raise DataError(
                    f"stratified split leaves class {ds.class_names[j]!r} absent from train"
                )
            perm = rng.permutation(members)
            train_idx.append(perm[:k])
            test_idx.append(perm[k:])
        tr = rng.permutation(np.concatenate(train_idx))
        te = rng.permutation(np.concatenate(test_idx))
    else:
        k = int(np.floor(n * spec.train_fraction + 0.5))
        k = min(max(k, 1), n - 1)
        perm = rng.permutation(n)
        tr, te = perm[:k], perm[k:]

    make = lambda idx: Dataset(ds.features[idx], ds.labels[idx], ds.class_names)
    return make(tr), make(te)


CIRCLE_CENTER = (10.0, 10.0)
INNER_RADIUS = 5.0
OUTER_RADIUS = 7.0
CIRCULAR_COUNTS = (63, 123)


def gen_circular(seed: int) -> Dataset:
    """Synthetic 2-feature problem: a disk of class 1 surrounded by class 2.

    Points are drawn uniformly in [0,20]^2 and labeled by distance d to
    (10,10): class 1 if d < 5, class 2 if d > 7; the annulus 5 <= d <= 7 is
    discarded. Drawing continues until the class totals reach 63 and 123.
    """
    rng = np.random.default_rng(seed)
    inner: list[np.ndarray] = []
    outer: list[np.ndarray] = []
    while len(inner) < CIRCULAR_COUNTS[0] or len(outer) < CIRCULAR_COUNTS[1]:
        x = rng.uniform(0.0, 20.0, size=2)
        d = float(np.hypot(x[0] - CIRCLE_CENTER[0], x[1] - CIRCLE_CENTER[1]))
        if d < INNER_RADIUS and len(inner) < CIRCULAR_COUNTS[0]:
            inner.append(x)
        elif d > OUTER_RADIUS and len(outer) < CIRCULAR_COUNTS[1]:
            outer.append(x)
    feats = np.array(inner + outer)
    labels = np.array([0] * CIRCULAR_COUNTS[0] + [1] * CIRCULAR_COUNTS[1])
    return Dataset(feats, labels, ("1", "2"))


# Irregular benchmark geometry: an elongated three-lobe blob (class 2) of
# different lobe sizes and sampling densities, surrounded by class 1 with a
# clear margin. Counts are fixed at 480/383; the shape itself is a
# documented convention of this package (see module docs).
IRREGULAR_LOBES = (
    ((6.5, 9.0), 2.2, 0.45),
    ((10.0, 11.5), 1.5, 0.30),
    ((13.5, 9.5), 1.0, 0.25),
)
IRREGULAR_GAP = 1.2
IRREGULAR_COUNTS = (480, 383)


def gen_irregular(seed: int) -> Dataset:
    """Synthetic 2-feature problem: 863 patterns, class 1 (480) surrounding
    an irregular multi-lobe class 2 (383); not linearly separable."""
    rng = np.random.default_rng(seed)
    blob: list[tuple[float, float]] = []
    while len(blob) < IRREGULAR_COUNTS[1]:
        u = rng.random()
        acc = 0.0
        for (cx, cy), radius, weight in IRREGULAR_LOBES:
            acc += weight
            if u <= acc:
                ang = rng.uniform(0.0, 2.0 * np.pi)
                rad = radius * np.sqrt(rng.random())
                px, py = cx + rad * np.cos(ang), cy + rad * np.sin(ang)
                if 0.0 <= px <= 20.0 and 0.0 <= py <= 20.0:
                    blob.append((px, py))
                break

    surround: list[tuple[float, float]] = []
    while len(surround) < IRREGULAR_COUNTS[0]:
        px, py = rng.uniform(0.0, 20.0, size=2)
        if all(
            np.hypot(px - cx, py - cy) > radius + IRREGULAR_GAP
            for (cx, cy), radius, _ in IRREGULAR_LOBES
        ):
            surround.append((px, py))

    feats = np.array(surround + blob)
    labels = np.array([0] * IRREGULAR_COUNTS[0] + [1] * IRREGULAR_COUNTS[1])
    return Dataset(feats, labels, ("1", "2"))


GENERATORS = {"circular": gen_circular, "irregular": gen_irregular}
