"""Loading, min-max scaling and chronological splitting of time series.

A dataset is one ordered sequence of observations: a timestamp column that is
carried through untouched, ``d`` predictor columns and a single target column.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSplit,
    DimensionMismatch,
    EmptyDataset,
    MissingColumn,
    ParseError,
)


def _frozen(a, ndim):
    a = np.array(a, dtype=float, ndmin=ndim)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Schema:
    """Column roles of a CSV file."""

    timestamp: str
    features: tuple[str, ...]
    target: str

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))

    @property
    def columns(self):
        return (self.timestamp, *self.features, self.target)


@dataclass(frozen=True)
class TimeSeriesDataset:
    timestamps: tuple[str, ...]
    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "timestamps", tuple(str(t) for t in self.timestamps))
        object.__setattr__(self, "features", _frozen(self.features, 2))
        object.__setattr__(self, "targets", _frozen(self.targets, 1))
        n = len(self.timestamps)
        if n == 0:
            raise EmptyDataset("dataset has no rows")
        if self.features.shape[0] != n or self.targets.shape[0] != n:
            raise DimensionMismatch(
                f"row counts differ: timestamps={n}, features={self.features.shape[0]}, "
                f"targets={self.targets.shape[0]}"
            )

    def __len__(self):
        return len(self.timestamps)

    @property
    def n_features(self):
        return self.features.shape[1]

    def slice(self, start, stop):
        return TimeSeriesDataset(
            self.timestamps[start:stop], self.features[start:stop], self.targets[start:stop]
        )


@dataclass(frozen=True)
class ScalingParams:
    """Per-column minimum and maximum, fitted on a training split."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float
    target_max: float
    feature_constant: np.ndarray = field(init=False)
    target_constant: bool = field(init=False)

    def __post_init__(self):
        lo = _frozen(self.feature_min, 1)
        hi = _frozen(self.feature_max, 1)
        if lo.shape != hi.shape:
            raise DimensionMismatch("feature_min and feature_max differ in length")
        if np.any(hi < lo) or self.target_max < self.target_min:
            raise ValueError("column maximum below minimum")
        object.__setattr__(self, "feature_min", lo)
        object.__setattr__(self, "feature_max", hi)
        object.__setattr__(self, "target_min", float(self.target_min))
        object.__setattr__(self, "target_max", float(self.target_max))
        object.__setattr__(self, "feature_constant", _frozen(hi == lo, 1).astype(bool))
        object.__setattr__(self, "target_constant", bool(self.target_max == self.target_min))

    @property
    def n_features(self):
        return self.feature_min.shape[0]

    @property
    def target_range(self):
        return self.target_max - self.target_min

    def scale_features(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} feature columns, got shape {X.shape}"
            )
        return _scale(X, self.feature_min, self.feature_max)

    def scale_target(self, y):
        return _scale(np.asarray(y, dtype=float), self.target_min, self.target_max)

    def unscale_target(self, y_scaled):
        """Map scaled target values back to original units (no clamping)."""
        return self.target_min + np.asarray(y_scaled, dtype=float) * self.target_range


def _scale(v, lo, hi):
    span = np.asarray(hi - lo, dtype=float)
    safe = np.where(span > 0, span, 1.0)
    out = np.where(span > 0, (v - lo) / safe, 0.0)
    return np.clip(out, 0.0, 1.0)


def _parse_cell(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(row, col, text) from None
    if not math.isfinite(value):
        raise ParseError(row, col, text)
    return value


def _read_rows(path, needed):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in needed if c not in header]
        if missing:
            raise MissingColumn(missing)
        rows = list(reader)
    if not rows:
        raise EmptyDataset(f"{path} has a header but no data rows")
    return rows


def load_csv(path, schema: Schema) -> TimeSeriesDataset:
    """Read a CSV file into a dataset, keeping file row order.

    Raises
    ------
    MissingColumn
        If any schema column is absent from the header.
    ParseError
        If a feature or target cell is not a finite real.
    EmptyDataset
        If the file has a header but no data rows.
    """
    rows = _read_rows(path, schema.columns)
    X = np.empty((len(rows), len(schema.features)))
    y = np.empty(len(rows))
    for i, rec in enumerate(rows):
        for j, col in enumerate(schema.features):
            X[i, j] = _parse_cell(rec[col], i + 1, col)
        y[i] = _parse_cell(rec[schema.target], i + 1, schema.target)
    return TimeSeriesDataset([rec[schema.timestamp] for rec in rows], X, y)


def load_features(path, schema: Schema):
    """Read only the timestamp and feature columns; the target may be absent."""
    rows = _read_rows(path, (schema.timestamp, *schema.features))
    X = np.empty((len(rows), len(schema.features)))
    for i, rec in enumerate(rows):
        for j, col in enumerate(schema.features):
            X[i, j] = _parse_cell(rec[col], i + 1, col)
    return tuple(rec[schema.timestamp] for rec in rows), X


def write_csv(path, data: TimeSeriesDataset, schema: Schema):
    """Write a dataset using ``repr`` floats so that values round-trip exactly."""
    if len(schema.features) != data.n_features:
        raise DimensionMismatch("schema and dataset disagree on feature count")
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema.columns)
        for t, x, y in zip(data.timestamps, data.features, data.targets):
            w.writerow([t, *(repr(float(v)) for v in x), repr(float(y))])


def scale_fit(train: TimeSeriesDataset) -> ScalingParams:
    return ScalingParams(
        feature_min=train.features.min(axis=0),
        feature_max=train.features.max(axis=0),
        target_min=train.targets.min(),
        target_max=train.targets.max(),
    )


def scale_apply(data: TimeSeriesDataset, params: ScalingParams) -> TimeSeriesDataset:
    """Min-max scale every column; constant columns map to 0 and values outside
    the fitted range are clamped to [0, 1]."""
    if data.n_features != params.n_features:
        raise DimensionMismatch(
            f"dataset has {data.n_features} feature columns, scaling has {params.n_features}"
        )
    return TimeSeriesDataset(
        data.timestamps, params.scale_features(data.features), params.scale_target(data.targets)
    )


def chronological_split(data: TimeSeriesDataset, train_fraction=0.7):
    """Split into leading train rows and trailing test rows, without shuffling.

    The train side gets ``ceil(train_fraction * N)`` rows.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DegenerateSplit(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = len(data)
    # rounding guards against products like 0.7 * 30 = 21.000000000000004
    n_train = math.ceil(round(train_fraction * n, 9))
    if n_train < 1 or n_train >= n:
        raise DegenerateSplit(
            f"split of {n} rows at fraction {train_fraction} leaves an empty side"
        )
    return data.slice(0, n_train), data.slice(n_train, n)


def concat(parts: Sequence[TimeSeriesDataset]) -> TimeSeriesDataset:
    return TimeSeriesDataset(
        [t for p in parts for t in p.timestamps],
        np.vstack([p.features for p in parts]),
        np.concatenate([p.targets for p in parts]),
    )
