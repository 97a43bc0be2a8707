"""Daily close prices, percent log-returns, and descriptive statistics.

Returns are 100 times the log-difference of consecutive closes and are
dated by the later day.  Moments use the 1/N divisor and kurtosis is the
plain (non-excess) standardized fourth moment, so a Normal sample sits
near 3, not 0.  Annualized volatility assumes 252 trading days.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date, datetime

import numpy as np

TRADING_DAYS = 252


def _parse_date(s):
    return datetime.strptime(s.strip(), "%Y-%m-%d").date()


@dataclass(frozen=True)
class PriceSeries:
    """Ordered daily closes.

    Parameters
    ----------
    dates : tuple of datetime.date
        Strictly increasing calendar dates.
    closes : numpy.ndarray
        Positive close per date, same length as `dates`.
    """

    dates: tuple
    closes: np.ndarray

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=float)
        object.__setattr__(self, "closes", closes)
        if len(self.dates) != closes.shape[0]:
            raise ValueError("dates and closes differ in length")
        if closes.shape[0] < 2:
            raise ValueError("need at least two closes")
        for i, c in enumerate(closes):
            if not (c > 0.0) or not math.isfinite(c):
                raise ValueError(
                    f"non-positive close {c!r} at row {i} ({self.dates[i]})"
                )
        for a, b in zip(self.dates, self.dates[1:]):
            if not b > a:
                raise ValueError(f"dates not strictly increasing at {b}")


@dataclass(frozen=True)
class ReturnSeries:
    """Dated percent log-returns, the universal model input."""

    dates: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if len(self.dates) != values.shape[0]:
            raise ValueError("dates and values differ in length")
        if not np.all(np.isfinite(values)):
            raise ValueError("returns contain non-finite values")

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class DescriptiveStats:
    """Sample moments of a return series.

    `kurtosis` is the raw standardized fourth moment.  `skewness` and
    `kurtosis` are NaN when the series has zero variance.
    """

    mean: float
    variance: float
    skewness: float
    kurtosis: float
    annualized_vol_pct: float


def to_log_returns(p: PriceSeries) -> ReturnSeries:
    """100 * ln(P_t / P_{t-1}), dated by the later day."""
    vals = 100.0 * np.diff(np.log(p.closes))
    return ReturnSeries(dates=tuple(p.dates[1:]), values=vals)


def describe(r: ReturnSeries) -> DescriptiveStats:
    """Sample mean/variance/skewness/kurtosis and annualized volatility."""
    x = np.asarray(r.values, dtype=float) if not isinstance(r, ReturnSeries) else r.values
    if x.shape[0] < 4:
        raise ValueError("need at least 4 observations")
    mean = float(np.mean(x))
    d = x - mean
    var = float(np.mean(d * d))
    if var > 0.0:
        sd = math.sqrt(var)
        skew = float(np.mean(d**3)) / sd**3
        kurt = float(np.mean(d**4)) / var**2
    else:
        skew = float("nan")
        kurt = float("nan")
    ann = math.sqrt(TRADING_DAYS) * math.sqrt(var)
    return DescriptiveStats(mean=mean, variance=var, skewness=skew,
                            kurtosis=kurt, annualized_vol_pct=ann)


def read_prices_csv(path) -> PriceSeries:
    """Load a `date,close` CSV; rows may arrive in any order."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip().lower() for f in reader.fieldnames[:2]] != ["date", "close"]:
            raise ValueError(f"{path}: expected header 'date,close'")
        for i, row in enumerate(reader):
            try:
                d = _parse_date(row["date"])
                c = float(row["close"])
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}: bad row {i + 2}: {exc}") from exc
            if c <= 0.0:
                raise ValueError(f"{path}: non-positive close at row {i + 2} ({row['date']})")
            rows.append((d, c))
    rows.sort(key=lambda t: t[0])
    return PriceSeries(dates=tuple(d for d, _ in rows),
                       closes=np.array([c for _, c in rows]))


def write_returns_csv(r: ReturnSeries, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["date", "return_pct"])
        for d, v in zip(r.dates, r.values):
            w.writerow([d.isoformat() if isinstance(d, date) else d, repr(float(v))])


def read_returns_csv(path) -> ReturnSeries:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip().lower() for f in reader.fieldnames[:2]] != ["date", "return_pct"]:
            raise ValueError(f"{path}: expected header 'date,return_pct'")
        for i, row in enumerate(reader):
            try:
                rows.append((_parse_date(row["date"]), float(row["return_pct"])))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}: bad row {i + 2}: {exc}") from exc
    rows.sort(key=lambda t: t[0])
    return ReturnSeries(dates=tuple(d for d, _ in rows),
                        values=np.array([v for _, v in rows]))
