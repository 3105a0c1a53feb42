"""Price series: CSV ingestion, calendar normalization, log-returns, resampling.

Input schema is the Yahoo Finance daily export
(``Date,Open,High,Low,Close,Adj Close,Volume``); only Date and Close are
consumed, and header names are matched case-insensitively. Rows whose Close
is empty or the literal ``null`` (non-trading days in some exports) are
dropped and counted in ``PriceSeries.dropped_rows``. Output schema is
``date,close`` for prices and ``date,value`` for returns; price files
round-trip exactly through ``ingest_csv``.

Weekend filling is opt-in because assets that trade seven days a week must
not be forward-filled.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateDateError,
    EmptySeriesError,
    InvalidParameterError,
    MissingColumnError,
    NonPositivePriceError,
    TooShortError,
    UnparsableRowError,
)


class Frequency(str, Enum):
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"


class ReturnKind(str, Enum):
    SIGNED = "signed"
    ABSOLUTE = "absolute"


def _check_dates(dates: tuple[dt.date, ...]) -> None:
    for prev, cur in zip(dates, dates[1:]):
        if cur == prev:
            raise DuplicateDateError(f"duplicate date {cur.isoformat()}")
        if cur < prev:
            raise InvalidParameterError("dates must be strictly increasing")


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Closing prices at a declared sampling frequency, strictly date-sorted."""

    asset_id: str
    frequency: Frequency
    dates: tuple[dt.date, ...]
    closes: np.ndarray
    dropped_rows: int = 0  # ingestion metadata; not part of equality

    def __post_init__(self):
        object.__setattr__(self, "frequency", Frequency(self.frequency))
        object.__setattr__(self, "dates", tuple(self.dates))
        closes = np.array(self.closes, dtype=np.float64)
        if len(self.dates) != closes.size:
            raise InvalidParameterError("dates and closes must have equal length")
        _check_dates(self.dates)
        if closes.size and not np.isfinite(closes).all():
            raise InvalidParameterError("closes must be finite")
        bad = np.flatnonzero(closes <= 0.0)
        if bad.size:
            day = self.dates[int(bad[0])]
            raise NonPositivePriceError(
                f"{day.isoformat()}: close {closes[bad[0]]!r} is not positive"
            )
        closes.setflags(write=False)
        object.__setattr__(self, "closes", closes)

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return (
            self.asset_id == other.asset_id
            and self.frequency is other.frequency
            and self.dates == other.dates
            and np.array_equal(self.closes, other.closes)
        )

    @property
    def points(self) -> list[tuple[dt.date, float]]:
        return [(day, float(close)) for day, close in zip(self.dates, self.closes)]


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Log-returns derived from a price series, dated at the later observation."""

    asset_id: str
    frequency: Frequency
    kind: ReturnKind
    dates: tuple[dt.date, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequency", Frequency(self.frequency))
        object.__setattr__(self, "kind", ReturnKind(self.kind))
        object.__setattr__(self, "dates", tuple(self.dates))
        values = np.array(self.values, dtype=np.float64)
        if len(self.dates) != values.size:
            raise InvalidParameterError("dates and values must have equal length")
        _check_dates(self.dates)
        if values.size and not np.isfinite(values).all():
            raise InvalidParameterError("values must be finite")
        if self.kind is ReturnKind.ABSOLUTE and (values < 0.0).any():
            raise InvalidParameterError("absolute returns cannot be negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReturnSeries):
            return NotImplemented
        return (
            self.asset_id == other.asset_id
            and self.frequency is other.frequency
            and self.kind is other.kind
            and self.dates == other.dates
            and np.array_equal(self.values, other.values)
        )

    @property
    def points(self) -> list[tuple[dt.date, float]]:
        return [(day, float(value)) for day, value in zip(self.dates, self.values)]


def ingest_csv(
    path: str | Path, asset_id: str, frequency: Frequency = Frequency.DAILY
) -> PriceSeries:
    """Parse a Yahoo-style CSV into a date-sorted :class:`PriceSeries`.

    Parameters
    ----------
    path : file path
        CSV with at least Date and Close columns; dates must be ISO-8601.
    asset_id : str
        Label attached to the resulting series.
    frequency : Frequency
        Sampling frequency tag for the file, daily by default.

    Raises
    ------
    MissingColumnError, UnparsableRowError, NonPositivePriceError,
    DuplicateDateError
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        columns = {name.strip().lower(): name for name in reader.fieldnames or []}
        if "date" not in columns or "close" not in columns:
            raise MissingColumnError(
                f"{path.name}: header must contain Date and Close columns"
            )
        date_col, close_col = columns["date"], columns["close"]
        rows: list[tuple[dt.date, float]] = []
        dropped = 0
        for number, row in enumerate(reader, start=2):
            raw_close = (row.get(close_col) or "").strip()
            if raw_close == "" or raw_close.lower() == "null":
                dropped += 1
                continue
            raw_date = (row.get(date_col) or "").strip()
            try:
                day = dt.date.fromisoformat(raw_date)
            except ValueError:
                raise UnparsableRowError(
                    f"{path.name} row {number}: unparsable date {raw_date!r}"
                ) from None
            try:
                close = float(raw_close)
            except ValueError:
                raise UnparsableRowError(
                    f"{path.name} row {number}: unparsable close {raw_close!r}"
                ) from None
            if not math.isfinite(close):
                raise UnparsableRowError(
                    f"{path.name} row {number}: non-finite close {raw_close!r}"
                )
            if close <= 0.0:
                raise NonPositivePriceError(
                    f"{day.isoformat()}: close {close!r} is not positive"
                )
            rows.append((day, close))
    rows.sort(key=lambda item: item[0])
    return PriceSeries(
        asset_id,
        frequency,
        tuple(day for day, _ in rows),
        [close for _, close in rows],
        dropped_rows=dropped,
    )


def write_csv(series: PriceSeries | ReturnSeries, path: str | Path) -> None:
    """Write ``date,close`` (prices) or ``date,value`` (returns).

    Floats are written with full precision so the file round-trips exactly.
    """
    path = Path(path)
    if isinstance(series, PriceSeries):
        header, data = ("date", "close"), series.closes
    else:
        header, data = ("date", "value"), series.values
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for day, value in zip(series.dates, data):
            writer.writerow((day.isoformat(), repr(float(value))))


def fill_weekend(series: PriceSeries) -> PriceSeries:
    """Forward-fill every missing calendar day between the first and last date.

    Existing observations are unchanged; a series already on consecutive days
    is returned as-is, which also makes the operation idempotent.
    """
    if series.frequency is not Frequency.DAILY:
        raise InvalidParameterError("weekend fill applies to daily series only")
    if len(series) == 0:
        raise EmptySeriesError("cannot fill an empty series")
    span = (series.dates[-1] - series.dates[0]).days + 1
    if span == len(series):
        return series
    have = dict(zip(series.dates, series.closes))
    dates: list[dt.date] = []
    closes: list[float] = []
    current = series.dates[0]
    last_close = float(series.closes[0])
    one_day = dt.timedelta(days=1)
    while current <= series.dates[-1]:
        if current in have:
            last_close = float(have[current])
        dates.append(current)
        closes.append(last_close)
        current += one_day
    return PriceSeries(
        series.asset_id,
        Frequency.DAILY,
        tuple(dates),
        closes,
        dropped_rows=series.dropped_rows,
    )


def resample(series: PriceSeries, target: Frequency) -> PriceSeries:
    """Aggregate a daily series to the last close of each ISO week or
    calendar month, dated at that final observation.

    Partial first and last periods are kept.
    """
    if series.frequency is not Frequency.DAILY:
        raise InvalidParameterError("resampling starts from a daily series")
    target = Frequency(target)
    if target is Frequency.WEEKLY:
        def period(day: dt.date) -> tuple[int, int]:
            iso = day.isocalendar()
            return (iso[0], iso[1])
    elif target is Frequency.MONTHLY:
        def period(day: dt.date) -> tuple[int, int]:
            return (day.year, day.month)
    else:
        raise InvalidParameterError("resample target must be weekly or monthly")
    if len(series) == 0:
        raise EmptySeriesError("cannot resample an empty series")
    dates: list[dt.date] = []
    closes: list[float] = []
    for day, close in zip(series.dates, series.closes):
        if dates and period(dates[-1]) == period(day):
            dates[-1] = day
            closes[-1] = float(close)
        else:
            dates.append(day)
            closes.append(float(close))
    return PriceSeries(
        series.asset_id, target, tuple(dates), closes, dropped_rows=series.dropped_rows
    )


def log_returns(series: PriceSeries, kind: ReturnKind = ReturnKind.SIGNED) -> ReturnSeries:
    """ln(close[t+1] / close[t]) for each consecutive pair, dated at t+1."""
    if len(series) < 2:
        raise TooShortError("log-returns need at least two observations")
    values = np.diff(np.log(series.closes))
    kind = ReturnKind(kind)
    if kind is ReturnKind.ABSOLUTE:
        values = np.abs(values)
    return ReturnSeries(series.asset_id, series.frequency, kind, series.dates[1:], values)
