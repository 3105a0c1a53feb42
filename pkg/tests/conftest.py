import csv
import datetime as dt

import pytest


@pytest.fixture
def write_yahoo_csv(tmp_path):
    """Write a minimal Yahoo-style CSV and return its path."""

    def _write(name, rows, header=("Date", "Open", "High", "Low", "Close", "Adj Close", "Volume")):
        path = tmp_path / name
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for day, close in rows:
                if isinstance(day, dt.date):
                    day = day.isoformat()
                writer.writerow((day, 1, 1, 1, close, 1, 0))
        return path

    return _write


def daily_dates(start, count, step=1):
    """Consecutive (or strided) calendar dates starting at ``start``."""
    return tuple(start + dt.timedelta(days=i * step) for i in range(count))
