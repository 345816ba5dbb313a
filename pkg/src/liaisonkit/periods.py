"""Calendar period keys ("2020Q1", "2020-03") used by all aggregate series."""

from __future__ import annotations

import datetime as dt
import re

from .errors import ValidationError

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")

Granularity = str  # "month" | "quarter"

GRANULARITIES = ("month", "quarter")


def quarter_key(date: dt.date) -> str:
    return f"{date.year}Q{(date.month - 1) // 3 + 1}"


def month_key(date: dt.date) -> str:
    return f"{date.year}-{date.month:02d}"


def period_key(date: dt.date, granularity: Granularity) -> str:
    if granularity == "quarter":
        return quarter_key(date)
    if granularity == "month":
        return month_key(date)
    raise ValidationError(f"unknown granularity {granularity!r}")


def parse_quarter(key: str) -> tuple[int, int]:
    m = _QUARTER_RE.match(key)
    if not m:
        raise ValidationError(f"bad quarter key {key!r}")
    return int(m.group(1)), int(m.group(2))


def quarter_index(key: str) -> int:
    """Monotone integer index of a quarter key, for arithmetic."""
    year, q = parse_quarter(key)
    return year * 4 + (q - 1)


def quarter_from_index(idx: int) -> str:
    return f"{idx // 4}Q{idx % 4 + 1}"


def add_quarters(key: str, n: int) -> str:
    return quarter_from_index(quarter_index(key) + n)


def quarter_start(key: str) -> dt.date:
    year, q = parse_quarter(key)
    return dt.date(year, 3 * (q - 1) + 1, 1)


def quarter_range(start: str, n: int) -> list[str]:
    base = quarter_index(start)
    return [quarter_from_index(base + i) for i in range(n)]
