"""Core time-series containers and transformations.

Everything in this module is immutable after construction and all
operations are pure functions, so values can be shared freely between
pipeline stages and concurrent callers.
"""

from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Frequency",
    "Month",
    "TimeSeries",
    "Panel",
    "SampleWindow",
    "SeriesError",
    "log_transform",
    "difference",
    "weekly_to_monthly_mean",
    "align",
    "lag_matrix",
]


class SeriesError(ValueError):
    """Raised for domain violations on series operations."""


class Frequency(Enum):
    WEEKLY = "weekly"
    MONTHLY = "monthly"


_MONTH_RE = re.compile(r"^(\d{4})[M-](\d{1,2})$")


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month, treated as an atomic period index."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise SeriesError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        """Parse '2003M7', '2003M07' or '2003-07'."""
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise SeriesError(f"cannot parse month: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_date(cls, d: _dt.date) -> "Month":
        return cls(d.year, d.month)

    @property
    def ordinal(self) -> int:
        return self.year * 12 + (self.month - 1)

    def add(self, n: int) -> "Month":
        o = self.ordinal + n
        return Month(o // 12, o % 12 + 1)

    def diff(self, other: "Month") -> int:
        """Number of periods from `other` to self."""
        return self.ordinal - other.ordinal

    def first_day(self) -> _dt.date:
        return _dt.date(self.year, self.month, 1)

    def __str__(self) -> str:
        return f"{self.year}M{self.month}"


def _as_readonly(values: Iterable[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise SeriesError("values must be one-dimensional")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A named, equally spaced, gap-free sequence of observations.

    `start` is a :class:`Month` for monthly series and a
    :class:`datetime.date` (the published week-ending date of the first
    observation) for weekly series.
    """

    name: str
    frequency: Frequency
    start: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(self.values))
        if len(self.values) < 1:
            raise SeriesError(f"{self.name}: series must have length >= 1")
        if not np.all(np.isfinite(self.values)):
            bad = int(np.flatnonzero(~np.isfinite(self.values))[0])
            raise SeriesError(
                f"{self.name}: non-finite value at {self.date_at(bad)}"
            )
        if self.frequency is Frequency.MONTHLY and not isinstance(self.start, Month):
            raise SeriesError(f"{self.name}: monthly series needs a Month start")
        if self.frequency is Frequency.WEEKLY and not isinstance(self.start, _dt.date):
            raise SeriesError(f"{self.name}: weekly series needs a date start")

    def __len__(self) -> int:
        return len(self.values)

    def date_at(self, i: int):
        """Date label of observation i (Month or date, per frequency)."""
        if self.frequency is Frequency.MONTHLY:
            return self.start.add(i)
        return self.start + _dt.timedelta(days=7 * i)

    @property
    def end(self):
        return self.date_at(len(self) - 1)

    def dates(self):
        return [self.date_at(i) for i in range(len(self))]

    def with_values(self, values, name: str | None = None, start=None) -> "TimeSeries":
        return TimeSeries(
            name=name if name is not None else self.name,
            frequency=self.frequency,
            start=start if start is not None else self.start,
            values=values,
        )

    def window(self, start: Month, end: Month) -> "TimeSeries":
        """Slice a monthly series to [start, end] inclusive."""
        if self.frequency is not Frequency.MONTHLY:
            raise SeriesError(f"{self.name}: window slicing requires monthly data")
        i0 = start.diff(self.start)
        i1 = end.diff(self.start)
        if i0 < 0 or i1 >= len(self) or i0 > i1:
            raise SeriesError(
                f"{self.name}: covers {self.start}..{self.end}, "
                f"requested {start}..{end}"
            )
        return TimeSeries(self.name, self.frequency, start, self.values[i0 : i1 + 1])


@dataclass(frozen=True)
class Panel:
    """An ordered collection of monthly series sharing start and length."""

    series: tuple
    order: tuple

    def __post_init__(self):
        if len(self.series) == 0:
            raise SeriesError("panel must contain at least one series")
        names = [s.name for s in self.series]
        if sorted(self.order) != sorted(names):
            raise SeriesError(
                f"order {self.order} is not a permutation of members {names}"
            )
        first = self.series[0]
        for s in self.series[1:]:
            if s.frequency is not first.frequency:
                raise SeriesError("panel members must share frequency")
            if s.start != first.start or len(s) != len(first):
                raise SeriesError(
                    f"panel members must share start and length "
                    f"({s.name}: {s.start} x{len(s)} vs {first.start} x{len(first)})"
                )

    @classmethod
    def from_series(cls, series: Sequence[TimeSeries], order=None) -> "Panel":
        order = tuple(order) if order is not None else tuple(s.name for s in series)
        by_name = {s.name: s for s in series}
        return cls(series=tuple(by_name[n] for n in order), order=order)

    def __len__(self) -> int:
        return len(self.series[0])

    @property
    def k(self) -> int:
        return len(self.series)

    @property
    def start(self):
        return self.series[0].start

    @property
    def names(self) -> tuple:
        return self.order

    def get(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise SeriesError(f"no series named {name!r} in panel {self.order}")

    def values(self) -> np.ndarray:
        """T x k matrix in panel order."""
        return np.column_stack([s.values for s in self.series])

    def window(self, start: Month, end: Month) -> "Panel":
        return Panel(
            series=tuple(s.window(start, end) for s in self.series),
            order=self.order,
        )

    def reorder(self, order: Sequence[str]) -> "Panel":
        return Panel.from_series(self.series, order=order)


@dataclass(frozen=True)
class SampleWindow:
    """Presample plus estimation range; the presample supplies lags."""

    presample_start: Month
    estimation_start: Month
    estimation_end: Month

    def __post_init__(self):
        if not (self.presample_start < self.estimation_start <= self.estimation_end):
            raise SeriesError(
                f"invalid window: presample {self.presample_start}, "
                f"estimation {self.estimation_start}..{self.estimation_end}"
            )

    @property
    def presample_length(self) -> int:
        return self.estimation_start.diff(self.presample_start)

    @property
    def estimation_length(self) -> int:
        return self.estimation_end.diff(self.estimation_start) + 1

    @property
    def total_length(self) -> int:
        return self.estimation_end.diff(self.presample_start) + 1


def log_transform(s: TimeSeries) -> TimeSeries:
    """Natural log of every observation; metadata preserved."""
    bad = np.flatnonzero(s.values <= 0.0)
    if bad.size:
        i = int(bad[0])
        raise SeriesError(
            f"{s.name}: log of non-positive value {s.values[i]} at {s.date_at(i)}"
        )
    return s.with_values(np.log(s.values))


def difference(s: TimeSeries, order: int = 1) -> TimeSeries:
    """Difference the series `order` times; start advances by `order`."""
    if order < 1:
        raise SeriesError("difference order must be >= 1")
    if len(s) <= order:
        raise SeriesError(
            f"{s.name}: need more than {order} observations to difference, have {len(s)}"
        )
    return s.with_values(np.diff(s.values, n=order), start=s.date_at(order))


def weekly_to_monthly_mean(s: TimeSeries) -> TimeSeries:
    """Average weekly observations into the calendar month of their date.

    Each weekly observation is assigned to the month containing its
    published (week-ending) date; boundary months keep the mean over
    whatever weeks they have.
    """
    if s.frequency is not Frequency.WEEKLY:
        raise SeriesError(f"{s.name}: weekly_to_monthly_mean requires weekly input")
    months = [Month.from_date(s.date_at(i)) for i in range(len(s))]
    out_months: list[Month] = []
    sums: list[float] = []
    counts: list[int] = []
    for m, v in zip(months, s.values):
        if out_months and out_months[-1] == m:
            sums[-1] += v
            counts[-1] += 1
        else:
            out_months.append(m)
            sums.append(float(v))
            counts.append(1)
    # weekly dates are 7 days apart, so months arrive in order without gaps
    means = np.array(sums) / np.array(counts)
    return TimeSeries(s.name, Frequency.MONTHLY, out_months[0], means)


def align(series: Sequence[TimeSeries], window: SampleWindow) -> Panel:
    """Trim monthly series to [presample_start, estimation_end] as a Panel."""
    trimmed = []
    for s in series:
        if s.frequency is not Frequency.MONTHLY:
            raise SeriesError(f"{s.name}: align requires monthly series")
        try:
            trimmed.append(s.window(window.presample_start, window.estimation_end))
        except SeriesError:
            raise SeriesError(
                f"{s.name}: does not cover {window.presample_start}.."
                f"{window.estimation_end} (has {s.start}..{s.end})"
            ) from None
    return Panel.from_series(trimmed)


def lag_matrix(p: Panel, lags: int) -> np.ndarray:
    """Stacked lag design: row t holds values at t-1 .. t-lags, all variables.

    Columns are lag-major: [y1(t-1) .. yk(t-1), y1(t-2) .. yk(t-2), ...].
    The first `lags` rows are dropped, so the result has len(p) - lags rows.
    Values are copied bit-exactly; no arithmetic is performed.
    """
    if lags < 1:
        raise SeriesError("lags must be >= 1")
    if len(p) <= lags:
        raise SeriesError(f"need more than {lags} observations, have {len(p)}")
    y = p.values()
    cols = [y[lags - j : len(p) - j, :] for j in range(1, lags + 1)]
    return np.hstack(cols)
