"""FRED-format CSV reading and dataset assembly."""

from __future__ import annotations

import csv
import datetime as _dt
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .seasonal import Mode, x11_adjust
from .series import (
    Frequency,
    Month,
    Panel,
    SampleWindow,
    SeriesError,
    TimeSeries,
    align,
    log_transform,
    weekly_to_monthly_mean,
)

__all__ = [
    "IngestError",
    "Role",
    "Transform",
    "SeriesSpec",
    "DatasetSpec",
    "DatasetBuild",
    "read_fred_csv",
    "build_dataset",
]

ROLE_ORDER = ("E", "A", "P", "Y", "R")


class IngestError(ValueError):
    pass


class Role(Enum):
    E = "E"  # entitlement transfer payments
    A = "A"  # central-bank assets
    P = "P"  # consumer price index
    Y = "Y"  # industrial production
    R = "R"  # 10-year government bond yield


class Transform(Enum):
    LOG = "log"
    LEVEL = "level"


@dataclass(frozen=True)
class SeriesSpec:
    role: Role
    file_path: str
    frequency: Frequency
    seasonally_adjusted: bool
    transform: Transform
    description: str = ""

    def __post_init__(self):
        if self.transform is Transform.LEVEL and self.role is not Role.R:
            warnings.warn(
                f"series {self.role.value} uses level transform; only the "
                f"interest rate is conventionally left in levels",
                stacklevel=2,
            )


@dataclass(frozen=True)
class DatasetSpec:
    series: tuple  # five SeriesSpec entries, one per role
    window: SampleWindow
    label: str = "custom"

    def __post_init__(self):
        roles = [s.role for s in self.series]
        if len(set(roles)) != len(roles):
            dupes = sorted({r.value for r in roles if roles.count(r) > 1})
            raise IngestError(f"duplicate series roles: {dupes}")
        missing = [r for r in Role if r not in roles]
        if missing:
            raise IngestError(
                f"dataset needs all five roles; missing {[r.value for r in missing]}"
            )

    def spec_for(self, role: Role) -> SeriesSpec:
        for s in self.series:
            if s.role is role:
                return s
        raise KeyError(role)


def read_fred_csv(path) -> TimeSeries:
    """Parse a two-column DATE,VALUE CSV with ISO dates.

    Frequency is inferred from the median date gap (6-8 days weekly,
    28-31 days monthly); FRED's '.' missing marker is rejected.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"no such file: {path}")
    dates: list[_dt.date] = []
    values: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip().lower() != "date" or \
                header[1].strip().lower() != "value":
            raise IngestError(
                f"{path}: expected header DATE,VALUE, got {','.join(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise IngestError(f"{path}:{lineno}: malformed row {row}")
            raw_date, raw_value = row[0].strip(), row[1].strip()
            try:
                d = _dt.date.fromisoformat(raw_date)
            except ValueError:
                raise IngestError(
                    f"{path}:{lineno}: cannot parse date {raw_date!r}"
                ) from None
            if raw_value == ".":
                raise IngestError(
                    f"{path}:{lineno}: missing value marker '.' at {raw_date}"
                )
            try:
                v = float(raw_value)
            except ValueError:
                raise IngestError(
                    f"{path}:{lineno}: cannot parse value {raw_value!r}"
                ) from None
            dates.append(d)
            values.append(v)

    if len(dates) < 2:
        raise IngestError(f"{path}: need at least two observations")
    gaps = np.array([(b - a).days for a, b in zip(dates, dates[1:])])
    med = float(np.median(gaps))
    if 6 <= med <= 8:
        if not np.all(gaps == 7):
            i = int(np.flatnonzero(gaps != 7)[0])
            raise IngestError(
                f"{path}: inconsistent weekly spacing near {dates[i + 1]} "
                f"(gap {gaps[i]} days)"
            )
        return TimeSeries(path.stem, Frequency.WEEKLY, dates[0], values)
    if 28 <= med <= 31:
        months = [Month.from_date(d) for d in dates]
        for i, (a, b) in enumerate(zip(months, months[1:])):
            if b.diff(a) != 1:
                raise IngestError(
                    f"{path}: inconsistent monthly spacing near {dates[i + 1]}"
                )
        return TimeSeries(path.stem, Frequency.MONTHLY, months[0], values)
    raise IngestError(
        f"{path}: median date gap {med} days is neither weekly nor monthly"
    )


@dataclass(frozen=True)
class DatasetBuild:
    panel: Panel
    log: tuple  # one line per transform applied, in execution order


def build_dataset(spec: DatasetSpec, base_dir=None) -> DatasetBuild:
    """Read, aggregate, deseasonalize, transform, and align the five series.

    The stage order is fixed: aggregate -> deseasonalize -> log ->
    align. Every applied stage is appended to the build log.
    """
    base = Path(base_dir) if base_dir is not None else Path(".")
    log: list[str] = []
    prepared: list[TimeSeries] = []
    for role_name in ROLE_ORDER:
        sspec = spec.spec_for(Role(role_name))
        path = Path(sspec.file_path)
        if not path.is_absolute():
            path = base / path
        try:
            s = read_fred_csv(path)
            log.append(f"{role_name}: read {path.name} ({s.frequency.value}, {len(s)} obs)")
            if s.frequency is not sspec.frequency:
                raise IngestError(
                    f"expected {sspec.frequency.value} data, file is {s.frequency.value}"
                )
            if s.frequency is Frequency.WEEKLY:
                s = weekly_to_monthly_mean(s)
                log.append(f"{role_name}: aggregate weekly to monthly mean ({len(s)} months)")
            if not sspec.seasonally_adjusted:
                s = x11_adjust(s, Mode.MULTIPLICATIVE).adjusted
                log.append(f"{role_name}: x11 multiplicative seasonal adjustment")
            if sspec.transform is Transform.LOG:
                s = log_transform(s)
                log.append(f"{role_name}: log transform")
            prepared.append(s.with_values(s.values, name=role_name))
        except (IngestError, SeriesError) as exc:
            raise IngestError(f"series {role_name}: {exc}") from exc

    try:
        panel = align(prepared, spec.window)
    except SeriesError as exc:
        raise IngestError(str(exc)) from exc
    log.append(
        f"align to {spec.window.presample_start}..{spec.window.estimation_end} "
        f"({len(panel)} months)"
    )
    return DatasetBuild(panel=panel, log=tuple(log))
