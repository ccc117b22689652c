"""Augmented Dickey-Fuller unit-root tests with BIC lag selection."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Union

import numpy as np

from .regress import OlsFit, RegressionError, bic, ols
from .series import Panel, SampleWindow, SeriesError, TimeSeries, difference

__all__ = [
    "Deterministic",
    "AdfSpec",
    "AdfResult",
    "adf_test",
    "adf_critical_value",
    "stationarity_table",
    "StationarityTable",
]


class Deterministic(Enum):
    DRIFT = "drift"
    DRIFT_AND_TREND = "drift_and_trend"


@dataclass(frozen=True)
class AdfSpec:
    """Test specification.

    `selection` is either the string "bic" or a fixed lag count.
    """

    deterministic: Deterministic = Deterministic.DRIFT
    max_augmenting_lags: int = 6
    selection: Union[str, int] = "bic"

    def __post_init__(self):
        if self.max_augmenting_lags < 0:
            raise ValueError("max_augmenting_lags must be >= 0")
        if isinstance(self.selection, str):
            if self.selection != "bic":
                raise ValueError(f"unknown selection rule {self.selection!r}")
        elif isinstance(self.selection, int):
            if self.selection < 0:
                raise ValueError("fixed lag count must be >= 0")
        else:
            raise ValueError("selection must be 'bic' or an integer")


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    augmenting_lags: int
    critical_value_5pct: float
    reject_unit_root: bool
    spec: AdfSpec
    n_effective: int


# Response-surface constants for the Dickey-Fuller t distribution
# (MacKinnon-style): cv = b0 + b1/n + b2/n^2 + b3/n^3.
_CV_SURFACE = {
    Deterministic.DRIFT: {
        0.01: (-3.43035, -6.5393, -16.786, -79.433),
        0.05: (-2.86154, -2.8903, -4.234, -40.04),
        0.10: (-2.56677, -1.5384, -2.809, 0.0),
    },
    Deterministic.DRIFT_AND_TREND: {
        0.01: (-3.95877, -9.0531, -28.428, -134.155),
        0.05: (-3.41049, -4.3904, -9.036, -45.374),
        0.10: (-3.12705, -2.5856, -3.925, -22.380),
    },
}


def adf_critical_value(deterministic: Deterministic, n: int, level: float = 0.05) -> float:
    """Critical value for the ADF t statistic at the given sample size."""
    if n < 25:
        raise ValueError(f"sample too small for tabulated critical values: {n}")
    try:
        b = _CV_SURFACE[deterministic][round(level, 2)]
    except KeyError:
        raise ValueError(
            f"unsupported level {level}; available: 0.01, 0.05, 0.10"
        ) from None
    return b[0] + b[1] / n + b[2] / n**2 + b[3] / n**3


def _design(y: np.ndarray, t_rows: np.ndarray, p: int, deterministic: Deterministic):
    """Regression pieces for Delta y_t on deterministics, y_{t-1}, lagged diffs."""
    dy = np.diff(y)
    target = dy[t_rows - 1]
    cols = [np.ones(len(t_rows))]
    if deterministic is Deterministic.DRIFT_AND_TREND:
        cols.append(t_rows.astype(float))
    level_col = len(cols)
    cols.append(y[t_rows - 1])
    for j in range(1, p + 1):
        cols.append(dy[t_rows - 1 - j])
    return target, np.column_stack(cols), level_col


def _fit_candidate(y, t_rows, p, deterministic) -> OlsFit:
    target, X, _ = _design(y, t_rows, p, deterministic)
    return ols(target, X)


def adf_test(s: TimeSeries, spec: AdfSpec, window: SampleWindow | None = None) -> AdfResult:
    """ADF regression of Delta y_t on deterministics, y_{t-1}, and lagged diffs.

    With a `window`, the regression rows are exactly the estimation
    range and lagged regressors reach back into the presample, so every
    candidate lag length is fit on the same rows and BIC values are
    directly comparable. Without a window, candidates are compared on
    the common sample implied by `max_augmenting_lags` and the selected
    model is refit on its own maximal sample.
    """
    y = np.asarray(s.values, dtype=float)
    if np.ptp(y) == 0.0:
        raise SeriesError(f"{s.name}: constant series has no unit-root content")

    max_p = (
        spec.max_augmenting_lags
        if spec.selection == "bic"
        else int(spec.selection)
    )
    det_terms = 2 if spec.deterministic is Deterministic.DRIFT_AND_TREND else 1

    if window is not None:
        i0 = window.estimation_start.diff(s.start)
        i1 = window.estimation_end.diff(s.start)
        if i0 < 1 or i1 >= len(y):
            raise SeriesError(
                f"{s.name}: window {window.estimation_start}..{window.estimation_end} "
                f"not covered by series {s.start}..{s.end}"
            )
        avail = i0 - 1
        if max_p > avail:
            raise SeriesError(
                f"{s.name}: presample supports at most {avail} augmenting lags, "
                f"requested {max_p}"
            )
        t_rows = np.arange(i0, i1 + 1)
        common_rows = t_rows
    else:
        first = max_p + 1
        if len(y) - first < det_terms + max_p + 10:
            raise SeriesError(
                f"{s.name}: {len(y)} observations too few for "
                f"{max_p} lags plus deterministics"
            )
        common_rows = np.arange(first, len(y))

    if spec.selection == "bic":
        best_p, best_bic = 0, np.inf
        for p in range(0, max_p + 1):
            fit = _fit_candidate(y, common_rows, p, spec.deterministic)
            score = bic(fit.rss, fit.n_obs, fit.n_params)
            if score < best_bic - 1e-12:
                best_p, best_bic = p, score
        chosen = best_p
    else:
        chosen = int(spec.selection)

    if window is not None:
        rows = common_rows
    else:
        rows = np.arange(chosen + 1, len(y))
    target, X, level_col = _design(y, rows, chosen, spec.deterministic)
    try:
        fit = ols(target, X)
    except RegressionError as exc:
        raise SeriesError(f"{s.name}: degenerate ADF regression: {exc}") from exc

    stat = float(fit.t_statistics[level_col])
    cv = adf_critical_value(spec.deterministic, fit.n_obs, 0.05)
    return AdfResult(
        statistic=stat,
        augmenting_lags=chosen,
        critical_value_5pct=cv,
        reject_unit_root=stat < cv,
        spec=spec,
        n_effective=fit.n_obs,
    )


@dataclass(frozen=True)
class StationarityTable:
    """Level and first-difference ADF results for every panel member.

    `rows` holds (variable, deterministic, transform, AdfResult) with
    transform in {"level", "first_difference"}.
    """

    rows: tuple

    def result(self, variable: str, deterministic: Deterministic, transform: str) -> AdfResult:
        for var, det, tr, res in self.rows:
            if (var, det, tr) == (variable, deterministic, transform):
                return res
        raise KeyError((variable, deterministic, transform))

    def all_levels_nonstationary(self, deterministic: Deterministic) -> bool:
        return all(
            not res.reject_unit_root
            for _, det, tr, res in self.rows
            if det is deterministic and tr == "level"
        )

    def all_differences_stationary(self, deterministic: Deterministic) -> bool:
        return all(
            res.reject_unit_root
            for _, det, tr, res in self.rows
            if det is deterministic and tr == "first_difference"
        )


def stationarity_table(
    p: Panel,
    specs: tuple = (
        AdfSpec(Deterministic.DRIFT),
        AdfSpec(Deterministic.DRIFT_AND_TREND),
    ),
    window: SampleWindow | None = None,
) -> StationarityTable:
    """Run level and first-difference ADF tests for both deterministic specs.

    Differencing consumes one presample observation, so the difference
    tests cap the lag search at what the remaining presample supports.
    """
    if p.k == 0:
        raise SeriesError("empty panel")
    rows = []
    for name in p.names:
        s = p.get(name)
        ds = difference(s, 1)
        for spec in specs:
            rows.append((name, spec.deterministic, "level", adf_test(s, spec, window)))
            dspec = spec
            if window is not None and spec.selection == "bic":
                avail = window.estimation_start.diff(ds.start) - 1
                if spec.max_augmenting_lags > avail:
                    dspec = replace(spec, max_augmenting_lags=avail)
            rows.append(
                (name, spec.deterministic, "first_difference", adf_test(ds, dspec, window))
            )
    return StationarityTable(rows=tuple(rows))
