"""Seasonal adjustment via the classical X-11 moving-average core.

The implementation runs the textbook two-pass loop: a centered 2x12
trend, per-calendar-month smoothing of seasonal-irregular ratios with a
3x3 filter, a 13-term Henderson re-trend, and a second seasonal pass
with a 3x5 filter. Endpoints use truncated, renormalized filter
weights. Extreme-value downweighting, trading-day regressors and
forecast extension are deliberately out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .series import Frequency, SeriesError, TimeSeries
from .special import f_sf

__all__ = [
    "Mode",
    "SeasonalDecomposition",
    "x11_adjust",
    "is_seasonal",
    "henderson_weights",
]

MIN_LENGTH = 36  # three full years


class Mode(Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class SeasonalDecomposition:
    trend: TimeSeries
    seasonal: TimeSeries
    irregular: TimeSeries
    adjusted: TimeSeries
    mode: Mode


def henderson_weights(n_terms: int) -> np.ndarray:
    """Symmetric Henderson filter weights for an odd number of terms.

    The filter reproduces cubic polynomials exactly while minimizing the
    roughness of the output.
    """
    if n_terms < 5 or n_terms % 2 == 0:
        raise ValueError(f"Henderson filter needs an odd length >= 5, got {n_terms}")
    m = (n_terms - 1) // 2
    n = m + 2
    j = np.arange(-m, m + 1, dtype=float)
    num = 315.0 * ((n - 1) ** 2 - j**2) * (n**2 - j**2) * ((n + 1) ** 2 - j**2) \
        * (3.0 * n**2 - 16.0 - 11.0 * j**2)
    den = 8.0 * n * (n**2 - 1) * (4 * n**2 - 1) * (4 * n**2 - 9) * (4 * n**2 - 25)
    return num / den


def _ma_2x12_weights() -> np.ndarray:
    w = np.full(13, 2.0)
    w[0] = w[-1] = 1.0
    return w / 24.0


def _filter_truncated(x: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Apply a symmetric filter; near the edges, truncate and renormalize."""
    n = len(x)
    half = (len(weights) - 1) // 2
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        w = weights[lo - (i - half) : len(weights) - ((i + half + 1) - hi)]
        out[i] = float(w @ x[lo:hi]) / float(w.sum())
    return out


def _seasonal_ma(si: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Smooth each calendar month's subseries across years."""
    out = np.empty_like(si)
    for offset in range(12):
        idx = np.arange(offset, len(si), 12)
        out[idx] = _filter_truncated(si[idx], weights)
    return out


def _normalize(seasonal: np.ndarray, mode: Mode) -> np.ndarray:
    center = _filter_truncated(seasonal, _ma_2x12_weights())
    if mode is Mode.ADDITIVE:
        return seasonal - center
    return seasonal / center


def _detrend(y: np.ndarray, trend: np.ndarray, mode: Mode) -> np.ndarray:
    return y - trend if mode is Mode.ADDITIVE else y / trend


def _remove(y: np.ndarray, component: np.ndarray, mode: Mode) -> np.ndarray:
    return y - component if mode is Mode.ADDITIVE else y / component


def x11_adjust(s: TimeSeries, mode: Mode = Mode.MULTIPLICATIVE) -> SeasonalDecomposition:
    """Decompose a monthly series into trend, seasonal, and irregular."""
    if s.frequency is not Frequency.MONTHLY:
        raise SeriesError(f"{s.name}: seasonal adjustment requires monthly data")
    if len(s) < MIN_LENGTH:
        raise SeriesError(
            f"{s.name}: need at least {MIN_LENGTH} observations, have {len(s)}"
        )
    y = np.asarray(s.values, dtype=float)
    if mode is Mode.MULTIPLICATIVE and np.any(y <= 0.0):
        i = int(np.flatnonzero(y <= 0.0)[0])
        raise SeriesError(
            f"{s.name}: multiplicative adjustment needs positive values, "
            f"found {y[i]} at {s.date_at(i)}"
        )

    # first pass: 2x12 trend, 3x3 seasonal
    w_3x3 = np.array([1.0, 2.0, 3.0, 2.0, 1.0]) / 9.0
    trend1 = _filter_truncated(y, _ma_2x12_weights())
    si1 = _detrend(y, trend1, mode)
    seasonal1 = _normalize(_seasonal_ma(si1, w_3x3), mode)

    # second pass: Henderson trend on the first-pass adjusted series,
    # then a 3x5 seasonal
    w_3x5 = np.array([1.0, 2.0, 3.0, 3.0, 3.0, 2.0, 1.0]) / 15.0
    adjusted1 = _remove(y, seasonal1, mode)
    trend2 = _filter_truncated(adjusted1, henderson_weights(13))
    si2 = _detrend(y, trend2, mode)
    seasonal = _normalize(_seasonal_ma(si2, w_3x5), mode)

    adjusted = _remove(y, seasonal, mode)
    irregular = _detrend(adjusted, trend2, mode)

    mk = lambda name, v: TimeSeries(f"{s.name}.{name}", s.frequency, s.start, v)
    return SeasonalDecomposition(
        trend=mk("trend", trend2),
        seasonal=mk("seasonal", seasonal),
        irregular=mk("irregular", irregular),
        adjusted=s.with_values(adjusted),
        mode=mode,
    )


def is_seasonal(s: TimeSeries, level: float = 0.01):
    """Stable-seasonality F test on detrended values grouped by month.

    Returns (verdict, F). The verdict is True when F exceeds the
    `level` critical value of F(11, n - 12), i.e. when a stable monthly
    pattern explains significantly more variance than the residual.
    """
    if s.frequency is not Frequency.MONTHLY:
        raise SeriesError(f"{s.name}: seasonality test requires monthly data")
    if len(s) < MIN_LENGTH:
        raise SeriesError(
            f"{s.name}: need at least {MIN_LENGTH} observations, have {len(s)}"
        )
    y = np.asarray(s.values, dtype=float)
    trend = _filter_truncated(y, _ma_2x12_weights())
    # interior only: the centered 2x12 window is fully supported
    interior = slice(6, len(y) - 6)
    si = (y - trend)[interior]
    months = np.array([s.date_at(i).month for i in range(len(s))])[interior]

    n = len(si)
    grand = si.mean()
    ss_between = 0.0
    ss_within = 0.0
    for m in range(1, 13):
        group = si[months == m]
        if len(group) == 0:
            continue
        ss_between += len(group) * (group.mean() - grand) ** 2
        ss_within += float(np.sum((group - group.mean()) ** 2))
    df_b = 11
    df_w = n - 12
    if ss_within <= 0.0:
        # a perfectly stable pattern (or constant series)
        f_stat = 0.0 if ss_between <= 1e-300 else np.inf
    else:
        f_stat = (ss_between / df_b) / (ss_within / df_w)
    if f_stat == 0.0:
        return False, 0.0
    if np.isinf(f_stat):
        return True, float("inf")
    return f_sf(f_stat, df_b, df_w) < level, float(f_stat)
