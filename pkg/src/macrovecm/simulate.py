"""Synthetic dataset generation for oracles and pipeline rehearsals.

The generator simulates a drift-consistent error-correction system in
deviation form: growth-rate deviations follow the short-run dynamics,
the equilibrium error feeds back through the adjustment loadings, and
an optional weak pull toward each variable's drift line keeps simulated
panels numerically well behaved over long spans.
"""

from __future__ import annotations

import csv
import datetime as _dt
from dataclasses import dataclass, field, replace

import numpy as np

from .series import Frequency, Month, TimeSeries

__all__ = [
    "VecmDgp",
    "simulate_levels",
    "simulate_series",
    "write_fred_csv",
    "weekly_from_monthly",
    "demo_dgp",
]


@dataclass(frozen=True)
class VecmDgp:
    """A rank-one error-correction data generating process."""

    names: tuple
    beta: np.ndarray  # cointegrating vector, beta' drift must be ~0
    alpha: np.ndarray  # adjustment loadings
    gammas: tuple  # short-run matrices for growth deviations
    sigma_chol: np.ndarray  # lower-triangular innovation factor
    drift: np.ndarray  # per-period drift of each variable
    x0: np.ndarray  # initial levels
    aux_pull: np.ndarray | None = None  # weak per-variable drift-line reversion

    @property
    def k(self) -> int:
        return len(self.names)

    def __post_init__(self):
        mismatch = abs(float(self.beta @ self.drift))
        scale = max(float(np.abs(self.beta) @ np.abs(self.drift)), 1e-12)
        if mismatch > 1e-8 * max(scale, 1e-6):
            raise ValueError(
                f"beta' drift = {mismatch:.3e}: the equilibrium error would drift"
            )


def simulate_levels(
    dgp: VecmDgp,
    t_total: int,
    seed: int,
    stream_seeds: tuple | None = None,
) -> np.ndarray:
    """Simulate `t_total` level observations (row 0 is the initial state).

    Innovations come from per-variable substreams keyed by
    (seed, stream_seeds[i]), so one variable's draw sequence can be
    re-drawn without disturbing the others.
    """
    k = dgp.k
    if stream_seeds is None:
        stream_seeds = tuple(range(k))
    e = np.column_stack(
        [
            np.random.default_rng([seed, int(stream_seeds[i])]).standard_normal(
                t_total - 1
            )
            for i in range(k)
        ]
    )
    shocks = e @ dgp.sigma_chol.T

    p_minus_1 = len(dgp.gammas)
    x = np.empty((t_total, k))
    x[0] = dgp.x0
    d_hist = np.zeros((p_minus_1 + 1, k))  # d_hist[j] = deviation at t-j
    z = 0.0
    base = dgp.beta @ dgp.x0
    for t in range(1, t_total):
        d = shocks[t - 1] + dgp.alpha * z
        for j, gamma in enumerate(dgp.gammas, start=1):
            d = d + gamma @ d_hist[j - 1]
        if dgp.aux_pull is not None:
            line = dgp.x0 + dgp.drift * (t - 1)
            d = d - dgp.aux_pull * (x[t - 1] - line)
        x[t] = x[t - 1] + dgp.drift + d
        z = float(dgp.beta @ x[t] - base)
        if p_minus_1:
            d_hist = np.vstack([d, d_hist[:-1]])
    return x


def simulate_series(
    dgp: VecmDgp, t_total: int, seed: int, start: Month
) -> list[TimeSeries]:
    levels = simulate_levels(dgp, t_total, seed)
    return [
        TimeSeries(name, Frequency.MONTHLY, start, levels[:, i])
        for i, name in enumerate(dgp.names)
    ]


def write_fred_csv(path, dates, values) -> None:
    """Two-column DATE,VALUE CSV with ISO dates."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["DATE", "VALUE"])
        for d, v in zip(dates, values):
            if isinstance(d, Month):
                d = d.first_day()
            writer.writerow([d.isoformat(), f"{float(v):.6f}"])


def weekly_from_monthly(
    monthly: TimeSeries,
    seasonal_pattern: np.ndarray | None = None,
    weekday: int = 2,
) -> tuple[list, np.ndarray]:
    """Spread a monthly series onto week-ending dates within each month.

    Weekly values interpolate the monthly path and are shifted so each
    month's mean reproduces the (seasonal-scaled) monthly value exactly.
    Returns (dates, values). `weekday` follows datetime convention
    (2 = Wednesday, the usual weekly release day).
    """
    if monthly.frequency is not Frequency.MONTHLY:
        raise ValueError("weekly_from_monthly needs a monthly input")
    first_month = monthly.start
    d = first_month.first_day()
    while d.weekday() != weekday:
        d += _dt.timedelta(days=1)

    targets = np.asarray(monthly.values, dtype=float)
    if seasonal_pattern is not None:
        if len(seasonal_pattern) != 12:
            raise ValueError("seasonal_pattern must have 12 entries")
        factors = np.array(
            [seasonal_pattern[(monthly.date_at(i).month - 1)] for i in range(len(monthly))]
        )
        targets = targets * factors

    dates: list[_dt.date] = []
    month_of: list[int] = []
    while True:
        m = Month.from_date(d)
        idx = m.diff(first_month)
        if idx >= len(monthly):
            break
        if idx >= 0:
            dates.append(d)
            month_of.append(idx)
        d += _dt.timedelta(days=7)

    month_of = np.array(month_of)
    # smooth base: linear interpolation of month-levels at weekly points
    grid = np.arange(len(monthly))
    pos = np.array(
        [month_of[i] + (dates[i].day - 1) / 30.0 for i in range(len(dates))]
    )
    base = np.interp(pos, grid, targets)
    values = base.copy()
    for idx in np.unique(month_of):
        sel = month_of == idx
        values[sel] += targets[idx] - base[sel].mean()
    return dates, values


def demo_dgp(seed_scale: float = 1.0) -> VecmDgp:
    """A five-variable rank-one system with realistic monthly magnitudes.

    Useful for pipeline rehearsals and the `simulate` CLI verb; the
    committed replication vintage uses its own calibrated parameters.
    """
    names = ("E", "A", "P", "Y", "R")
    beta = np.array([1.0, 0.0, -0.6, -0.5, 0.02])
    drift = np.array([0.0045, 0.0084, 0.0017, 0.00086, -0.0096])
    # keep the equilibrium error drift-free
    drift[3] = (beta[0] * drift[0] + beta[2] * drift[2] + beta[4] * drift[4]) / -beta[3]
    sigma = np.array(
        [
            [1.0, 0.10, 0.25, 0.30, 0.15],
            [0.10, 1.0, 0.05, 0.05, 0.10],
            [0.25, 0.05, 1.0, 0.20, 0.20],
            [0.30, 0.05, 0.20, 1.0, 0.25],
            [0.15, 0.10, 0.20, 0.25, 1.0],
        ]
    )
    scales = np.array([0.004, 0.012, 0.0018, 0.006, 0.22]) * seed_scale
    sigma = sigma * np.outer(scales, scales)
    g1 = np.zeros((5, 5))
    g1[3, 0] = 0.35 * scales[3] / scales[0]
    g1[2, 0] = 0.10 * scales[2] / scales[0]
    np.fill_diagonal(g1, [0.25, 0.30, 0.30, 0.10, 0.25])
    alpha = np.array([-0.035, 0.0, 0.0, -0.05, 0.4])
    return VecmDgp(
        names=names,
        beta=beta,
        alpha=alpha,
        gammas=(g1,),
        sigma_chol=np.linalg.cholesky(sigma),
        drift=drift,
        x0=np.array([7.13, 6.58, 5.20, 4.52, 4.0]),
        aux_pull=None,
    )
