"""Johansen trace test with small-sample correction and gamma p-values."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._trace_moments import TRACE_MOMENTS
from .series import Panel, SampleWindow, SeriesError
from .special import gamma_ppf, gammainc_q

__all__ = [
    "CointegrationError",
    "JohansenDeterministic",
    "Correction",
    "JohansenSpec",
    "TraceTestResult",
    "johansen_trace",
    "bartlett_correction",
    "trace_pvalue",
    "trace_critical_value",
]


class CointegrationError(ValueError):
    pass


class JohansenDeterministic(Enum):
    NONE = "none"
    RESTRICTED_CONSTANT = "restricted_constant"
    UNRESTRICTED_CONSTANT = "unrestricted_constant"


class Correction(Enum):
    """Small-sample treatment of the raw trace statistic.

    DF applies the degrees-of-freedom factor (T - k * lags) / T.
    SIMULATED estimates the Bartlett factor by Monte Carlo under the
    fitted null (expectation matching); it is slower and kept behind a
    config flag.
    """

    NONE = "none"
    DF = "df"
    SIMULATED = "simulated_bartlett"


@dataclass(frozen=True)
class JohansenSpec:
    lags: int  # VAR lags in levels; the test uses lags-1 lagged differences
    deterministic: JohansenDeterministic = JohansenDeterministic.UNRESTRICTED_CONSTANT
    correction: Correction = Correction.DF
    simulated_reps: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.lags < 1:
            raise ValueError("lags must be >= 1")


@dataclass(frozen=True)
class TraceTestResult:
    eigenvalues: np.ndarray
    trace_raw: np.ndarray
    trace_corrected: np.ndarray
    critical_values_5pct: np.ndarray
    p_values: np.ndarray
    selected_rank: int
    n_effective: int
    correction_factors: np.ndarray
    spec: JohansenSpec

    @property
    def k(self) -> int:
        return len(self.eigenvalues)


def _moments(dims: int, deterministic: JohansenDeterministic):
    try:
        entry = TRACE_MOMENTS[deterministic.value][dims]
    except KeyError:
        raise CointegrationError(
            f"no tabulated moments for dims={dims}, case={deterministic.value}"
        ) from None
    return entry["mean"], entry["variance"]


def trace_pvalue(stat: float, dims: int, deterministic: JohansenDeterministic) -> float:
    """Upper-tail probability of the asymptotic trace distribution.

    The distribution is approximated by a gamma matched to the
    simulated mean and variance for (dims, deterministic).
    """
    if stat < 0:
        raise CointegrationError(f"trace statistic must be >= 0, got {stat}")
    if dims < 1:
        raise CointegrationError(f"dims must be >= 1, got {dims}")
    mean, var = _moments(dims, deterministic)
    shape = mean * mean / var
    scale = var / mean
    if stat == 0.0:
        return 1.0
    return gammainc_q(shape, stat / scale)


def trace_critical_value(
    dims: int,
    deterministic: JohansenDeterministic = JohansenDeterministic.UNRESTRICTED_CONSTANT,
    level: float = 0.05,
) -> float:
    """Inverse of the gamma approximation at the requested level."""
    if not 0.0 < level < 1.0:
        raise CointegrationError(f"level must be in (0, 1), got {level}")
    mean, var = _moments(dims, deterministic)
    shape = mean * mean / var
    scale = var / mean
    return gamma_ppf(1.0 - level, shape, scale)


def bartlett_correction(
    trace_raw: np.ndarray,
    T: int,
    k: int,
    lags: int,
    variant: Correction = Correction.DF,
    factors: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply a multiplicative small-sample factor to the raw trace sequence.

    Returns (corrected, factors). For the SIMULATED variant the caller
    supplies per-rank factors (see `simulated_bartlett_factors`).
    """
    trace_raw = np.asarray(trace_raw, dtype=float)
    if variant is Correction.NONE:
        f = np.ones_like(trace_raw)
    elif variant is Correction.DF:
        if T <= k * lags:
            raise CointegrationError(
                f"effective sample {T} too small for {k} variables x {lags} lags"
            )
        f = np.full_like(trace_raw, (T - k * lags) / T)
    elif variant is Correction.SIMULATED:
        if factors is None:
            raise CointegrationError("SIMULATED variant needs precomputed factors")
        f = np.minimum(np.asarray(factors, dtype=float), 1.0)
    else:  # pragma: no cover
        raise CointegrationError(f"unknown correction {variant}")
    return trace_raw * f, f


def _regression_blocks(
    y: np.ndarray,
    rows: np.ndarray,
    lags: int,
    deterministic: JohansenDeterministic,
):
    """Target/levels/nuisance blocks for the reduced-rank regression."""
    dy = np.diff(y, axis=0)
    z0 = dy[rows - 1]
    z1 = y[rows - 1]
    if deterministic is JohansenDeterministic.RESTRICTED_CONSTANT:
        z1 = np.hstack([z1, np.ones((len(rows), 1))])
    nuisance = []
    if deterministic is JohansenDeterministic.UNRESTRICTED_CONSTANT:
        nuisance.append(np.ones((len(rows), 1)))
    for j in range(1, lags):
        nuisance.append(dy[rows - 1 - j])
    z2 = np.hstack(nuisance) if nuisance else None
    return z0, z1, z2


def _partial_out(a: np.ndarray, z: np.ndarray | None) -> np.ndarray:
    if z is None:
        return a
    coef, *_ = np.linalg.lstsq(z, a, rcond=None)
    return a - z @ coef


def johansen_trace(
    p: Panel,
    spec: JohansenSpec,
    window: SampleWindow | None = None,
) -> TraceTestResult:
    """Reduced-rank trace test for the cointegrating rank of a panel.

    Lagged differences and deterministic terms are partialled out of
    the first differences and the lagged levels; the eigenvalues of the
    canonical-correlation problem between the two residual sets give the
    trace statistics for each null rank.
    """
    y = p.values()
    T, k = y.shape
    lags = spec.lags

    if window is not None:
        i0 = window.estimation_start.diff(p.start)
        i1 = window.estimation_end.diff(p.start)
        if i0 < lags:
            raise CointegrationError(
                f"presample of {i0} months cannot supply {lags} VAR lags"
            )
        if i1 >= T:
            raise CointegrationError("window extends past the panel")
        rows = np.arange(i0, i1 + 1)
    else:
        rows = np.arange(lags, T)
    t_eff = len(rows)
    if t_eff <= k * lags + 10:
        raise CointegrationError(
            f"effective sample {t_eff} too small for {k} variables x {lags} lags"
        )

    z0, z1, z2 = _regression_blocks(y, rows, lags, spec.deterministic)
    r0 = _partial_out(z0, z2)
    r1 = _partial_out(z1, z2)

    s00 = r0.T @ r0 / t_eff
    s01 = r0.T @ r1 / t_eff
    s11 = r1.T @ r1 / t_eff

    eigvals = _canonical_eigenvalues(s00, s01, s11)
    eigvals = eigvals[:k]  # restricted-constant augments z1 by one column

    log_terms = np.log1p(-eigvals)
    trace_raw = -t_eff * np.cumsum(log_terms[::-1])[::-1]

    factors = None
    if spec.correction is Correction.SIMULATED:
        factors = simulated_bartlett_factors(
            y, rows, spec, trace_raw, reps=spec.simulated_reps, seed=spec.seed
        )
    corrected, used = bartlett_correction(
        trace_raw, t_eff, k, lags, spec.correction, factors
    )

    dims = np.arange(k, 0, -1)
    criticals = np.array(
        [trace_critical_value(int(d), spec.deterministic, 0.05) for d in dims]
    )
    pvals = np.array(
        [
            trace_pvalue(float(corrected[r]), int(dims[r]), spec.deterministic)
            for r in range(k)
        ]
    )

    selected = k
    for r in range(k):
        if corrected[r] < criticals[r]:
            selected = r
            break

    return TraceTestResult(
        eigenvalues=eigvals,
        trace_raw=trace_raw,
        trace_corrected=corrected,
        critical_values_5pct=criticals,
        p_values=pvals,
        selected_rank=selected,
        n_effective=t_eff,
        correction_factors=used,
        spec=spec,
    )


def _canonical_eigenvalues(s00, s01, s11) -> np.ndarray:
    """Squared canonical correlations, sorted descending."""
    try:
        l11 = np.linalg.cholesky(s11)
        l00 = np.linalg.cholesky(s00)
    except np.linalg.LinAlgError:
        ev_min = min(
            np.linalg.eigvalsh(s11).min(), np.linalg.eigvalsh(s00).min()
        )
        raise CointegrationError(
            f"moment matrix numerically singular (min eigenvalue {ev_min:.3e})"
        ) from None
    # M = L11^-1 S10 S00^-1 S01 L11^-T, symmetric by construction
    a = np.linalg.solve(l00, s01)  # L00^-1 S01
    c = np.linalg.solve(l11, a.T @ a)
    m = np.linalg.solve(l11, c.T).T
    m = 0.5 * (m + m.T)
    vals = np.linalg.eigvalsh(m)[::-1]
    return np.clip(vals, 0.0, 1.0 - 1e-12)


def simulated_bartlett_factors(
    y: np.ndarray,
    rows: np.ndarray,
    spec: JohansenSpec,
    trace_raw: np.ndarray,
    reps: int = 200,
    seed: int = 0,
) -> np.ndarray:
    """Per-rank Bartlett factors by expectation matching under the null.

    For each null rank r the fitted rank-r model is simulated `reps`
    times with Gaussian innovations; the factor is the ratio of the
    asymptotic mean of the trace distribution to the simulated
    finite-sample mean. Deterministic given `seed`.
    """
    from .vecm import _reduced_rank_fit, _simulate_vecm  # local to avoid a cycle

    T, k = y.shape
    lags = spec.lags
    factors = np.ones(k)
    for r in range(k):
        dims = k - r
        asym_mean, _ = _moments(dims, spec.deterministic)
        model = _reduced_rank_fit(y, rows, lags, r, spec.deterministic)
        sims = np.empty(reps)
        for i in range(reps):
            rng = np.random.default_rng([seed, r, i])
            y_sim = _simulate_vecm(model, T, rng)
            res = johansen_trace_raw(y_sim, rows, spec)
            sims[i] = res[r]
        factors[r] = asym_mean / sims.mean()
    return factors


def johansen_trace_raw(y: np.ndarray, rows: np.ndarray, spec: JohansenSpec) -> np.ndarray:
    """Raw trace sequence on a plain matrix; helper for simulation loops."""
    z0, z1, z2 = _regression_blocks(y, rows, spec.lags, spec.deterministic)
    r0 = _partial_out(z0, z2)
    r1 = _partial_out(z1, z2)
    t_eff = len(rows)
    s00 = r0.T @ r0 / t_eff
    s01 = r0.T @ r1 / t_eff
    s11 = r1.T @ r1 / t_eff
    eig = _canonical_eigenvalues(s00, s01, s11)[: y.shape[1]]
    return -t_eff * np.cumsum(np.log1p(-eig)[::-1])[::-1]
