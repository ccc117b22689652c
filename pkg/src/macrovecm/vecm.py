"""Engle-Granger two-step VECM estimation and diagnostics.

Step one estimates the cointegrating vector by static OLS in levels;
step two fits the error-correction system equation by equation. The
fitted model carries everything the impulse-response machinery needs
(coefficients, residual covariance, regressor cross-products).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .regress import LjungBoxResult, RegressionError, joint_significance, ljung_box, ols
from .series import Month, Panel, SampleWindow, SeriesError, TimeSeries
from .special import chi2_sf

__all__ = [
    "VecmError",
    "EcTerm",
    "VecmModel",
    "engle_granger_step1",
    "fit_vecm",
    "select_lags",
    "whiteness_report",
    "lag_exclusion_test",
    "companion_matrix",
    "serialize_model",
    "deserialize_model",
]


class VecmError(ValueError):
    pass


@dataclass(frozen=True)
class EcTerm:
    """Equilibrium error from the static cointegrating regression."""

    residual_series: TimeSeries
    beta: np.ndarray  # normalized: +1 on the dependent variable
    intercept: float
    dependent: str
    names: tuple


@dataclass(frozen=True)
class VecmModel:
    cointegrating_vector: np.ndarray
    adjustment_loadings: np.ndarray
    short_run: tuple  # (lags,) of k x k matrices; row = equation
    intercepts: np.ndarray
    residual_covariance: np.ndarray
    lags_in_differences: int
    ordering: tuple
    sample: SampleWindow | None
    n_obs: int
    xtx_inv: np.ndarray
    ec: EcTerm | None = None
    residuals: np.ndarray | None = None
    design: np.ndarray | None = None
    targets: np.ndarray | None = None

    @property
    def k(self) -> int:
        return len(self.ordering)

    @property
    def n_params_per_equation(self) -> int:
        return 2 + self.k * self.lags_in_differences

    def coefficient_matrix(self) -> np.ndarray:
        """Stacked (n_params x k) coefficients: const, ec, then lag blocks."""
        k = self.k
        b = np.empty((self.n_params_per_equation, k))
        b[0] = self.intercepts
        b[1] = self.adjustment_loadings
        for j, gamma in enumerate(self.short_run):
            b[2 + j * k : 2 + (j + 1) * k] = gamma.T
        return b


def engle_granger_step1(p: Panel, dependent: str) -> EcTerm:
    """Static OLS of the dependent variable on the others plus a constant."""
    if p.k < 2:
        raise VecmError("cointegrating regression needs at least two variables")
    names = p.names
    if dependent not in names:
        raise VecmError(f"unknown dependent variable {dependent!r} (have {names})")
    y = p.get(dependent).values
    others = [n for n in names if n != dependent]
    X = np.column_stack(
        [np.ones(len(p))] + [p.get(n).values for n in others]
    )
    try:
        fit = ols(y, X)
    except RegressionError as exc:
        raise VecmError(f"step-1 regression singular: {exc}") from exc

    beta = np.zeros(p.k)
    beta[names.index(dependent)] = 1.0
    for j, n in enumerate(others):
        beta[names.index(n)] = -fit.coefficients[1 + j]
    # normalize so the first nonzero coefficient is +1; the residual
    # series rescales with it, leaving alpha * beta' unchanged downstream
    nonzero = np.flatnonzero(np.abs(beta) > 1e-10 * np.abs(beta).max())
    scale = beta[nonzero[0]]
    beta = beta / scale
    residual = TimeSeries(
        name="ec", frequency=p.series[0].frequency, start=p.start,
        values=fit.residuals / scale,
    )
    return EcTerm(
        residual_series=residual,
        beta=beta,
        intercept=float(fit.coefficients[0]) / scale,
        dependent=dependent,
        names=names,
    )


def _estimation_rows(p: Panel, lags: int, window: SampleWindow | None) -> np.ndarray:
    T = len(p)
    if window is not None:
        i0 = window.estimation_start.diff(p.start)
        i1 = window.estimation_end.diff(p.start)
        if i0 < lags + 1:
            raise VecmError(
                f"presample of {i0} months cannot supply {lags} difference lags"
            )
        if i1 >= T:
            raise VecmError("window extends past the panel")
        return np.arange(i0, i1 + 1)
    if T <= lags + 1:
        raise VecmError(f"panel of {T} observations too short for {lags} lags")
    return np.arange(lags + 1, T)


def _vecm_design(p: Panel, ec: EcTerm, lags: int, rows: np.ndarray):
    y = p.values()
    dy = np.diff(y, axis=0)
    z = ec.residual_series.values
    targets = dy[rows - 1]
    cols = [np.ones((len(rows), 1)), z[rows - 1][:, None]]
    for j in range(1, lags + 1):
        cols.append(dy[rows - 1 - j])
    X = np.hstack(cols)
    return targets, X


def fit_vecm(
    p: Panel,
    ec: EcTerm,
    lags_in_differences: int,
    window: SampleWindow | None = None,
) -> VecmModel:
    """Equation-by-equation OLS of the error-correction system."""
    if lags_in_differences < 0:
        raise VecmError("lags_in_differences must be >= 0")
    if tuple(ec.names) != tuple(p.names):
        raise VecmError(
            f"error-correction term was built on {ec.names}, panel has {p.names}"
        )
    rows = _estimation_rows(p, lags_in_differences, window)
    targets, X = _vecm_design(p, ec, lags_in_differences, rows)
    t_eff, k = targets.shape
    m = X.shape[1]
    if t_eff <= m:
        raise VecmError(f"{t_eff} observations cannot identify {m} parameters")

    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise VecmError("VECM design matrix is numerically singular")
    coef, *_ = np.linalg.lstsq(X, targets, rcond=None)
    resid = targets - X @ coef
    sigma = resid.T @ resid / t_eff
    q, r_mat = np.linalg.qr(X)
    rinv = np.linalg.solve(r_mat, np.eye(m))
    xtx_inv = rinv @ rinv.T

    gammas = tuple(
        coef[2 + j * k : 2 + (j + 1) * k].T.copy() for j in range(lags_in_differences)
    )
    return VecmModel(
        cointegrating_vector=ec.beta.copy(),
        adjustment_loadings=coef[1].copy(),
        short_run=gammas,
        intercepts=coef[0].copy(),
        residual_covariance=0.5 * (sigma + sigma.T),
        lags_in_differences=lags_in_differences,
        ordering=tuple(p.names),
        sample=window,
        n_obs=t_eff,
        xtx_inv=xtx_inv,
        ec=ec,
        residuals=resid,
        design=X,
        targets=targets,
    )


def select_lags(
    p: Panel,
    ec: EcTerm,
    max_lags: int,
    window: SampleWindow | None = None,
) -> int:
    """Multivariate BIC over 1..max_lags on a common estimation sample."""
    if max_lags < 1:
        raise VecmError("max_lags must be >= 1")
    rows = _estimation_rows(p, max_lags, window)
    k = p.k
    t_eff = len(rows)
    best_m, best = 1, np.inf
    for m in range(1, max_lags + 1):
        targets, X = _vecm_design(p, ec, m, rows)
        coef, *_ = np.linalg.lstsq(X, targets, rcond=None)
        resid = targets - X @ coef
        sigma = resid.T @ resid / t_eff
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            raise VecmError(f"degenerate covariance at lag {m}")
        n_params = k * (2 + k * m)
        score = logdet + n_params * np.log(t_eff) / t_eff
        if score < best - 1e-12:
            best_m, best = m, score
    return best_m


def whiteness_report(m: VecmModel, max_lag: int) -> dict:
    """Ljung-Box per residual column; keys are variable names."""
    if m.residuals is None:
        raise VecmError("model carries no residuals (deserialized summary only)")
    if max_lag < 1:
        raise VecmError("max_lag must be >= 1")
    out = {}
    for i, name in enumerate(m.ordering):
        out[name] = ljung_box(m.residuals[:, i], max_lag)
    return out


def lag_exclusion_test(m: VecmModel, lag_index: int):
    """Joint-zero test on one lag's coefficient block.

    Returns (per_equation, system) where per_equation maps variable ->
    (F, p) and system is (LR, p) from the restricted/unrestricted
    log-determinant comparison with k^2 degrees of freedom.
    """
    if not 1 <= lag_index <= m.lags_in_differences:
        raise VecmError(
            f"lag {lag_index} out of range for a {m.lags_in_differences}-lag model"
        )
    if m.design is None or m.targets is None:
        raise VecmError("model carries no design matrix (deserialized summary only)")
    k = m.k
    block = list(range(2 + (lag_index - 1) * k, 2 + lag_index * k))

    per_equation = {}
    for i, name in enumerate(m.ordering):
        fit = ols(m.targets[:, i], m.design)
        per_equation[name] = joint_significance(fit, block)

    keep = [j for j in range(m.design.shape[1]) if j not in block]
    xr = m.design[:, keep]
    coef, *_ = np.linalg.lstsq(xr, m.targets, rcond=None)
    resid_r = m.targets - xr @ coef
    sigma_r = resid_r.T @ resid_r / m.n_obs
    _, logdet_r = np.linalg.slogdet(sigma_r)
    _, logdet_u = np.linalg.slogdet(m.residual_covariance)
    lr = m.n_obs * (logdet_r - logdet_u)
    p = chi2_sf(lr, k * k)
    return per_equation, (float(lr), float(p))


def companion_matrix(m: VecmModel) -> np.ndarray:
    """Level-VAR companion form of the fitted error-correction system."""
    k = m.k
    p = m.lags_in_differences + 1
    pi = np.outer(m.adjustment_loadings, m.cointegrating_vector)
    a = [None] * (p + 1)
    if p == 1:
        a[1] = np.eye(k) + pi
    else:
        gammas = m.short_run
        a[1] = np.eye(k) + pi + gammas[0]
        for j in range(2, p):
            a[j] = gammas[j - 1] - gammas[j - 2]
        a[p] = -gammas[p - 2]
    comp = np.zeros((k * p, k * p))
    for j in range(1, p + 1):
        comp[:k, (j - 1) * k : j * k] = a[j]
    if p > 1:
        comp[k:, : k * (p - 1)] = np.eye(k * (p - 1))
    return comp


_SERIAL_HEADER = "macrovecm vecm v1"


def _fmt_row(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def serialize_model(m: VecmModel) -> str:
    """Plain-text coefficient blocks with named dimensions.

    Captures everything the impulse-response stage needs (coefficients,
    residual covariance, regressor cross-products); residual-level
    diagnostics are not round-tripped.
    """
    k = m.k
    lines = [
        _SERIAL_HEADER,
        f"k {k}",
        f"lags_in_differences {m.lags_in_differences}",
        f"n_obs {m.n_obs}",
        "names " + " ".join(m.ordering),
    ]
    if m.sample is not None:
        lines.append(
            f"sample {m.sample.presample_start} {m.sample.estimation_start} "
            f"{m.sample.estimation_end}"
        )
    lines.append("beta " + _fmt_row(m.cointegrating_vector))
    lines.append("alpha " + _fmt_row(m.adjustment_loadings))
    lines.append("intercepts " + _fmt_row(m.intercepts))
    for j, gamma in enumerate(m.short_run, start=1):
        lines.append(f"gamma {j} rows {k}")
        lines.extend(_fmt_row(row) for row in gamma)
    lines.append(f"sigma rows {k}")
    lines.extend(_fmt_row(row) for row in m.residual_covariance)
    mdim = m.xtx_inv.shape[0]
    lines.append(f"xtx_inv rows {mdim}")
    lines.extend(_fmt_row(row) for row in m.xtx_inv)
    return "\n".join(lines) + "\n"


def deserialize_model(text: str) -> VecmModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _SERIAL_HEADER:
        raise VecmError(f"not a serialized model (expected {_SERIAL_HEADER!r})")
    it = iter(lines[1:])

    def fields(expected: str):
        line = next(it)
        key, *rest = line.split()
        if key != expected:
            raise VecmError(f"expected {expected!r} block, found {key!r}")
        return rest

    def read_matrix(rows: int):
        return np.array([[float(v) for v in next(it).split()] for _ in range(rows)])

    k = int(fields("k")[0])
    lags = int(fields("lags_in_differences")[0])
    n_obs = int(fields("n_obs")[0])
    names = tuple(fields("names"))
    window = None
    peek = next(it)
    if peek.startswith("sample "):
        _, pre, est0, est1 = peek.split()
        window = SampleWindow(Month.parse(pre), Month.parse(est0), Month.parse(est1))
        peek = next(it)
    if not peek.startswith("beta "):
        raise VecmError("expected beta block")
    beta = np.array([float(v) for v in peek.split()[1:]])
    alpha = np.array([float(v) for v in fields("alpha")])
    intercepts = np.array([float(v) for v in fields("intercepts")])
    gammas = []
    for j in range(1, lags + 1):
        spec = fields("gamma")
        if int(spec[0]) != j:
            raise VecmError(f"gamma blocks out of order at {spec[0]}")
        gammas.append(read_matrix(int(spec[2])))
    sigma = read_matrix(int(fields("sigma")[1]))
    xtx_inv = read_matrix(int(fields("xtx_inv")[1]))
    return VecmModel(
        cointegrating_vector=beta,
        adjustment_loadings=alpha,
        short_run=tuple(gammas),
        intercepts=intercepts,
        residual_covariance=sigma,
        lags_in_differences=lags,
        ordering=names,
        sample=window,
        n_obs=n_obs,
        xtx_inv=xtx_inv,
    )


# ---------------------------------------------------------------------------
# reduced-rank helpers used by the simulated Bartlett factor


@dataclass(frozen=True)
class _MatrixVecm:
    alpha: np.ndarray
    beta: np.ndarray  # may include a constant row (restricted constant)
    psi: np.ndarray | None  # coefficients of nuisance block
    sigma_chol: np.ndarray
    lags: int
    deterministic: object
    y0: np.ndarray  # initial levels feeding the recursion
    start_row: int


def _reduced_rank_fit(y, rows, lags, rank, deterministic):
    from .cointegration import JohansenDeterministic, _regression_blocks, _partial_out

    z0, z1, z2 = _regression_blocks(y, rows, lags, deterministic)
    r0 = _partial_out(z0, z2)
    r1 = _partial_out(z1, z2)
    t_eff = len(rows)
    s00 = r0.T @ r0 / t_eff
    s01 = r0.T @ r1 / t_eff
    s11 = r1.T @ r1 / t_eff
    if rank > 0:
        l11 = np.linalg.cholesky(s11)
        a = np.linalg.solve(np.linalg.cholesky(s00), s01)
        c = np.linalg.solve(l11, a.T @ a)
        mm = np.linalg.solve(l11, c.T).T
        mm = 0.5 * (mm + mm.T)
        vals, vecs = np.linalg.eigh(mm)
        order = np.argsort(vals)[::-1][:rank]
        beta = np.linalg.solve(l11.T, vecs[:, order])
        alpha = s01 @ beta @ np.linalg.inv(beta.T @ s11 @ beta)
        ec_part = (z1 @ beta) @ alpha.T
    else:
        beta = np.zeros((z1.shape[1], 0))
        alpha = np.zeros((y.shape[1], 0))
        ec_part = 0.0
    if z2 is not None:
        psi, *_ = np.linalg.lstsq(z2, z0 - ec_part, rcond=None)
        resid = z0 - ec_part - z2 @ psi
    else:
        psi = None
        resid = z0 - ec_part
    sigma = resid.T @ resid / t_eff
    return _MatrixVecm(
        alpha=alpha,
        beta=beta,
        psi=psi,
        sigma_chol=np.linalg.cholesky(0.5 * (sigma + sigma.T)),
        lags=lags,
        deterministic=deterministic,
        y0=y[: rows[0]].copy(),
        start_row=int(rows[0]),
    )


def _simulate_vecm(model: _MatrixVecm, t_total: int, rng) -> np.ndarray:
    from .cointegration import JohansenDeterministic

    k = model.sigma_chol.shape[0]
    y = np.empty((t_total, k))
    y[: model.start_row] = model.y0
    shocks = rng.standard_normal((t_total - model.start_row, k)) @ model.sigma_chol.T
    restricted = model.deterministic is JohansenDeterministic.RESTRICTED_CONSTANT
    unrestricted = model.deterministic is JohansenDeterministic.UNRESTRICTED_CONSTANT
    for i, t in enumerate(range(model.start_row, t_total)):
        dy = shocks[i].copy()
        if model.alpha.shape[1] > 0:
            z1 = y[t - 1]
            if restricted:
                z1 = np.append(z1, 1.0)
            dy += model.alpha @ (model.beta.T @ z1)
        if model.psi is not None:
            parts = []
            if unrestricted:
                parts.append([1.0])
            for j in range(1, model.lags):
                parts.append(y[t - j] - y[t - j - 1])
            z2 = np.concatenate(parts)
            dy += model.psi.T @ z2
        y[t] = y[t - 1] + dy
    return y
