"""Least-squares engine, information criteria, and residual diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import chi2_sf, f_sf

__all__ = [
    "RegressionError",
    "OlsFit",
    "LjungBoxResult",
    "ols",
    "bic",
    "bic_system",
    "ljung_box",
    "joint_significance",
]

# singular-value ratio below this flags a rank-deficient design
RANK_TOL = 1e-10


class RegressionError(ValueError):
    pass


@dataclass(frozen=True)
class OlsFit:
    """Result of a least-squares fit.

    `sigma2` uses the 1/(n-k) divisor and feeds the coefficient
    covariance; `sigma2_ml` uses 1/n and feeds information criteria.
    """

    coefficients: np.ndarray
    residuals: np.ndarray
    rss: float
    sigma2: float
    sigma2_ml: float
    coefficient_covariance: np.ndarray
    n_obs: int
    n_params: int

    @property
    def standard_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.coefficient_covariance))

    @property
    def t_statistics(self) -> np.ndarray:
        return self.coefficients / self.standard_errors

    @property
    def df_resid(self) -> int:
        return self.n_obs - self.n_params


def ols(y: np.ndarray, X: np.ndarray) -> OlsFit:
    """Minimize ||y - X b||^2 via QR; rejects rank-deficient designs."""
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise RegressionError("X must be a 2-d design matrix")
    n, k = X.shape
    if len(y) != n:
        raise RegressionError(f"y has {len(y)} rows but X has {n}")
    if n <= k:
        raise RegressionError(f"need more observations ({n}) than parameters ({k})")

    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] <= RANK_TOL * sv[0]:
        dependent = _dependent_columns(X)
        raise RegressionError(
            f"design matrix is rank deficient (singular value ratio "
            f"{sv[-1] / sv[0]:.2e}); dependent columns {dependent}"
        )

    q, r = np.linalg.qr(X)
    coef = np.linalg.solve(r, q.T @ y)
    resid = y - X @ coef
    rss = float(resid @ resid)
    sigma2 = rss / (n - k)
    sigma2_ml = rss / n
    rinv = np.linalg.solve(r, np.eye(k))
    xtx_inv = rinv @ rinv.T
    cov = sigma2 * xtx_inv
    cov = 0.5 * (cov + cov.T)
    return OlsFit(
        coefficients=coef,
        residuals=resid,
        rss=rss,
        sigma2=sigma2,
        sigma2_ml=sigma2_ml,
        coefficient_covariance=cov,
        n_obs=n,
        n_params=k,
    )


def _dependent_columns(X: np.ndarray) -> list:
    """Best-effort identification of linearly dependent columns."""
    _, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    scale = diag.max() if diag.max() > 0 else 1.0
    return [int(j) for j in np.flatnonzero(diag <= RANK_TOL * scale)]


def bic(rss: float, n_obs: int, n_params: int) -> float:
    """Schwarz criterion for a single equation: n ln(rss/n) + k ln(n)."""
    if rss <= 0.0:
        raise RegressionError(f"degenerate fit: rss = {rss}")
    if n_obs <= n_params or n_params < 0:
        raise RegressionError(f"need n_obs > n_params >= 0, got ({n_obs}, {n_params})")
    return n_obs * np.log(rss / n_obs) + n_params * np.log(n_obs)


def bic_system(sigma: np.ndarray, n_obs: int, n_params: int) -> float:
    """Multivariate Schwarz criterion: ln|Sigma| + n_params ln(n)/n.

    `n_params` counts all free coefficients in the system.
    """
    sigma = np.asarray(sigma, dtype=float)
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise RegressionError("residual covariance is not positive definite")
    return float(logdet + n_params * np.log(n_obs) / n_obs)


@dataclass(frozen=True)
class LjungBoxResult:
    q_statistics: np.ndarray
    p_values: np.ndarray
    max_lag: int
    df_adjust: int

    def rejects(self, level: float = 0.05) -> bool:
        """True if any testable lag rejects the no-autocorrelation null."""
        valid = ~np.isnan(self.p_values)
        return bool(np.any(self.p_values[valid] < level))


def ljung_box(residuals: np.ndarray, max_lag: int, df_adjust: int = 0) -> LjungBoxResult:
    """Portmanteau Q statistics for lags 1..max_lag.

    Q(m) = n (n+2) sum_{k<=m} rho_k^2 / (n-k), referred to chi-square
    with m - df_adjust degrees of freedom. Lags with m <= df_adjust get
    a NaN p-value. `df_adjust` is the number of fitted ARMA-type terms.
    """
    x = np.asarray(residuals, dtype=float).ravel()
    n = len(x)
    if max_lag < 1:
        raise RegressionError("max_lag must be >= 1")
    if max_lag >= n:
        raise RegressionError(f"max_lag {max_lag} must be < series length {n}")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise RegressionError("residuals are constant")
    rho = np.array([float(xc[k:] @ xc[:-k]) / denom for k in range(1, max_lag + 1)])
    terms = rho**2 / (n - np.arange(1, max_lag + 1))
    q = n * (n + 2) * np.cumsum(terms)
    p = np.full(max_lag, np.nan)
    for m in range(1, max_lag + 1):
        df = m - df_adjust
        if df > 0:
            p[m - 1] = chi2_sf(q[m - 1], df)
    return LjungBoxResult(q_statistics=q, p_values=p, max_lag=max_lag, df_adjust=df_adjust)


def joint_significance(fit: OlsFit, coefficient_indices: Sequence[int]):
    """Wald F test that the named coefficients are jointly zero.

    Returns (F, p) with F = Wald/q referred to F(q, n-k).
    """
    idx = sorted(set(int(i) for i in coefficient_indices))
    if len(idx) == 0:
        raise RegressionError("no coefficients named in the restriction")
    if idx[0] < 0 or idx[-1] >= fit.n_params:
        raise RegressionError(
            f"coefficient index out of range: {idx} for {fit.n_params} parameters"
        )
    b = fit.coefficients[idx]
    v = fit.coefficient_covariance[np.ix_(idx, idx)]
    wald = float(b @ np.linalg.solve(v, b))
    q = len(idx)
    f_stat = wald / q
    p = f_sf(f_stat, q, fit.df_resid)
    return f_stat, p
