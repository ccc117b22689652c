"""Orthogonalized impulse responses with Monte Carlo percentile bands."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vecm import VecmModel, companion_matrix

__all__ = [
    "IrfError",
    "IrfResult",
    "choleski_factor",
    "companion_irf",
    "mc_bands",
    "significance_profile",
    "nearest_rank_percentile",
]


class IrfError(ValueError):
    pass


def choleski_factor(sigma: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L' = sigma; rejects non-PD input."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise IrfError(f"covariance must be square, got {sigma.shape}")
    asym = np.max(np.abs(sigma - sigma.T))
    scale = max(np.max(np.abs(sigma)), 1.0)
    if asym > 1e-10 * scale:
        raise IrfError(f"covariance not symmetric (max asymmetry {asym:.3e})")
    try:
        return np.linalg.cholesky(0.5 * (sigma + sigma.T))
    except np.linalg.LinAlgError:
        smallest = float(np.linalg.eigvalsh(sigma).min())
        raise IrfError(
            f"covariance not positive definite (smallest eigenvalue {smallest:.3e})"
        ) from None


def _validate_ordering(ordering, names) -> np.ndarray:
    ordering = tuple(ordering)
    if sorted(ordering) != sorted(names):
        raise IrfError(f"ordering {ordering} is not a permutation of {names}")
    return np.array([names.index(v) for v in ordering])


def _impact_matrix(sigma: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Panel-coordinate impact of one-sd orthogonalized shocks.

    Column j is the impact of a shock to the j-th variable of the
    ordering, expressed in panel variable order.
    """
    sigma_ord = sigma[np.ix_(perm, perm)]
    l_ord = choleski_factor(sigma_ord)
    impact = np.zeros_like(l_ord)
    impact[perm, :] = l_ord
    return impact


def _ma_matrices(comp: np.ndarray, k: int, horizons: int) -> np.ndarray:
    """Psi_0..Psi_H from the companion form; Psi_0 = I."""
    psi = np.empty((horizons + 1, k, k))
    psi[0] = np.eye(k)
    power = np.eye(comp.shape[0])
    for h in range(1, horizons + 1):
        power = comp @ power
        psi[h] = power[:k, :k]
    return psi


def _responses_from(
    comp: np.ndarray, sigma: np.ndarray, perm: np.ndarray, k: int, horizons: int
) -> np.ndarray:
    """(shock, response, horizon) array; shock index is panel order."""
    impact = _impact_matrix(sigma, perm)
    psi = _ma_matrices(comp, k, horizons)
    theta = psi @ impact  # (H+1, response, ordering position)
    out = np.empty((k, k, horizons + 1))
    for pos, shock_idx in enumerate(perm):
        out[shock_idx] = theta[:, :, pos].T
    return out


def companion_irf(m: VecmModel, ordering, horizons: int) -> np.ndarray:
    """Point responses to one-standard-deviation orthogonalized shocks.

    Returned array is indexed (shock, response, horizon 0..H) in panel
    variable order; the Choleski ordering only affects orthogonalization.
    """
    if horizons < 1:
        raise IrfError("horizons must be >= 1")
    perm = _validate_ordering(ordering, m.ordering)
    comp = companion_matrix(m)
    return _responses_from(comp, m.residual_covariance, perm, m.k, horizons)


def nearest_rank_percentile(sorted_values: np.ndarray, q: float) -> np.ndarray:
    """Nearest-rank percentile along the first axis of pre-sorted data."""
    n = sorted_values.shape[0]
    idx = int(np.ceil(q * n)) - 1
    idx = min(max(idx, 0), n - 1)
    return sorted_values[idx]


@dataclass(frozen=True)
class IrfResult:
    responses: np.ndarray  # (shock, response, horizon)
    lower_band: np.ndarray
    upper_band: np.ndarray
    significant: np.ndarray
    draws: int
    seed: int
    names: tuple
    ordering: tuple
    percentiles: tuple
    rejected_draws: int

    @property
    def horizons(self) -> int:
        return self.responses.shape[2] - 1

    def index(self, name: str) -> int:
        return self.names.index(name)


def _draw_sigma(rng, sigma_hat: np.ndarray, t_eff: int) -> np.ndarray:
    """Inverse-Wishart-equivalent draw centered on the ML estimate."""
    k = sigma_hat.shape[0]
    nu = t_eff
    s = t_eff * sigma_hat
    l_s = np.linalg.cholesky(s)
    # Bartlett factor of a standard Wishart(nu, I)
    a = np.zeros((k, k))
    for i in range(k):
        a[i, i] = np.sqrt(rng.chisquare(nu - i))
        for j in range(i):
            a[i, j] = rng.standard_normal()
    m = np.linalg.solve(l_s.T, np.eye(k))  # M M' = S^{-1}
    q = m @ a
    q_inv = np.linalg.solve(q, np.eye(k))
    sigma_d = q_inv.T @ q_inv
    return 0.5 * (sigma_d + sigma_d.T)


def _rebuild_companion(m: VecmModel, coef: np.ndarray) -> np.ndarray:
    """Companion matrix for redrawn coefficients with the fixed beta."""
    k = m.k
    p = m.lags_in_differences + 1
    pi = np.outer(coef[1], m.cointegrating_vector)
    gammas = [
        coef[2 + j * k : 2 + (j + 1) * k].T for j in range(m.lags_in_differences)
    ]
    a = [None] * (p + 1)
    if p == 1:
        a[1] = np.eye(k) + pi
    else:
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


def mc_bands(
    m: VecmModel,
    ordering,
    horizons: int,
    draws: int,
    seed: int,
    percentiles: tuple = (0.05, 0.95),
) -> IrfResult:
    """Percentile bands from draws of the coefficient sampling distribution.

    Each draw resamples the residual covariance (inverse-Wishart
    equivalent) and the system coefficients (matrix normal around the
    estimates with covariance sigma (x) (X'X)^-1), holding the
    cointegrating vector fixed at its step-one estimate, then recomputes
    the orthogonalized responses. Deterministic given `seed`: draw i
    uses an independent substream keyed by (seed, i), so results do not
    depend on execution order or thread count.
    """
    if draws < 100:
        raise IrfError(f"draws must be >= 100, got {draws}")
    if not (0.0 < percentiles[0] < percentiles[1] < 1.0):
        raise IrfError(f"percentiles must be increasing in (0, 1), got {percentiles}")
    perm = _validate_ordering(ordering, m.ordering)
    k = m.k
    point = companion_irf(m, ordering, horizons)

    b_hat = m.coefficient_matrix()
    l_x = np.linalg.cholesky(
        m.xtx_inv + 1e-14 * np.eye(m.xtx_inv.shape[0]) * np.trace(m.xtx_inv)
    )
    all_resp = np.empty((draws, k, k, horizons + 1))
    rejected = 0
    max_rejected = max(1, draws // 10)
    for i in range(draws):
        attempt = 0
        while True:
            rng = np.random.default_rng([seed, i, attempt])
            try:
                sigma_d = _draw_sigma(rng, m.residual_covariance, m.n_obs)
                l_sig = np.linalg.cholesky(sigma_d)
                z = rng.standard_normal(b_hat.shape)
                coef_d = b_hat + l_x @ z @ l_sig.T
                comp_d = _rebuild_companion(m, coef_d)
                all_resp[i] = _responses_from(comp_d, sigma_d, perm, k, horizons)
                break
            except (np.linalg.LinAlgError, IrfError):
                rejected += 1
                attempt += 1
                if rejected > max_rejected:
                    raise IrfError(
                        f"more than 10% of draws rejected ({rejected} of {draws})"
                    ) from None

    all_resp.sort(axis=0)
    lower = nearest_rank_percentile(all_resp, percentiles[0])
    upper = nearest_rank_percentile(all_resp, percentiles[1])
    significant = (lower > 0.0) | (upper < 0.0)
    return IrfResult(
        responses=point,
        lower_band=lower,
        upper_band=upper,
        significant=significant,
        draws=draws,
        seed=seed,
        names=tuple(m.ordering),
        ordering=tuple(ordering),
        percentiles=tuple(percentiles),
        rejected_draws=rejected,
    )


def significance_profile(r: IrfResult, shock: str, response: str) -> list:
    """Horizons whose band excludes zero, tagged with the response sign."""
    try:
        si = r.index(shock)
        ri = r.index(response)
    except ValueError:
        raise IrfError(
            f"unknown variable in ({shock!r}, {response!r}); have {r.names}"
        ) from None
    out = []
    for h in range(r.horizons + 1):
        if r.significant[si, ri, h]:
            sign = "+" if r.lower_band[si, ri, h] > 0 else "-"
            out.append((h, sign))
    return out
