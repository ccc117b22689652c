"""Report formatting: CSV tables, model summaries, and SVG figures.

All emitters are pure string builders with fixed number formatting so
that identical inputs produce byte-identical files.
"""

from __future__ import annotations

import io

import numpy as np

from .cointegration import TraceTestResult
from .irf import IrfResult
from .unit_root import StationarityTable
from .vecm import VecmModel, serialize_model

__all__ = [
    "stationarity_csv",
    "trace_csv",
    "irf_csv",
    "model_summary",
    "svg_irf_figure",
]


def _num(x) -> str:
    return f"{float(x):.10g}"


def stationarity_csv(table: StationarityTable) -> str:
    out = io.StringIO()
    out.write(
        "variable,deterministic,transform,statistic,augmenting_lags,"
        "critical_value_5pct,reject_unit_root,n_effective\n"
    )
    for var, det, transform, res in table.rows:
        out.write(
            f"{var},{det.value},{transform},{_num(res.statistic)},"
            f"{res.augmenting_lags},{_num(res.critical_value_5pct)},"
            f"{res.reject_unit_root},{res.n_effective}\n"
        )
    return out.getvalue()


def trace_csv(result: TraceTestResult) -> str:
    out = io.StringIO()
    out.write(
        "null_rank,alternative_rank,eigenvalue,trace_raw,correction_factor,"
        "trace_corrected,critical_value_5pct,p_value,selected\n"
    )
    for r in range(result.k):
        out.write(
            f"r<={r},r<={r + 1},{_num(result.eigenvalues[r])},"
            f"{_num(result.trace_raw[r])},{_num(result.correction_factors[r])},"
            f"{_num(result.trace_corrected[r])},"
            f"{_num(result.critical_values_5pct[r])},{_num(result.p_values[r])},"
            f"{result.selected_rank == r}\n"
        )
    return out.getvalue()


def irf_csv(result: IrfResult) -> str:
    out = io.StringIO()
    out.write("shock,response,horizon,point,lower,upper,significant\n")
    for si, shock in enumerate(result.names):
        for ri, response in enumerate(result.names):
            for h in range(result.horizons + 1):
                out.write(
                    f"{shock},{response},{h},"
                    f"{_num(result.responses[si, ri, h])},"
                    f"{_num(result.lower_band[si, ri, h])},"
                    f"{_num(result.upper_band[si, ri, h])},"
                    f"{result.significant[si, ri, h]}\n"
                )
    return out.getvalue()


def model_summary(
    model: VecmModel,
    whiteness: dict | None = None,
    lag_exclusion=None,
    bic_lags: int | None = None,
) -> str:
    out = io.StringIO()
    out.write("error-correction model summary\n")
    out.write("==============================\n")
    out.write(f"variables        : {', '.join(model.ordering)}\n")
    out.write(f"difference lags  : {model.lags_in_differences}\n")
    if bic_lags is not None:
        out.write(f"bic-chosen lags  : {bic_lags}\n")
    out.write(f"effective sample : {model.n_obs} observations\n")
    if model.sample is not None:
        out.write(
            f"estimation range : {model.sample.estimation_start}.."
            f"{model.sample.estimation_end}\n"
        )
    out.write("\ncointegrating vector (beta):\n")
    for name, b in zip(model.ordering, model.cointegrating_vector):
        out.write(f"  {name:<4s} {_num(b)}\n")
    out.write("\nadjustment loadings (alpha):\n")
    for name, a in zip(model.ordering, model.adjustment_loadings):
        out.write(f"  {name:<4s} {_num(a)}\n")
    if whiteness is not None:
        out.write("\nresidual whiteness (Ljung-Box, max lag per equation):\n")
        for name, lb in whiteness.items():
            worst = float(np.nanmin(lb.p_values))
            flag = "REJECT" if lb.rejects(0.05) else "pass"
            out.write(f"  {name:<4s} min p = {_num(worst)}  [{flag}]\n")
    if lag_exclusion is not None:
        per_eq, system = lag_exclusion
        out.write("\nlast-lag exclusion test:\n")
        for name, (f_stat, p) in per_eq.items():
            out.write(f"  {name:<4s} F = {_num(f_stat)}, p = {_num(p)}\n")
        out.write(f"  system LR = {_num(system[0])}, p = {_num(system[1])}\n")
    out.write("\nserialized coefficients\n")
    out.write("-----------------------\n")
    out.write(serialize_model(model))
    return out.getvalue()


def svg_irf_figure(
    result: IrfResult,
    shock: str,
    response: str,
    width: int = 640,
    height: int = 400,
) -> str:
    """Point line with percentile band for one (shock, response) pair."""
    si = result.index(shock)
    ri = result.index(response)
    point = result.responses[si, ri]
    lo = result.lower_band[si, ri]
    hi = result.upper_band[si, ri]
    horizons = np.arange(len(point))

    margin = 50
    y_min = float(min(lo.min(), 0.0))
    y_max = float(max(hi.max(), 0.0))
    span = y_max - y_min or 1.0
    y_min -= 0.05 * span
    y_max += 0.05 * span

    def sx(h):
        return margin + (width - 2 * margin) * h / max(len(point) - 1, 1)

    def sy(v):
        return height - margin - (height - margin * 2) * (v - y_min) / (y_max - y_min)

    def path(xs, ys):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))

    band_pts = path(horizons, hi) + " " + path(horizons[::-1], lo[::-1])
    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
    )
    out.write(f'<rect width="{width}" height="{height}" fill="white"/>\n')
    out.write(
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">'
        f"response of {response} to a one-sd {shock} shock</text>\n"
    )
    out.write(
        f'<polygon points="{band_pts}" fill="#9ecae1" fill-opacity="0.45" '
        f'stroke="none"/>\n'
    )
    out.write(
        f'<line x1="{sx(0):.2f}" y1="{sy(0.0):.2f}" x2="{sx(len(point) - 1):.2f}" '
        f'y2="{sy(0.0):.2f}" stroke="#888888" stroke-dasharray="4,3"/>\n'
    )
    out.write(
        f'<polyline points="{path(horizons, point)}" fill="none" '
        f'stroke="#08519c" stroke-width="1.8"/>\n'
    )
    # axes
    out.write(
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>\n'
    )
    out.write(
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>\n'
    )
    for h in range(0, len(point), max(1, (len(point) - 1) // 6)):
        out.write(
            f'<text x="{sx(h):.2f}" y="{height - margin + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">{h}</text>\n'
        )
    for frac in (0.0, 0.5, 1.0):
        v = y_min + frac * (y_max - y_min)
        out.write(
            f'<text x="{margin - 6}" y="{sy(v) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{v:.3g}</text>\n'
        )
    out.write(
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">horizon (months)</text>\n'
    )
    out.write("</svg>\n")
    return out.getvalue()
