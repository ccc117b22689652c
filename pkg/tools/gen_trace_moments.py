#!/usr/bin/env python3
"""Generate moment constants for the asymptotic trace-test distribution.

Simulates the limiting functional of the cointegration trace statistic,

    tr( M_FB' M_FF^{-1} M_FB ),
    M_FB = sum_j F(u_{j-1}) dB(u_j)',   M_FF = (1/T) sum_j F(u_{j-1}) F(u_{j-1})',

with B a d-dimensional standard Brownian motion discretized on a grid of
`--steps` increments, and F depending on the deterministic case:

    none                  F = B
    restricted_constant   F = (B', 1)'
    unrestricted_constant F = (demeaned B_1..B_{d-1}, demeaned time)'

For each case and dimension d the script records the empirical mean,
variance and reference quantiles over `--reps` replications. The mean and
variance feed the gamma tail approximation used for trace p-values and
critical values; the quantiles are kept for validation only.

The committed constants were produced by:

    python tools/gen_trace_moments.py --reps 500000 --steps 1000 --seed 20240601 \
        --out tools/trace_moments.json

and embedded with tools/embed_trace_moments.py. Deterministic given the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

CASES = ("none", "restricted_constant", "unrestricted_constant")
MAX_DIM = 12
QUANTS = (0.90, 0.95, 0.99)


def simulate_case_dim(case: str, d: int, reps: int, steps: int, seed: int,
                      batch: int = 2000) -> np.ndarray:
    """All replications of the trace functional for one (case, d)."""
    stats = np.empty(reps)
    done = 0
    batch_idx = 0
    t_grid = np.arange(steps) / steps
    while done < reps:
        nb = min(batch, reps - done)
        rng = np.random.default_rng([seed, CASES.index(case), d, batch_idx])
        e = rng.standard_normal((nb, steps, d))
        s = np.cumsum(e, axis=1)
        # left endpoints B(u_{j-1}), scaled to unit variance at u=1
        left = np.concatenate(
            [np.zeros((nb, 1, d)), s[:, :-1, :]], axis=1
        ) / np.sqrt(steps)

        if case == "none":
            F = left
        elif case == "restricted_constant":
            F = np.concatenate([left, np.ones((nb, steps, 1))], axis=2)
        elif case == "unrestricted_constant":
            parts = []
            if d > 1:
                bm = left[:, :, : d - 1]
                parts.append(bm - bm.mean(axis=1, keepdims=True))
            trend = np.broadcast_to(
                (t_grid - t_grid.mean())[None, :, None], (nb, steps, 1)
            )
            parts.append(trend)
            F = np.concatenate(parts, axis=2)
        else:
            raise ValueError(f"unknown case {case}")

        m_fb = np.einsum("bjf,bjd->bfd", F, e) / np.sqrt(steps)
        m_ff = np.einsum("bjf,bjg->bfg", F, F) / steps
        x = np.linalg.solve(m_ff, m_fb)
        stats[done : done + nb] = np.einsum("bfd,bfd->b", m_fb, x)
        done += nb
        batch_idx += 1
    return stats


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=500_000)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--max-dim", type=int, default=MAX_DIM)
    ap.add_argument("--cases", nargs="*", default=list(CASES))
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)

    table = {}
    for case in args.cases:
        table[case] = {}
        for d in range(1, args.max_dim + 1):
            t0 = time.time()
            stats = simulate_case_dim(case, d, args.reps, args.steps, args.seed)
            entry = {
                "mean": float(stats.mean()),
                "variance": float(stats.var(ddof=1)),
                "reps": args.reps,
                "steps": args.steps,
            }
            for q in QUANTS:
                entry[f"q{int(q * 100)}"] = float(np.quantile(stats, q))
            table[case][str(d)] = entry
            print(
                f"{case} d={d}: mean={entry['mean']:.4f} var={entry['variance']:.4f} "
                f"q95={entry['q95']:.4f} ({time.time() - t0:.1f}s)",
                flush=True,
            )
    with open(args.out, "w") as fh:
        json.dump({"seed": args.seed, "table": table}, fh, indent=1)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
