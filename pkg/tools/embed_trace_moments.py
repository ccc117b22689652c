#!/usr/bin/env python3
"""Embed simulated trace-distribution moments as a Python constants module.

Merges one or more JSON outputs of gen_trace_moments.py and writes
src/macrovecm/_trace_moments.py. Run gen_trace_moments.py first; see its
docstring for the committed-generation command lines.
"""

from __future__ import annotations

import argparse
import json
import sys

HEADER = '''"""Moment constants for the asymptotic trace-test distribution.

Generated by tools/gen_trace_moments.py (simulation of the limiting
Brownian functional; {reps} replications, step length 1/{steps},
seed {seed}) and embedded by tools/embed_trace_moments.py.
Do not edit by hand; regenerate instead.

Each entry maps (deterministic case, number of common trends d) to the
empirical mean and variance of the asymptotic trace statistic, plus
reference quantiles kept for validation.
"""

'''


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("inputs", nargs="+")
    ap.add_argument("--out", default="src/macrovecm/_trace_moments.py")
    args = ap.parse_args(argv)

    merged = {}
    seeds = set()
    reps = set()
    steps = set()
    for path in args.inputs:
        with open(path) as fh:
            blob = json.load(fh)
        seeds.add(blob["seed"])
        for case, dims in blob["table"].items():
            merged.setdefault(case, {}).update(dims)
            for entry in dims.values():
                reps.add(entry["reps"])
                steps.add(entry["steps"])

    if len(seeds) != 1:
        raise SystemExit(f"refusing to merge mixed seeds: {sorted(seeds)}")

    lines = [
        HEADER.format(
            reps="/".join(str(r) for r in sorted(reps)),
            steps="/".join(str(s) for s in sorted(steps)),
            seed=seeds.pop(),
        )
    ]
    lines.append("TRACE_MOMENTS = {\n")
    for case in sorted(merged):
        lines.append(f"    {case!r}: {{\n")
        for d in sorted(merged[case], key=int):
            e = merged[case][d]
            lines.append(
                f"        {int(d)}: {{'mean': {e['mean']!r}, 'variance': {e['variance']!r}, "
                f"'q90': {e['q90']!r}, 'q95': {e['q95']!r}, 'q99': {e['q99']!r}}},\n"
            )
        lines.append("    },\n")
    lines.append("}\n")

    with open(args.out, "w") as fh:
        fh.write("".join(lines))
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
