"""Command-line entry point.

Verbs:
    validate  check a config file and its data files
    run       execute the full pipeline and write reports
    irf       recompute impulse responses from a serialized model
    simulate  generate a synthetic dataset in FRED CSV format

Exit codes: 0 success, 1 config/data error, 2 statistical-procedure
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .ingest import IngestError, build_dataset, read_fred_csv
from .irf import IrfError, mc_bands
from .pipeline import (
    ConfigError,
    IOFailure,
    ProcedureError,
    emit_reports,
    parse_config,
    run_pipeline,
)
from .report import irf_csv, svg_irf_figure
from .seasonal import is_seasonal
from .series import Frequency, Month, SeriesError
from .simulate import demo_dgp, simulate_series, weekly_from_monthly, write_fred_csv
from .vecm import VecmError, deserialize_model


def _apply_overrides(config, args):
    irf_opts = config.irf
    if args.seed is not None:
        irf_opts = replace(irf_opts, seed=args.seed)
    if args.draws is not None:
        irf_opts = replace(irf_opts, draws=args.draws)
    if args.ordering is not None:
        ordering = tuple(v.strip() for v in args.ordering.split(","))
        irf_opts = replace(irf_opts, ordering=ordering)
    config = replace(config, irf=irf_opts)
    outputs = config.outputs
    if args.out is not None:
        outputs = replace(outputs, directory=str(Path(args.out).resolve()))
    if args.format is not None:
        formats = ("csv", "svg") if args.format == "both" else (args.format,)
        outputs = replace(outputs, formats=formats)
    return replace(config, outputs=outputs)


def cmd_validate(args) -> int:
    config = parse_config(args.config)
    build = build_dataset(config.dataset)
    for line in build.log:
        print(f"ok: {line}")
    window = config.dataset.window
    need = window.total_length
    if len(build.panel) != need:
        raise ConfigError(
            f"aligned panel has {len(build.panel)} months, window needs {need}"
        )
    for spec in config.dataset.series:
        s = build.panel.get(spec.role.value)
        if spec.seasonally_adjusted and spec.frequency is Frequency.MONTHLY:
            seasonal, f_stat = is_seasonal(s)
            if seasonal:
                print(
                    f"warning: {spec.role.value} is flagged seasonally adjusted "
                    f"but still shows stable seasonality (F = {f_stat:.2f})"
                )
    print(f"config and data valid: {len(build.panel)} months x {build.panel.k} series")
    return 0


def cmd_run(args) -> int:
    config = _apply_overrides(parse_config(args.config), args)
    report = run_pipeline(config)
    for note in report.warnings:
        print(f"note: {note}")
    written = emit_reports(report, config.outputs.directory, config.outputs.formats)
    print(f"selected cointegrating rank: {report.table2.selected_rank}")
    print(f"vecm lags: {report.model.lags_in_differences} (bic choice {report.bic_lags})")
    print(f"wrote {len(written)} files under {config.outputs.directory}")
    return 0


def cmd_irf(args) -> int:
    try:
        model = deserialize_model(Path(args.model).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read model file: {exc}") from exc
    ordering = (
        tuple(v.strip() for v in args.ordering.split(","))
        if args.ordering
        else model.ordering
    )
    draws = args.draws if args.draws is not None else 10000
    seed = args.seed if args.seed is not None else 20240601
    result = mc_bands(model, ordering, args.horizons, draws, seed)
    out = Path(args.out) if args.out else Path("out")
    try:
        out.mkdir(parents=True, exist_ok=True)
        label = "".join(ordering)
        fmt = args.format or "both"
        written = 0
        if fmt in ("csv", "both"):
            (out / f"irf_{label}.csv").write_text(irf_csv(result))
            written += 1
        if fmt in ("svg", "both"):
            for shock in result.names:
                for response in result.names:
                    (out / f"irf_{label}_{shock}_{response}.svg").write_text(
                        svg_irf_figure(result, shock, response)
                    )
                    written += 1
    except OSError as exc:
        raise IOFailure(f"cannot write under {out}: {exc}") from exc
    print(f"wrote {written} files under {out}")
    return 0


def cmd_simulate(args) -> int:
    out = Path(args.out) if args.out else Path("simulated")
    dgp = demo_dgp()
    start = Month.parse(args.start)
    series = simulate_series(dgp, args.months, args.seed, start)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for s in series:
            values = np.asarray(s.values)
            if s.name in ("E", "A", "P", "Y"):
                values = np.exp(values)  # the system is simulated in logs
            if s.name == "A":
                pattern = np.exp(
                    0.02 * np.cos(2 * np.pi * np.arange(12) / 12.0)
                )
                pattern /= pattern.mean()
                monthly = s.with_values(values)
                dates, weekly = weekly_from_monthly(monthly, pattern)
                write_fred_csv(out / "A.csv", dates, weekly)
            else:
                write_fred_csv(
                    out / f"{s.name}.csv",
                    [s.date_at(i) for i in range(len(s))],
                    values,
                )
    except OSError as exc:
        raise IOFailure(f"cannot write under {out}: {exc}") from exc
    print(f"wrote 5 series ({args.months} months from {start}) under {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macrovecm", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="override the Monte Carlo seed")
        p.add_argument("--draws", type=int, help="override the Monte Carlo draw count")
        p.add_argument("--ordering", help="comma-separated orthogonalization ordering")
        p.add_argument("--format", choices=("csv", "svg", "both"), help="output formats")

    pv = sub.add_parser("validate", help="check config and data files")
    pv.add_argument("--config", required=True)
    pv.set_defaults(func=cmd_validate)

    pr = sub.add_parser("run", help="run the full pipeline")
    pr.add_argument("--config", required=True)
    common(pr)
    pr.set_defaults(func=cmd_run)

    pi = sub.add_parser("irf", help="recompute IRFs from a serialized model")
    pi.add_argument("--model", required=True, help="path to a <label>_model.txt file")
    pi.add_argument("--horizons", type=int, default=36)
    common(pi)
    pi.set_defaults(func=cmd_irf)

    ps = sub.add_parser("simulate", help="write a synthetic FRED-format dataset")
    ps.add_argument("--out", help="output directory (default: simulated)")
    ps.add_argument("--seed", type=int, default=12345)
    ps.add_argument("--months", type=int, default=240)
    ps.add_argument("--start", default="2000M1")
    ps.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IngestError, SeriesError, VecmError, IrfError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ProcedureError as exc:
        print(f"procedure halt: {exc}", file=sys.stderr)
        return 2
    except IOFailure as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
