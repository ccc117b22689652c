"""Configuration-driven orchestration of the full estimation chain."""

from __future__ import annotations

import configparser
import hashlib
import io
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .cointegration import (
    Correction,
    JohansenDeterministic,
    JohansenSpec,
    TraceTestResult,
    johansen_trace,
)
from .ingest import (
    DatasetSpec,
    IngestError,
    Role,
    SeriesSpec,
    Transform,
    build_dataset,
)
from .irf import IrfResult, mc_bands
from .report import (
    irf_csv,
    model_summary,
    stationarity_csv,
    svg_irf_figure,
    trace_csv,
)
from .series import Frequency, Month, SampleWindow, SeriesError
from .unit_root import AdfSpec, Deterministic, StationarityTable, stationarity_table
from .vecm import (
    VecmModel,
    engle_granger_step1,
    fit_vecm,
    lag_exclusion_test,
    select_lags,
    serialize_model,
    whiteness_report,
)

__all__ = [
    "ConfigError",
    "ProcedureError",
    "IOFailure",
    "VecmOptions",
    "IrfOptions",
    "OutputOptions",
    "PipelineConfig",
    "RunReport",
    "parse_config",
    "parse_config_text",
    "serialize_config",
    "config_hash",
    "run_pipeline",
    "emit_reports",
]

WHITENESS_LAGS = 12


class ConfigError(ValueError):
    """Configuration or input-data problem (exit code 1)."""


class ProcedureError(RuntimeError):
    """A statistical precondition failed, e.g. no cointegration (exit 2)."""


class IOFailure(OSError):
    """Output could not be written (exit code 3)."""


@dataclass(frozen=True)
class VecmOptions:
    max_lags: int = 6
    fixed_lags: int | None = 5
    step1_dependent: str = "E"


@dataclass(frozen=True)
class IrfOptions:
    ordering: tuple = ("E", "A", "P", "Y", "R")
    alternate_orderings: tuple = ()
    horizons: int = 36
    draws: int = 10000
    seed: int = 20240601
    percentiles: tuple = (0.05, 0.95)

    def __post_init__(self):
        if self.draws < 100:
            raise ConfigError(f"draws must be >= 100, got {self.draws}")
        if not (0.0 < self.percentiles[0] < self.percentiles[1] < 1.0):
            raise ConfigError(f"invalid percentiles {self.percentiles}")


@dataclass(frozen=True)
class OutputOptions:
    directory: str = "out"
    formats: tuple = ("csv", "svg")


@dataclass(frozen=True)
class PipelineConfig:
    dataset: DatasetSpec
    adf: tuple  # (drift spec, drift+trend spec)
    johansen: JohansenSpec
    vecm: VecmOptions
    irf: IrfOptions
    outputs: OutputOptions

    def __post_init__(self):
        roles = tuple(r.value for r in Role)
        for ordering in (self.irf.ordering, *self.irf.alternate_orderings):
            if sorted(ordering) != sorted(roles):
                raise ConfigError(
                    f"ordering {ordering} is not a permutation of {roles}"
                )


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def parse_config(path) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"no such config file: {path}")
    return parse_config_text(path.read_text(), base_dir=path.parent)


def parse_config_text(text: str, base_dir=None) -> PipelineConfig:
    """Parse the INI pipeline configuration.

    Relative series paths are resolved against `base_dir` (the config
    file's directory) at parse time.
    """
    base = Path(base_dir) if base_dir is not None else Path(".")
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    try:
        ds = cp["dataset"]
        window = SampleWindow(
            Month.parse(ds["presample_start"]),
            Month.parse(ds["estimation_start"]),
            Month.parse(ds["estimation_end"]),
        )
        series = []
        for role in Role:
            sec = cp[f"series.{role.value}"]
            file_path = sec["file"]
            if not Path(file_path).is_absolute():
                file_path = str((base / file_path).resolve())
            series.append(
                SeriesSpec(
                    role=role,
                    file_path=file_path,
                    frequency=Frequency(sec["frequency"]),
                    seasonally_adjusted=_parse_bool(sec["seasonally_adjusted"]),
                    transform=Transform(sec["transform"]),
                    description=sec.get("description", ""),
                )
            )
        dataset = DatasetSpec(
            series=tuple(series), window=window, label=ds.get("label", "custom")
        )

        adf_sec = cp["adf"] if cp.has_section("adf") else {}
        max_aug = int(adf_sec.get("max_augmenting_lags", 6))
        adf = (
            AdfSpec(Deterministic.DRIFT, max_aug, "bic"),
            AdfSpec(Deterministic.DRIFT_AND_TREND, max_aug, "bic"),
        )

        jo_sec = cp["johansen"] if cp.has_section("johansen") else {}
        johansen = JohansenSpec(
            lags=int(jo_sec.get("lags", 6)),
            deterministic=JohansenDeterministic(
                jo_sec.get("deterministic", "unrestricted_constant")
            ),
            correction=Correction(jo_sec.get("correction", "df")),
        )

        ve_sec = cp["vecm"] if cp.has_section("vecm") else {}
        fixed = ve_sec.get("fixed_lags", "").strip() if ve_sec else ""
        vecm_opts = VecmOptions(
            max_lags=int(ve_sec.get("max_lags", 6)),
            fixed_lags=int(fixed) if fixed else None,
            step1_dependent=ve_sec.get("step1_dependent", "E"),
        )

        irf_sec = cp["irf"] if cp.has_section("irf") else {}
        alternates = tuple(
            tuple(o.strip() for o in line.split(","))
            for line in irf_sec.get("alternate_orderings", "").splitlines()
            if line.strip()
        )
        percentiles = tuple(
            float(v) for v in irf_sec.get("percentiles", "0.05,0.95").split(",")
        )
        irf_opts = IrfOptions(
            ordering=tuple(
                o.strip() for o in irf_sec.get("ordering", "E,A,P,Y,R").split(",")
            ),
            alternate_orderings=alternates,
            horizons=int(irf_sec.get("horizons", 36)),
            draws=int(irf_sec.get("draws", 10000)),
            seed=int(irf_sec.get("seed", 20240601)),
            percentiles=percentiles,
        )

        out_sec = cp["outputs"] if cp.has_section("outputs") else {}
        out_dir = out_sec.get("directory", "out")
        if not Path(out_dir).is_absolute():
            out_dir = str((base / out_dir).resolve())
        outputs = OutputOptions(
            directory=out_dir,
            formats=tuple(
                f.strip() for f in out_sec.get("formats", "csv,svg").split(",")
            ),
        )
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc!r}") from exc

    return PipelineConfig(
        dataset=dataset,
        adf=adf,
        johansen=johansen,
        vecm=vecm_opts,
        irf=irf_opts,
        outputs=outputs,
    )


def serialize_config(config: PipelineConfig) -> str:
    cp = configparser.ConfigParser()
    w = config.dataset.window
    cp["dataset"] = {
        "label": config.dataset.label,
        "presample_start": str(w.presample_start),
        "estimation_start": str(w.estimation_start),
        "estimation_end": str(w.estimation_end),
    }
    for spec in config.dataset.series:
        cp[f"series.{spec.role.value}"] = {
            "file": spec.file_path,
            "frequency": spec.frequency.value,
            "seasonally_adjusted": str(spec.seasonally_adjusted).lower(),
            "transform": spec.transform.value,
            "description": spec.description,
        }
    cp["adf"] = {"max_augmenting_lags": str(config.adf[0].max_augmenting_lags)}
    cp["johansen"] = {
        "lags": str(config.johansen.lags),
        "deterministic": config.johansen.deterministic.value,
        "correction": config.johansen.correction.value,
    }
    vecm_sec = {
        "max_lags": str(config.vecm.max_lags),
        "step1_dependent": config.vecm.step1_dependent,
    }
    if config.vecm.fixed_lags is not None:
        vecm_sec["fixed_lags"] = str(config.vecm.fixed_lags)
    cp["vecm"] = vecm_sec
    cp["irf"] = {
        "ordering": ",".join(config.irf.ordering),
        "alternate_orderings": "\n".join(
            ",".join(o) for o in config.irf.alternate_orderings
        ),
        "horizons": str(config.irf.horizons),
        "draws": str(config.irf.draws),
        "seed": str(config.irf.seed),
        "percentiles": ",".join(f"{p:g}" for p in config.irf.percentiles),
    }
    cp["outputs"] = {
        "directory": config.outputs.directory,
        "formats": ",".join(config.outputs.formats),
    }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def config_hash(config: PipelineConfig) -> str:
    return hashlib.sha256(serialize_config(config).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RunReport:
    table1: StationarityTable
    table2: TraceTestResult
    model: VecmModel
    irf: dict  # ordering label -> IrfResult
    whiteness: dict
    lag_exclusion: tuple
    bic_lags: int
    provenance: dict
    warnings: tuple


def _ordering_label(ordering) -> str:
    return "".join(ordering)


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Execute the chain: ingest, unit roots, rank test, VECM, IRFs."""
    window = config.dataset.window
    try:
        build = build_dataset(config.dataset)
    except (IngestError, SeriesError) as exc:
        raise ConfigError(f"dataset stage: {exc}") from exc
    panel = build.panel

    try:
        table1 = stationarity_table(panel, config.adf, window)
    except SeriesError as exc:
        raise ProcedureError(f"unit-root stage: {exc}") from exc

    table2 = johansen_trace(panel, config.johansen, window)
    if table2.selected_rank == 0:
        raise ProcedureError(
            "cointegration stage: the trace test selects rank 0; an "
            "error-correction model is not justified for this panel"
        )

    notes = []
    if table2.selected_rank > 1:
        notes.append(
            f"trace test selects rank {table2.selected_rank}; estimation "
            f"proceeds with a single cointegrating vector"
        )

    ec = engle_granger_step1(panel, config.vecm.step1_dependent)
    bic_lags = select_lags(panel, ec, config.vecm.max_lags, window)
    lags = config.vecm.fixed_lags if config.vecm.fixed_lags is not None else bic_lags
    model = fit_vecm(panel, ec, lags, window)

    whiteness = whiteness_report(model, WHITENESS_LAGS)
    rejecting = [name for name, lb in whiteness.items() if lb.rejects(0.05)]
    if rejecting:
        notes.append(
            f"whiteness: Ljung-Box rejects at 5% for {', '.join(rejecting)}; "
            f"diagnostics reported, estimation proceeds"
        )

    exclusion_lags = max(config.vecm.max_lags, lags)
    exclusion_model = (
        model if exclusion_lags == lags else fit_vecm(panel, ec, exclusion_lags, window)
    )
    lag_exclusion = lag_exclusion_test(exclusion_model, exclusion_lags)

    irf_results = {}
    for ordering in (config.irf.ordering, *config.irf.alternate_orderings):
        irf_results[_ordering_label(ordering)] = mc_bands(
            model,
            ordering,
            config.irf.horizons,
            config.irf.draws,
            config.irf.seed,
            config.irf.percentiles,
        )

    provenance = {
        "config_hash": config_hash(config),
        "seed": config.irf.seed,
        "version": __version__,
        "label": config.dataset.label,
        "pipeline_log": build.log,
    }
    return RunReport(
        table1=table1,
        table2=table2,
        model=model,
        irf=irf_results,
        whiteness=whiteness,
        lag_exclusion=lag_exclusion,
        bic_lags=bic_lags,
        provenance=provenance,
        warnings=tuple(notes),
    )


TRACKED_RESPONSES = ("P", "Y", "R")


def emit_reports(report: RunReport, out_dir=None, formats=None) -> list:
    """Write tables, model summary, IRF CSVs and figures; returns paths."""
    label = report.provenance["label"]
    out = Path(out_dir) if out_dir is not None else Path("out")
    formats = tuple(formats) if formats is not None else ("csv", "svg")
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / f"{label}_provenance.txt"
        written = []

        def emit(name: str, content: str):
            p = out / name
            p.write_text(content)
            written.append(p)

        prov_lines = [f"{k}: {v}" for k, v in report.provenance.items() if k != "pipeline_log"]
        prov_lines.append("pipeline_log:")
        prov_lines.extend(f"  {line}" for line in report.provenance["pipeline_log"])
        prov_lines.append(f"bic_lags: {report.bic_lags}")
        prov_lines.extend(f"note: {n}" for n in report.warnings)
        emit(f"{label}_provenance.txt", "\n".join(prov_lines) + "\n")

        if "csv" in formats:
            emit(f"{label}_table1.csv", stationarity_csv(report.table1))
            emit(f"{label}_table2.csv", trace_csv(report.table2))
            for olabel, result in report.irf.items():
                emit(f"{label}_irf_{olabel}.csv", irf_csv(result))
        emit(
            f"{label}_model_summary.txt",
            model_summary(
                report.model, report.whiteness, report.lag_exclusion, report.bic_lags
            ),
        )
        emit(f"{label}_model.txt", serialize_model(report.model))

        if "svg" in formats:
            for olabel, result in report.irf.items():
                tracked = [n for n in TRACKED_RESPONSES if n in result.names]
                if not tracked:
                    tracked = list(result.names)
                for shock in result.names:
                    for response in tracked:
                        emit(
                            f"{label}_irf_{olabel}_{shock}_{response}.svg",
                            svg_irf_figure(result, shock, response),
                        )
        return written
    except OSError as exc:
        raise IOFailure(f"cannot write reports under {out}: {exc}") from exc
