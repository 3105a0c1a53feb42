"""Command-line pipeline: ingest price CSVs, normalize calendars, derive
returns, and emit diagnostics as plot-ready CSV or JSON files.

Subcommands: ingest, report, stats, apen, mef, maxsum, rolling, synth.
Inputs are Yahoo-style price CSVs (Date/Close) or bare one-column ``value``
files such as those written by ``synth``. Assets are processed
independently: one bad input never aborts the rest.

Exit codes: 0 success, 1 at least one asset failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .apen import ApenParams, apen
from .errors import (
    InvalidParameterError,
    MissingColumnError,
    TailscopeError,
    TooShortError,
    UnparsableRowError,
    ZeroToleranceError,
)
from .evt import max_to_sum, mean_excess
from .series import (
    Frequency,
    ReturnKind,
    fill_weekend,
    ingest_csv,
    log_returns,
    resample,
)
from .stats import RollingStatistic, rolling, summarize
from .synth import Family, GeneratorSpec, generate

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2

SEED_ENV_VAR = "TAILSCOPE_SEED"

DEFAULT_WINDOWS = {
    Frequency.DAILY: 100,
    Frequency.WEEKLY: 20,
    Frequency.MONTHLY: 3,
}

REPORT_COLUMNS = (
    "asset",
    "frequency",
    "target",
    "n",
    "mean",
    "std_dev",
    "coeff_variation",
    "apen",
    "excess_kurtosis",
)


class Target(str, Enum):
    PRICES = "prices"
    RETURNS = "returns"
    ABS_RETURNS = "abs_returns"


class ConfigError(Exception):
    """Bad flag combination or unusable configuration (exit code 2)."""


@dataclass
class AnalysisConfig:
    """Resolved pipeline parameters shared by the data subcommands."""

    inputs: list[tuple[str, Path]]
    frequency: Frequency = Frequency.DAILY
    target: Target = Target.PRICES
    fill_weekend: frozenset[str] = frozenset()
    windows: dict[Frequency, int] = field(default_factory=lambda: dict(DEFAULT_WINDOWS))
    statistic: RollingStatistic = RollingStatistic.STD_DEV
    apen_params: ApenParams = field(default_factory=ApenParams)
    trim_fraction: float = 0.02
    orders: tuple[int, ...] = (1, 2, 3, 4)
    out_dir: Path = Path(".")
    fmt: str = "csv"

    @property
    def window(self) -> int:
        return self.windows[self.frequency]


@dataclass
class LoadedSeries:
    """One asset's analysis-ready values plus labels for file naming."""

    asset: str
    values: np.ndarray
    dates: tuple | None  # None for bare value samples
    frequency_label: str
    target_label: str


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------


def _read_bare_values(path: Path) -> np.ndarray:
    values: list[float] = []
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        next(reader)  # header, already sniffed
        for number, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                raise UnparsableRowError(
                    f"{path.name} row {number}: unparsable value {row[0]!r}"
                ) from None
    return np.asarray(values, dtype=np.float64)


def _sniff_header(path: Path) -> list[str]:
    with path.open(newline="", encoding="utf-8-sig") as fh:
        row = next(csv.reader(fh), None)
    if row is None:
        raise MissingColumnError(f"{path.name}: file is empty")
    return [cell.strip().lower() for cell in row]


def _load(cfg: AnalysisConfig, asset: str, path: Path) -> LoadedSeries:
    header = _sniff_header(path)
    if "date" in header and "close" in header:
        series = ingest_csv(path, asset)
        if asset in cfg.fill_weekend:
            series = fill_weekend(series)
        if cfg.frequency is not Frequency.DAILY:
            series = resample(series, cfg.frequency)
        if cfg.target is Target.PRICES:
            return LoadedSeries(
                asset, np.asarray(series.closes), series.dates, cfg.frequency.value, "prices"
            )
        kind = ReturnKind.SIGNED if cfg.target is Target.RETURNS else ReturnKind.ABSOLUTE
        returns = log_returns(series, kind)
        return LoadedSeries(
            asset, np.asarray(returns.values), returns.dates, cfg.frequency.value, cfg.target.value
        )
    if header == ["value"]:
        if cfg.target is not Target.PRICES:
            raise InvalidParameterError(
                "bare value samples have no prices to derive returns from"
            )
        if asset in cfg.fill_weekend:
            raise InvalidParameterError("bare value samples are undated; cannot fill")
        return LoadedSeries(asset, _read_bare_values(path), None, "na", "values")
    raise MissingColumnError(
        f"{path.name}: expected Date and Close columns, or a single value column"
    )


# ---------------------------------------------------------------------------
# Output writing
# ---------------------------------------------------------------------------


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return repr(value)
    return value


def _jsonable(value):
    if value is None:
        return None
    if isinstance(value, float) and np.isnan(value):
        return None
    return value


def _write_table(path: Path, fieldnames: tuple[str, ...], rows: list[dict]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})


def _write_json(path: Path, payload) -> None:
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _out_path(cfg: AnalysisConfig, loaded: LoadedSeries, command: str) -> Path:
    name = f"{loaded.asset}_{loaded.frequency_label}_{loaded.target_label}_{command}.{cfg.fmt}"
    return cfg.out_dir / name


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _for_each_asset(cfg: AnalysisConfig, handle) -> int:
    failures = 0
    for asset, path in cfg.inputs:
        try:
            handle(asset, path)
        except (TailscopeError, OSError) as exc:
            print(f"{asset}: {type(exc).__name__}: {exc}", file=sys.stderr)
            failures += 1
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_ingest(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        series = ingest_csv(path, asset)
        if asset in cfg.fill_weekend:
            series = fill_weekend(series)
        if cfg.frequency is not Frequency.DAILY:
            series = resample(series, cfg.frequency)
        loaded = LoadedSeries(asset, np.asarray(series.closes), series.dates, cfg.frequency.value, "prices")
        out = _out_path(cfg, loaded, "ingest")
        if cfg.fmt == "json":
            _write_json(
                out,
                {
                    "asset": asset,
                    "frequency": series.frequency.value,
                    "dropped_rows": series.dropped_rows,
                    "points": [
                        {"date": day.isoformat(), "close": float(close)}
                        for day, close in zip(series.dates, series.closes)
                    ],
                },
            )
        else:
            rows = [
                {"date": day.isoformat(), "close": float(close)}
                for day, close in zip(series.dates, series.closes)
            ]
            _write_table(out, ("date", "close"), rows)

    return _for_each_asset(cfg, handle)


def _apen_or_none(values: np.ndarray, params: ApenParams) -> float | None:
    try:
        return apen(values, params)
    except (TooShortError, ZeroToleranceError):
        return None


def cmd_report(cfg: AnalysisConfig) -> int:
    rows: list[dict] = []

    def row_for(asset: str, frequency: str, target: str, values: np.ndarray) -> dict:
        summary = summarize(values)
        return {
            "asset": asset,
            "frequency": frequency,
            "target": target,
            "n": summary.n,
            "mean": summary.mean,
            "std_dev": summary.std_dev,
            "coeff_variation": summary.coeff_variation,
            "apen": _apen_or_none(values, cfg.apen_params),
            "excess_kurtosis": summary.excess_kurtosis,
        }

    def handle(asset: str, path: Path) -> None:
        header = _sniff_header(path)
        if header == ["value"]:
            values = _read_bare_values(path)
            rows.append(row_for(asset, "na", "values", values))
            return
        series = ingest_csv(path, asset)
        if asset in cfg.fill_weekend:
            series = fill_weekend(series)
        if cfg.frequency is not Frequency.DAILY:
            series = resample(series, cfg.frequency)
        rows.append(row_for(asset, cfg.frequency.value, "prices", np.asarray(series.closes)))
        returns = log_returns(series, ReturnKind.SIGNED)
        rows.append(row_for(asset, cfg.frequency.value, "returns", np.asarray(returns.values)))

    status = _for_each_asset(cfg, handle)
    out = cfg.out_dir / f"report_{cfg.frequency.value}.{cfg.fmt}"
    if cfg.fmt == "json":
        _write_json(out, [{k: _jsonable(v) for k, v in row.items()} for row in rows])
    else:
        _write_table(out, REPORT_COLUMNS, rows)
    print(",".join(REPORT_COLUMNS))
    for row in rows:
        print(",".join(str(_cell(row[column])) for column in REPORT_COLUMNS))
    return status


def cmd_stats(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        loaded = _load(cfg, asset, path)
        summary = summarize(loaded.values)
        row = {
            "asset": asset,
            "frequency": loaded.frequency_label,
            "target": loaded.target_label,
            **summary.to_row(),
        }
        out = _out_path(cfg, loaded, "stats")
        if cfg.fmt == "json":
            _write_json(out, {k: _jsonable(v) for k, v in row.items()})
        else:
            _write_table(out, tuple(row.keys()), [row])

    return _for_each_asset(cfg, handle)


def cmd_apen(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        loaded = _load(cfg, asset, path)
        params = cfg.apen_params
        value = apen(loaded.values, params)
        row = {
            "asset": asset,
            "frequency": loaded.frequency_label,
            "target": loaded.target_label,
            "m": params.m,
            "r_mode": params.r_mode.value,
            "r_value": params.r_value,
            "resolved_r": params.resolve_r(loaded.values),
            "apen": value,
        }
        out = _out_path(cfg, loaded, "apen")
        if cfg.fmt == "json":
            _write_json(out, {k: _jsonable(v) for k, v in row.items()})
        else:
            _write_table(out, tuple(row.keys()), [row])

    return _for_each_asset(cfg, handle)


def cmd_mef(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        loaded = _load(cfg, asset, path)
        curve = mean_excess(loaded.values, cfg.trim_fraction)
        out = _out_path(cfg, loaded, "mef")
        if cfg.fmt == "json":
            _write_json(
                out,
                {
                    "asset": asset,
                    "frequency": loaded.frequency_label,
                    "target": loaded.target_label,
                    **curve.to_json_dict(),
                },
            )
        else:
            _write_table(out, ("threshold", "mean_excess", "exceedances"), curve.to_rows())

    return _for_each_asset(cfg, handle)


def cmd_maxsum(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        loaded = _load(cfg, asset, path)
        traces = [max_to_sum(loaded.values, p) for p in cfg.orders]
        out = _out_path(cfg, loaded, "maxsum")
        if cfg.fmt == "json":
            _write_json(
                out,
                {
                    "asset": asset,
                    "frequency": loaded.frequency_label,
                    "target": loaded.target_label,
                    "traces": [trace.to_json_dict() for trace in traces],
                },
            )
        else:
            rows = [row for trace in traces for row in trace.to_rows()]
            _write_table(out, ("p", "n", "ratio"), rows)

    return _for_each_asset(cfg, handle)


def cmd_rolling(cfg: AnalysisConfig) -> int:
    def handle(asset: str, path: Path) -> None:
        loaded = _load(cfg, asset, path)
        series = rolling(
            loaded.values,
            cfg.window,
            cfg.statistic,
            dates=loaded.dates,
            apen_params=cfg.apen_params,
        )
        rows = [
            {
                "date": day.isoformat() if hasattr(day, "isoformat") else day,
                "value": float(value),
            }
            for day, value in zip(series.dates, series.values)
        ]
        out = _out_path(cfg, loaded, "rolling")
        if cfg.fmt == "json":
            _write_json(
                out,
                {
                    "asset": asset,
                    "frequency": loaded.frequency_label,
                    "target": loaded.target_label,
                    "statistic": series.statistic.value,
                    "window": series.window,
                    "points": [
                        {"date": row["date"], "value": _jsonable(row["value"])} for row in rows
                    ],
                },
            )
        else:
            _write_table(out, ("date", "value"), rows)

    return _for_each_asset(cfg, handle)


def cmd_synth(args: argparse.Namespace) -> int:
    seed = args.seed
    if seed is None:
        raw = os.environ.get(SEED_ENV_VAR, "0")
        try:
            seed = int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from None
    try:
        spec = GeneratorSpec(
            family=Family(args.family),
            n=args.n,
            seed=seed,
            mu=args.mu,
            sigma=args.sigma,
            lam=args.lam,
            xi=args.xi,
            beta=args.beta,
            alpha=args.alpha,
            x_min=args.x_min,
        )
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None
    values = generate(spec)
    label = args.label or spec.family.value
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / f"{label}_na_values_synth.csv"
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("value",))
        for value in values:
            writer.writerow((repr(float(value)),))
    print(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _parse_inputs(raw: list[str]) -> list[tuple[str, Path]]:
    inputs: list[tuple[str, Path]] = []
    seen: set[str] = set()
    for item in raw:
        if "=" in item:
            asset, _, path = item.partition("=")
            asset = asset.strip()
        else:
            asset, path = Path(item).stem, item
        if not asset:
            raise ConfigError(f"empty asset id in {item!r}")
        if asset in seen:
            raise ConfigError(f"duplicate asset id {asset!r}")
        seen.add(asset)
        inputs.append((asset, Path(path)))
    return inputs


def _analysis_config(args: argparse.Namespace) -> AnalysisConfig:
    inputs = _parse_inputs(args.inputs)
    frequency = Frequency(args.frequency)
    fill = getattr(args, "fill_weekend", "") or ""
    if fill.strip().lower() == "all":
        fill_set = frozenset(asset for asset, _ in inputs)
    else:
        fill_set = frozenset(name.strip() for name in fill.split(",") if name.strip())
        unknown = fill_set - {asset for asset, _ in inputs}
        if unknown:
            raise ConfigError(f"--fill-weekend names unknown assets: {sorted(unknown)}")
    windows = dict(DEFAULT_WINDOWS)
    window = getattr(args, "window", None)
    try:
        apen_params = ApenParams(
            m=getattr(args, "m", 2),
            r_mode=getattr(args, "r_mode", "relative"),
            r_value=getattr(args, "r", 0.2),
        )
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None
    statistic = RollingStatistic(getattr(args, "statistic", "std_dev"))
    if window is not None:
        minimum = apen_params.m + 2 if statistic is RollingStatistic.APEN else 2
        if window < minimum:
            raise ConfigError(f"--window must be >= {minimum} for {statistic.value}")
        windows[frequency] = window
    trim = getattr(args, "trim", 0.02)
    if not 0.0 <= trim < 0.5:
        raise ConfigError("--trim must lie in [0, 0.5)")
    p = getattr(args, "p", None)
    orders = (p,) if p is not None else (1, 2, 3, 4)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return AnalysisConfig(
        inputs=inputs,
        frequency=frequency,
        target=Target(getattr(args, "target", "prices")),
        fill_weekend=fill_set,
        windows=windows,
        statistic=statistic,
        apen_params=apen_params,
        trim_fraction=trim,
        orders=orders,
        out_dir=out_dir,
        fmt=args.fmt,
    )


def _add_io_flags(parser: argparse.ArgumentParser, *, target: bool = True) -> None:
    parser.add_argument(
        "inputs",
        nargs="+",
        metavar="ASSET=PATH",
        help="input CSV; a bare PATH uses the file stem as the asset id",
    )
    parser.add_argument(
        "--frequency",
        choices=[f.value for f in Frequency],
        default="daily",
        help="analysis frequency; daily inputs are resampled for weekly/monthly",
    )
    if target:
        parser.add_argument(
            "--target",
            choices=[t.value for t in Target],
            default="prices",
            help="series to analyze: closing prices or (absolute) log-returns",
        )
    parser.add_argument(
        "--fill-weekend",
        default="",
        metavar="ASSETS",
        help="comma-separated asset ids to forward-fill over non-trading days, or 'all'",
    )
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--format", dest="fmt", choices=["csv", "json"], default="csv", help="output format"
    )


def _add_apen_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=2, help="pattern length (default 2)")
    parser.add_argument("--r", type=float, default=0.2, help="tolerance value (default 0.2)")
    parser.add_argument(
        "--r-mode",
        dest="r_mode",
        choices=["relative", "absolute"],
        default="relative",
        help="tolerance mode: fraction of the window SD, or absolute units",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailscope",
        description="Volatility diagnostics for price series: descriptive statistics, "
        "approximate entropy, mean-excess curves, and max-to-sum moment traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalize price CSVs to date,close files")
    _add_io_flags(p, target=False)
    p.set_defaults(kind="analysis", runner=cmd_ingest)

    p = sub.add_parser("report", help="per-asset summary table for prices and returns")
    _add_io_flags(p, target=False)
    _add_apen_flags(p)
    p.set_defaults(kind="analysis", runner=cmd_report)

    p = sub.add_parser("stats", help="summary statistics for one target series")
    _add_io_flags(p)
    p.set_defaults(kind="analysis", runner=cmd_stats)

    p = sub.add_parser("apen", help="approximate entropy of the target series")
    _add_io_flags(p)
    _add_apen_flags(p)
    p.set_defaults(kind="analysis", runner=cmd_apen)

    p = sub.add_parser("mef", help="mean-excess curve with tail-shape label")
    _add_io_flags(p)
    p.add_argument(
        "--trim",
        type=float,
        default=0.02,
        help="fraction of top order statistics to discard (default 0.02, floor 3)",
    )
    p.set_defaults(kind="analysis", runner=cmd_mef)

    p = sub.add_parser("maxsum", help="max-to-sum moment-convergence traces")
    _add_io_flags(p)
    p.add_argument("--p", type=int, choices=[1, 2, 3, 4], help="single order (default: all of 1..4)")
    p.set_defaults(kind="analysis", runner=cmd_maxsum)

    p = sub.add_parser("rolling", help="rolling statistic over frequency-keyed windows")
    _add_io_flags(p)
    p.add_argument(
        "--statistic",
        choices=[s.value for s in RollingStatistic],
        default="std_dev",
        help="windowed statistic (default std_dev)",
    )
    p.add_argument(
        "--window",
        type=int,
        help="observations per window (defaults: daily 100, weekly 20, monthly 3)",
    )
    _add_apen_flags(p)
    p.set_defaults(kind="analysis", runner=cmd_rolling)

    p = sub.add_parser("synth", help="write a seeded synthetic sample as a value CSV")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument(
        "--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)"
    )
    p.add_argument("--mu", type=float, default=0.0, help="gaussian/lognormal location")
    p.add_argument("--sigma", type=float, default=1.0, help="gaussian/lognormal scale")
    p.add_argument("--lam", type=float, default=1.0, help="exponential rate")
    p.add_argument("--xi", type=float, default=0.0, help="gpd shape")
    p.add_argument("--beta", type=float, default=1.0, help="gpd scale")
    p.add_argument("--alpha", type=float, default=1.0, help="pareto tail index")
    p.add_argument("--x-min", dest="x_min", type=float, default=1.0, help="pareto lower bound")
    p.add_argument("--label", default=None, help="output label (default: family name)")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(kind="synth", runner=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.kind == "synth":
            return args.runner(args)
        cfg = _analysis_config(args)
        return args.runner(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
