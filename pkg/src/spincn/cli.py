"""Command-line runner for the CN pulse experiments.

Examples
--------
    spincn --experiment fig2a --output out/fig2a.csv --plot
    spincn --experiment custom --amplitudes 1 0 0 0
    spincn --acceptance --output out/acceptance.json

Exit status: 0 pass, 1 gate check failed, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from . import __version__
from .acceptance import EXPERIMENTS, initial_active, run_checks, summary
from .evolution import DEFAULT_DT, DEFAULT_STRIDE, NumericalError
from .gate import run_cn_gate
from .operators import SpinSystemConfig

EXIT_PASS, EXIT_GATE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
EXPERIMENT_NAMES = (*EXPERIMENTS, "custom")
FORMATS = ("csv", "json")
SYSTEM_KEYS = ("omega", "j_coupling", "rabi", "rf_freq", "n_spins")
RUN_KEYS = ("experiment", "amplitudes", "dt", "stride", "output", "format", "plot")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    system: SpinSystemConfig = field(default_factory=SpinSystemConfig)
    experiment: str = "fig2a"
    custom_amplitudes: tuple | None = None
    dt: float = DEFAULT_DT
    sample_stride: int = DEFAULT_STRIDE
    output_path: Path | None = None
    format: str = "csv"
    plot: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise ConfigError(f"experiment must be one of {EXPERIMENT_NAMES}, got {self.experiment!r}")
        if (self.custom_amplitudes is not None) != (self.experiment == "custom"):
            raise ConfigError("amplitudes are required for, and only for, experiment 'custom'")
        if self.custom_amplitudes is not None and len(self.custom_amplitudes) != 4:
            raise ConfigError(f"custom experiment needs 4 amplitudes, got {len(self.custom_amplitudes)}")
        if not (isinstance(self.dt, (int, float)) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ConfigError(f"stride must be an integer >= 1, got {self.sample_stride}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.output_path is None:
            self.output_path = Path(f"{self.experiment}.{self.format}")
        self.output_path = Path(self.output_path)


def load_config_file(path) -> dict:
    """Read a flat YAML mapping of system and run settings."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a key-value mapping")
    unknown = set(data) - set(SYSTEM_KEYS) - set(RUN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _parse_amplitudes(values):
    if values is None:
        return None
    try:
        return tuple(complex(str(v).replace(" ", "")) for v in values)
    except ValueError as err:
        raise ConfigError(f"bad amplitude: {err}") from err


def build_config(args: argparse.Namespace) -> tuple[ExperimentConfig, dict]:
    """Merge the config file (if any) with command-line flags; flags win."""
    data = load_config_file(args.config) if args.config else {}
    for key, value in (
        ("experiment", args.experiment),
        ("amplitudes", args.amplitudes),
        ("dt", args.dt),
        ("stride", args.stride),
        ("output", args.output),
        ("format", args.format),
    ):
        if value is not None:
            data[key] = value
    if args.plot:
        data["plot"] = True
    try:
        system = SpinSystemConfig(**{k: data[k] for k in SYSTEM_KEYS if k in data})
        cfg = ExperimentConfig(
            system=system,
            experiment=data.get("experiment", "fig2a"),
            custom_amplitudes=_parse_amplitudes(data.get("amplitudes")),
            dt=float(data.get("dt", DEFAULT_DT)),
            sample_stride=int(data.get("stride", DEFAULT_STRIDE)),
            output_path=data.get("output"),
            format=data.get("format", "csv"),
            plot=bool(data.get("plot", False)),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err
    return cfg, data


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_columns(n_states: int) -> list[str]:
    width = max(2, len(str(n_states - 1)))
    return ["t", *(f"r{k:0{width}d}" for k in range(n_states)), "re_iplus", "im_iplus"]


def series_rows(series) -> list[list[float]]:
    rows = []
    for t, pops, ip in zip(series.times, series.populations, series.i_plus):
        rows.append([float(t), *map(float, pops), float(ip.real), float(ip.imag)])
    return rows


def write_series(series, path: Path, fmt: str) -> None:
    columns = series_columns(series.populations.shape[1])
    rows = series_rows(series)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows([_fmt(x) for x in row] for row in rows)
    else:
        with open(path, "w") as fh:
            json.dump({"columns": columns, "rows": rows}, fh, indent=1)
            fh.write("\n")


def report_path(output: Path) -> Path:
    return output.with_name(output.stem + "_report.json")


def _config_echo(cfg: ExperimentConfig) -> dict:
    amps = cfg.custom_amplitudes
    return {
        "system": asdict(cfg.system),
        "experiment": cfg.experiment,
        "amplitudes": None if amps is None else [[a.real, a.imag] for a in amps],
        "dt": cfg.dt,
        "stride": cfg.sample_stride,
        "format": cfg.format,
    }


def run_experiment(cfg: ExperimentConfig, out=None) -> int:
    """Run one experiment, write its time series and report, return exit status."""
    out = out or sys.stdout
    active = initial_active(cfg.experiment, cfg.custom_amplitudes)
    report = run_cn_gate(cfg.system, active, cfg.dt, stride=cfg.sample_stride, label=cfg.experiment)

    cfg.output_path.parent.mkdir(parents=True, exist_ok=True)
    write_series(report.series, cfg.output_path, cfg.format)
    doc = {"version": __version__, "config": _config_echo(cfg), **report.to_dict()}
    rpath = report_path(cfg.output_path)
    with open(rpath, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    written = [cfg.output_path, rpath]
    if cfg.plot:
        from .plotting import plot_experiment

        written.append(plot_experiment(report.series, cfg.experiment, cfg.output_path.with_suffix(".png")))

    final = report.final_populations
    status = "PASS" if report.passed else "FAIL"
    print(f"{cfg.experiment}: {status}", file=out)
    print("  final active populations: " + " ".join(f"{p:.6f}" for p in final[:4]), file=out)
    print(f"  active error: {report.active_error:.3e} (tol {report.active_tol:g})", file=out)
    print(f"  max passive drift: {report.max_passive_drift:.3e} (tol {report.passive_tol:g})", file=out)
    for path in written:
        print(f"  wrote {path}", file=out)
    return EXIT_PASS if report.passed else EXIT_GATE


def run_acceptance(cfg: ExperimentConfig, output: Path | None, out=None) -> int:
    """Run every acceptance check, write a JSON summary, return exit status."""
    out = out or sys.stdout
    checks = run_checks(cfg.system, cfg.dt, cfg.sample_stride)
    for check in checks:
        print(check.line(), file=out)
    doc = {"version": __version__, "config": _config_echo(cfg), **summary(checks)}
    output = Path(output or "acceptance.json")
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w") as fh:
        json.dump(doc, fh, indent=1, allow_nan=True)
        fh.write("\n")
    failed = [c.name for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed; wrote {output}", file=out)
    return EXIT_PASS if not failed else EXIT_GATE


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spincn", description="Simulate a single-pulse CN gate on four-spin Ising molecules."
    )
    p.add_argument("--experiment", choices=EXPERIMENT_NAMES)
    p.add_argument("--config", help="YAML file of system and run settings")
    p.add_argument("--output", help="time-series file (or summary file with --acceptance)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--dt", type=float, help=f"RK4 step (default {DEFAULT_DT:g})")
    p.add_argument("--stride", type=int, help=f"steps per sample (default {DEFAULT_STRIDE})")
    p.add_argument("--amplitudes", nargs=4, metavar="C", help="four complex amplitudes for 'custom'")
    p.add_argument("--plot", action="store_true", help="also render a PNG next to the output")
    p.add_argument("--acceptance", action="store_true", help="run the acceptance checks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg, data = build_config(args)
        if args.acceptance:
            return run_acceptance(cfg, data.get("output"))
        return run_experiment(cfg)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
