"""Command-line experiment runner.

Subcommand ``run`` solves one placement problem and writes a JSON summary, a
beam-pattern CSV over the full half-space, and optionally a per-round trace.
Subcommand ``compare`` runs a grid of (algorithm, seed) cells, optionally in
parallel, and writes one comparison table.  Configuration comes from a TOML
file merged over built-in defaults, with command-line flags taking precedence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .baselines import (
    EXHAUSTIVE_CAP,
    ExhaustiveCapError,
    exhaustive_solution,
    fpa_solution,
    random_solution,
)
from .core import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    BeamSolution,
    CoverageSpec,
    InfeasibleGeometryError,
    beam_gain,
    to_db,
)
from .mnf import DegenerateProfileError
from .optimize import OptimizerConfig, solve

ALGORITHMS = ("mnf-su-gs", "mnf-su", "fpa", "random", "exhaustive")

IN_REGION_TOL_DEG = 1e-9
"Angular slack when flagging pattern rows as in-region, degrees."


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


_DEFAULTS: dict = {
    "array": {
        "carrier_frequency_hz": 1.0e9,
        "num_antennas": 8,
        "aperture_wavelengths": 10.0,
        "min_spacing_wavelengths": 0.5,
    },
    "regions": [
        {"theta_min_deg": 0.0, "theta_max_deg": 20.0, "beta": 1.0},
        {"theta_min_deg": 150.0, "theta_max_deg": 180.0, "beta": 1.0},
    ],
    "grid": {"num_positions": 500, "angular_step_deg": 0.5},
    "optimizer": {
        "gibbs_rounds": 50,
        "max_index_shift": 2,
        "gibbs_temperature": 5.0,
        "candidates_per_step": 10,
        "max_outer_rounds": 20,
        "convergence_tol": 1e-6,
        "seed": 0,
    },
    "run": {
        "algorithm": "mnf-su-gs",
        "output_dir": "runs",
        "pattern_step_deg": 0.1,
        "emit_trace": False,
        "exhaustive_cap": EXHAUSTIVE_CAP,
    },
}

_ARRAY_KEYS = {
    "carrier_frequency_hz",
    "wavelength_m",
    "num_antennas",
    "aperture_wavelengths",
    "aperture_m",
    "min_spacing_wavelengths",
    "min_spacing_m",
}
_REGION_KEYS = {"theta_min_deg", "theta_max_deg", "beta"}
_GRID_KEYS = {"num_positions", "angular_step_deg"}
_OPTIMIZER_KEYS = set(_DEFAULTS["optimizer"])
_RUN_KEYS = set(_DEFAULTS["run"])


@dataclass
class ExperimentConfig:
    """Fully validated experiment description."""

    array: ArrayConfig
    coverage: CoverageSpec
    regions_deg: list[tuple[float, float, float]]
    num_positions: int
    angular_step_deg: float
    optimizer: OptimizerConfig
    algorithm: str
    output_dir: Path
    pattern_step_deg: float
    emit_trace: bool
    exhaustive_cap: int


def _require_number(section: str, key: str, value, *, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}: {key} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{section}: {key} must be an integer, got {value!r}")
    return int(value) if integer else float(value)


def _check_keys(section: str, mapping: dict, allowed: set) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in [{section}]")


def build_config(mapping: dict) -> ExperimentConfig:
    """Validate a raw configuration mapping and resolve it into domain objects."""
    unknown = set(mapping) - {"array", "regions", "grid", "optimizer", "run"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    arr = mapping["array"]
    _check_keys("array", arr, _ARRAY_KEYS)
    if "wavelength_m" in arr:
        wavelength = _require_number("array", "wavelength_m", arr["wavelength_m"])
    else:
        freq = _require_number(
            "array", "carrier_frequency_hz", arr["carrier_frequency_hz"]
        )
        if freq <= 0:
            raise ConfigError("array: carrier_frequency_hz must be positive")
        wavelength = SPEED_OF_LIGHT / freq
    if "aperture_m" in arr:
        aperture = _require_number("array", "aperture_m", arr["aperture_m"])
    else:
        aperture = wavelength * _require_number(
            "array", "aperture_wavelengths", arr["aperture_wavelengths"]
        )
    if "min_spacing_m" in arr:
        min_spacing = _require_number("array", "min_spacing_m", arr["min_spacing_m"])
    else:
        min_spacing = wavelength * _require_number(
            "array", "min_spacing_wavelengths", arr["min_spacing_wavelengths"]
        )
    num_antennas = _require_number(
        "array", "num_antennas", arr["num_antennas"], integer=True
    )
    try:
        array = ArrayConfig(wavelength, aperture, num_antennas, min_spacing)
    except ValueError as exc:
        raise ConfigError(f"array: {exc}") from exc

    regions_raw = mapping["regions"]
    if not isinstance(regions_raw, list) or not regions_raw:
        raise ConfigError("regions: at least one region is required")
    regions_deg: list[tuple[float, float, float]] = []
    for i, reg in enumerate(regions_raw):
        _check_keys(f"regions[{i}]", reg, _REGION_KEYS)
        try:
            lo = _require_number(f"regions[{i}]", "theta_min_deg", reg["theta_min_deg"])
            hi = _require_number(f"regions[{i}]", "theta_max_deg", reg["theta_max_deg"])
        except KeyError as exc:
            raise ConfigError(f"regions[{i}]: missing key {exc}") from exc
        beta = _require_number(f"regions[{i}]", "beta", reg.get("beta", 1.0))
        if lo > hi:
            raise ConfigError(
                f"regions[{i}]: theta_min_deg ({lo}) > theta_max_deg ({hi})"
            )
        if lo < 0 or hi > 180:
            raise ConfigError(f"regions[{i}]: angles must lie within [0, 180]")
        if beta <= 0:
            raise ConfigError(f"regions[{i}]: beta must be positive")
        regions_deg.append((lo, hi, beta))
    try:
        coverage = CoverageSpec.from_degrees(regions_deg)
    except ValueError as exc:
        raise ConfigError(f"regions: {exc}") from exc

    grid = mapping["grid"]
    _check_keys("grid", grid, _GRID_KEYS)
    num_positions = _require_number(
        "grid", "num_positions", grid["num_positions"], integer=True
    )
    angular_step_deg = _require_number(
        "grid", "angular_step_deg", grid["angular_step_deg"]
    )
    if num_positions < 2:
        raise ConfigError("grid: num_positions must be >= 2")
    if angular_step_deg <= 0:
        raise ConfigError("grid: angular_step_deg must be positive")

    opt = mapping["optimizer"]
    _check_keys("optimizer", opt, _OPTIMIZER_KEYS)
    try:
        optimizer = OptimizerConfig(
            gibbs_rounds=_require_number(
                "optimizer", "gibbs_rounds", opt["gibbs_rounds"], integer=True
            ),
            max_index_shift=_require_number(
                "optimizer", "max_index_shift", opt["max_index_shift"], integer=True
            ),
            gibbs_temperature=_require_number(
                "optimizer", "gibbs_temperature", opt["gibbs_temperature"]
            ),
            candidates_per_step=_require_number(
                "optimizer",
                "candidates_per_step",
                opt["candidates_per_step"],
                integer=True,
            ),
            max_outer_rounds=_require_number(
                "optimizer", "max_outer_rounds", opt["max_outer_rounds"], integer=True
            ),
            convergence_tol=_require_number(
                "optimizer", "convergence_tol", opt["convergence_tol"]
            ),
            seed=_require_number("optimizer", "seed", opt["seed"], integer=True),
        )
    except ValueError as exc:
        raise ConfigError(f"optimizer: {exc}") from exc

    run = mapping["run"]
    _check_keys("run", run, _RUN_KEYS)
    algorithm = run["algorithm"]
    if algorithm not in ALGORITHMS:
        raise ConfigError(
            f"run: unknown algorithm '{algorithm}' "
            f"(choose from {', '.join(ALGORITHMS)})"
        )
    pattern_step_deg = _require_number(
        "run", "pattern_step_deg", run["pattern_step_deg"]
    )
    if not 0 < pattern_step_deg <= 180:
        raise ConfigError("run: pattern_step_deg must be in (0, 180]")
    return ExperimentConfig(
        array=array,
        coverage=coverage,
        regions_deg=regions_deg,
        num_positions=num_positions,
        angular_step_deg=angular_step_deg,
        optimizer=optimizer,
        algorithm=algorithm,
        output_dir=Path(run["output_dir"]),
        pattern_step_deg=pattern_step_deg,
        emit_trace=bool(run["emit_trace"]),
        exhaustive_cap=_require_number(
            "run", "exhaustive_cap", run["exhaustive_cap"], integer=True
        ),
    )


def _merge(base: dict, override: dict) -> dict:
    merged = {k: dict(v) if isinstance(v, dict) else v for k, v in base.items()}
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return merged


def load_config(path: str | Path | None, overrides: dict | None = None) -> ExperimentConfig:
    """Read TOML config (if any), merge over defaults, apply flag overrides."""
    mapping = _merge(_DEFAULTS, {})
    if path is not None:
        try:
            raw = tomllib.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file does not parse: {exc}") from exc
        mapping = _merge(mapping, raw)
    for key, value in (overrides or {}).items():
        section, name = key.split(".", 1)
        if section == "regions":
            mapping["regions"] = value
        else:
            mapping[section][name] = value
    return build_config(mapping)


# ---------------------------------------------------------------------------
# run subcommand


def _dispatch(config: ExperimentConfig, algorithm: str, seed: int):
    """Run one algorithm cell; returns (solution, trace or None)."""
    step = math.radians(config.angular_step_deg)
    if algorithm in ("mnf-su-gs", "mnf-su"):
        opt = dataclasses.replace(
            config.optimizer,
            seed=seed,
            gibbs_rounds=0 if algorithm == "mnf-su" else config.optimizer.gibbs_rounds,
        )
        return solve(
            config.array,
            config.coverage,
            opt,
            num_positions=config.num_positions,
            angular_step=step,
        )
    if algorithm == "fpa":
        return fpa_solution(config.array, config.coverage, angular_step=step), None
    if algorithm == "random":
        return (
            random_solution(
                config.array,
                config.coverage,
                seed,
                num_positions=config.num_positions,
                angular_step=step,
            ),
            None,
        )
    if algorithm == "exhaustive":
        return (
            exhaustive_solution(
                config.array,
                config.coverage,
                num_positions=config.num_positions,
                angular_step=step,
                cap=config.exhaustive_cap,
            ),
            None,
        )
    raise ConfigError(f"unknown algorithm '{algorithm}'")


def _pattern_angles_deg(step_deg: float) -> np.ndarray:
    n = int(math.floor(180.0 / step_deg + 1e-9))
    angles = np.clip(np.arange(n + 1) * step_deg, 0.0, 180.0)
    if angles[-1] < 180.0 - 1e-9:
        angles = np.append(angles, 180.0)
    return angles


def _in_region_flags(
    angles_deg: np.ndarray, regions_deg: list[tuple[float, float, float]]
) -> np.ndarray:
    flags = np.zeros(angles_deg.size, dtype=bool)
    for lo, hi, _ in regions_deg:
        flags |= (angles_deg >= lo - IN_REGION_TOL_DEG) & (
            angles_deg <= hi + IN_REGION_TOL_DEG
        )
    return flags


def _summarize(
    config: ExperimentConfig,
    solution: BeamSolution,
    seed: int,
    pattern_angles_deg: np.ndarray,
    pattern_gains: np.ndarray,
    in_region: np.ndarray,
) -> dict:
    region_gains = pattern_gains[in_region]
    region_angles = pattern_angles_deg[in_region]
    i = int(np.argmin(region_gains))
    min_lin = float(region_gains[i])
    return {
        "algorithm": solution.algorithm,
        "seed": seed,
        "num_antennas": solution.num_antennas,
        "wavelength_m": solution.wavelength,
        "weight_design": "sampled multi-notch profile, unit power",
        "positions_m": solution.positions.tolist(),
        "positions_wavelengths": solution.positions_wavelengths.tolist(),
        "weights": [[w.real, w.imag] for w in solution.weights],
        "min_gain_linear": min_lin,
        "min_gain_db": float(to_db(min_lin)),
        "argmin_angle_deg": float(region_angles[i]),
        "objective_grid_min_gain_linear": solution.min_gain_linear,
        "objective_grid_min_gain_db": solution.min_gain_db,
        "runtime_seconds": solution.runtime_seconds,
    }


def run_experiment(config: ExperimentConfig) -> dict:
    """Execute the configured run and write summary/pattern/trace files.

    The summary's min gain is the in-region minimum of the pattern samples,
    so the two artifacts are consistent by construction.
    """
    seed = config.optimizer.seed
    solution, trace = _dispatch(config, config.algorithm, seed)

    angles_deg = _pattern_angles_deg(config.pattern_step_deg)
    gains = np.atleast_1d(
        beam_gain(
            solution.weights,
            solution.positions,
            np.radians(angles_deg),
            solution.wavelength,
        )
    )
    in_region = _in_region_flags(angles_deg, config.regions_deg)
    summary = _summarize(config, solution, seed, angles_deg, gains, in_region)

    outdir = config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"{config.algorithm}-seed{seed}"
    pattern_path = outdir / f"{stem}-pattern.csv"
    with pattern_path.open("w") as fh:
        fh.write("angle_deg,gain_linear,gain_db,in_region\n")
        gains_db = to_db(gains)
        for adeg, glin, gdb, flag in zip(angles_deg, gains, gains_db, in_region):
            fh.write(f"{adeg:.12e},{glin:.12e},{gdb:.12e},{int(flag)}\n")
    summary_path = outdir / f"{stem}-summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    paths = {"summary": summary_path, "pattern": pattern_path}

    if config.emit_trace and trace is not None:
        trace_path = outdir / f"{stem}-trace.csv"
        with trace_path.open("w") as fh:
            fh.write("round,objective_su,objective\n")
            fh.write(f"0,,{trace.initial_objective:.12e}\n")
            for rec in trace.rounds:
                fh.write(
                    f"{rec.index},{rec.objective_su:.12e},{rec.objective:.12e}\n"
                )
        paths["trace"] = trace_path

    print(
        f"{config.algorithm} seed={seed}: min gain "
        f"{summary['min_gain_db']:.4f} dB over the coverage regions "
        f"-> {summary_path}"
    )
    return {"summary": summary, "paths": paths}


# ---------------------------------------------------------------------------
# compare subcommand


def _compare_cell(config: ExperimentConfig, algorithm: str, seed: int) -> dict:
    row = {
        "algorithm": algorithm,
        "num_antennas": config.array.num_antennas,
        "seed": seed,
        "min_gain_db": math.nan,
        "runtime_seconds": math.nan,
        "status": "ok",
    }
    try:
        solution, _ = _dispatch(config, algorithm, seed)
        row["min_gain_db"] = solution.min_gain_db
        row["runtime_seconds"] = solution.runtime_seconds
    except Exception as exc:  # annotate, keep remaining cells running
        reason = f"{type(exc).__name__}: {exc}"
        row["status"] = "error: " + reason.replace(",", ";").replace("\n", " ")
    return row


def run_comparison(
    config: ExperimentConfig,
    algorithms: list[str],
    seeds: list[int],
    jobs: int = 1,
) -> Path:
    """Run every (algorithm, seed) cell and write one sorted CSV table."""
    if not seeds:
        raise ConfigError("empty seed list")
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm '{algorithm}' "
                f"(choose from {', '.join(ALGORITHMS)})"
            )
    if jobs < 1:
        raise ConfigError("jobs must be >= 1")
    cells = [(a, s) for a in algorithms for s in seeds]
    if jobs == 1:
        rows = [_compare_cell(config, a, s) for a, s in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda c: _compare_cell(config, *c), cells))
    rows.sort(key=lambda r: (r["algorithm"], r["seed"]))
    outdir = config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    table_path = outdir / "compare.csv"
    with table_path.open("w") as fh:
        fh.write("algorithm,num_antennas,seed,min_gain_db,runtime_seconds,status\n")
        for r in rows:
            fh.write(
                f"{r['algorithm']},{r['num_antennas']},{r['seed']},"
                f"{r['min_gain_db']:.12e},{r['runtime_seconds']:.12e},{r['status']}\n"
            )
    print(f"wrote {len(rows)} comparison rows -> {table_path}")
    return table_path


# ---------------------------------------------------------------------------
# argument parsing


def _parse_seeds(text: str) -> list[int]:
    items = [s for s in (part.strip() for part in text.split(",")) if s]
    try:
        return [int(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"seeds must be integers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mabeam",
        description=(
            "Optimize movable-antenna positions and beamforming weights for "
            "max-min beam coverage over multiple angular regions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="solve one configuration and write artifacts")
    run_p.add_argument("--config", type=Path, default=None, help="TOML config file")
    run_p.add_argument("--algorithm", choices=ALGORITHMS, default=None)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--output-dir", type=Path, default=None)
    run_p.add_argument(
        "--pattern-step", type=float, default=None, help="pattern sampling step, deg"
    )
    run_p.add_argument(
        "--emit-trace", action="store_true", help="also write per-round objectives"
    )

    cmp_p = sub.add_parser("compare", help="run an (algorithm x seed) grid")
    cmp_p.add_argument("--config", type=Path, default=None, help="TOML config file")
    cmp_p.add_argument(
        "--algorithm",
        action="append",
        dest="algorithms",
        metavar="NAME",
        help="algorithm to include (repeatable)",
    )
    cmp_p.add_argument("--seeds", type=str, required=True, help="comma-separated ints")
    cmp_p.add_argument("--output-dir", type=Path, default=None)
    cmp_p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides: dict = {}
        if args.output_dir is not None:
            overrides["run.output_dir"] = str(args.output_dir)
        if args.command == "run":
            if args.algorithm is not None:
                overrides["run.algorithm"] = args.algorithm
            if args.seed is not None:
                overrides["optimizer.seed"] = args.seed
            if args.pattern_step is not None:
                overrides["run.pattern_step_deg"] = args.pattern_step
            if args.emit_trace:
                overrides["run.emit_trace"] = True
        config = load_config(args.config, overrides)
        if args.command == "run":
            run_experiment(config)
        else:
            algorithms = args.algorithms or ["mnf-su-gs", "mnf-su", "fpa"]
            run_comparison(config, algorithms, _parse_seeds(args.seeds), args.jobs)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except InfeasibleGeometryError as exc:
        print(f"error: infeasible geometry: {exc}", file=sys.stderr)
        return 1
    except DegenerateProfileError as exc:
        print(f"error: degenerate profile: {exc}", file=sys.stderr)
        return 1
    except ExhaustiveCapError as exc:
        print(f"error: exhaustive search too large: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
