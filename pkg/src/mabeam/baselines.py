"""Reference placement schemes: fixed half-wavelength array, random feasible
placement, and an exhaustive grid search that certifies the discrete optimum
on small instances.

All three synthesize weights by sampling the same filter profile the optimizer
uses, so comparisons isolate what antenna placement alone contributes.  In
particular the fixed-position baseline does not re-optimize its weights.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from .core import (
    DEFAULT_ANGULAR_STEP,
    GRID_SLACK,
    AngularGrid,
    ArrayConfig,
    BeamSolution,
    CoverageSpec,
    InfeasibleGeometryError,
    PositionGrid,
    discretize_regions,
    to_db,
)
from .mnf import MnfProfile, mnf_gain, sample_beamformer
from .optimize import MinGainObjective, legal_indices_near

EXHAUSTIVE_CAP = 1_000_000
"Default limit on the number of feasible combinations exhaustive search visits."


class ExhaustiveCapError(ValueError):
    """Raised when the feasible combination count exceeds the configured cap."""


def fpa_positions(array: ArrayConfig) -> np.ndarray:
    "Fixed positions (n-1) * wavelength / 2, anchored at the segment origin."
    last = (array.num_antennas - 1) * array.wavelength / 2.0
    if last > array.aperture + GRID_SLACK:
        raise InfeasibleGeometryError(
            f"aperture {array.aperture} m too short for {array.num_antennas} "
            f"elements at half-wavelength spacing"
        )
    return np.arange(array.num_antennas) * (array.wavelength / 2.0)


def fpa_index_vector(array: ArrayConfig, pgrid: PositionGrid) -> np.ndarray:
    "Feasible grid indices nearest the fixed half-wavelength positions."
    return legal_indices_near(
        fpa_positions(array), pgrid, pgrid.min_index_gap(array.min_spacing)
    )


def fpa_solution(
    array: ArrayConfig,
    coverage: CoverageSpec,
    *,
    grid: AngularGrid | None = None,
    profile: MnfProfile | None = None,
    angular_step: float = DEFAULT_ANGULAR_STEP,
) -> BeamSolution:
    """Half-wavelength fixed array with filter-sampled weights."""
    t0 = time.perf_counter()
    positions = fpa_positions(array)
    grid = grid if grid is not None else discretize_regions(coverage, angular_step)
    profile = profile if profile is not None else MnfProfile.from_coverage(
        coverage, array.wavelength
    )
    gains = np.atleast_1d(
        mnf_gain(profile, positions, grid.angles, array.wavelength)
    )
    i = int(np.argmin(gains))
    value = float(gains[i])
    return BeamSolution(
        algorithm="fpa",
        positions=positions,
        weights=sample_beamformer(profile, positions),
        wavelength=array.wavelength,
        min_gain_linear=value,
        min_gain_db=float(to_db(value)),
        argmin_angle_deg=math.degrees(float(grid.angles[i])),
        runtime_seconds=time.perf_counter() - t0,
    )


def random_solution(
    array: ArrayConfig,
    coverage: CoverageSpec,
    seed: int,
    *,
    num_positions: int = 500,
    angular_step: float = DEFAULT_ANGULAR_STEP,
    pgrid: PositionGrid | None = None,
    grid: AngularGrid | None = None,
    profile: MnfProfile | None = None,
    max_attempts: int = 10_000,
) -> BeamSolution:
    """Uniformly sampled feasible placement, filter-sampled weights.

    Rejection-samples distinct grid indices until the spacing constraint
    holds, so accepted placements are uniform over the feasible sets.
    """
    t0 = time.perf_counter()
    objective = MinGainObjective(
        array,
        coverage,
        pgrid=pgrid,
        grid=grid,
        profile=profile,
        num_positions=num_positions,
        angular_step=angular_step,
    )
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        u = np.sort(
            rng.choice(objective.pgrid.count, size=array.num_antennas, replace=False)
        ).astype(np.intp)
        if objective.is_feasible(u):
            break
    else:
        raise RuntimeError(
            f"no feasible placement found in {max_attempts} random attempts"
        )
    return _solution_from_indices(objective, u, "random", seed, t0)


def count_feasible_sets(
    num_positions: int, num_antennas: int, index_gap: int
) -> int:
    """Number of ascending index vectors with consecutive gaps >= index_gap."""
    reduced = num_positions - (num_antennas - 1) * (index_gap - 1)
    if reduced < num_antennas:
        return 0
    return math.comb(reduced, num_antennas)


def feasible_index_sets(num_positions: int, num_antennas: int, index_gap: int):
    """Yield every feasible ascending index tuple in lexicographic order.

    Uses the bijection c_i = b_i + i*(index_gap - 1) from plain combinations,
    so exactly count_feasible_sets(...) tuples are produced.
    """
    reduced = num_positions - (num_antennas - 1) * (index_gap - 1)
    stretch = index_gap - 1
    for base in itertools.combinations(range(reduced), num_antennas):
        yield tuple(b + i * stretch for i, b in enumerate(base))


def exhaustive_solution(
    array: ArrayConfig,
    coverage: CoverageSpec,
    *,
    num_positions: int = 500,
    angular_step: float = DEFAULT_ANGULAR_STEP,
    pgrid: PositionGrid | None = None,
    grid: AngularGrid | None = None,
    profile: MnfProfile | None = None,
    cap: int = EXHAUSTIVE_CAP,
    chunk_size: int = 4096,
) -> BeamSolution:
    """Certified optimum of the discrete placement problem on a small grid.

    Enumerates every feasible index vector and returns the best; ties go to
    the lexicographically smallest vector.

    Raises
    ------
    ExhaustiveCapError
        When the feasible combination count exceeds `cap`.
    """
    t0 = time.perf_counter()
    objective = MinGainObjective(
        array,
        coverage,
        pgrid=pgrid,
        grid=grid,
        profile=profile,
        num_positions=num_positions,
        angular_step=angular_step,
    )
    m = objective.pgrid.count
    n = array.num_antennas
    total = count_feasible_sets(m, n, objective.index_gap)
    if total == 0:
        raise InfeasibleGeometryError(
            f"no feasible placement of {n} antennas on a {m}-point grid"
        )
    if total > cap:
        raise ExhaustiveCapError(
            f"{total} feasible combinations exceed the cap of {cap}"
        )
    best_f = -1.0
    best_u: np.ndarray | None = None
    sets = feasible_index_sets(m, n, objective.index_gap)
    while True:
        chunk = list(itertools.islice(sets, chunk_size))
        if not chunk:
            break
        rows = np.array(chunk, dtype=np.intp)
        vals = objective.value_many(rows)
        i = int(np.argmax(vals))
        if vals[i] > best_f:
            best_f = float(vals[i])
            best_u = rows[i].copy()
    assert best_u is not None
    return _solution_from_indices(objective, best_u, "exhaustive", None, t0)


def _solution_from_indices(
    objective: MinGainObjective,
    indices: np.ndarray,
    algorithm: str,
    seed: int | None,
    t_start: float,
) -> BeamSolution:
    u = np.sort(np.asarray(indices, dtype=np.intp))
    positions = objective.pgrid.positions[u]
    gains = objective.gains(u)
    i = int(np.argmin(gains))
    value = objective.value(u)
    return BeamSolution(
        algorithm=algorithm,
        positions=positions,
        weights=sample_beamformer(objective.profile, positions),
        wavelength=objective.array.wavelength,
        min_gain_linear=value,
        min_gain_db=float(to_db(value)),
        argmin_angle_deg=math.degrees(float(objective.grid.angles[i])),
        runtime_seconds=time.perf_counter() - t_start,
        seed=seed,
    )
