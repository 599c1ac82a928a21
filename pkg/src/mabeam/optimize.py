"""Discrete position search maximizing the worst in-region beam gain.

The movable segment is discretized into M candidate positions and the antennas
are an index vector into that grid.  Each outer round runs one pass of
per-antenna coordinate argmax (sequential update) followed by an optional
Gibbs-sampling exploration phase that perturbs one antenna at a time among
adjacent and random feasible candidates, keeping the best vector visited.
Both phases can only improve the objective, so the outer objective sequence is
non-decreasing and the loop stops on small relative improvement.

Objective evaluations share a precomputed M-by-L table combining the sampled
weight profile with the steering phases, and every evaluation accumulates that
table in sorted index order.  Identical index sets therefore produce bitwise
identical values, which keeps the monotonicity guarantees exact in floating
point.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

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
    indices_feasible,
    to_db,
)
from .mnf import MnfProfile, ideal_weight, sample_beamformer


@dataclass(frozen=True)
class OptimizerConfig:
    """Search hyperparameters.

    ``gibbs_rounds`` is the number of exploration rounds per outer round
    (0 disables Gibbs sampling, leaving sequential update only).
    ``max_index_shift`` bounds the adjacent-candidate offsets, and
    ``candidates_per_step`` is the total candidate count per Gibbs step,
    adjacent plus random.  ``gibbs_temperature`` scales the softmax used to
    pick among candidates.  The RNG is numpy's seeded PCG64 generator
    (``np.random.default_rng(seed)``), consumed only by the Gibbs phase, so
    equal seeds reproduce identical traces on any platform.
    """

    gibbs_rounds: int = 50
    max_index_shift: int = 2
    gibbs_temperature: float = 5.0
    candidates_per_step: int = 10
    max_outer_rounds: int = 20
    convergence_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.gibbs_rounds < 0:
            raise ValueError("gibbs_rounds must be >= 0")
        if self.max_index_shift < 1:
            raise ValueError("max_index_shift must be >= 1")
        if self.gibbs_temperature <= 0:
            raise ValueError("gibbs_temperature must be positive")
        if self.candidates_per_step < 1:
            raise ValueError("candidates_per_step must be >= 1")
        if self.max_outer_rounds < 1:
            raise ValueError("max_outer_rounds must be >= 1")
        if self.convergence_tol < 0:
            raise ValueError("convergence_tol must be >= 0")


@dataclass
class RoundRecord:
    "One outer round: objective after sequential update and after Gibbs."
    index: int
    objective_su: float
    objective: float
    indices: np.ndarray
    elapsed_seconds: float
    gibbs_best: tuple[float, ...] = ()


@dataclass
class OptimizerTrace:
    "Per-round diagnostics; the objective sequence is non-decreasing."
    initial_objective: float
    initial_indices: np.ndarray
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([self.initial_objective] + [r.objective for r in self.rounds])


class MinGainObjective:
    """Evaluation kernel for the worst in-region gain as a function of indices.

    Precomputes, once per instance, the ideal weight samples at every grid
    position and an M-by-L table whose row m holds
    conj(w(p_m)) * exp(j k p_m cos(theta_l)) for every grid angle theta_l.
    The objective for an index vector u is then

        min_l |sum_n table[u_n, l]|^2  /  sum_n |w(p_{u_n})|^2 .

    The table is immutable and may be shared across threads.
    """

    def __init__(
        self,
        array: ArrayConfig,
        coverage: CoverageSpec,
        *,
        pgrid: PositionGrid | None = None,
        grid: AngularGrid | None = None,
        profile: MnfProfile | None = None,
        num_positions: int = 500,
        angular_step: float = DEFAULT_ANGULAR_STEP,
    ) -> None:
        self.array = array
        self.coverage = coverage
        self.pgrid = pgrid if pgrid is not None else PositionGrid.uniform(
            array.aperture, num_positions
        )
        self.grid = grid if grid is not None else discretize_regions(
            coverage, angular_step
        )
        self.profile = profile if profile is not None else MnfProfile.from_coverage(
            coverage, array.wavelength
        )
        m = self.pgrid.count
        if m < array.num_antennas:
            raise InfeasibleGeometryError(
                f"grid has {m} positions for {array.num_antennas} antennas"
            )
        self.index_gap = self.pgrid.min_index_gap(array.min_spacing)
        if (array.num_antennas - 1) * self.index_gap > m - 1:
            raise InfeasibleGeometryError(
                f"cannot place {array.num_antennas} antennas at spacing "
                f">= {array.min_spacing} m on a {m}-point grid over "
                f"{array.aperture} m"
            )
        tilde = np.atleast_1d(ideal_weight(self.profile, self.pgrid.positions))
        steer = np.exp(
            1j
            * array.wavenumber
            * np.outer(self.pgrid.positions, np.cos(self.grid.angles))
        )
        self._table = np.conj(tilde)[:, None] * steer
        self._power = tilde.real**2 + tilde.imag**2
        self._table.flags.writeable = False
        self._power.flags.writeable = False

    @property
    def num_antennas(self) -> int:
        return self.array.num_antennas

    def value_many(self, index_rows: np.ndarray) -> np.ndarray:
        """Objective for a batch of index vectors, one per row.

        Rows are evaluated in sorted index order so permutations of the same
        set give bitwise identical results.
        """
        u = np.sort(np.asarray(index_rows, dtype=np.intp), axis=1)
        num = self._table[u[:, 0]].copy()
        den = self._power[u[:, 0]].copy()
        for j in range(1, u.shape[1]):
            num += self._table[u[:, j]]
            den += self._power[u[:, j]]
        worst = (num.real**2 + num.imag**2).min(axis=1)
        out = np.zeros_like(den)
        np.divide(worst, den, out=out, where=den > 0.0)
        return out

    def value(self, indices: np.ndarray) -> float:
        "Objective for a single index vector."
        return float(self.value_many(np.asarray(indices, dtype=np.intp)[None, :])[0])

    def gains(self, indices: np.ndarray) -> np.ndarray:
        "Per-angle gains over the angular grid for one index vector."
        u = np.sort(np.asarray(indices, dtype=np.intp))
        num = self._table[u[0]].copy()
        den = float(self._power[u[0]])
        for j in range(1, u.size):
            num += self._table[u[j]]
            den += float(self._power[u[j]])
        return (num.real**2 + num.imag**2) / den

    def feasible_set(self, n: int, indices: np.ndarray) -> np.ndarray:
        """Grid indices available to antenna n with the others held fixed.

        Contains the current index whenever the vector is feasible, so the
        set is never empty during the search.
        """
        u = np.asarray(indices, dtype=np.intp)
        others = np.delete(u, n)
        p = self.pgrid.positions
        if others.size == 0:
            return np.arange(p.size, dtype=np.intp)
        ok = np.all(
            np.abs(p[:, None] - p[others][None, :])
            >= self.array.min_spacing - GRID_SLACK,
            axis=1,
        )
        ok[others] = False
        return np.nonzero(ok)[0].astype(np.intp)

    def is_feasible(self, indices: np.ndarray) -> bool:
        u = np.asarray(indices, dtype=np.intp)
        if u.size != self.num_antennas:
            return False
        if np.any(u < 0) or np.any(u >= self.pgrid.count):
            return False
        return indices_feasible(u, self.pgrid.positions, self.array.min_spacing)


def sequential_round(objective: MinGainObjective, indices: np.ndarray) -> np.ndarray:
    """One coordinate-descent pass: per-antenna argmax over its feasible set.

    Antennas are visited in order and each update sees the already-updated
    positions of earlier antennas.  Ties go to the smallest grid index.  The
    returned vector never scores below the input because the incumbent index
    is always among the candidates.
    """
    u = np.array(indices, dtype=np.intp, copy=True)
    for n in range(u.size):
        cands = objective.feasible_set(n, u)
        rows = np.tile(u, (cands.size, 1))
        rows[:, n] = cands
        vals = objective.value_many(rows)
        u[n] = cands[int(np.argmax(vals))]
    return u


def gibbs_candidates(
    objective: MinGainObjective,
    n: int,
    indices: np.ndarray,
    config: OptimizerConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Candidate indices for one Gibbs step on antenna n, sorted ascending.

    Takes every feasible index within ``max_index_shift`` of the current one,
    keeps the current index itself, and fills the remaining slots (up to
    ``candidates_per_step`` total) with distinct uniform draws from the rest
    of the feasible set.  When the whole feasible set is no larger than the
    candidate budget it is returned outright and no randomness is consumed.
    """
    fs = objective.feasible_set(n, indices)
    budget = config.candidates_per_step
    if fs.size <= budget:
        return fs
    current = int(indices[n])
    chosen = [current]
    members = set(fs.tolist())
    for j in range(1, config.max_index_shift + 1):
        for cand in (current - j, current + j):
            if len(chosen) < budget and cand in members and cand not in chosen:
                chosen.append(cand)
    slots = budget - len(chosen)
    if slots > 0:
        pool = np.setdiff1d(fs, np.array(chosen, dtype=fs.dtype))
        draws = rng.choice(pool, size=min(slots, pool.size), replace=False)
        chosen.extend(int(d) for d in draws)
    return np.sort(np.array(chosen, dtype=np.intp))


def softmax_probabilities(values: np.ndarray, temperature: float) -> np.ndarray:
    "exp(temperature * v_s) / sum, evaluated stably; sums to 1."
    v = np.asarray(values, dtype=float)
    z = np.exp(temperature * (v - v.max()))
    return z / z.sum()


def _select_position(
    values: np.ndarray, temperature: float, rng: np.random.Generator
) -> int:
    # Cumulative-sum inversion of the softmax distribution.
    cum = np.cumsum(softmax_probabilities(values, temperature))
    r = float(rng.random())
    return min(int(np.searchsorted(cum, r, side="right")), cum.size - 1)


def gibbs_select(
    candidates: np.ndarray,
    values: np.ndarray,
    temperature: float,
    rng: np.random.Generator,
) -> int:
    """Sample one candidate with probability proportional to exp(T * value)."""
    pos = _select_position(values, temperature, rng)
    return int(np.asarray(candidates)[pos])


def gibbs_phase(
    objective: MinGainObjective,
    indices: np.ndarray,
    config: OptimizerConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float, list[float]]:
    """Gibbs-sampling exploration starting from `indices`.

    Runs ``gibbs_rounds`` rounds of per-antenna resampling and returns the
    best vector among the input and all end-of-round snapshots, its objective,
    and the best-so-far objective after each round.  The output never scores
    below the input, which is itself part of the candidate set.
    """
    u = np.array(indices, dtype=np.intp, copy=True)
    best_u = u.copy()
    best_f = objective.value(u)
    best_per_round: list[float] = []
    for _ in range(config.gibbs_rounds):
        round_f = best_f
        for n in range(u.size):
            cands = gibbs_candidates(objective, n, u, config, rng)
            rows = np.tile(u, (cands.size, 1))
            rows[:, n] = cands
            vals = objective.value_many(rows)
            pos = _select_position(vals, config.gibbs_temperature, rng)
            u[n] = cands[pos]
            round_f = float(vals[pos])
        assert objective.is_feasible(u)
        if round_f > best_f:
            best_f = round_f
            best_u = u.copy()
        best_per_round.append(best_f)
    return best_u, best_f, best_per_round


def legal_indices_near(
    targets: np.ndarray, pgrid: PositionGrid, index_gap: int
) -> np.ndarray:
    """Feasible index vector closest to the given target positions.

    Rounds each (ascending) target to the nearest grid index, then sweeps
    forward and backward to restore the minimum index gap.
    """
    targets = np.sort(np.asarray(targets, dtype=float))
    m = pgrid.count
    idx = np.clip(
        np.round(targets / pgrid.spacing).astype(np.intp), 0, m - 1
    )
    for n in range(1, idx.size):
        idx[n] = max(idx[n], idx[n - 1] + index_gap)
    if idx.size and idx[-1] > m - 1:
        idx[-1] = m - 1
        for n in range(idx.size - 2, -1, -1):
            idx[n] = min(idx[n], idx[n + 1] - index_gap)
        if idx[0] < 0:
            raise InfeasibleGeometryError(
                "cannot legalize target positions onto the grid"
            )
    return idx


def default_initial_indices(
    array: ArrayConfig, pgrid: PositionGrid, index_gap: int
) -> np.ndarray:
    "Uniformly spread starting indices (single antenna starts mid-segment)."
    if array.num_antennas == 1:
        targets = np.array([0.5 * array.aperture])
    else:
        targets = (
            np.arange(array.num_antennas)
            * (array.aperture / (array.num_antennas - 1))
        )
    return legal_indices_near(targets, pgrid, index_gap)


def solve(
    array: ArrayConfig,
    coverage: CoverageSpec,
    config: OptimizerConfig | None = None,
    *,
    num_positions: int = 500,
    angular_step: float = DEFAULT_ANGULAR_STEP,
    pgrid: PositionGrid | None = None,
    grid: AngularGrid | None = None,
    profile: MnfProfile | None = None,
    initial_indices: np.ndarray | None = None,
) -> tuple[BeamSolution, OptimizerTrace]:
    """Jointly pick antenna positions and weights for max-min region coverage.

    Alternates sequential-update rounds with Gibbs exploration until the
    relative objective improvement over one outer round drops below
    ``config.convergence_tol`` or ``config.max_outer_rounds`` is reached.
    Returns the solution (positions sorted ascending, unit-power weights
    sampled from the filter profile) together with the optimization trace.

    Raises
    ------
    InfeasibleGeometryError
        If the antennas cannot be placed on the grid at the required spacing.
    ValueError
        If explicitly supplied ``initial_indices`` are infeasible.
    """
    cfg = config if config is not None else OptimizerConfig()
    t_start = time.perf_counter()
    objective = MinGainObjective(
        array,
        coverage,
        pgrid=pgrid,
        grid=grid,
        profile=profile,
        num_positions=num_positions,
        angular_step=angular_step,
    )
    if initial_indices is None:
        u = default_initial_indices(array, objective.pgrid, objective.index_gap)
    else:
        u = np.array(initial_indices, dtype=np.intp, copy=True)
    if not objective.is_feasible(u):
        raise ValueError("initial index vector violates the spacing constraint")

    rng = np.random.default_rng(cfg.seed)
    f = objective.value(u)
    trace = OptimizerTrace(initial_objective=f, initial_indices=u.copy())
    for i in range(1, cfg.max_outer_rounds + 1):
        t_round = time.perf_counter()
        u_su = sequential_round(objective, u)
        f_su = objective.value(u_su)
        if cfg.gibbs_rounds > 0:
            u_new, f_new, gibbs_best = gibbs_phase(objective, u_su, cfg, rng)
        else:
            u_new, f_new, gibbs_best = u_su, f_su, []
        assert f_su >= f and f_new >= f_su  # both phases include their input
        assert objective.is_feasible(u_new)
        trace.rounds.append(
            RoundRecord(
                index=i,
                objective_su=f_su,
                objective=f_new,
                indices=u_new.copy(),
                elapsed_seconds=time.perf_counter() - t_round,
                gibbs_best=tuple(gibbs_best),
            )
        )
        improvement = f_new - f
        u, f = u_new, f_new
        if improvement < cfg.convergence_tol * max(f, 1e-30):
            break

    order = np.sort(u)
    positions = objective.pgrid.positions[order]
    weights = sample_beamformer(objective.profile, positions)
    gains = objective.gains(u)
    worst_at = float(objective.grid.angles[int(np.argmin(gains))])
    solution = BeamSolution(
        algorithm="mnf-su-gs" if cfg.gibbs_rounds > 0 else "mnf-su",
        positions=positions,
        weights=weights,
        wavelength=array.wavelength,
        min_gain_linear=f,
        min_gain_db=float(to_db(f)),
        argmin_angle_deg=math.degrees(worst_at),
        runtime_seconds=time.perf_counter() - t_start,
        seed=cfg.seed,
    )
    return solution, trace
