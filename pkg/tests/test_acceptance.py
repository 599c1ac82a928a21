"""End-to-end acceptance checks.

Each test exercises one shipping criterion at its stated tolerance and prints
one `acceptance <name>: PASS/FAIL` line (run with ``pytest -s`` to see them
as they execute).
"""

import json
import math
import time

import numpy as np
import pytest

from mabeam import (
    ArrayConfig,
    CoverageSpec,
    MinGainObjective,
    MnfProfile,
    OptimizerConfig,
    PositionGrid,
    beam_gain,
    count_feasible_sets,
    exhaustive_solution,
    fpa_index_vector,
    fpa_solution,
    gibbs_select,
    ideal_weight,
    mnf_gain,
    sample_beamformer,
    softmax_probabilities,
    solve,
)
from mabeam.cli import main
from mabeam.optimize import default_initial_indices, sequential_round
from conftest import WAVELENGTH, random_coverage

LAM = WAVELENGTH


def report(name: str, passed: bool, detail: str = "") -> None:
    line = f"acceptance {name}: {'PASS' if passed else 'FAIL'}"
    print(f"{line}  {detail}" if detail else line)
    assert passed, f"{name}: {detail}"


def ift_simpson(profile, x, panels=4096):
    "Independent quadrature of the inverse transform of the flat spectrum."
    total = 0j
    for lo, hi, mu in zip(profile.omega_lo, profile.omega_hi, profile.amplitudes):
        if hi == lo:
            continue
        omega = np.linspace(lo, hi, panels + 1)
        f = np.exp(1j * omega * x)
        h = (hi - lo) / panels
        total += mu * (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum()) * h / (
            6 * math.pi
        )
    return total


def per_angle_oracle(objective, indices):
    "Recompute the objective by sampling weights and scanning angles one by one."
    positions = objective.pgrid.positions[np.sort(np.asarray(indices))]
    weights = sample_beamformer(objective.profile, positions)
    return min(
        beam_gain(weights, positions, float(t), objective.array.wavelength)
        for t in objective.grid.angles
    )


@pytest.fixture(scope="module")
def default_instance():
    array = ArrayConfig(LAM, 10 * LAM, 8, LAM / 2)
    coverage = CoverageSpec.from_degrees([(0.0, 20.0), (150.0, 180.0)])
    return array, coverage


@pytest.fixture(scope="module")
def desk_instance():
    array = ArrayConfig(LAM, 3 * LAM, 2, LAM / 2)
    coverage = CoverageSpec.from_degrees([(60.0, 120.0)])
    return array, coverage


def test_criterion_01_unit_power():
    rng = np.random.default_rng(101)
    profiles = [
        MnfProfile.from_coverage(random_coverage(rng), LAM) for _ in range(50)
    ]
    t0 = time.perf_counter()
    worst = 0.0
    for profile in profiles:
        for _ in range(20):
            n = int(rng.integers(1, 17))
            weights = sample_beamformer(profile, rng.uniform(0, 10 * LAM, size=n))
            worst = max(worst, abs(float(np.sum(np.abs(weights) ** 2)) - 1.0))
    elapsed = time.perf_counter() - t0
    report(
        "1 unit-power (1000 instances)",
        worst <= 1e-12 and elapsed < 1.0,
        f"max |power-1| = {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_02_ift_quadrature(default_instance):
    _, coverage = default_instance
    rng = np.random.default_rng(102)
    profiles = [MnfProfile.from_coverage(coverage, LAM)]
    profiles += [MnfProfile.from_coverage(random_coverage(rng), LAM) for _ in range(3)]
    t0 = time.perf_counter()
    worst = 0.0
    for profile in profiles:
        for x in rng.uniform(0, 10 * LAM, size=50):
            diff = abs(ideal_weight(profile, float(x)) - ift_simpson(profile, float(x)))
            worst = max(worst, diff)
    elapsed = time.perf_counter() - t0
    report(
        "2 closed form vs quadrature (4 profiles x 50 points)",
        worst <= 1e-8 and elapsed < 10.0,
        f"max |diff| = {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_03_fused_gain_equals_composition():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(1000):
        profile = MnfProfile.from_coverage(random_coverage(rng), LAM)
        n = int(rng.integers(1, 13))
        positions = rng.uniform(0, 10 * LAM, size=n)
        theta = float(rng.uniform(0, math.pi))
        fused = mnf_gain(profile, positions, theta, LAM)
        composed = beam_gain(
            sample_beamformer(profile, positions), positions, theta, LAM
        )
        worst = max(worst, abs(fused - composed))
    report(
        "3 fused objective vs composition (1000 instances)",
        worst <= 1e-12,
        f"max |diff| = {worst:.2e}",
    )


def test_criterion_04_monotone_traces(default_instance):
    array, coverage = default_instance
    t0 = time.perf_counter()
    ok = True
    for seed in range(20):
        _, trace = solve(array, coverage, OptimizerConfig(seed=seed))
        objectives = trace.objectives
        ok &= bool(np.all(np.diff(objectives) >= 0))
        previous = trace.initial_objective
        for rec in trace.rounds:
            ok &= rec.objective_su >= previous  # sequential update never loses
            ok &= rec.objective >= rec.objective_su  # Gibbs output >= its input
            previous = rec.objective
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report(
        "4 monotone traces (20 seeds, N=8, M=500)",
        ok and elapsed < 300.0,
        f"{elapsed:.1f}s",
    )


def test_criterion_05_desk_scale_oracle(desk_instance):
    array, coverage = desk_instance
    t0 = time.perf_counter()
    objective = MinGainObjective(array, coverage, num_positions=12)
    best = exhaustive_solution(array, coverage, num_positions=12)
    oracle_gap = abs(
        best.min_gain_linear
        - per_angle_oracle(
            objective, np.searchsorted(objective.pgrid.positions, best.positions)
        )
    )
    hit = 0
    never_above = True
    for seed in range(20):
        solution, trace = solve(array, coverage, OptimizerConfig(seed=seed), num_positions=12)
        never_above &= solution.min_gain_linear <= best.min_gain_linear
        if solution.min_gain_linear == best.min_gain_linear:
            hit += 1
        oracle_gap = max(
            oracle_gap,
            abs(
                solution.min_gain_linear
                - per_angle_oracle(objective, trace.rounds[-1].indices),
            ),
        )
    elapsed = time.perf_counter() - t0
    report(
        "5 exhaustive certifies the search (N=2, M=12)",
        never_above and hit >= 1 and oracle_gap <= 1e-12 and elapsed < 30.0,
        f"optimum hit on {hit}/20 seeds, oracle gap {oracle_gap:.2e}, {elapsed:.1f}s",
    )


def test_criterion_06_moving_beats_fixed(default_instance):
    array, coverage = default_instance
    pgrid = PositionGrid.uniform(array.aperture, 500)
    start = fpa_index_vector(array, pgrid)
    fixed = fpa_solution(array, coverage)
    every_seed_at_least = True
    best_db = -math.inf
    for seed in range(10):
        solution, _ = solve(
            array, coverage, OptimizerConfig(seed=seed), initial_indices=start
        )
        every_seed_at_least &= solution.min_gain_linear >= fixed.min_gain_linear
        best_db = max(best_db, solution.min_gain_db)
    margin = best_db - fixed.min_gain_db
    report(
        "6 movable array beats fixed half-wavelength array",
        every_seed_at_least and margin >= 0.5,
        f"best margin {margin:.3f} dB over 10 seeds (bound 0.5 dB)",
    )


def test_criterion_07_gain_monotone_in_antenna_count(default_instance):
    _, coverage = default_instance
    t0 = time.perf_counter()
    best_db = []
    for n in (4, 6, 8, 10):
        array = ArrayConfig(LAM, 10 * LAM, n, LAM / 2)
        best_db.append(
            max(
                solve(array, coverage, OptimizerConfig(seed=seed))[0].min_gain_db
                for seed in range(5)
            )
        )
    elapsed = time.perf_counter() - t0
    steps = np.diff(best_db)
    report(
        "7 max-min gain non-decreasing in antenna count",
        bool(np.all(steps >= -0.1)) and elapsed < 900.0,
        "best-of-5 dB: " + ", ".join(f"{v:.2f}" for v in best_db) + f", {elapsed:.0f}s",
    )


def test_criterion_08_gibbs_probability_law():
    values = np.array([0.3, 0.5, 0.7])
    probs = softmax_probabilities(values, 5.0)
    rng = np.random.default_rng(108)
    draws = 10_000
    counts = np.zeros(3)
    for _ in range(draws):
        counts[gibbs_select(np.arange(3), values, 5.0, rng)] += 1
    freq = counts / draws
    se = np.sqrt(probs * (1 - probs) / draws)
    deviations = np.abs(freq - probs) / se
    report(
        "8 candidate-selection law (10k draws)",
        bool(np.all(deviations <= 3.0)),
        "deviation/SE = " + ", ".join(f"{d:.2f}" for d in deviations),
    )


def test_criterion_09_linear_complexity(default_instance):
    array, coverage = default_instance

    def round_time(num_positions, step_deg):
        objective = MinGainObjective(
            array, coverage, num_positions=num_positions,
            angular_step=math.radians(step_deg),
        )
        u0 = default_initial_indices(array, objective.pgrid, objective.index_gap)
        sequential_round(objective, u0)  # warmup
        times = []
        for _ in range(11):
            t0 = time.perf_counter()
            sequential_round(objective, u0)
            times.append(time.perf_counter() - t0)
        return min(times)

    ratio_m = round_time(500, 0.5) / round_time(250, 0.5)
    ratio_l = round_time(500, 0.25) / round_time(500, 0.5)
    report(
        "9 round cost linear in grid sizes",
        1.6 <= ratio_m <= 2.6 and 1.6 <= ratio_l <= 2.6,
        f"positions x2 -> {ratio_m:.2f}, angles x2 -> {ratio_l:.2f} (band [1.6, 2.6])",
    )


def test_criterion_10_cli_self_consistency(tmp_path):
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        code = main(["run", "--seed", "7", "--output-dir", str(out)])
        assert code == 0
    stem = "mnf-su-gs-seed7"
    rows = (outs[0] / f"{stem}-pattern.csv").read_text().splitlines()
    parsed = [row.split(",") for row in rows[1:]]
    angles = np.array([float(r[0]) for r in parsed])
    gains = np.array([float(r[1]) for r in parsed])
    in_region = np.array([int(r[3]) for r in parsed], dtype=bool)
    summary = json.loads((outs[0] / f"{stem}-summary.json").read_text())
    gap = abs(summary["min_gain_linear"] - gains[in_region].min())

    identical = (outs[0] / f"{stem}-pattern.csv").read_bytes() == (
        outs[1] / f"{stem}-pattern.csv"
    ).read_bytes()
    s0 = json.loads((outs[0] / f"{stem}-summary.json").read_text())
    s1 = json.loads((outs[1] / f"{stem}-summary.json").read_text())
    s0.pop("runtime_seconds"), s1.pop("runtime_seconds")
    identical &= s0 == s1
    report(
        "10 CLI summary vs pattern file, reproducible reruns",
        len(parsed) == 1801 and gap <= 1e-4 and identical,
        f"{len(parsed)} rows, summary/pattern gap {gap:.2e}",
    )
