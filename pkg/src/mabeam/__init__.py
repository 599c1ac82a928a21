"""Movable-antenna placement and beamforming for multi-region beam coverage.

The package jointly selects positions for a 1-D movable-antenna array and
unit-power beamforming weights so that the worst beam gain over several
disjoint angular regions is maximized.  Weights come from sampling the inverse
Fourier transform of a piecewise-flat spatial spectrum (a multi-notch filter
over the target regions); positions come from a sequential per-antenna grid
search interleaved with Gibbs-sampling exploration.
"""

from .baselines import (
    EXHAUSTIVE_CAP,
    ExhaustiveCapError,
    count_feasible_sets,
    exhaustive_solution,
    feasible_index_sets,
    fpa_index_vector,
    fpa_positions,
    fpa_solution,
    random_solution,
)
from .core import (
    DEFAULT_ANGULAR_STEP,
    GRID_SLACK,
    SPEED_OF_LIGHT,
    AngularGrid,
    AngularRegion,
    ArrayConfig,
    BeamSolution,
    CoverageSpec,
    InfeasibleGeometryError,
    PositionGrid,
    beam_gain,
    discretize_regions,
    indices_feasible,
    min_gain,
    omega_interval,
    steering_vector,
    to_db,
    unit_power,
)
from .mnf import (
    DegenerateProfileError,
    MnfProfile,
    ideal_weight,
    min_mnf_gain,
    mnf_gain,
    sample_beamformer,
)
from .optimize import (
    MinGainObjective,
    OptimizerConfig,
    OptimizerTrace,
    RoundRecord,
    default_initial_indices,
    gibbs_candidates,
    gibbs_phase,
    gibbs_select,
    legal_indices_near,
    sequential_round,
    softmax_probabilities,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "AngularRegion",
    "AngularGrid",
    "BeamSolution",
    "CoverageSpec",
    "DegenerateProfileError",
    "DEFAULT_ANGULAR_STEP",
    "EXHAUSTIVE_CAP",
    "ExhaustiveCapError",
    "GRID_SLACK",
    "InfeasibleGeometryError",
    "MinGainObjective",
    "MnfProfile",
    "OptimizerConfig",
    "OptimizerTrace",
    "PositionGrid",
    "RoundRecord",
    "SPEED_OF_LIGHT",
    "beam_gain",
    "count_feasible_sets",
    "default_initial_indices",
    "discretize_regions",
    "exhaustive_solution",
    "feasible_index_sets",
    "fpa_index_vector",
    "fpa_positions",
    "fpa_solution",
    "gibbs_candidates",
    "gibbs_phase",
    "gibbs_select",
    "ideal_weight",
    "indices_feasible",
    "legal_indices_near",
    "min_gain",
    "min_mnf_gain",
    "mnf_gain",
    "omega_interval",
    "random_solution",
    "sample_beamformer",
    "sequential_round",
    "softmax_probabilities",
    "solve",
    "steering_vector",
    "to_db",
    "unit_power",
]
