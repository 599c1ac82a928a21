"""Array geometry, steering vectors, beam gain and angular coverage grids.

Everything downstream (filter construction, position optimization, baselines)
is built on the kernels in this module.  Angles are radians and lengths are
meters throughout the library; degree conversions happen at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
"Speed of light in m/s."

GRID_SLACK = 1e-9
"Slack (meters) on minimum-spacing checks, absorbs floating-point grid rounding."

DEFAULT_ANGULAR_STEP = math.radians(0.5)
"Default angular sampling step for coverage-region discretization."

DB_FLOOR = 1e-12
"Linear gain floor applied before dB conversion to avoid -inf."


class InfeasibleGeometryError(ValueError):
    """Raised when the requested number of antennas cannot be placed."""


def to_db(gain_linear: float | np.ndarray) -> float | np.ndarray:
    "Convert linear beam gain to dB, flooring at DB_FLOOR."
    return 10.0 * np.log10(np.maximum(gain_linear, DB_FLOOR))


@dataclass(frozen=True)
class ArrayConfig:
    """Linear movable-antenna array: wavelength, movement segment and spacing.

    Attributes
    ----------
    wavelength : float
        Carrier wavelength in meters.
    aperture : float
        Length of the line segment the antennas may occupy, meters.
        Positions live in [0, aperture].
    num_antennas : int
        Number of array elements.
    min_spacing : float
        Minimum distance between any two elements, meters.
    """

    wavelength: float
    aperture: float
    num_antennas: int
    min_spacing: float

    def __post_init__(self) -> None:
        if self.wavelength <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if self.aperture <= 0:
            raise ValueError(f"aperture must be positive, got {self.aperture}")
        if self.num_antennas < 1:
            raise ValueError(f"num_antennas must be >= 1, got {self.num_antennas}")
        if self.min_spacing <= 0:
            raise ValueError(f"min_spacing must be positive, got {self.min_spacing}")
        needed = (self.num_antennas - 1) * self.min_spacing
        if needed > self.aperture + GRID_SLACK:
            raise InfeasibleGeometryError(
                f"cannot place {self.num_antennas} antennas with spacing "
                f">= {self.min_spacing} m on a {self.aperture} m segment"
            )

    @classmethod
    def from_frequency(
        cls,
        frequency_hz: float,
        aperture: float,
        num_antennas: int,
        min_spacing: float,
    ) -> "ArrayConfig":
        "Build from a carrier frequency instead of a wavelength."
        return cls(SPEED_OF_LIGHT / frequency_hz, aperture, num_antennas, min_spacing)

    @property
    def wavenumber(self) -> float:
        "2*pi / wavelength, rad/m."
        return 2.0 * math.pi / self.wavelength


@dataclass(frozen=True)
class AngularRegion:
    """One coverage subregion [theta_min, theta_max] with an optional path gain.

    Angles are radians in [0, pi].  ``path_gain`` scales the filter amplitude
    assigned to the region (regions with stronger propagation loss get a
    proportionally larger share of the transmit spectrum).
    """

    theta_min: float
    theta_max: float
    path_gain: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_min <= self.theta_max <= math.pi + 1e-12:
            raise ValueError(
                f"require 0 <= theta_min <= theta_max <= pi, got "
                f"[{self.theta_min}, {self.theta_max}]"
            )
        if self.path_gain <= 0:
            raise ValueError(f"path_gain must be positive, got {self.path_gain}")

    @classmethod
    def from_degrees(
        cls, theta_min_deg: float, theta_max_deg: float, path_gain: float = 1.0
    ) -> "AngularRegion":
        return cls(math.radians(theta_min_deg), math.radians(theta_max_deg), path_gain)

    @property
    def width(self) -> float:
        return self.theta_max - self.theta_min


@dataclass(frozen=True)
class CoverageSpec:
    """Ordered collection of pairwise-disjoint coverage subregions."""

    regions: tuple[AngularRegion, ...]

    def __post_init__(self) -> None:
        if len(self.regions) < 1:
            raise ValueError("at least one coverage region is required")
        ordered = sorted(self.regions, key=lambda r: r.theta_min)
        for prev, nxt in zip(ordered, ordered[1:]):
            if nxt.theta_min <= prev.theta_max:
                raise ValueError(
                    f"coverage regions overlap: [{prev.theta_min}, {prev.theta_max}] "
                    f"and [{nxt.theta_min}, {nxt.theta_max}]"
                )

    @classmethod
    def from_degrees(cls, bounds: list[tuple] | tuple[tuple, ...]) -> "CoverageSpec":
        """Build from (theta_min_deg, theta_max_deg[, path_gain]) tuples."""
        return cls(tuple(AngularRegion.from_degrees(*b) for b in bounds))

    @property
    def num_regions(self) -> int:
        return len(self.regions)


@dataclass(frozen=True)
class PositionGrid:
    """Uniform candidate positions p_1..p_M spanning [0, aperture]."""

    positions: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.positions, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValueError("position grid needs at least two points")
        steps = np.diff(p)
        if np.any(steps <= 0):
            raise ValueError("grid positions must be strictly increasing")
        if p[0] != 0.0:
            raise ValueError("grid must start at 0")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("grid spacing must be uniform")
        p.flags.writeable = False
        object.__setattr__(self, "positions", p)

    @classmethod
    def uniform(cls, aperture: float, count: int) -> "PositionGrid":
        "Uniform grid of `count` points from 0 to `aperture` inclusive."
        if count < 2:
            raise ValueError(f"grid needs at least 2 points, got {count}")
        return cls(np.linspace(0.0, aperture, count))

    @property
    def count(self) -> int:
        return self.positions.size

    @property
    def spacing(self) -> float:
        return float(self.positions[1] - self.positions[0])

    def min_index_gap(self, min_spacing: float) -> int:
        """Smallest index offset whose position difference satisfies min_spacing.

        On a uniform grid the pairwise spacing constraint is equivalent to a
        minimum gap between sorted indices; the GRID_SLACK absorbs rounding.
        """
        gap = int(np.searchsorted(self.positions, min_spacing - GRID_SLACK, side="left"))
        return max(gap, 1)


@dataclass(frozen=True)
class AngularGrid:
    """Flattened angular samples covering every region, plus region bookkeeping."""

    angles: np.ndarray
    region_index: np.ndarray
    region_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        a = np.asarray(self.angles, dtype=float)
        r = np.asarray(self.region_index, dtype=int)
        if a.size == 0:
            raise ValueError("angular grid is empty")
        if a.size != r.size or a.size != sum(self.region_counts):
            raise ValueError("inconsistent angular grid bookkeeping")
        a.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "region_index", r)

    @property
    def count(self) -> int:
        return self.angles.size

    def region_angles(self, k: int) -> np.ndarray:
        return self.angles[self.region_index == k]


def discretize_regions(
    coverage: CoverageSpec, angular_step: float = DEFAULT_ANGULAR_STEP
) -> AngularGrid:
    """Sample every coverage region uniformly at roughly `angular_step`.

    Each region of width Z gets max(2, ceil(Z / angular_step) + 1) samples with
    both endpoints included; zero-width regions produce a single sample.  The
    tiny ceil guard keeps exact multiples (e.g. 20 deg / 0.5 deg) from picking
    up a spurious extra sample.
    """
    if angular_step <= 0:
        raise ValueError(f"angular_step must be positive, got {angular_step}")
    chunks, owners, counts = [], [], []
    for k, region in enumerate(coverage.regions):
        width = region.width
        if width == 0.0:
            samples = np.array([region.theta_min])
        else:
            num = max(2, math.ceil(width / angular_step - 1e-9) + 1)
            samples = np.linspace(region.theta_min, region.theta_max, num)
        chunks.append(samples)
        owners.append(np.full(samples.size, k, dtype=int))
        counts.append(samples.size)
    return AngularGrid(
        angles=np.concatenate(chunks),
        region_index=np.concatenate(owners),
        region_counts=tuple(counts),
    )


def omega_interval(region: AngularRegion, wavelength: float) -> tuple[float, float]:
    """Spatial-frequency interval covered by a region.

    The map Omega = (2*pi/wavelength) * cos(theta) is decreasing on [0, pi],
    so the lower edge comes from theta_max and the upper edge from theta_min.
    """
    k = 2.0 * math.pi / wavelength
    return k * math.cos(region.theta_max), k * math.cos(region.theta_min)


def steering_vector(
    positions: np.ndarray, theta: float | np.ndarray, wavelength: float
) -> np.ndarray:
    """Array response of elements at `positions` toward steering angle(s) `theta`.

    Parameters
    ----------
    positions : (N,) array_like
        Element coordinates along the array axis, meters.
    theta : float or (L,) array_like
        Steering angle(s) in radians, each within [0, pi].
    wavelength : float
        Carrier wavelength, meters.

    Returns
    -------
    (N,) complex ndarray for scalar theta, else (L, N) with one row per angle.
    Entry n is exp(j * (2*pi/wavelength) * x_n * cos(theta)); unit magnitude.
    """
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr < -1e-12) or np.any(theta_arr > math.pi + 1e-12):
        raise ValueError("steering angle outside [0, pi]")
    positions = np.asarray(positions, dtype=float)
    k = 2.0 * math.pi / wavelength
    phase = k * np.multiply.outer(np.cos(theta_arr), positions)
    a = np.exp(1j * phase)
    return a if theta_arr.ndim else a.reshape(positions.shape)


def beam_gain(
    weights: np.ndarray,
    positions: np.ndarray,
    theta: float | np.ndarray,
    wavelength: float,
) -> float | np.ndarray:
    """Beam gain |w^H a(x, theta)|^2 toward one angle or a batch of angles.

    For unit-power weights the value lies in [0, N].
    """
    a = steering_vector(positions, theta, wavelength)
    s = a @ np.conj(np.asarray(weights))
    out = s.real**2 + s.imag**2
    return float(out) if np.ndim(out) == 0 else out


def min_gain(
    weights: np.ndarray,
    positions: np.ndarray,
    grid: AngularGrid,
    wavelength: float,
) -> tuple[float, float]:
    """Worst beam gain over all grid angles.

    Returns
    -------
    (value, argmin_angle) : the minimum gain and the angle attaining it.
    """
    gains = beam_gain(weights, positions, grid.angles, wavelength)
    i = int(np.argmin(gains))
    return float(gains[i]), float(grid.angles[i])


def unit_power(weights: np.ndarray, tol: float = 1e-9) -> bool:
    "True when the squared-magnitude sum of the weights is 1 within tol."
    w = np.asarray(weights)
    return abs(float(np.sum(w.real**2 + w.imag**2)) - 1.0) <= tol


def indices_feasible(
    indices: np.ndarray, positions: np.ndarray, min_spacing: float
) -> bool:
    """Check an index vector against distinctness and pairwise spacing.

    `indices` selects grid points from `positions`; every pair of selected
    positions must be at least min_spacing apart (minus GRID_SLACK).
    """
    u = np.asarray(indices)
    if u.size != np.unique(u).size:
        return False
    x = np.sort(np.asarray(positions)[u])
    if x.size < 2:
        return True
    return bool(np.all(np.diff(x) >= min_spacing - GRID_SLACK))


@dataclass
class BeamSolution:
    """Final output of any placement scheme: positions, weights and gain.

    `min_gain_linear` is the worst gain over the angular samples the producing
    scheme evaluated; `argmin_angle_deg` is where it occurs.  Positions are
    meters; `positions_wavelengths` reports them in carrier wavelengths.
    """

    algorithm: str
    positions: np.ndarray
    weights: np.ndarray
    wavelength: float
    min_gain_linear: float
    min_gain_db: float
    argmin_angle_deg: float
    runtime_seconds: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=float)
        self.weights = np.asarray(self.weights, dtype=complex)
        if not unit_power(self.weights):
            raise ValueError("beamforming weights must have unit power")

    @property
    def num_antennas(self) -> int:
        return self.positions.size

    @property
    def positions_wavelengths(self) -> np.ndarray:
        return self.positions / self.wavelength
