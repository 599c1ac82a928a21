import numpy as np
import pytest

from mabeam import ArrayConfig, CoverageSpec

WAVELENGTH = 299_792_458.0 / 1.0e9  # 1 GHz carrier


@pytest.fixture(scope="session")
def wavelength() -> float:
    return WAVELENGTH


@pytest.fixture(scope="session")
def default_array() -> ArrayConfig:
    "8 antennas on a 10-wavelength segment, half-wavelength minimum spacing."
    return ArrayConfig(WAVELENGTH, 10 * WAVELENGTH, 8, WAVELENGTH / 2)


@pytest.fixture(scope="session")
def default_coverage() -> CoverageSpec:
    "Two disjoint regions near the array axis ends."
    return CoverageSpec.from_degrees([(0.0, 20.0), (150.0, 180.0)])


@pytest.fixture(scope="session")
def desk_array() -> ArrayConfig:
    "Tiny instance small enough for exhaustive certification."
    return ArrayConfig(WAVELENGTH, 3 * WAVELENGTH, 2, WAVELENGTH / 2)


@pytest.fixture(scope="session")
def desk_coverage() -> CoverageSpec:
    return CoverageSpec.from_degrees([(60.0, 120.0)])


def random_coverage(rng: np.random.Generator, max_regions: int = 3) -> CoverageSpec:
    "Random disjoint coverage regions, each at least 0.5 deg from the next."
    while True:
        k = int(rng.integers(1, max_regions + 1))
        edges = np.sort(rng.uniform(0.0, 180.0, size=2 * k))
        if np.all(np.diff(edges) > 0.5):
            bounds = [
                (edges[2 * i], edges[2 * i + 1], float(rng.uniform(0.5, 2.0)))
                for i in range(k)
            ]
            return CoverageSpec.from_degrees(bounds)
