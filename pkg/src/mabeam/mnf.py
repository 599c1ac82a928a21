"""Multi-notch-filter weight synthesis.

A beam pattern that is flat over the target angular regions and dark elsewhere
corresponds, through the substitution Omega = (2*pi/lambda)*cos(theta), to a
spatial spectrum that is constant on a handful of disjoint Omega intervals and
zero outside them (a multi-notch filter).  Inverse-Fourier-transforming that
spectrum gives a closed-form continuous weight profile

    w(x) = sum_k  mu_k * (hi_k - lo_k) / (2*pi)
                  * sinc((hi_k - lo_k) * x / 2)
                  * exp(j * (lo_k + hi_k) * x / 2),

with sinc(t) = sin(t)/t.  Sampling w at the element positions and normalizing
to unit power yields the transmit beamforming vector; no per-position weight
optimization is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AngularGrid, CoverageSpec, omega_interval


class DegenerateProfileError(ValueError):
    """Raised when the profile samples to all zeros and cannot be normalized."""


def _sinc(t: np.ndarray) -> np.ndarray:
    # Unnormalized sinc with a series fallback near 0 to avoid 0/0.
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 1e-6
    safe = np.where(small, 1.0, t)
    return np.where(small, 1.0 - t * t / 6.0, np.sin(safe) / safe)


@dataclass(frozen=True)
class MnfProfile:
    """Piecewise-flat spatial spectrum: disjoint intervals with amplitudes.

    ``omega_lo``/``omega_hi`` bound each interval in rad/m; ``amplitudes``
    holds the per-interval level mu_k.  With per-region path gains beta_k the
    levels are mu_k = amplitude / beta_k, so lossier regions receive more of
    the spectrum.  The base amplitude cancels under normalization and only the
    ratios matter.
    """

    omega_lo: np.ndarray
    omega_hi: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        lo = np.atleast_1d(np.asarray(self.omega_lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.omega_hi, dtype=float))
        mu = np.atleast_1d(np.asarray(self.amplitudes, dtype=float))
        if not (lo.size == hi.size == mu.size) or lo.size == 0:
            raise ValueError("profile needs matching, nonempty interval arrays")
        if np.any(hi < lo):
            raise ValueError("each interval needs omega_lo <= omega_hi")
        if np.any(mu <= 0):
            raise ValueError("interval amplitudes must be positive")
        order = np.argsort(lo, kind="stable")
        if np.any(lo[order][1:] <= hi[order][:-1]):
            raise ValueError("spectrum intervals must be pairwise disjoint")
        for name, arr in (("omega_lo", lo), ("omega_hi", hi), ("amplitudes", mu)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_coverage(
        cls, coverage: CoverageSpec, wavelength: float, amplitude: float = 1.0
    ) -> "MnfProfile":
        """Map angular regions to spatial-frequency intervals.

        Region k spanning [theta_min, theta_max] maps to the interval
        [(2*pi/lambda)*cos(theta_max), (2*pi/lambda)*cos(theta_min)] with
        level amplitude / path_gain_k.
        """
        if amplitude <= 0:
            raise ValueError(f"amplitude must be positive, got {amplitude}")
        bounds = [omega_interval(r, wavelength) for r in coverage.regions]
        return cls(
            omega_lo=np.array([b[0] for b in bounds]),
            omega_hi=np.array([b[1] for b in bounds]),
            amplitudes=np.array([amplitude / r.path_gain for r in coverage.regions]),
        )

    @property
    def num_intervals(self) -> int:
        return self.omega_lo.size


def ideal_weight(profile: MnfProfile, x: float | np.ndarray) -> complex | np.ndarray:
    """Continuous ideal weight profile w(x), the IFT of the flat spectrum.

    Vectorized over x (meters along the array axis).  Returns a complex scalar
    for scalar input, else an array of the same shape.
    """
    x_arr = np.asarray(x, dtype=float)
    width = profile.omega_hi - profile.omega_lo
    center = 0.5 * (profile.omega_lo + profile.omega_hi)
    amp = profile.amplitudes * width / (2.0 * np.pi)
    half_wx = 0.5 * np.multiply.outer(x_arr, width)
    cx = np.multiply.outer(x_arr, center)
    values = np.sum(amp * _sinc(half_wx) * np.exp(1j * cx), axis=-1)
    return complex(values) if x_arr.ndim == 0 else values


def sample_beamformer(profile: MnfProfile, positions: np.ndarray) -> np.ndarray:
    """Unit-power beamforming weights from the profile sampled at `positions`.

    Weight n is w(x_n) divided by the l2 norm of all sampled values, so the
    amplitude/phase split of the continuous profile carries over and the
    squared magnitudes sum to 1.

    Raises
    ------
    DegenerateProfileError
        If every sampled value is zero (nothing to normalize).
    """
    tilde = np.atleast_1d(ideal_weight(profile, np.asarray(positions, dtype=float)))
    norm = np.linalg.norm(tilde)
    if not norm > 0.0:
        raise DegenerateProfileError(
            "degenerate profile: ideal weight is zero at every sampled position"
        )
    return tilde / norm


def mnf_gain(
    profile: MnfProfile,
    positions: np.ndarray,
    theta: float | np.ndarray,
    wavelength: float,
) -> float | np.ndarray:
    """Beam gain of the profile-sampled beamformer, fused into one pass.

    Evaluates |sum_n conj(w(x_n)) e^{j k x_n cos theta}|^2 / sum_n |w(x_n)|^2
    without materializing the normalized weight vector, which makes it the
    natural objective kernel for position search.  Matches the composition
    beam_gain(sample_beamformer(...), ...) exactly up to roundoff.
    """
    positions = np.asarray(positions, dtype=float)
    tilde = np.atleast_1d(ideal_weight(profile, positions))
    power = float(np.sum(tilde.real**2 + tilde.imag**2))
    if not power > 0.0:
        raise DegenerateProfileError(
            "degenerate profile: ideal weight is zero at every sampled position"
        )
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr < -1e-12) or np.any(theta_arr > np.pi + 1e-12):
        raise ValueError("steering angle outside [0, pi]")
    k = 2.0 * np.pi / wavelength
    phase = k * np.multiply.outer(np.cos(theta_arr), positions)
    s = np.exp(1j * phase) @ np.conj(tilde)
    out = (s.real**2 + s.imag**2) / power
    return float(out) if np.ndim(out) == 0 else out


def min_mnf_gain(
    profile: MnfProfile,
    positions: np.ndarray,
    grid: AngularGrid,
    wavelength: float,
) -> tuple[float, float]:
    "Worst fused gain over the grid; returns (value, argmin angle)."
    gains = mnf_gain(profile, positions, grid.angles, wavelength)
    i = int(np.argmin(gains))
    return float(gains[i]), float(grid.angles[i])
