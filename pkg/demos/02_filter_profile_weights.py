"""From coverage regions to beamforming weights via a spatial filter.

Coverage regions in angle map to disjoint spatial-frequency intervals through
Omega = (2*pi/lambda) * cos(theta).  A spectrum that is flat on those
intervals and zero elsewhere has a closed-form inverse transform (a sum of
modulated sinc terms), which serves as a continuous ideal weight profile over
the antenna segment.  Sampling it at the element positions and normalizing
gives unit-power weights with no optimization at all.
"""

import numpy as np

from mabeam import (
    CoverageSpec,
    MnfProfile,
    SPEED_OF_LIGHT,
    ideal_weight,
    mnf_gain,
    sample_beamformer,
)

lam = SPEED_OF_LIGHT / 1e9
coverage = CoverageSpec.from_degrees([(0.0, 20.0), (150.0, 180.0)])
profile = MnfProfile.from_coverage(coverage, lam)

print("spatial-frequency intervals (rad/m):")
for lo, hi, mu in zip(profile.omega_lo, profile.omega_hi, profile.amplitudes):
    print(f"  [{lo:8.3f}, {hi:8.3f}]  level {mu:.2f}")

print("\nideal weight profile along the first wavelengths of the segment:")
for x_lam in (0.0, 0.5, 1.0, 2.0, 4.0):
    w = ideal_weight(profile, x_lam * lam)
    print(f"  x = {x_lam:3.1f} lam   |w| = {abs(w):.4f}   arg = {np.angle(w):+.4f} rad")

positions = np.linspace(0, 10 * lam, 8)
weights = sample_beamformer(profile, positions)
print("\nsampled 8-element beamformer (power sums to "
      f"{np.sum(np.abs(weights) ** 2):.12f}):")
print("  amplitudes:", np.round(np.abs(weights), 4))

print("\ngain inside vs outside the target regions:")
for theta_deg in (10, 60, 90, 120, 165):
    g = mnf_gain(profile, positions, np.radians(theta_deg), lam)
    marker = "in " if theta_deg <= 20 or theta_deg >= 150 else "out"
    print(f"  {theta_deg:4d} deg [{marker}]  gain {g:8.4f}")

# Path-gain weighting: a lossier region claims a larger share of the spectrum.
weighted = CoverageSpec.from_degrees([(0.0, 20.0, 1.0), (150.0, 180.0, 4.0)])
wp = MnfProfile.from_coverage(weighted, lam)
print("\nwith path gain 4 on the second region its level drops "
      f"{profile.amplitudes[1]:.2f} -> {wp.amplitudes[1]:.2f}")
