"""Array response and beam gain basics.

A linear array of N elements at positions x (meters) responds to a far-field
direction theta with per-element phases (2*pi/lambda) * x_n * cos(theta).
Beam gain is the squared inner product between the unit-power weight vector
and that response; it can never exceed N.
"""

import numpy as np

from mabeam import ArrayConfig, beam_gain, steering_vector

lam = ArrayConfig.from_frequency(1e9, 1.0, 1, 0.1).wavelength
print(f"wavelength at 1 GHz: {lam:.6f} m\n")

# Three elements, the classic half-wavelength pair plus one free rider.
positions = np.array([0.0, 0.5 * lam, 1.7 * lam])

print("response toward broadside (90 deg) is phase-free:")
print(" ", np.round(steering_vector(positions, np.pi / 2, lam), 6))
print("response toward endfire (0 deg) wraps phase with position:")
print(" ", np.round(steering_vector(positions, 0.0, lam), 6))

# Uniform co-phased weights form the brightest possible broadside beam.
weights = np.ones(3) / np.sqrt(3)
print("\nbroadside gain with uniform weights:",
      round(beam_gain(weights, positions, np.pi / 2, lam), 6), "(= N)")

print("\n theta(deg)   gain")
for theta_deg in range(0, 181, 15):
    g = beam_gain(weights, positions, np.radians(theta_deg), lam)
    bar = "#" * int(round(10 * g))
    print(f"   {theta_deg:7d}   {g:6.3f}  {bar}")
