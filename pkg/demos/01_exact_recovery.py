"""Exact location recovery from noise-free snapshots.

A stream of S point pulses is observed through M+1 Fourier samples and L
snapshots. With a flat gain profile (Dirac pulse) and no noise, the rotation
between the two shifted sub-arrays determines the locations exactly, whatever
the amplitudes are. This script builds one such instance end to end and
prints the recovery error.
"""

import numpy as np

from pulse_esprit import (
    Dirac,
    GroundTruth,
    matching_distance,
    max_overlap_design,
    rotation_invariance_residual,
    solve,
    synthesize,
)

rng = np.random.default_rng(0)

T = 1.0
S = 5
M = 24
L = 12

# locations on the circle [0, T), separated by at least 0.05
locations = np.array([0.08, 0.21, 0.39, 0.66, 0.87])
amplitudes = rng.standard_normal((S, L)) + 1j * rng.standard_normal((S, L))
truth = GroundTruth(period_T=T, locations=locations, amplitudes=amplitudes, shape=Dirac())

# consecutive-grid design: Omega_1 = {0..M-1}/T, Omega_2 = Omega_1 + 1/T
pair = max_overlap_design(M, T)
print(f"sub-arrays: {pair.m} rows each, union of {pair.n_union} frequencies, "
      f"shift {pair.shift_delta}")

# the structural premise: Pi_2 Phi = Pi_1 Phi D holds to rounding error
print(f"rotation-invariance residual: {rotation_invariance_residual(pair, truth):.2e}")

meas = synthesize(truth, pair.omega_union)
result = solve(meas, pair, S, T)

print("\n true location   estimate        error")
for t, e in zip(truth.locations, result.locations):
    print(f"   {t:.6f}      {e:.6f}    {abs(t - e):.2e}")

md = matching_distance(truth.locations, result.locations, metric="torus", T=T)
print(f"\nmatching distance: {md:.3e}  (noise-free recovery is exact to rounding)")
print(f"smallest sub-array singular value: {result.diagnostics['sigmaS_U1hat']:.3f}")
