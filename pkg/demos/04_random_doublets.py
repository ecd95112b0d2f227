"""Random doublet sampling: wide apertures from few measurements.

The consecutive-grid guarantee prices resolution in rows: separation
Delta needs M >= 3/Delta + 2 grid points, and below 1/Delta + 1 points
the steering-matrix conditioning bound does not even apply. Doublet
sampling decouples the two: pairs of adjacent frequencies are drawn from
a pool of M_tilde doublets on the half-step grid, each kept with
probability M/M_tilde. The pool sets the aperture; the row budget stays
near 2M however small the separation. This script resolves a cluster 4x
tighter than the kept-row count alone guarantees, then shows the error
saturating once the pool stops limiting the aperture.
"""

import numpy as np

from pulse_esprit import (
    BelowThreshold,
    Dirac,
    GroundTruth,
    add_awgn,
    matching_distance,
    max_overlap_design,
    min_separation,
    moitra_kappa_bound,
    random_doublet_design,
    sigma_from_snr,
    solve,
    synthesize,
)

rng = np.random.default_rng(8)

T = 1.0
S = 6
L = 50
M = 40          # expected number of kept doublets
M_tilde = 260   # pool size = aperture

# tight cluster at 0.1: minimum separation 0.008
locations = np.array([0.100, 0.108, 0.117, 0.400, 0.650, 0.900])
amplitudes = rng.standard_normal((S, L)) + 1j * rng.standard_normal((S, L))
truth = GroundTruth(period_T=T, locations=locations, amplitudes=amplitudes, shape=Dirac())

delta = min_separation(truth.locations, T)
print(f"minimum separation {delta:.3f}: the consecutive-grid guarantee wants "
      f"M >= 3/Delta + 2 = {int(np.ceil(3 / delta + 2))} rows")


def trial(pair):
    clean = synthesize(truth, pair.omega_union)
    noisy = add_awgn(clean, sigma_from_snr(clean.data, snr_db=28.0), rng)
    result = solve(noisy, pair, S, T)
    return matching_distance(truth.locations, result.locations, metric="torus", T=T)


pair = random_doublet_design(M_tilde, M, T, rng)
print(f"\ndoublet draw: {pair.m} pairs kept from a pool of {M_tilde}, "
      f"{pair.n_union} distinct frequencies, shift {pair.shift_delta}")
print(f"doublet design matching distance: {trial(pair):.2e}  "
      f"(cluster resolved well below the separation)")

# a dense grid with the same row budget can also succeed at this SNR, but it
# operates outside its certificate: the conditioning bound needs > 126 points
dense = max_overlap_design(2 * M, T)
print(f"consecutive grid, {dense.n_union} rows:  {trial(dense):.2e}  (no guarantee:",
      end=" ")
try:
    moitra_kappa_bound(dense.n_union, delta)
except BelowThreshold as exc:
    print(f"{exc})")

# growing the pool at a fixed row budget sharpens the estimate until the
# aperture stops being the limit, then the error saturates
print("\npool size vs median error over 20 draws:")
for mt in (40, 80, 120, 200, 260):
    errs = [trial(random_doublet_design(mt, M, T, rng)) for _ in range(20)]
    print(f"  M_tilde = {mt:3d}   median md = {np.median(errs):.2e}")
