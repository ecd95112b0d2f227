"""Acceptance gate: one test per shipped guarantee, seeds frozen.

Each test states a user-facing property of the library (exactness, bound
dominance, scaling laws, reproducibility) and checks it at desk scale with a
pinned RNG seed, so `pytest -v tests/test_acceptance.py` prints one pass/fail
line per guarantee. Tolerances are part of the contract; do not loosen them
to make a failure go away.
"""

import math

import numpy as np
import pytest
from scipy import stats as sps

from pulse_esprit import (
    CSV_COLUMNS,
    Dirac,
    GroundTruth,
    MeasurementSet,
    Sinc,
    SweepConfig,
    TheoryContext,
    TruncatedCosineSquared,
    bernstein_pic_limit,
    check_prop_condition,
    dynamic_range,
    empirical_covariance,
    esprit_locate,
    matching_distance,
    max_overlap_design,
    min_separation,
    moitra_kappa_bound,
    oracle_subspace,
    pic_violation,
    prop1_bound,
    random_doublet_design,
    rotation_invariance_residual,
    run_sweep,
    signal_subspace,
    solve,
    steering_matrix,
    subspace_distance,
    synthesize,
    vandermonde_stats,
)
from tests.conftest import separated_locations


def test_criterion_01_exact_recovery_noise_free_flat_gains():
    # 100 random instances, flat-gain pulses (point pulse and in-band sinc):
    # the full pipeline recovers every location to md <= 1e-8 * T
    rng = np.random.default_rng(11)
    for i in range(100):
        S = int(rng.integers(1, 9))
        M = int(rng.integers(S + 1, S + 24))
        L = int(rng.integers(S + 2, 2 * S + 5))
        T = float(rng.uniform(0.5, 2.0))
        shape = Dirac() if i % 2 == 0 else Sinc(band_edge=(M + 2) / T)
        locs = separated_locations(rng, S, 1e-3 * T, T)
        X = rng.standard_normal((S, L)) + 1j * rng.standard_normal((S, L))
        gt = GroundTruth(period_T=T, locations=locs, amplitudes=X, shape=shape)
        pair = max_overlap_design(M, T)
        res = solve(synthesize(gt, pair.omega_union), pair, S, T)
        md = matching_distance(gt.locations, res.locations, metric="torus", T=T)
        assert md <= 1e-8 * T


def test_criterion_02_rotation_invariance_both_designs():
    # || Pi_2 Phi - Pi_1 Phi D || <= 1e-12 for 100 random draws of each design
    rng = np.random.default_rng(22)
    for _ in range(100):
        S = int(rng.integers(1, 17))
        T = float(rng.uniform(0.5, 2.0))
        locs = separated_locations(rng, S, 1e-3 * T, T)
        gt = GroundTruth(period_T=T, locations=locs, amplitudes=np.ones((S, 1)),
                         shape=Dirac())
        M = int(rng.integers(max(2, S), 65))
        assert rotation_invariance_residual(max_overlap_design(M, T), gt) <= 1e-12
        Mt = int(rng.integers(max(2, S), 65))
        keep = int(rng.integers(1, Mt + 1))
        shift = "half" if rng.random() < 0.5 else "full"
        pair = random_doublet_design(Mt, keep, T, rng, shift)
        assert rotation_invariance_residual(pair, gt) <= 1e-12


def test_criterion_03_grid_condition_number_dominance():
    # SVD-computed kappa(Phi) never exceeds the separation-based bound, and
    # drops below sqrt(2) whenever M >= 3/Delta + 2; 200 random configurations
    rng = np.random.default_rng(303)
    sqrt2_cases = 0
    for _ in range(200):
        S = int(rng.integers(2, 9))
        delta = float(rng.uniform(0.01, min(0.2, 0.5 / S)))
        M = int(rng.integers(math.ceil(1.0 / delta + 1.0) + 1, int(3.0 / delta) + 43))
        tau = separated_locations(rng, S, delta, 1.0)
        sep = min_separation(tau, 1.0)
        kappa = vandermonde_stats(steering_matrix(np.arange(M), tau)).kappa
        assert kappa <= moitra_kappa_bound(M, sep)
        if M >= 3.0 / sep + 2.0:
            sqrt2_cases += 1
            assert kappa <= math.sqrt(2.0)
    assert sqrt2_cases >= 100  # the sqrt(2) regime is genuinely exercised


def test_criterion_04_subarray_singular_value_lower_bound():
    # sigma_S^2 of either sub-array block of the oracle basis is at least
    # 1 - rho^2 S / sigma_S^2(Phi); 200 draws with varying-gain pulses,
    # including a small-aperture corner where the right side is positive
    rng = np.random.default_rng(404)
    positive_rhs = 0

    def check(S, M, a, delta):
        nonlocal positive_rhs
        tau = separated_locations(rng, S, delta, 1.0)
        pair = max_overlap_design(M, 1.0)
        shape = TruncatedCosineSquared(a=a)
        Phi = steering_matrix(pair.omega_union, tau)
        g = np.asarray(shape.transform(pair.omega_union)).ravel()
        st = dynamic_range(shape, pair.omega_union)
        sPhi = float(np.linalg.svd(Phi, compute_uv=False)[-1])
        rhs = 1.0 - st.rho**2 * S / sPhi**2
        U = oracle_subspace(g, Phi).basis
        for sel in (pair.sel1, pair.sel2):
            s2 = float(np.linalg.svd(U[sel], compute_uv=False)[-1]) ** 2
            assert s2 >= rhs - 1e-12
        if rhs > 0:
            positive_rhs += 1

    for _ in range(170):
        S = int(rng.integers(2, 9))
        delta = float(rng.uniform(0.01, min(0.2, 0.5 / S)))
        M = int(rng.integers(math.ceil(1.0 / delta) + 2, int(2.0 / delta) + 30))
        check(S, M, float(rng.uniform(0.72, 1.0)), delta)
    for _ in range(30):
        check(2, int(rng.integers(5, 10)), float(rng.uniform(0.92, 1.0)),
              float(rng.uniform(0.40, 0.5)))
    assert positive_rhs >= 1  # otherwise the bound was only checked vacuously


def test_criterion_05_deterministic_bound_dominance_under_perturbations():
    # perturb the exact signal subspace by a controlled principal-angle
    # rotation; whenever the bound's validity condition holds, the realized
    # matching distance stays below the deterministic bound: 500 trials,
    # zero violations, both condition branches exercised
    rng = np.random.default_rng(505)
    satisfied = unsatisfied = 0
    for i in range(500):
        S = int(rng.integers(2, 7))
        M = int(rng.integers(16, 49))
        shape = Dirac() if i % 2 == 0 else \
            TruncatedCosineSquared(a=float(rng.uniform(0.72, 1.0)))
        tau = separated_locations(rng, S, 1.5 / M, 1.0)
        pair = max_overlap_design(M, 1.0)
        Phi = steering_matrix(pair.omega_union, tau)
        g = np.asarray(shape.transform(pair.omega_union)).ravel()
        U = oracle_subspace(g, Phi).basis
        U1 = U[pair.sel1]
        sU1 = float(np.linalg.svd(U1, compute_uv=False)[-1])

        Z = rng.standard_normal((U.shape[0], S)) + 1j * rng.standard_normal((U.shape[0], S))
        V, _ = np.linalg.qr(Z - U @ (U.conj().T @ Z))
        dmax = 0.8 * sU1 / math.sqrt(2.0)
        dist_target = float(np.exp(rng.uniform(np.log(1e-7), np.log(dmax))))
        th = np.arcsin(dist_target) * np.concatenate([[1.0], rng.uniform(0.0, 1.0, S - 1)])
        Uh = U @ np.diag(np.cos(th)) + V @ np.diag(np.sin(th))

        cond = check_prop_condition(Uh, U, U1)
        if not cond.satisfied:
            unsatisfied += 1
            continue
        satisfied += 1
        est = esprit_locate(Uh, pair, 1.0)
        md = matching_distance(tau, est.locations, metric="torus", T=1.0)
        st = dynamic_range(shape, pair.omega_union)
        ctx = TheoryContext(
            T=1.0, kappa_Phi=vandermonde_stats(Phi).kappa,
            G_max=st.G_max, G_min=st.G_min, sigmaS_U1=sU1,
            dist_U=subspace_distance(Uh, U),
            pic_violation=pic_violation(shape, pair),
        )
        assert md <= prop1_bound(ctx)
    assert satisfied >= 300 and unsatisfied >= 1


def test_criterion_06_error_decays_like_inverse_sqrt_snapshots():
    # point pulse, M=64, S=4, separation 0.02, SNR 15 dB: median md over 200
    # trials per point falls like L^p with p in [-0.65, -0.35] for
    # L in {32, ..., 1024}
    Ls = [32, 64, 128, 256, 512, 1024]
    cfg = SweepConfig(axes={"L": Ls}, S=4, M=64, delta=0.02, snr_db=15.0,
                      pulse="dirac", trials_per_point=200, master_seed=601)
    recs = run_sweep(cfg)
    meds = []
    for pid in range(len(Ls)):
        md = [r.md for r in recs if r.point_id == pid and r.error_code == "none"]
        assert len(md) == 200
        meds.append(float(np.median(md)))
    slope = sps.linregress(np.log(Ls), np.log(meds)).slope
    assert -0.65 <= slope <= -0.35


def test_criterion_07_error_decreases_with_narrower_pulse():
    # cos^2 pulses at SNR 20 dB, M=160, S=5, separation 0.025, L=20: the
    # median matching distance over 200 paired trials decreases as the pulse
    # narrows (a up), strictly at every adjacent width or with Spearman
    # correlation below -0.9 across the sweep. Trials are paired: each trial
    # index reuses the same amplitudes and noise across all widths, which
    # sharpens the cross-width comparison without changing any per-width
    # distribution.
    a_values = [0.75, 0.78, 0.81, 0.84, 0.87, 0.9]
    S, L, M, T = 5, 20, 160, 1.0
    locs = 0.025 * np.arange(S)
    pair = max_overlap_design(M, T)
    omega = pair.omega_union
    Phi = steering_matrix(omega, locs)
    A = {a: np.asarray(TruncatedCosineSquared(a=a).transform(omega)).ravel()[:, None] * Phi
         for a in a_values}
    mds = {a: [] for a in a_values}
    for t in range(200):
        rng = np.random.default_rng(np.random.SeedSequence((203, t)))
        X = (rng.standard_normal((S, L)) + 1j * rng.standard_normal((S, L))) / math.sqrt(2.0)
        W = rng.standard_normal((omega.size, L)) + 1j * rng.standard_normal((omega.size, L))
        for a in a_values:
            Y0 = A[a] @ X
            sigma = math.sqrt(1e-2 * float(np.mean(np.abs(Y0) ** 2)))
            Y = Y0 + (sigma / math.sqrt(2.0)) * W
            sub = signal_subspace(empirical_covariance(MeasurementSet(omega, Y)), S)
            est = esprit_locate(sub, pair, T)
            mds[a].append(matching_distance(locs, est.locations, metric="torus", T=T))
    meds = [float(np.median(mds[a])) for a in a_values]
    strictly_decreasing = all(x > y for x, y in zip(meds, meds[1:]))
    rho = sps.spearmanr(a_values, meds).statistic
    assert strictly_decreasing or rho < -0.9


def test_criterion_08_doublet_pool_saturation():
    # point pulse on the doublet design, S=7, M=40, L=50, SNR 28 dB: the
    # median md collapses once the pool passes its threshold and then
    # saturates; med(40) >= 5x med(120), med(200) and med(260) within 2x
    pool_sizes = [40, 80, 120, 200, 260]
    cfg = SweepConfig(axes={"M_tilde": pool_sizes}, T=1.0, S=7, M=40, M_tilde=260,
                      L=50, snr_db=28.0, delta=0.008, pulse="dirac",
                      subarray="doublet", trials_per_point=300, master_seed=8088)
    recs = run_sweep(cfg)
    meds = {}
    for pid, mt in enumerate(pool_sizes):
        md = [r.md for r in recs if r.point_id == pid and r.error_code == "none"]
        meds[mt] = float(np.median(md))
    assert meds[40] >= 5.0 * meds[120]
    for mt in (200, 260):
        assert 0.5 * meds[120] <= meds[mt] <= 2.0 * meds[120]


def test_criterion_09_gain_increment_within_smoothness_limit():
    # measured |G(w + d) - G(w)| / d on a dense grid never exceeds the
    # time-support smoothness limit 2 pi R sup|G| (equal to pi^3/(400 a^2)
    # for the cos^2 family)
    for a in (0.75, 0.9):
        shape = TruncatedCosineSquared(a=a)
        w = np.linspace(-30.0, 30.0, 60001)
        step = w[1] - w[0]
        g = np.real(np.asarray(shape.transform(w)))
        measured = float(np.max(np.abs(np.diff(g)))) / step
        limit = bernstein_pic_limit(shape)
        assert limit == pytest.approx(math.pi**3 / (400.0 * a**2), rel=1e-12)
        assert measured <= limit


def test_criterion_10_sweep_determinism_across_worker_counts(tmp_path):
    # byte-identical records (runtime column aside) for any worker count
    def run(workers):
        out = tmp_path / f"w{workers}.csv"
        cfg = SweepConfig(axes={"L": [8, 16], "snr_db": [10.0, 20.0]}, S=3, M=24,
                          delta=0.05, pulse="cos2:0.9", trials_per_point=5,
                          master_seed=99, workers=workers)
        run_sweep(cfg, str(out))
        lines = out.read_text().splitlines()
        rt = CSV_COLUMNS.index("runtime_ms")
        masked = []
        for line in lines[1:]:
            cells = line.split(",")
            cells[rt] = ""
            masked.append(",".join(cells))
        return lines[0], masked

    header1, rows1 = run(1)
    header3, rows3 = run(3)
    assert header1 == header3
    assert len(rows1) == 20
    assert rows1 == rows3
    assert sorted(rows1) == sorted(rows3)
