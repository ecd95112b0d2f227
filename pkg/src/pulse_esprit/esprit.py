"""Location recovery by shift invariance, plus alternating LS gain recovery.

The estimated signal subspace Uhat spans (approximately) col(G Phi). Slicing
its rows with the sub-array selectors gives Uhat_1, Uhat_2 related by the
rotation Psi = pinv(Uhat_1) Uhat_2 whose eigenvalues are exp(-2j*pi*tau_k*delta)
regardless of the gains, as long as both sub-arrays see the same gain value
(the pairwise-identical-gain condition). Locations follow from the eigenvalue
phases; gains and amplitudes are then recovered by alternating least squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenFailure,
    IllConditionedSubarray,
    RankDeficient,
)
from .signal_model import MeasurementSet, steering_matrix
from .subarrays import SubArrayPair, select_rows
from .subspace import SubspaceEstimate, empirical_covariance, signal_subspace

_PINV_RTOL = 1e-10
_SIGMA_MIN = 1e-10
_ALS_TOL = 1e-8
_ALS_MAX_ITER = 100


@dataclass
class EstimationResult:
    """Estimated locations (sorted ascending) and the quantities behind them.

    eigenvalues[k] is the rotation eigenvalue that produced locations[k].
    gains/amplitudes are filled by the full pipeline only; diagnostics carries
    sigmaS_U1hat (smallest singular value of the first sub-array block) and
    psi_condition (condition number of the rotation matrix).
    """

    locations: np.ndarray
    eigenvalues: np.ndarray
    gains: Optional[np.ndarray] = None
    amplitudes: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)


def _pinv(A: np.ndarray, rtol: float = _PINV_RTOL) -> np.ndarray:
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    keep = s > rtol * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * inv[None, :]) @ U.conj().T


def esprit_locate(subspace, pair: SubArrayPair, T: float) -> EstimationResult:
    """Decode locations from the rotation between the two sub-array blocks.

    Parameters
    ----------
    subspace : SubspaceEstimate or |Omega| x S basis array (rows indexed by
        pair.omega_union).
    pair : SubArrayPair with at least S rows per sub-array.
    T : period; locations are reported mod T, sorted ascending.

    Raises
    ------
    IllConditionedSubarray
        sigma_S(Uhat_1) <= 1e-10: the first block does not determine Psi.
    EigenFailure
        the eigenvalue iteration for Psi did not converge.
    """
    U = subspace.basis if isinstance(subspace, SubspaceEstimate) else np.asarray(subspace, dtype=complex)
    if not T > 0:
        raise ValueError(f"period T must be positive, got {T}")
    S = U.shape[1]
    if pair.m < S:
        raise DimensionMismatch(f"sub-arrays have {pair.m} rows, need >= S = {S}")
    U1, U2 = select_rows(pair, U)
    s1 = np.linalg.svd(U1, compute_uv=False)
    sigmaS_U1 = float(s1[-1])
    if sigmaS_U1 <= _SIGMA_MIN:
        raise IllConditionedSubarray(
            f"sigma_S(Uhat_1) = {sigmaS_U1:.3e} <= {_SIGMA_MIN}"
        )
    Psi = _pinv(U1) @ U2
    try:
        lam = np.linalg.eigvals(Psi)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"rotation eigendecomposition failed: {exc}") from exc
    # eigenvalue phase -> location; shift_delta sets the decodable range
    tau = (-np.angle(lam) / (2.0 * np.pi * pair.shift_delta)) % T
    order = np.argsort(tau, kind="stable")
    spsi = np.linalg.svd(Psi, compute_uv=False)
    psi_cond = float("inf") if spsi[-1] == 0 else float(spsi[0] / spsi[-1])
    return EstimationResult(
        locations=tau[order],
        eigenvalues=lam[order],
        diagnostics={"sigmaS_U1hat": sigmaS_U1, "psi_condition": psi_cond},
    )


def estimate_gains(
    meas: MeasurementSet,
    locations,
    max_iter: int = _ALS_MAX_ITER,
):
    """Alternating least squares for the gain profile and snapshot amplitudes.

    With locations fixed, Y ~ diag(g) Phi X is bilinear in (g, X). Starting
    from g = 1, alternately solve the global LS problem for X and the scalar
    per-row LS problems for g until the relative residual change drops below
    1e-8 or max_iter iterations pass. The returned gains are scaled so
    max |g_i| = 1 (the complementary factor is absorbed into X); the remaining
    global phase between g and X is not identifiable.

    Returns
    -------
    (gains, amplitudes) : (|Omega|,) complex and (S, L) complex arrays.
    """
    tau = np.asarray(locations, dtype=float).ravel()
    if np.unique(tau).size != tau.size:
        raise ValueError("locations must be distinct")
    Y = meas.data
    n, S = Y.shape[0], tau.size
    if n < S:
        raise DimensionMismatch(f"{n} frequencies cannot resolve {S} gains x amplitudes")
    Phi = steering_matrix(meas.frequencies, tau)
    sphi = np.linalg.svd(Phi, compute_uv=False)
    if sphi[-1] < 1e-12 * sphi[0]:
        raise RankDeficient(
            f"steering matrix at the estimated locations is rank-deficient "
            f"(sigma_S/sigma_1 = {sphi[-1] / sphi[0]:.3e})"
        )
    g = np.ones(n, dtype=complex)
    X = np.zeros((S, Y.shape[1]), dtype=complex)
    prev = None
    for _ in range(max_iter):
        A = g[:, None] * Phi
        X = np.linalg.lstsq(A, Y, rcond=None)[0]
        M = Phi @ X
        num = np.sum(M.conj() * Y, axis=1)
        den = np.sum(np.abs(M) ** 2, axis=1)
        g = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        res = float(np.linalg.norm(Y - g[:, None] * M))
        if prev is not None and abs(prev - res) <= _ALS_TOL * max(prev, 1e-300):
            break
        prev = res
    peak = float(np.max(np.abs(g)))
    if peak > 0:
        g = g / peak
        X = X * peak
    return g, X


def solve(meas: MeasurementSet, pair: SubArrayPair, S: int, T: float) -> EstimationResult:
    """Full pipeline: covariance -> subspace -> locations -> gains/amplitudes.

    Requires L >= S snapshots and frequencies matching pair.omega_union.
    Component failures (ill-conditioned sub-array, eigen failure, rank-deficient
    steering matrix) propagate as their own exception types.
    """
    if meas.n_frequencies != pair.n_union:
        raise DimensionMismatch(
            f"measurement has {meas.n_frequencies} frequencies, pair union {pair.n_union}"
        )
    if meas.L < S:
        raise DimensionMismatch(f"need L >= S snapshots, got L={meas.L}, S={S}")
    cov = empirical_covariance(meas)
    sub = signal_subspace(cov, S)
    result = esprit_locate(sub, pair, T)
    gains, amps = estimate_gains(meas, result.locations)
    result.gains = gains
    result.amplitudes = amps
    result.diagnostics["subspace_eigenvalues"] = sub.eigenvalues
    return result
