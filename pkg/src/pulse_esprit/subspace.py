"""Signal-subspace extraction from snapshot covariance, plus the noise-free oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigenFailure, RankDeficient
from .signal_model import MeasurementSet

_ORACLE_RTOL = 1e-12


@dataclass
class SubspaceEstimate:
    """Orthonormal basis of the estimated signal subspace.

    basis is |Omega| x S with orthonormal columns; eigenvalues are the S
    dominant covariance eigenvalues (or squared singular values for the
    oracle), sorted descending and clipped at zero.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        U = np.asarray(self.basis, dtype=complex)
        ev = np.asarray(self.eigenvalues, dtype=float).ravel()
        if U.ndim != 2 or U.shape[1] != ev.size:
            raise DimensionMismatch(f"basis {U.shape} vs {ev.size} eigenvalues")
        if ev.size and np.any(np.diff(ev) > 0):
            raise ValueError("eigenvalues must be sorted descending")
        self.basis = U
        self.eigenvalues = np.maximum(ev, 0.0)

    @property
    def S(self) -> int:
        return self.basis.shape[1]


def empirical_covariance(meas: MeasurementSet) -> np.ndarray:
    """Snapshot covariance (1/L) Y Y^H, symmetrised to be exactly Hermitian."""
    Y = meas.data
    C = (Y @ Y.conj().T) / Y.shape[1]
    return (C + C.conj().T) / 2.0


def signal_subspace(cov: np.ndarray, S: int) -> SubspaceEstimate:
    """S dominant eigenvectors of a Hermitian covariance.

    Eigenvalue ties make the basis non-unique; any orthonormal basis of the
    dominant invariant subspace is acceptable downstream.
    """
    C = np.asarray(cov, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionMismatch(f"covariance must be square, got {C.shape}")
    if not 1 <= S <= C.shape[0]:
        raise ValueError(f"need 1 <= S <= {C.shape[0]}, got S={S}")
    try:
        w, V = np.linalg.eigh(C)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"covariance eigendecomposition failed: {exc}") from exc
    order = np.arange(C.shape[0] - 1, C.shape[0] - 1 - S, -1)
    return SubspaceEstimate(basis=V[:, order], eigenvalues=w[order])


def oracle_subspace(G: np.ndarray, Phi: np.ndarray) -> SubspaceEstimate:
    """Exact signal subspace col(G Phi) for known gains and locations.

    G may be the full diagonal matrix or the 1-D gain vector. Raises
    RankDeficient when sigma_S(G Phi) < 1e-12 * sigma_1.
    """
    G = np.asarray(G, dtype=complex)
    gains = np.diagonal(G) if G.ndim == 2 else G.ravel()
    Phi = np.asarray(Phi, dtype=complex)
    if gains.size != Phi.shape[0]:
        raise DimensionMismatch(f"{gains.size} gains vs {Phi.shape[0]} steering rows")
    A = gains[:, None] * Phi
    try:
        U, s, _ = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"oracle SVD failed: {exc}") from exc
    if s[0] == 0.0 or s[-1] < _ORACLE_RTOL * s[0]:
        raise RankDeficient(
            f"G Phi numerically rank-deficient: sigma_S/sigma_1 = "
            f"{0.0 if s[0] == 0 else s[-1] / s[0]:.3e}"
        )
    return SubspaceEstimate(basis=U, eigenvalues=s**2)


def _as_basis(U) -> np.ndarray:
    if isinstance(U, SubspaceEstimate):
        return U.basis
    return np.asarray(U, dtype=complex)


def subspace_distance(U_hat, U) -> float:
    """Spectral norm of the projector difference between two subspaces.

    Both arguments are |Omega| x S orthonormal bases (or SubspaceEstimates);
    the result is sin of the largest principal angle, invariant to the choice
    of basis within each subspace.
    """
    A = _as_basis(U_hat)
    B = _as_basis(U)
    if A.shape != B.shape:
        raise DimensionMismatch(f"basis shapes differ: {A.shape} vs {B.shape}")
    P = A @ A.conj().T - B @ B.conj().T
    return float(np.linalg.norm(P, 2))
