"""Shifted sub-array designs on the Fourier grid.

A design is a pair of frequency sets (Omega_1, Omega_2) with Omega_2 equal to
Omega_1 shifted by a fixed delta. Sampling the model on the union and slicing
rows with the two selectors yields the rotation-invariance relation
Pi_2 Phi = Pi_1 Phi D, D = diag(exp(-2j*pi*tau_k*delta)), which the location
solver exploits. Two constructions are provided: the maximum-overlap design
(consecutive points of the 1/T grid) and randomly selected doublets on the
1/(2T) grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySelection,
    InvalidM,
    InvalidProbability,
)
from .signal_model import GroundTruth, steering_matrix

_MAX_RESAMPLE = 100


@dataclass
class SubArrayPair:
    """Two shifted frequency sets plus selectors into their sorted union.

    omega_union[sel1] reproduces omega1 exactly (same floats, no re-derivation)
    and likewise for sel2; omega2 - (omega1 + shift_delta) is zero up to
    rounding of the grid construction.
    """

    omega1: np.ndarray
    omega2: np.ndarray
    shift_delta: float
    omega_union: np.ndarray
    sel1: np.ndarray
    sel2: np.ndarray
    kind: str = field(default="custom")

    def __post_init__(self) -> None:
        self.omega1 = np.asarray(self.omega1, dtype=float).ravel()
        self.omega2 = np.asarray(self.omega2, dtype=float).ravel()
        self.omega_union = np.asarray(self.omega_union, dtype=float).ravel()
        self.sel1 = np.asarray(self.sel1, dtype=np.intp).ravel()
        self.sel2 = np.asarray(self.sel2, dtype=np.intp).ravel()
        m = self.omega1.size
        if m < 1 or self.omega2.size != m or self.sel1.size != m or self.sel2.size != m:
            raise DimensionMismatch("sub-array pair needs equally sized nonempty sets")
        if not self.shift_delta > 0:
            raise ValueError(f"shift_delta must be positive, got {self.shift_delta}")
        for arr, name in ((self.omega1, "omega1"), (self.omega2, "omega2"),
                          (self.omega_union, "omega_union")):
            if arr.size > 1 and not np.all(np.diff(arr) > 0):
                raise ValueError(f"{name} must be sorted strictly increasing")
        if not np.array_equal(self.omega_union[self.sel1], self.omega1):
            raise ValueError("sel1 does not reproduce omega1 from the union")
        if not np.array_equal(self.omega_union[self.sel2], self.omega2):
            raise ValueError("sel2 does not reproduce omega2 from the union")
        scale = max(1.0, float(np.max(np.abs(self.omega_union))))
        if np.max(np.abs(self.omega2 - (self.omega1 + self.shift_delta))) > 1e-9 * scale:
            raise ValueError("omega2 is not omega1 shifted by shift_delta")

    @property
    def m(self) -> int:
        """Rows per sub-array."""
        return self.omega1.size

    @property
    def n_union(self) -> int:
        return self.omega_union.size


def max_overlap_design(M: int, T: float) -> SubArrayPair:
    """Consecutive-grid design: Omega_1 = {l/T, l<M}, Omega_2 = Omega_1 + 1/T.

    The union is the M+1 point grid {l/T, l<=M}; the two sub-arrays share M-1
    rows, which is the largest possible overlap at shift 1/T.
    """
    if M < 2:
        raise InvalidM(f"max-overlap design needs M >= 2, got {M}")
    if not T > 0:
        raise ValueError(f"period T must be positive, got {T}")
    union = np.arange(M + 1) / T
    sel1 = np.arange(M)
    sel2 = np.arange(1, M + 1)
    return SubArrayPair(
        omega1=union[sel1], omega2=union[sel2], shift_delta=1.0 / T,
        omega_union=union, sel1=sel1, sel2=sel2, kind="maxoverlap",
    )


def random_doublet_design(
    M_tilde: int,
    M: int,
    T: float,
    rng: np.random.Generator,
    shift: str = "half",
) -> SubArrayPair:
    """Bernoulli selection of frequency doublets on the 1/(2T) grid.

    The pool holds M_tilde doublets; doublet i occupies grid indices 2i and
    2i+1 (frequencies i/T and i/T + 1/(2T)). Each doublet is kept independently
    with probability p = M / M_tilde, so M is the expected number selected. An
    empty draw is resampled, up to 100 times.

    shift = "half" pairs each kept doublet's own two frequencies
    (shift_delta = 1/(2T)); shift = "full" shifts by a whole grid doublet
    (shift_delta = 1/T), reusing overlapping frequencies where both neighbours
    were kept.
    """
    if M_tilde < 1:
        raise InvalidM(f"doublet pool size must be >= 1, got {M_tilde}")
    if not T > 0:
        raise ValueError(f"period T must be positive, got {T}")
    p = M / M_tilde
    if not 0.0 < p <= 1.0:
        raise InvalidProbability(f"selection probability M/M_tilde = {p} outside (0, 1]")
    if shift not in ("half", "full"):
        raise ValueError(f"shift must be 'half' or 'full', got {shift!r}")

    for _ in range(_MAX_RESAMPLE):
        keep = np.flatnonzero(rng.random(M_tilde) < p)
        if keep.size:
            break
    else:
        raise EmptySelection(
            f"no doublet selected in {_MAX_RESAMPLE} draws at p = {p}"
        )

    idx1 = 2 * keep
    idx2 = idx1 + (1 if shift == "half" else 2)
    union_idx = np.unique(np.concatenate([idx1, idx2]))
    union = union_idx / (2.0 * T)
    sel1 = np.searchsorted(union_idx, idx1)
    sel2 = np.searchsorted(union_idx, idx2)
    delta = 1.0 / (2.0 * T) if shift == "half" else 1.0 / T
    return SubArrayPair(
        omega1=union[sel1], omega2=union[sel2], shift_delta=delta,
        omega_union=union, sel1=sel1, sel2=sel2, kind="doublet",
    )


def select_rows(pair: SubArrayPair, A: np.ndarray):
    """Slice a union-indexed matrix into its two sub-array blocks.

    Parameters
    ----------
    pair : SubArrayPair
    A : ndarray with A.shape[0] == pair.n_union.

    Returns
    -------
    (A1, A2) : the rows of A at sel1 and sel2 (copies, m rows each).
    """
    A = np.asarray(A)
    if A.shape[0] != pair.n_union:
        raise DimensionMismatch(
            f"matrix has {A.shape[0]} rows, union has {pair.n_union} frequencies"
        )
    return A[pair.sel1], A[pair.sel2]


def rotation_invariance_residual(pair: SubArrayPair, truth: GroundTruth) -> float:
    """Spectral norm of Pi_2 Phi - Pi_1 Phi D for the exact steering matrix.

    Zero in exact arithmetic for any valid pair; in floating point it measures
    how closely the constructed grid honours the shift relation.
    """
    Phi = steering_matrix(pair.omega_union, truth.locations)
    P1, P2 = select_rows(pair, Phi)
    d = np.exp(-2j * np.pi * truth.locations * pair.shift_delta)
    return float(np.linalg.norm(P2 - P1 * d[None, :], 2))
