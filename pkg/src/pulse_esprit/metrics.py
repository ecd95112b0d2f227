"""Error and conditioning metrics: matching distance, separation, spectra, PIC."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    CardinalityMismatch,
    EigenFailure,
    TooFewLocations,
    ZeroGain,
)
from .signal_model import PulseShape, fourier_value
from .subarrays import SubArrayPair

_BRUTE_MAX = 9
_perm_cache: dict = {}


@dataclass
class SpectralStats:
    """Singular-value and/or gain summary of a model matrix or gain profile."""

    sigma1: Optional[float] = None
    sigmaS: Optional[float] = None
    kappa: Optional[float] = None
    G_min: Optional[float] = None
    G_max: Optional[float] = None
    rho: Optional[float] = None

    def __post_init__(self) -> None:
        if self.sigma1 is not None and self.sigmaS is not None:
            if self.sigmaS < 0 or self.sigma1 < self.sigmaS:
                raise ValueError(f"need sigma1 >= sigmaS >= 0, got {self.sigma1}, {self.sigmaS}")
        if self.kappa is not None and not (self.kappa >= 1.0 or np.isinf(self.kappa)):
            raise ValueError(f"kappa must be >= 1 or inf, got {self.kappa}")
        if self.G_min is not None and self.G_max is not None:
            if not 0.0 < self.G_min <= self.G_max:
                raise ValueError(f"need 0 < G_min <= G_max, got {self.G_min}, {self.G_max}")
        if self.rho is not None and self.rho < 1.0:
            raise ValueError(f"rho must be >= 1, got {self.rho}")


# ---------------------------------------------------------------------------
# matching distance
# ---------------------------------------------------------------------------

def _cost_matrix(a: np.ndarray, b: np.ndarray, metric: str, T: Optional[float]) -> np.ndarray:
    diff = np.abs(a[:, None] - b[None, :])
    if metric == "plain":
        return diff
    if metric == "torus":
        if T is None or not T > 0:
            raise ValueError("torus metric needs a positive period T")
        d = diff % T
        return np.minimum(d, T - d)
    raise ValueError(f"unknown metric {metric!r}")


def _perms(S: int) -> np.ndarray:
    if S not in _perm_cache:
        _perm_cache[S] = np.array(list(itertools.permutations(range(S))), dtype=np.intp)
    return _perm_cache[S]


def _bottleneck_brute(C: np.ndarray) -> float:
    S = C.shape[0]
    perms = _perms(S)
    # gather C[k, perm[k]] for every permutation at once, then min of row maxima
    costs = C[np.arange(S)[None, :], perms]
    return float(costs.max(axis=1).min())


def _has_perfect_matching(mask: np.ndarray) -> bool:
    graph = scipy.sparse.csr_matrix(mask)
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def _bottleneck_assign(C: np.ndarray) -> float:
    # smallest threshold c such that the bipartite graph {C <= c} has a
    # perfect matching; binary search over the distinct costs
    cand = np.unique(C)
    lo, hi = 0, cand.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(C <= cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def matching_distance(
    true_locations,
    est_locations,
    metric: str = "plain",
    T: Optional[float] = None,
) -> float:
    """Minimax location error over all pairings of true and estimated sets.

    min over permutations pi of max_k d(tau_k, tauhat_pi(k)) with d either the
    plain absolute difference (default) or the wrap-around distance on a
    circle of circumference T (metric="torus"). Exact brute force for S <= 9;
    bottleneck assignment (binary search over the distinct pair costs with a
    perfect-matching feasibility test) beyond that.
    """
    a = np.asarray(true_locations, dtype=float).ravel()
    b = np.asarray(est_locations, dtype=float).ravel()
    if a.size != b.size:
        raise CardinalityMismatch(f"{a.size} true vs {b.size} estimated locations")
    if a.size == 0:
        raise CardinalityMismatch("matching distance undefined for empty sets")
    C = _cost_matrix(a, b, metric, T)
    if a.size == 1:
        return float(C[0, 0])
    if a.size <= _BRUTE_MAX:
        return _bottleneck_brute(C)
    return _bottleneck_assign(C)


def min_separation(locations, T: float, normalized: bool = True) -> float:
    """Smallest wrap-around gap between locations on the circle of length T.

    Returned divided by T by default, so bound conditions like M >= 3/Delta + 2
    are dimensionless regardless of the period.
    """
    tau = np.sort(np.asarray(locations, dtype=float).ravel() % T)
    if tau.size < 2:
        raise TooFewLocations("separation needs at least two locations")
    gaps = np.diff(tau)
    wrap = tau[0] + T - tau[-1]
    sep = float(min(gaps.min(), wrap))
    return sep / T if normalized else sep


# ---------------------------------------------------------------------------
# conditioning and gain statistics
# ---------------------------------------------------------------------------

def vandermonde_stats(Phi: np.ndarray) -> SpectralStats:
    """Extreme singular values and condition number of a steering matrix.

    kappa is reported as +inf when the smallest singular value is below the
    numerical rank threshold max(m, S) * eps * sigma_1 (duplicate locations).
    """
    A = np.asarray(Phi, dtype=complex)
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"SVD of steering matrix failed: {exc}") from exc
    s1, sS = float(s[0]), float(s[-1])
    tol = max(A.shape) * np.finfo(float).eps * s1
    kappa = float("inf") if sS <= tol else s1 / sS
    return SpectralStats(sigma1=s1, sigmaS=sS, kappa=kappa)


def pic_violation(shape: PulseShape, pair: SubArrayPair) -> float:
    """Largest gain mismatch across the pair: max_m |G(w2_m) - G(w1_m)|.

    Zero for a Dirac pulse or whenever both sub-arrays sit strictly inside a
    flat band; the shift-invariance solver is exact only in that case.
    """
    g1 = np.asarray(fourier_value(shape, pair.omega1))
    g2 = np.asarray(fourier_value(shape, pair.omega2))
    return float(np.max(np.abs(g2 - g1)))


def dynamic_range(shape: PulseShape, frequencies) -> SpectralStats:
    """Gain extremes over a frequency set: G_min, G_max, rho = G_max/G_min."""
    w = np.asarray(frequencies, dtype=float).ravel()
    g = np.abs(np.asarray(fourier_value(shape, w)))
    gmin, gmax = float(g.min()), float(g.max())
    if gmin == 0.0:
        raise ZeroGain("gain dynamic range undefined: |G| vanishes on the set")
    return SpectralStats(G_min=gmin, G_max=gmax, rho=gmax / gmin)
