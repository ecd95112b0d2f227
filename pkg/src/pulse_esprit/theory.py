"""Evaluators for the deterministic and probabilistic location-error bounds.

Every evaluator takes measured or configured quantities through a
TheoryContext and returns the bound exactly as stated, with no fitted
constants: where a statement contains an unspecified absolute constant the
evaluator exposes it as a keyword defaulting to 1.0, so condition flags are
shape checks rather than certified thresholds.

Conventions: Delta (field `delta`) is the minimum wrap-around separation
normalized by the period T; rho = G_max/G_min over the sampled frequencies;
tilde quantities refer to the full doublet pool grid rather than the selected
rows; lambdaS_RX and kappa_RX are the smallest eigenvalue and condition number
of the snapshot correlation (1/L) X X^H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BelowThreshold,
    DegenerateM,
    MissingField,
    MissingTilde,
    UnboundedSupport,
)
from .signal_model import (
    Dirac,
    PulseShape,
    Sinc,
    Tabulated,
    TruncatedCosineSquared,
    fourier_value,
)
from .subspace import subspace_distance

_TILDE_FIELDS = {"M_tilde", "Gt_min", "Gt_max", "rho_tilde", "pic_sup_pool"}


@dataclass
class TheoryContext:
    """Bag of quantities the bound evaluators draw from; unset fields are None."""

    T: Optional[float] = None
    S: Optional[int] = None
    M: Optional[int] = None
    M_tilde: Optional[int] = None
    L: Optional[int] = None
    sigma: Optional[float] = None
    Gamma: Optional[float] = None
    delta: Optional[float] = None
    n_omega: Optional[int] = None
    G_min: Optional[float] = None
    G_max: Optional[float] = None
    rho: Optional[float] = None
    Gt_min: Optional[float] = None
    Gt_max: Optional[float] = None
    rho_tilde: Optional[float] = None
    sigmaS_Phi: Optional[float] = None
    kappa_Phi: Optional[float] = None
    sigmaS_U1: Optional[float] = None
    lambdaS_RX: Optional[float] = None
    kappa_RX: Optional[float] = None
    nu: Optional[float] = None
    pic_violation: Optional[float] = None
    pic_sup_pool: Optional[float] = None
    dist_U: Optional[float] = None

    def effective_gamma(self) -> float:
        """Gamma for the deterministic bound; defaults to the chord-arc 2/T."""
        if self.Gamma is not None:
            return self.Gamma
        if self.T is None:
            raise MissingField("Gamma default 2/T needs T")
        return 2.0 / self.T


def _require(ctx: TheoryContext, *names: str):
    vals = []
    for name in names:
        v = getattr(ctx, name)
        if v is None:
            cls = MissingTilde if name in _TILDE_FIELDS else MissingField
            raise cls(f"theory context field {name!r} is unset")
        vals.append(v)
    return vals


def _nu(ctx: TheoryContext) -> float:
    """Noise-to-signal ratio nu = sigma^2 / (G_min^2 sigma_S^2(Phi) lambda_S(R_X))."""
    if ctx.nu is not None:
        return ctx.nu
    sigma, G_min, sigmaS_Phi, lam = _require(ctx, "sigma", "G_min", "sigmaS_Phi", "lambdaS_RX")
    return sigma**2 / (G_min**2 * sigmaS_Phi**2 * lam)


# ---------------------------------------------------------------------------
# deterministic perturbation bound
# ---------------------------------------------------------------------------

def prop1_bound(ctx: TheoryContext) -> float:
    """Deterministic matching-distance bound from subspace error and PIC slack.

        md <= kappa(Phi) G_max / (2 Gamma G_min)
              * ( 3 dist(Uhat, U) / sigma_S^2(U_1)
                  + pic_violation / (sigma_S(U_1) G_min) )

    Valid whenever the companion condition (check_prop_condition) holds;
    Gamma defaults to 2/T.
    """
    kappa, G_max, G_min, dist, s1, pic = _require(
        ctx, "kappa_Phi", "G_max", "G_min", "dist_U", "sigmaS_U1", "pic_violation"
    )
    gamma = ctx.effective_gamma()
    if not (s1 > 0 and G_min > 0 and gamma > 0):
        raise ValueError("prop1_bound needs sigmaS_U1, G_min, Gamma all positive")
    lead = kappa * G_max / (2.0 * gamma * G_min)
    return lead * (3.0 * dist / s1**2 + pic / (s1 * G_min))


@dataclass
class PropConditionCheck:
    """Outcome of the deterministic bound's validity condition."""

    satisfied: bool
    lhs: float
    rhs: float
    relaxed_lhs: float


def check_prop_condition(U_hat, U, U1) -> PropConditionCheck:
    """Check min_R ||Uhat - U R|| < sigma_S(U_1) / 2 over unitary R.

    The minimizer is the orthogonal Procrustes rotation from the SVD of
    U^H Uhat; relaxed_lhs = sqrt(2) * dist(Uhat, U) is the standard upper
    bound on the lhs that needs no alignment.
    """
    A = U_hat.basis if hasattr(U_hat, "basis") else np.asarray(U_hat, dtype=complex)
    B = U.basis if hasattr(U, "basis") else np.asarray(U, dtype=complex)
    U1 = np.asarray(U1, dtype=complex)
    W, _, Vh = np.linalg.svd(B.conj().T @ A)
    R = W @ Vh
    lhs = float(np.linalg.norm(A - B @ R, 2))
    rhs = float(np.linalg.svd(U1, compute_uv=False)[-1]) / 2.0
    relaxed = math.sqrt(2.0) * subspace_distance(A, B)
    return PropConditionCheck(satisfied=lhs < rhs, lhs=lhs, rhs=rhs, relaxed_lhs=relaxed)


# ---------------------------------------------------------------------------
# end-to-end bounds for the two designs
# ---------------------------------------------------------------------------

def thm1_bound(ctx: TheoryContext, C1: float = 1.0):
    """Max-overlap design bound and its sample-size conditions.

    Returns (bound, {"M_ok", "L_ok"}). The bound is

        T rho sigma / (G_min lambda_S^(1/2) sqrt(L) (1 - 2 rho^2 S / M))
            * max( rho kappa_RX^(1/2),  sigma / (G_min lambda_S^(1/2) sqrt(M)) )
      + rho / sqrt(1 - 2 rho^2 S / M) * pic_violation / ((1/T) G_min)

    with pic_violation = sup over Omega_1 of |G(w + 1/T) - G(w)|. Raises
    DegenerateM when 1 - 2 rho^2 S / M <= 0. Conditions: M >= max(S, 3/Delta+2)
    and L >= max(S, C1 nsr (nsr/M or rho^2 kappa_RX / denom)) with
    nsr = sigma^2/(G_min^2 lambda_S).
    """
    if ctx.M_tilde is not None:
        raise ValueError("max-overlap bound does not apply to a doublet context")
    T, S, M, L, sigma, G_min, rho, lam, kRX, pic, delta = _require(
        ctx, "T", "S", "M", "L", "sigma", "G_min", "rho",
        "lambdaS_RX", "kappa_RX", "pic_violation", "delta",
    )
    denom = 1.0 - 2.0 * rho**2 * S / M
    if denom <= 0.0:
        raise DegenerateM(f"1 - 2 rho^2 S / M = {denom:.3e} <= 0")
    sqrt_lam = math.sqrt(lam)
    noise_amp = sigma / (G_min * sqrt_lam)
    t1 = (T * rho * noise_amp / (math.sqrt(L) * denom)) * max(
        rho * math.sqrt(kRX), noise_amp / math.sqrt(M)
    )
    t2 = (rho / math.sqrt(denom)) * pic / ((1.0 / T) * G_min)
    nsr = noise_amp**2
    conditions = {
        "M_ok": M >= max(S, 3.0 / delta + 2.0),
        "L_ok": L >= max(S, C1 * nsr * max(nsr / M, rho**2 * kRX / denom)),
    }
    return t1 + t2, conditions


def thm2_bound(ctx: TheoryContext, C1: float = 1.0, C2: float = 1.0):
    """Random-doublet design bound and its conditions.

    Returns (bound, {"Mt_ok", "M_ok", "L_ok"}). The bound is

        T rho~^3 sigma / (G~_min lambda_S^(1/2) sqrt(L))
            * max( rho~ kappa_RX^(1/2), sigma / (G~_min lambda_S^(1/2) sqrt(M)) )
      + rho~^2 * pic_sup_pool / ((1/(2T)) G~_min)

    where tilde quantities are over the full pool grid and pic_sup_pool is the
    sup over that grid of |G(w + 1/(2T)) - G(w)|. Conditions:
    M_tilde > max(S, 3 (1/Delta + 1)); M >= C1 S ln M;
    L >= max(S, C2 nsr~ rho~^2 max(rho~^2 kappa_RX, nsr~ / M)) with
    nsr~ = sigma^2/(G~_min^2 lambda_S).
    """
    T, S, M, Mt, L, sigma, Gt_min, rho_t, lam, kRX, pic_pool, delta = _require(
        ctx, "T", "S", "M", "M_tilde", "L", "sigma", "Gt_min", "rho_tilde",
        "lambdaS_RX", "kappa_RX", "pic_sup_pool", "delta",
    )
    sqrt_lam = math.sqrt(lam)
    noise_amp = sigma / (Gt_min * sqrt_lam)
    t1 = (T * rho_t**3 * noise_amp / math.sqrt(L)) * max(
        rho_t * math.sqrt(kRX), noise_amp / math.sqrt(M)
    )
    t2 = rho_t**2 * pic_pool / ((1.0 / (2.0 * T)) * Gt_min)
    nsr = noise_amp**2
    conditions = {
        "Mt_ok": Mt > max(S, 3.0 * (1.0 / delta + 1.0)),
        "M_ok": M >= C1 * S * math.log(M),
        "L_ok": L >= max(S, C2 * nsr * rho_t**2 * max(rho_t**2 * kRX, nsr / M)),
    }
    return t1 + t2, conditions


# ---------------------------------------------------------------------------
# supporting lemmas
# ---------------------------------------------------------------------------

def moitra_kappa_bound(M: int, delta: float) -> float:
    """Condition-number bound for the M-point grid steering matrix.

    Valid for M > 1/Delta + 1 (Delta normalized by T):
    kappa(Phi) <= sqrt((M + 1/Delta - 1) / (M - 1/Delta - 1)); below the
    threshold raises BelowThreshold. Decreasing in M, so it also covers any
    superset grid.
    """
    if not 0 < delta:
        raise ValueError(f"delta must be positive, got {delta}")
    inv = 1.0 / delta
    if M <= inv + 1.0:
        raise BelowThreshold(f"need M > 1/Delta + 1 = {inv + 1.0:.3f}, got M = {M}")
    return math.sqrt((M + inv - 1.0) / (M - inv - 1.0))


def moitra_sigma_lower(M: int, delta: float) -> float:
    """Companion lower bound sigma_S^2(Phi) >= M - 1/Delta - 1 (same validity)."""
    if not 0 < delta:
        raise ValueError(f"delta must be positive, got {delta}")
    inv = 1.0 / delta
    if M <= inv + 1.0:
        raise BelowThreshold(f"need M > 1/Delta + 1 = {inv + 1.0:.3f}, got M = {M}")
    return M - inv - 1.0


def sigmaU1_lower(rho: float, S: int, sigmaS_Phi: float) -> float:
    """Lower bound on sigma_S of the first sub-array block of the oracle basis:

        min(sigma_S(U_1), sigma_S(U_2))^2 >= 1 - rho^2 S / sigma_S^2(Phi),

    clipped at zero before the square root (the bound is vacuous when the
    right side is negative).
    """
    if not (rho >= 1.0 and S >= 1 and sigmaS_Phi > 0):
        raise ValueError("need rho >= 1, S >= 1, sigmaS_Phi > 0")
    return math.sqrt(max(0.0, 1.0 - rho**2 * S / sigmaS_Phi**2))


def _grid_sup_abs_gain(shape: PulseShape, R: float) -> float:
    # dense scan of |G| on [0, 10/R] at step 1/(100 R), then one local
    # refinement pass around the coarse argmax; |G(-w)| = |G(w)| for real pulses
    step = 1.0 / (100.0 * R)
    w = np.arange(0.0, 10.0 / R + step, step)
    vals = np.abs(np.asarray(fourier_value(shape, w)))
    i = int(np.argmax(vals))
    lo = max(0.0, w[i] - step)
    fine = np.linspace(lo, w[i] + step, 201)
    vals_fine = np.abs(np.asarray(fourier_value(shape, fine)))
    return float(max(vals.max(), vals_fine.max()))


def bernstein_pic_limit(shape: PulseShape) -> float:
    """Lipschitz constant of G for a pulse supported on an interval of width R:

        |G(w + d) - G(w)| <= d * 2 pi R * sup|G|.

    Returns 2 pi R sup|G|; the sup is located by dense grid search with local
    refinement. A Dirac pulse is the R -> 0 limit (returns 0); shapes without
    finite time support raise UnboundedSupport.
    """
    if isinstance(shape, Dirac):
        return 0.0
    if isinstance(shape, Sinc):
        raise UnboundedSupport("sinc pulses are not time-limited")
    if isinstance(shape, TruncatedCosineSquared):
        R = 2.0 * shape.half_width
    elif isinstance(shape, Tabulated):
        lo, hi = shape.support
        R = hi - lo
        if R <= 0:
            raise UnboundedSupport("degenerate tabulated support")
    else:
        raise UnboundedSupport(f"no support width known for {type(shape).__name__}")
    return 2.0 * math.pi * R * _grid_sup_abs_gain(shape, R)


# ---------------------------------------------------------------------------
# subspace concentration
# ---------------------------------------------------------------------------

def davis_kahan_bound(ctx: TheoryContext, C2: float = 1.0) -> float:
    """High-probability subspace error bound

        dist(Uhat, U) <= C2 sqrt(|Omega| nu max(rho^2 kappa^2(Phi) kappa_RX, nu) / L)

    with nu = sigma^2/(G_min^2 sigma_S^2(Phi) lambda_S(R_X)) (taken from the
    context or computed from its parts). Halves exactly when L quadruples.
    """
    nu = _nu(ctx)
    n, L, rho, kappa, kRX = _require(ctx, "n_omega", "L", "rho", "kappa_Phi", "kappa_RX")
    return C2 * math.sqrt(n * nu * max(rho**2 * kappa**2 * kRX, nu)) / math.sqrt(L)


def davis_kahan_condition(ctx: TheoryContext, C1: float = 1.0) -> bool:
    """Sample-size condition L >= C1 |Omega| nu max(rho^2 kappa^2(Phi) kappa_RX, nu)."""
    nu = _nu(ctx)
    n, L, rho, kappa, kRX = _require(ctx, "n_omega", "L", "rho", "kappa_Phi", "kappa_RX")
    return L >= C1 * n * nu * max(rho**2 * kappa**2 * kRX, nu)
