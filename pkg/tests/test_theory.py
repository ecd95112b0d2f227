import math

import numpy as np
import pytest

from pulse_esprit import (
    Dirac,
    Sinc,
    Tabulated,
    TheoryContext,
    TruncatedCosineSquared,
    bernstein_pic_limit,
    check_prop_condition,
    davis_kahan_bound,
    davis_kahan_condition,
    moitra_kappa_bound,
    moitra_sigma_lower,
    prop1_bound,
    sigmaU1_lower,
    thm1_bound,
    thm2_bound,
)
from pulse_esprit.errors import (
    BelowThreshold,
    DegenerateM,
    MissingField,
    MissingTilde,
    UnboundedSupport,
)

# shared context exercising every field the end-to-end bounds read
BASE = dict(T=1.0, S=2, M=64, L=64, sigma=0.1, G_min=0.5, rho=2.0,
            lambdaS_RX=0.9, kappa_RX=1.5, pic_violation=0.02, delta=0.2)


# ---------------------------------------------------------------------------
# deterministic perturbation bound
# ---------------------------------------------------------------------------

def test_prop1_bound_hand_value():
    # lead = 2*1/(2*2*0.5) = 1; 3*0.01/0.64 + 0.05/(0.8*0.5) = 0.171875
    ctx = TheoryContext(kappa_Phi=2.0, G_max=1.0, G_min=0.5, Gamma=2.0,
                        dist_U=0.01, sigmaS_U1=0.8, pic_violation=0.05)
    assert prop1_bound(ctx) == pytest.approx(0.171875, abs=0)


def test_prop1_bound_gamma_defaults_to_chord_arc():
    ctx = TheoryContext(T=0.5, kappa_Phi=2.0, G_max=1.0, G_min=0.5,
                        dist_U=0.01, sigmaS_U1=0.8, pic_violation=0.05)
    assert ctx.effective_gamma() == 4.0
    explicit = TheoryContext(Gamma=4.0, kappa_Phi=2.0, G_max=1.0, G_min=0.5,
                             dist_U=0.01, sigmaS_U1=0.8, pic_violation=0.05)
    assert prop1_bound(ctx) == prop1_bound(explicit)
    with pytest.raises(MissingField):
        TheoryContext().effective_gamma()


def test_prop1_bound_missing_field():
    ctx = TheoryContext(kappa_Phi=2.0, G_max=1.0, G_min=0.5, Gamma=2.0,
                        dist_U=0.01, pic_violation=0.05)  # sigmaS_U1 unset
    with pytest.raises(MissingField):
        prop1_bound(ctx)


def test_prop1_bound_rejects_degenerate_inputs():
    ctx = TheoryContext(kappa_Phi=2.0, G_max=1.0, G_min=0.5, Gamma=2.0,
                        dist_U=0.01, sigmaS_U1=0.0, pic_violation=0.05)
    with pytest.raises(ValueError):
        prop1_bound(ctx)


def test_check_prop_condition_aligned_and_far(rng):
    n, S = 10, 3
    Z = rng.standard_normal((n, S)) + 1j * rng.standard_normal((n, S))
    U, _ = np.linalg.qr(Z)
    Q, _ = np.linalg.qr(rng.standard_normal((S, S)) + 1j * rng.standard_normal((S, S)))
    U1 = U[:6]

    same = check_prop_condition(U @ Q, U, U1)  # same subspace, rotated basis
    assert same.lhs < 1e-12
    assert same.rhs == pytest.approx(np.linalg.svd(U1, compute_uv=False)[-1] / 2)
    assert same.satisfied

    W, _ = np.linalg.qr(rng.standard_normal((n, S)) + 1j * rng.standard_normal((n, S)))
    far = check_prop_condition(W, U, U1)
    assert far.lhs > far.rhs  # generic random subspace is far
    assert not far.satisfied
    # Procrustes alignment never exceeds the alignment-free relaxation
    assert far.lhs <= far.relaxed_lhs + 1e-12
    assert same.lhs <= same.relaxed_lhs + 1e-12


# ---------------------------------------------------------------------------
# end-to-end bound, maximum-overlap design
# ---------------------------------------------------------------------------

def test_thm1_bound_frozen_value():
    bound, conds = thm1_bound(TheoryContext(**BASE))
    assert bound == pytest.approx(0.2645086362351142, rel=1e-14)
    assert conds == {"M_ok": True, "L_ok": True}


def test_thm1_noise_term_halves_when_L_quadruples():
    b1, _ = thm1_bound(TheoryContext(**BASE))
    b4, _ = thm1_bound(TheoryContext(**{**BASE, "L": 4 * BASE["L"]}))
    pic_term = 0.09237604307034014  # L-independent part of the frozen value
    assert b4 - pic_term == pytest.approx((b1 - pic_term) / 2.0, rel=1e-12)


def test_thm1_pic_term_vanishes_for_flat_gains():
    bound, _ = thm1_bound(TheoryContext(**{**BASE, "pic_violation": 0.0}))
    assert bound == pytest.approx(0.1721325931647741, rel=1e-14)


def test_thm1_degenerate_M():
    with pytest.raises(DegenerateM):
        thm1_bound(TheoryContext(**{**BASE, "M": 16, "S": 8}))


def test_thm1_condition_flags_flip():
    _, conds = thm1_bound(TheoryContext(**{**BASE, "M": 18, "delta": 0.1}))
    assert not conds["M_ok"]  # needs M >= 3/0.1 + 2 = 32
    _, conds = thm1_bound(TheoryContext(**{**BASE, "L": 2}))
    assert conds["M_ok"] and conds["L_ok"]  # 2 >= max(S=2, 0.356)
    _, conds = thm1_bound(TheoryContext(**{**BASE, "L": 1}))
    assert not conds["L_ok"]


def test_thm1_rejects_doublet_context_and_missing_fields():
    with pytest.raises(ValueError):
        thm1_bound(TheoryContext(**BASE, M_tilde=32))
    with pytest.raises(MissingField):
        thm1_bound(TheoryContext(**{**BASE, "rho": None}))


# ---------------------------------------------------------------------------
# end-to-end bound, random doublet design
# ---------------------------------------------------------------------------

TILDE = dict(M_tilde=32, Gt_min=0.4, rho_tilde=3.0, pic_sup_pool=0.05)


def test_thm2_bound_frozen_value():
    bound, conds = thm2_bound(TheoryContext(**BASE, **TILDE))
    assert bound == pytest.approx(5.517829698362508, rel=1e-14)
    assert conds == {"Mt_ok": True, "M_ok": True, "L_ok": True}


def test_thm2_missing_tilde_fields():
    ctx = TheoryContext(**BASE, **{**TILDE, "Gt_min": None})
    with pytest.raises(MissingTilde):
        thm2_bound(ctx)


def test_thm2_condition_flags():
    _, conds = thm2_bound(TheoryContext(**BASE, **{**TILDE, "M_tilde": 18}))
    assert not conds["Mt_ok"]  # needs M_tilde > 3*(1/0.2 + 1) = 18 strictly
    _, conds = thm2_bound(TheoryContext(**{**BASE, "L": 8}, **TILDE))
    assert not conds["L_ok"]


# ---------------------------------------------------------------------------
# grid steering-matrix spectrum bounds
# ---------------------------------------------------------------------------

def test_moitra_bounds_values_and_threshold():
    assert moitra_kappa_bound(240, 0.0125) == pytest.approx(math.sqrt(319.0 / 159.0), rel=1e-15)
    assert moitra_sigma_lower(240, 0.0125) == pytest.approx(159.0, abs=0)
    with pytest.raises(BelowThreshold):
        moitra_kappa_bound(81, 0.0125)  # threshold is M > 81
    with pytest.raises(BelowThreshold):
        moitra_sigma_lower(81, 0.0125)
    with pytest.raises(ValueError):
        moitra_kappa_bound(100, 0.0)


def test_moitra_kappa_decreases_with_M():
    vals = [moitra_kappa_bound(M, 0.05) for M in (30, 60, 120, 240)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1.0


def test_sigmaU1_lower_values():
    assert sigmaU1_lower(1.0, 2, math.sqrt(8.0)) == pytest.approx(0.8660254037844386)
    assert sigmaU1_lower(2.0, 2, 1.0) == 0.0  # vacuous regime clips to zero
    with pytest.raises(ValueError):
        sigmaU1_lower(0.5, 2, 1.0)


# ---------------------------------------------------------------------------
# gain smoothness limit
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a", [0.75, 0.9])
def test_bernstein_limit_cos2_analytic(a):
    # support width R = pi/(20 a), peak gain G(0) = pi/(40 a)
    assert bernstein_pic_limit(TruncatedCosineSquared(a=a)) == pytest.approx(
        math.pi**3 / (400.0 * a**2), rel=1e-12
    )


def test_bernstein_limit_edge_shapes():
    assert bernstein_pic_limit(Dirac()) == 0.0
    with pytest.raises(UnboundedSupport):
        bernstein_pic_limit(Sinc(band_edge=2.0))


def test_bernstein_limit_tabulated_triangle():
    tri = Tabulated(times=(-0.25, 0.0, 0.25), values=(0.0, 1.0, 0.0), source="unit-test")
    # R = 0.5, sup |G| = area = 0.25 at w = 0
    assert bernstein_pic_limit(tri) == pytest.approx(math.pi / 4.0, rel=1e-9)


# ---------------------------------------------------------------------------
# subspace concentration
# ---------------------------------------------------------------------------

DK = dict(L=64, n_omega=65, sigma=0.1, G_min=0.5, rho=2.0,
          kappa_Phi=2.0, sigmaS_Phi=6.0, lambdaS_RX=0.9, kappa_RX=1.5)


def test_davis_kahan_frozen_value_and_condition():
    ctx = TheoryContext(**DK)
    assert davis_kahan_bound(ctx) == pytest.approx(0.17347216662217774, rel=1e-14)
    assert davis_kahan_condition(ctx)
    assert not davis_kahan_condition(ctx, C1=100.0)


def test_davis_kahan_explicit_nu_matches_computed():
    ctx = TheoryContext(**DK)
    nu = 0.1**2 / (0.5**2 * 6.0**2 * 0.9)
    assert nu == pytest.approx(0.001234567901234568, rel=1e-15)
    direct = TheoryContext(L=64, n_omega=65, rho=2.0, kappa_Phi=2.0, kappa_RX=1.5, nu=nu)
    assert davis_kahan_bound(direct) == pytest.approx(davis_kahan_bound(ctx), rel=1e-15)


def test_davis_kahan_halves_when_L_quadruples():
    b1 = davis_kahan_bound(TheoryContext(**DK))
    b4 = davis_kahan_bound(TheoryContext(**{**DK, "L": 4 * DK["L"]}))
    assert b4 == pytest.approx(b1 / 2.0, rel=1e-15)


def test_davis_kahan_missing_parts():
    with pytest.raises(MissingField):
        davis_kahan_bound(TheoryContext(L=64, n_omega=65, rho=2.0, kappa_Phi=2.0, kappa_RX=1.5))
