import math

import numpy as np
import pytest
from scipy.integrate import quad

from pulse_esprit import (
    Dirac,
    GroundTruth,
    MeasurementSet,
    Sinc,
    Tabulated,
    TruncatedCosineSquared,
    add_awgn,
    build_system,
    fourier_value,
    parse_pulse,
    sigma_from_snr,
    steering_matrix,
    synthesize,
)
from pulse_esprit.errors import ConfigError, NegativeSigma, ZeroSignal


def quad_transform(g, lo, hi, w):
    """Oracle: numerical Fourier transform of a real pulse on [lo, hi]."""
    re = quad(lambda t: g(t) * math.cos(2 * math.pi * w * t), lo, hi, epsabs=1e-13, limit=300)[0]
    im = quad(lambda t: -g(t) * math.sin(2 * math.pi * w * t), lo, hi, epsabs=1e-13, limit=300)[0]
    return re + 1j * im


# ---------------------------------------------------------------------------
# pulse shapes
# ---------------------------------------------------------------------------

def test_dirac_transform_is_flat():
    w = np.linspace(-5, 5, 11)
    np.testing.assert_array_equal(fourier_value(Dirac(), w), np.ones(11, dtype=complex))


def test_sinc_transform_indicator_with_half_edge():
    s = Sinc(band_edge=3.0)
    vals = fourier_value(s, np.array([-4.0, -3.0, 0.0, 2.9, 3.0, 10.0]))
    np.testing.assert_allclose(vals, [0.0, 0.5, 1.0, 1.0, 0.5, 0.0])


def test_sinc_rejects_nonpositive_band():
    with pytest.raises(ConfigError):
        Sinc(band_edge=0.0)


@pytest.mark.parametrize("a", [0.75, 0.9, 1.0])
@pytest.mark.parametrize("w", [0.0, 0.3, 1.0, 4.5, 17.0])
def test_cos2_transform_matches_quadrature(a, w):
    shape = TruncatedCosineSquared(a=a)
    h = shape.half_width
    oracle = quad_transform(lambda t: math.cos(20 * a * t) ** 2, -h, h, w)
    got = complex(fourier_value(shape, w))
    assert abs(got - oracle) < 1e-12
    assert abs(got.imag) < 1e-13  # even real pulse => real transform


@pytest.mark.parametrize("a", [0.75, 0.9])
def test_cos2_transform_at_removable_singularities(a):
    shape = TruncatedCosineSquared(a=a)
    h = shape.half_width
    # x = 2 w h hits 0 and +-1 where the closed form has 0/0 limits
    for x in (0.0, 1.0, -1.0):
        w = x / (2 * h)
        oracle = quad_transform(lambda t: math.cos(20 * a * t) ** 2, -h, h, w)
        assert abs(complex(fourier_value(shape, w)) - oracle) < 1e-12


def test_cos2_dc_value_and_width():
    a = 0.9
    shape = TruncatedCosineSquared(a=a)
    assert shape.half_width == pytest.approx(math.pi / (40 * a), rel=0, abs=0)
    assert complex(fourier_value(shape, 0.0)) == pytest.approx(shape.half_width)


def test_cos2_conjugate_symmetry():
    shape = TruncatedCosineSquared(a=0.8)
    w = np.linspace(0.1, 12.0, 50)
    plus = fourier_value(shape, w)
    minus = fourier_value(shape, -w)
    np.testing.assert_allclose(minus, np.conj(plus), atol=1e-15)


def test_cos2_rejects_nonpositive_parameter():
    with pytest.raises(ConfigError):
        TruncatedCosineSquared(a=-0.1)


def test_tabulated_matches_closed_form_pulse(tmp_path):
    a = 0.9
    shape = TruncatedCosineSquared(a=a)
    h = shape.half_width
    t = np.linspace(-h, h, 4001)
    tab = Tabulated(times=t, values=np.cos(20 * a * t) ** 2, source="unit-test")
    for w in (0.0, 0.7, 3.0, 9.0):
        ref = complex(fourier_value(shape, w))
        got = complex(fourier_value(tab, w))
        assert abs(got - ref) < 2e-8  # piecewise-linear interpolation error

    p = tmp_path / "pulse.csv"
    np.savetxt(p, np.column_stack([t, np.cos(20 * a * t) ** 2]), delimiter=",")
    tab2 = Tabulated.from_csv(str(p))
    assert abs(complex(fourier_value(tab2, 3.0)) - complex(fourier_value(tab, 3.0))) < 1e-12


def test_tabulated_conjugate_symmetry():
    t = np.linspace(-0.2, 0.3, 801)  # asymmetric support
    vals = np.exp(-40 * (t - 0.05) ** 2)
    tab = Tabulated(times=t, values=vals, source="unit-test")
    gp = complex(fourier_value(tab, 2.5))
    gm = complex(fourier_value(tab, -2.5))
    assert abs(gm - gp.conjugate()) < 1e-12


def test_parse_pulse_variants():
    assert isinstance(parse_pulse("dirac"), Dirac)
    s = parse_pulse("sinc:4.5")
    assert isinstance(s, Sinc) and s.band_edge == 4.5
    c = parse_pulse("cos2:0.85")
    assert isinstance(c, TruncatedCosineSquared) and c.a == 0.85
    assert parse_pulse(" dirac ").spec_string() == "dirac"


@pytest.mark.parametrize("bad", ["", "gauss", "cos2:", "cos2:abc", "sinc:x", "dirac:1"])
def test_parse_pulse_rejects_bad_specs(bad):
    with pytest.raises(ConfigError):
        parse_pulse(bad)


# ---------------------------------------------------------------------------
# ground truth and forward model
# ---------------------------------------------------------------------------

def test_ground_truth_reduces_locations_mod_period():
    gt = GroundTruth(period_T=1.0, locations=[1.25, 0.5], amplitudes=np.ones((2, 3)), shape=Dirac())
    np.testing.assert_allclose(np.sort(gt.locations), [0.25, 0.5])
    assert gt.S == 2 and gt.L == 3


def test_ground_truth_rejects_duplicates_mod_period():
    with pytest.raises(ValueError):
        GroundTruth(period_T=1.0, locations=[0.25, 1.25], amplitudes=np.ones((2, 2)), shape=Dirac())


def test_ground_truth_rejects_bad_amplitude_shape():
    with pytest.raises(ValueError):
        GroundTruth(period_T=1.0, locations=[0.1, 0.4], amplitudes=np.ones((3, 2)), shape=Dirac())


def test_ground_truth_rejects_wide_tabulated_support():
    t = np.linspace(-0.8, 0.8, 101)
    tab = Tabulated(times=t, values=np.exp(-t**2), source="unit-test")
    with pytest.raises(ValueError):
        GroundTruth(period_T=1.0, locations=[0.3], amplitudes=np.ones((1, 1)), shape=tab)


def test_measurement_set_requires_increasing_frequencies():
    with pytest.raises(ValueError):
        MeasurementSet(frequencies=[0.0, 0.0, 1.0], data=np.zeros((3, 2)))
    with pytest.raises(NegativeSigma):
        MeasurementSet(frequencies=[0.0, 1.0], data=np.zeros((2, 2)), noise_sigma=-1.0)


def test_steering_matrix_entries(rng):
    w = np.array([0.0, 1.0, 2.5])
    tau = np.array([0.2, 0.7])
    Phi = steering_matrix(w, tau)
    for i, wi in enumerate(w):
        for k, tk in enumerate(tau):
            assert Phi[i, k] == pytest.approx(np.exp(-2j * np.pi * tk * wi))


def test_synthesize_matches_manual_product(rng):
    shape = TruncatedCosineSquared(a=0.8)
    tau = np.array([0.11, 0.47, 0.83])
    X = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    gt = GroundTruth(period_T=1.0, locations=tau, amplitudes=X, shape=shape)
    w = np.arange(9.0)
    meas = synthesize(gt, w)
    G, Phi = build_system(gt, w)
    np.testing.assert_allclose(meas.data, G @ Phi @ X, atol=1e-14)
    assert meas.noise_sigma == 0.0


# ---------------------------------------------------------------------------
# noise
# ---------------------------------------------------------------------------

def test_add_awgn_zero_sigma_is_bit_identical(rng):
    meas = MeasurementSet(np.arange(4.0), rng.standard_normal((4, 3)) + 0j, 0.25)
    out = add_awgn(meas, 0.0, rng)
    assert np.array_equal(out.data, meas.data)
    assert out.noise_sigma == 0.25


def test_add_awgn_frozen_draw_order():
    # real block first, imaginary block second, scaled by sigma/sqrt(2)
    meas = MeasurementSet(np.arange(2.0), np.zeros((2, 3), dtype=complex))
    out = add_awgn(meas, 2.0, np.random.default_rng(777))
    assert out.data[0, 0] == pytest.approx(-1.1985679350190657 + 1.678551726029882j, abs=1e-15)


def test_add_awgn_variance_and_reproducibility():
    n, L, sigma = 200, 500, 0.7
    meas = MeasurementSet(np.arange(float(n)), np.zeros((n, L), dtype=complex))
    out1 = add_awgn(meas, sigma, np.random.default_rng(5))
    out2 = add_awgn(meas, sigma, np.random.default_rng(5))
    assert np.array_equal(out1.data, out2.data)
    est = np.mean(np.abs(out1.data) ** 2)
    assert abs(est - sigma**2) < 0.02 * sigma**2
    assert out1.noise_sigma == pytest.approx(sigma)


def test_add_awgn_combines_noise_levels_in_quadrature(rng):
    meas = MeasurementSet(np.arange(3.0), np.zeros((3, 2), dtype=complex), noise_sigma=0.3)
    out = add_awgn(meas, 0.4, rng)
    assert out.noise_sigma == pytest.approx(0.5)


def test_add_awgn_rejects_negative_sigma(rng):
    meas = MeasurementSet(np.arange(2.0), np.zeros((2, 2), dtype=complex))
    with pytest.raises(NegativeSigma):
        add_awgn(meas, -0.1, rng)


# ---------------------------------------------------------------------------
# SNR calibration
# ---------------------------------------------------------------------------

def test_sigma_from_snr_matches_mean_power():
    data = np.full((4, 2), 2.0, dtype=complex)  # mean |Y|^2 = 4
    meas = MeasurementSet(np.arange(4.0), data)
    assert sigma_from_snr(meas, 0.0) == pytest.approx(2.0)
    assert sigma_from_snr(meas, 10.0) == pytest.approx(math.sqrt(0.4))
    assert sigma_from_snr(meas, math.inf) == 0.0


def test_sigma_from_snr_rejects_zero_signal():
    meas = MeasurementSet(np.arange(3.0), np.zeros((3, 2), dtype=complex))
    with pytest.raises(ZeroSignal):
        sigma_from_snr(meas, 20.0)
