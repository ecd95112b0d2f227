"""Measurement model: pulse shapes, ground truth, and Fourier-domain synthesis.

The observation is an |Omega| x L matrix with entries

    Y[i, l] = sum_k x[k, l] * G(w_i) * exp(-2j*pi*tau_k*w_i) + Z[i, l]

where G is the (unknown) Fourier transform of the pulse shape, tau_k are the
pulse locations inside one period [0, T), X = (x[k, l]) collects snapshot
amplitudes, and Z is complex circular Gaussian noise. Everything downstream
(sub-array designs, subspace estimation, the shift-invariance location solver,
and the error-bound evaluators) consumes the objects defined here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    ConfigError,
    NegativeSigma,
    SchemaError,
    UnsupportedShape,
    ZeroSignal,
)

ArrayLike = Union[float, np.ndarray]


# ---------------------------------------------------------------------------
# pulse shapes
# ---------------------------------------------------------------------------

class PulseShape:
    """Base class; subclasses implement the continuous-time Fourier transform."""

    def transform(self, omega: ArrayLike) -> np.ndarray:
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Dirac(PulseShape):
    """Point pulse: G(w) = 1 for every w."""

    def transform(self, omega: ArrayLike) -> np.ndarray:
        return np.ones_like(np.asarray(omega, dtype=float), dtype=complex)

    def spec_string(self) -> str:
        return "dirac"


@dataclass(frozen=True)
class Sinc(PulseShape):
    """Band-limited pulse: G(w) = 1 inside |w| <= band_edge, 0 outside.

    The transform takes the value 1/2 exactly on the edge (the symmetric
    inverse-transform convention). Time support is unbounded, so smoothness
    limits that need a pulse width reject this shape.
    """

    band_edge: float

    def __post_init__(self) -> None:
        if not self.band_edge > 0:
            raise ConfigError(f"sinc band edge must be positive, got {self.band_edge}")

    def transform(self, omega: ArrayLike) -> np.ndarray:
        w = np.abs(np.asarray(omega, dtype=float))
        out = np.where(w < self.band_edge, 1.0, 0.0)
        out = np.where(w == self.band_edge, 0.5, out)
        return out.astype(complex)

    def spec_string(self) -> str:
        return f"sinc:{self.band_edge:g}"


@dataclass(frozen=True)
class TruncatedCosineSquared(PulseShape):
    """g(t) = cos^2(20*a*t) restricted to one raised-cosine arch.

    Support is |t| <= h with h = pi/(40*a); larger `a` means a narrower pulse.
    Closed-form transform (np.sinc convention, sinc(x) = sin(pi x)/(pi x)):

        G(w) = h * ( sinc(2*w*h) + sinc(1 - 2*w*h)/2 + sinc(1 + 2*w*h)/2 )

    so G(0) = h and all singularities are removable.
    """

    a: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ConfigError(f"cos^2 parameter a must be positive, got {self.a}")

    @property
    def half_width(self) -> float:
        return math.pi / (40.0 * self.a)

    def transform(self, omega: ArrayLike) -> np.ndarray:
        h = self.half_width
        x = 2.0 * h * np.asarray(omega, dtype=float)
        out = h * (np.sinc(x) + 0.5 * np.sinc(1.0 - x) + 0.5 * np.sinc(1.0 + x))
        return out.astype(complex)

    def spec_string(self) -> str:
        return f"cos2:{self.a:g}"


def _segment_kernels(x: np.ndarray) -> tuple:
    """Moments E0(x) = int_0^1 e^{-jxu} du and E1(x) = int_0^1 u e^{-jxu} du.

    Small |x| uses the Taylor series (the direct formulas divide by x and x^2);
    the switch at 0.5 keeps both branches at machine precision.
    """
    x = np.asarray(x, dtype=float)
    e0 = np.empty(x.shape, dtype=complex)
    e1 = np.empty(x.shape, dtype=complex)
    small = np.abs(x) < 0.5

    z = -1j * x[small]
    term = np.ones_like(z)
    s0 = term.copy()
    s1 = 0.5 * term
    for k in range(1, 18):
        term = term * z / k
        s0 += term / (k + 1)
        s1 += term / (k + 2)
    e0[small] = s0
    e1[small] = s1

    xl = x[~small]
    ex = np.exp(-1j * xl)
    e0[~small] = (1.0 - ex) / (1j * xl)
    e1[~small] = 1j * ex / xl - (1.0 - ex) / xl**2
    return e0, e1


@dataclass(frozen=True)
class Tabulated(PulseShape):
    """Real pulse given by (time, value) samples, piecewise-linear in between.

    The pulse is zero outside [times[0], times[-1]]. The transform integrates
    the interpolant segment by segment in closed form, so it is exact for the
    tabulated shape at every frequency (no quadrature convergence failures).
    """

    times: tuple
    values: tuple
    source: str = field(default="table", compare=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size != v.size:
            raise UnsupportedShape("tabulated pulse needs matching 1-D time/value samples")
        if t.size < 2:
            raise UnsupportedShape("tabulated pulse needs at least two samples")
        if not np.all(np.diff(t) > 0):
            raise UnsupportedShape("tabulated pulse times must be strictly increasing")

    @classmethod
    def from_csv(cls, path: str) -> "Tabulated":
        """Load from a two-column CSV (time, value); a header row is optional."""
        times, values = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if not times:  # tolerate one header row
                        continue
                    raise SchemaError(f"bad pulse table row in {path}: {row!r}")
                times.append(t)
                values.append(v)
        if len(times) < 2:
            raise UnsupportedShape(f"pulse table {path} has fewer than two samples")
        return cls(times=tuple(times), values=tuple(values), source=path)

    @property
    def support(self) -> tuple:
        return (self.times[0], self.times[-1])

    def _interp(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values, left=0.0, right=0.0)

    def transform(self, omega: ArrayLike) -> np.ndarray:
        w = np.asarray(omega, dtype=float)
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        seg = np.diff(t)
        dv = np.diff(v)
        out = np.empty(w.size, dtype=complex)
        for j, wj in enumerate(w.ravel()):
            om = 2.0 * math.pi * float(wj)
            e0, e1 = _segment_kernels(om * seg)
            out[j] = np.sum(np.exp(-1j * om * t[:-1]) * seg * (v[:-1] * e0 + dv * e1))
        return out.reshape(w.shape)

    def spec_string(self) -> str:
        return f"table:{self.source}"


def fourier_value(shape: PulseShape, omega: ArrayLike) -> ArrayLike:
    """Evaluate the pulse transform G at one frequency or an array of them.

    Parameters
    ----------
    shape : PulseShape
    omega : float or ndarray

    Returns
    -------
    complex scalar for scalar input, complex ndarray otherwise.
    """
    out = shape.transform(omega)
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return complex(np.asarray(out).reshape(()))
    return np.asarray(out)


def parse_pulse(text: str) -> PulseShape:
    """Parse a pulse spec string: dirac | sinc:<band> | cos2:<a> | table:<path>."""
    t = text.strip()
    if t == "dirac":
        return Dirac()
    kind, sep, arg = t.partition(":")
    if not sep:
        raise ConfigError(f"unknown pulse spec {text!r}")
    if kind == "sinc":
        try:
            return Sinc(band_edge=float(arg))
        except ValueError:
            raise ConfigError(f"bad sinc band edge {arg!r}")
    if kind == "cos2":
        try:
            return TruncatedCosineSquared(a=float(arg))
        except ValueError:
            raise ConfigError(f"bad cos2 parameter {arg!r}")
    if kind == "table":
        return Tabulated.from_csv(arg)
    raise ConfigError(f"unknown pulse spec {text!r}")


# ---------------------------------------------------------------------------
# ground truth and measurements
# ---------------------------------------------------------------------------

@dataclass
class GroundTruth:
    """True pulse train: S locations in [0, T), S x L amplitudes, one shape.

    Locations are reduced mod T on construction (the model only sees them
    through exp(-2j*pi*tau*w) on a 1/T-commensurate grid union, so the circle
    is the natural domain). Duplicate locations are rejected.
    """

    period_T: float
    locations: np.ndarray
    amplitudes: np.ndarray
    shape: PulseShape

    def __post_init__(self) -> None:
        if not self.period_T > 0:
            raise ValueError(f"period_T must be positive, got {self.period_T}")
        tau = np.asarray(self.locations, dtype=float).ravel() % self.period_T
        if tau.size < 1:
            raise ValueError("need at least one location")
        if np.unique(tau).size != tau.size:
            raise ValueError("locations must be distinct mod T")
        self.locations = tau
        X = np.asarray(self.amplitudes, dtype=complex)
        if X.ndim != 2 or X.shape[0] != tau.size:
            raise ValueError(f"amplitudes must be S x L with S={tau.size}, got {X.shape}")
        self.amplitudes = X
        if isinstance(self.shape, Tabulated):
            lo, hi = self.shape.support
            half = self.period_T / 2.0
            if lo < -half or hi > half:
                raise ValueError(
                    f"tabulated pulse support [{lo}, {hi}] exceeds [-T/2, T/2]"
                )

    @property
    def S(self) -> int:
        return self.locations.size

    @property
    def L(self) -> int:
        return self.amplitudes.shape[1]


@dataclass
class MeasurementSet:
    """Fourier samples: sorted frequencies, |Omega| x L data, noise level."""

    frequencies: np.ndarray
    data: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self) -> None:
        w = np.asarray(self.frequencies, dtype=float).ravel()
        if w.size and not np.all(np.diff(w) > 0):
            raise ValueError("frequencies must be strictly increasing")
        self.frequencies = w
        Y = np.asarray(self.data, dtype=complex)
        if Y.ndim != 2 or Y.shape[0] != w.size:
            raise ValueError(f"data must be |Omega| x L with |Omega|={w.size}, got {Y.shape}")
        self.data = Y
        if self.noise_sigma < 0:
            raise NegativeSigma(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    @property
    def n_frequencies(self) -> int:
        return self.frequencies.size

    @property
    def L(self) -> int:
        return self.data.shape[1]


def steering_matrix(frequencies: np.ndarray, locations: np.ndarray) -> np.ndarray:
    """Vandermonde-type matrix Phi[i, k] = exp(-2j*pi*tau_k*w_i)."""
    w = np.asarray(frequencies, dtype=float).ravel()
    tau = np.asarray(locations, dtype=float).ravel()
    return np.exp(-2j * np.pi * np.outer(w, tau))


def build_system(truth: GroundTruth, frequencies: np.ndarray):
    """Return (G, Phi) with G the diagonal gain matrix and Phi the steering matrix.

    Parameters
    ----------
    truth : GroundTruth
    frequencies : 1-D array of sample frequencies.

    Returns
    -------
    G : (n, n) complex ndarray, diag(G(w_i)).
    Phi : (n, S) complex ndarray.
    """
    w = np.asarray(frequencies, dtype=float).ravel()
    gains = np.asarray(fourier_value(truth.shape, w), dtype=complex).ravel()
    return np.diag(gains), steering_matrix(w, truth.locations)


def synthesize(truth: GroundTruth, frequencies: np.ndarray) -> MeasurementSet:
    """Noise-free forward model: Y = G Phi X as a MeasurementSet."""
    w = np.asarray(frequencies, dtype=float).ravel()
    gains = np.asarray(fourier_value(truth.shape, w), dtype=complex).ravel()
    Phi = steering_matrix(w, truth.locations)
    Y = gains[:, None] * (Phi @ truth.amplitudes)
    return MeasurementSet(frequencies=w, data=Y, noise_sigma=0.0)


def add_awgn(meas: MeasurementSet, sigma: float, rng: np.random.Generator) -> MeasurementSet:
    """Add complex circular Gaussian noise with per-entry variance sigma^2.

    Real and imaginary parts are drawn in that order, each with variance
    sigma^2 / 2, so results are reproducible given the generator state.
    sigma = 0 returns a copy with bit-identical data. The output noise_sigma
    combines in quadrature with any noise already recorded on the input.
    """
    if sigma < 0:
        raise NegativeSigma(f"sigma must be >= 0, got {sigma}")
    total = math.hypot(meas.noise_sigma, sigma)
    if sigma == 0:
        return MeasurementSet(meas.frequencies.copy(), meas.data.copy(), total)
    n, L = meas.data.shape
    z = rng.standard_normal((n, L)) + 1j * rng.standard_normal((n, L))
    return MeasurementSet(
        meas.frequencies.copy(),
        meas.data + (sigma / math.sqrt(2.0)) * z,
        total,
    )


def sigma_from_snr(meas: MeasurementSet, snr_db: float) -> float:
    """Noise level giving the requested SNR against the mean power of `meas`.

    SNR is defined entrywise: snr_db = 10*log10(mean|Y|^2 / sigma^2), so
    sigma = sqrt(10^(-snr_db/10) * mean|Y|^2). An infinite SNR returns 0.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    power = float(np.mean(np.abs(meas.data) ** 2))
    if power == 0.0:
        raise ZeroSignal("SNR undefined: measurement matrix is identically zero")
    return math.sqrt(10.0 ** (-snr_db / 10.0) * power)
