"""Seeded Monte Carlo sweeps over the recovery pipeline, with CSV records.

A sweep is a grid of parameter points (up to two axes) with a fixed number of
trials per point. Locations are frozen per grid point (seeded equispaced
placement at the configured separation); the doublet selection pattern, the
amplitude matrix, and the noise are redrawn each trial, in that order, from a
generator seeded by SeedSequence((master_seed, point_id, trial_index)). The
recorded seed alone reproduces a trial bit-exactly, and rows are emitted in
deterministic (point, trial) order regardless of the worker count.

Per-trial sigma comes from sigma_from_snr applied to the realized noise-free
measurement, so the SNR is exact for each draw. Sweeps run the location
pipeline (covariance -> subspace -> rotation eigenvalues); gain estimation is
not part of the recorded columns and is skipped here for speed (the `solve`
entry point keeps the full pipeline).
"""

from __future__ import annotations

import csv
import dataclasses
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    ConfigError,
    RecoverableTrialError,
    UnknownPreset,
)
from .esprit import esprit_locate
from .metrics import (
    dynamic_range,
    matching_distance,
    min_separation,
    pic_violation,
    vandermonde_stats,
)
from .signal_model import (
    GroundTruth,
    add_awgn,
    parse_pulse,
    sigma_from_snr,
    steering_matrix,
    synthesize,
)
from .subarrays import max_overlap_design, random_doublet_design
from .subspace import (
    empirical_covariance,
    oracle_subspace,
    signal_subspace,
    subspace_distance,
)
from .theory import TheoryContext, check_prop_condition, prop1_bound, thm1_bound, thm2_bound

WORKERS_ENV = "PULSE_ESPRIT_WORKERS"

CSV_COLUMNS = [
    "preset", "point_id", "axis1_name", "axis1_value", "axis2_name", "axis2_value",
    "trial", "seed", "S", "M", "M_tilde", "L", "snr_db", "delta", "pulse", "a_param",
    "subarray", "md", "dist_U", "sigmaS_U1hat", "kappa_Phi", "pic_violation",
    "n_doublets", "n_frequencies", "bound_prop1", "bound_thm",
    "prop_cond_satisfied", "error_code", "runtime_ms",
]

_AXIS_NAMES = {"L", "snr_db", "S", "M", "M_tilde", "a_param", "pulse", "delta"}
_INT_AXES = {"L", "S", "M", "M_tilde"}


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class SweepConfig:
    """Grid definition plus everything needed to reproduce a sweep."""

    preset: str = "custom"
    axes: dict = field(default_factory=dict)  # name -> list of values, 0..2 axes
    T: float = 1.0
    S: int = 4
    M: int = 64
    M_tilde: Optional[int] = None
    L: int = 32
    snr_db: float = 20.0
    delta: float = 0.02
    pulse: str = "dirac"
    subarray: str = "maxoverlap"
    doublet_shift: str = "half"
    placement: str = "equispaced"
    amplitude_dist: str = "complex"
    md_metric: str = "torus"
    trials_per_point: int = 100
    master_seed: Optional[int] = None
    workers: int = 1

    def __post_init__(self) -> None:
        if len(self.axes) > 2:
            raise ConfigError(f"at most two sweep axes, got {list(self.axes)}")
        for name in self.axes:
            if name not in _AXIS_NAMES:
                raise ConfigError(f"unknown sweep axis {name!r}; allowed: {sorted(_AXIS_NAMES)}")
            if not list(self.axes[name]):
                raise ConfigError(f"sweep axis {name!r} is empty")
        if self.subarray not in ("maxoverlap", "doublet"):
            raise ConfigError(f"subarray must be maxoverlap or doublet, got {self.subarray!r}")
        if self.doublet_shift not in ("half", "full"):
            raise ConfigError(f"doublet_shift must be half or full, got {self.doublet_shift!r}")
        if self.placement not in ("equispaced", "jittered"):
            raise ConfigError(f"placement must be equispaced or jittered, got {self.placement!r}")
        if self.amplitude_dist not in ("complex", "real"):
            raise ConfigError(f"amplitude_dist must be complex or real, got {self.amplitude_dist!r}")
        if self.md_metric not in ("torus", "plain"):
            raise ConfigError(f"md_metric must be torus or plain, got {self.md_metric!r}")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")
        if self.subarray == "doublet" and self.M_tilde is None and "M_tilde" not in self.axes:
            raise ConfigError("doublet sweeps need M_tilde (fixed or as an axis)")


@dataclass(frozen=True)
class TrialPoint:
    """One grid point: fully resolved parameters plus frozen locations."""

    preset: str
    point_id: int
    axis1_name: str
    axis1_value: str
    axis2_name: str
    axis2_value: str
    T: float
    S: int
    M: int
    M_tilde: Optional[int]
    L: int
    snr_db: float
    delta: float
    pulse: str
    a_param: Optional[float]
    subarray: str
    doublet_shift: str
    placement: str
    amplitude_dist: str
    md_metric: str
    locations: tuple


@dataclass
class TrialRecord:
    """One CSV row; field order matches CSV_COLUMNS."""

    preset: str
    point_id: int
    axis1_name: str
    axis1_value: str
    axis2_name: str
    axis2_value: str
    trial: int
    seed: int
    S: int
    M: int
    M_tilde: Optional[int]
    L: int
    snr_db: float
    delta: float
    pulse: str
    a_param: Optional[float]
    subarray: str
    md: float = math.nan
    dist_U: float = math.nan
    sigmaS_U1hat: float = math.nan
    kappa_Phi: float = math.nan
    pic_violation: float = math.nan
    n_doublets: int = 0
    n_frequencies: int = 0
    bound_prop1: float = math.nan
    bound_thm: float = math.nan
    prop_cond_satisfied: Optional[bool] = None
    error_code: str = "none"
    runtime_ms: float = 0.0

    def to_row(self) -> list:
        return [_fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# seeding and point construction
# ---------------------------------------------------------------------------

def trial_seed(master_seed: int, point_id: int, trial: int) -> int:
    """Stable 64-bit seed for one trial; reproduces the trial on its own."""
    ss = np.random.SeedSequence((master_seed, point_id, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def point_locations(
    master_seed: int, point_id: int, T: float, S: int, delta: float, placement: str
) -> tuple:
    """Frozen locations for a grid point: separation-respecting, seeded.

    equispaced: tau_k = (offset + k * delta * T) mod T with a uniform offset,
    so the realized minimum wrap-around separation equals delta exactly (for
    S >= 2 and S * delta <= 1). jittered: the S circular gaps are delta * T
    plus a random split of the remaining slack, so separation >= delta.
    """
    if S * delta > 1.0 + 1e-12:
        raise ConfigError(f"cannot place S={S} locations at separation {delta} on the circle")
    rng = np.random.default_rng(np.random.SeedSequence((master_seed, point_id)))
    offset = rng.uniform(0.0, T)
    if placement == "equispaced" or S == 1:
        tau = (offset + np.arange(S) * delta * T) % T
    else:
        slack = T - S * delta * T
        u = rng.random(S)
        gaps = delta * T + slack * u / u.sum()
        tau = (offset + np.concatenate([[0.0], np.cumsum(gaps[:-1])])) % T
    return tuple(float(t) for t in np.sort(tau))


def build_points(config: SweepConfig) -> list:
    """Expand the axis grid into fully resolved TrialPoints (row-major order)."""
    if config.master_seed is None:
        raise ConfigError("sweeps require a master seed")
    names = list(config.axes)
    value_lists = [list(config.axes[n]) for n in names]
    points = []
    for point_id, combo in enumerate(itertools.product(*value_lists)):
        params = {
            "T": config.T, "S": config.S, "M": config.M, "M_tilde": config.M_tilde,
            "L": config.L, "snr_db": config.snr_db, "delta": config.delta,
            "pulse": config.pulse,
        }
        for name, val in zip(names, combo):
            if name == "a_param":
                params["pulse"] = f"cos2:{float(val):g}"
            elif name == "pulse":
                params["pulse"] = str(val)
            elif name in _INT_AXES:
                params[name] = int(val)
            else:
                params[name] = float(val)
        parse_pulse(params["pulse"])  # validate early
        a_param = None
        if params["pulse"].startswith("cos2:"):
            a_param = float(params["pulse"].split(":", 1)[1])
        axis_vals = [str(v) for v in combo] + ["", ""]
        axis_names = names + ["", ""]
        locations = point_locations(
            config.master_seed, point_id, params["T"], params["S"],
            params["delta"], config.placement,
        )
        points.append(TrialPoint(
            preset=config.preset, point_id=point_id,
            axis1_name=axis_names[0], axis1_value=axis_vals[0],
            axis2_name=axis_names[1], axis2_value=axis_vals[1],
            T=params["T"], S=params["S"], M=params["M"], M_tilde=params["M_tilde"],
            L=params["L"], snr_db=params["snr_db"], delta=params["delta"],
            pulse=params["pulse"], a_param=a_param,
            subarray=config.subarray, doublet_shift=config.doublet_shift,
            placement=config.placement, amplitude_dist=config.amplitude_dist,
            md_metric=config.md_metric, locations=locations,
        ))
    return points


# ---------------------------------------------------------------------------
# single trial
# ---------------------------------------------------------------------------

def _correlation_stats(X: np.ndarray):
    R = (X @ X.conj().T) / X.shape[1]
    w = np.linalg.eigvalsh((R + R.conj().T) / 2.0)
    lam_min = float(w[0])
    lam_max = float(w[-1])
    if lam_min <= 0.0:
        return 0.0, math.inf
    return lam_min, lam_max / lam_min


def run_trial(point: TrialPoint, seed: int) -> TrialRecord:
    """Run one seeded trial and fill every diagnostic column.

    Pipeline failures from the recoverable taxonomy are recorded in error_code
    (the row keeps NaN metrics) instead of raising. Oracle-side diagnostics
    (dist_U, bounds, the deterministic-bound condition) are best effort and
    never change error_code.
    """
    t0 = time.perf_counter()
    rec = TrialRecord(
        preset=point.preset, point_id=point.point_id,
        axis1_name=point.axis1_name, axis1_value=point.axis1_value,
        axis2_name=point.axis2_name, axis2_value=point.axis2_value,
        trial=0, seed=seed, S=point.S, M=point.M, M_tilde=point.M_tilde,
        L=point.L, snr_db=point.snr_db, delta=point.delta, pulse=point.pulse,
        a_param=point.a_param, subarray=point.subarray,
    )
    rng = np.random.default_rng(seed)
    shape = parse_pulse(point.pulse)
    T, S, L = point.T, point.S, point.L
    tau = np.array(point.locations)

    try:
        # draw order is frozen: 1) selection pattern, 2) amplitudes, 3) noise
        if point.subarray == "doublet":
            pair = random_doublet_design(point.M_tilde, point.M, T, rng, point.doublet_shift)
            rec.n_doublets = pair.m
        else:
            pair = max_overlap_design(point.M, T)
            rec.n_doublets = 0
        rec.n_frequencies = pair.n_union
    except RecoverableTrialError as exc:
        rec.error_code = type(exc).__name__
        rec.runtime_ms = (time.perf_counter() - t0) * 1e3
        return rec

    if pair.m < S or L < S:
        rec.error_code = "Infeasible"
        rec.runtime_ms = (time.perf_counter() - t0) * 1e3
        return rec

    X = rng.standard_normal((S, L))
    if point.amplitude_dist == "complex":
        X = (X + 1j * rng.standard_normal((S, L))) / math.sqrt(2.0)
    truth = GroundTruth(period_T=T, locations=tau, amplitudes=X, shape=shape)
    clean = synthesize(truth, pair.omega_union)
    sigma = sigma_from_snr(clean, point.snr_db)
    meas = add_awgn(clean, sigma, rng)

    sub = None
    try:
        sub = signal_subspace(empirical_covariance(meas), S)
        est = esprit_locate(sub, pair, T)
        rec.sigmaS_U1hat = est.diagnostics["sigmaS_U1hat"]
        rec.md = matching_distance(
            truth.locations, est.locations,
            metric=point.md_metric, T=T,
        )
    except RecoverableTrialError as exc:
        rec.error_code = type(exc).__name__

    # model-side diagnostics and bound evaluations (best effort)
    try:
        Phi = steering_matrix(pair.omega_union, truth.locations)
        rec.kappa_Phi = vandermonde_stats(Phi).kappa
        rec.pic_violation = pic_violation(shape, pair)
        gain_stats = dynamic_range(shape, pair.omega_union)
        lam_min, kappa_RX = _correlation_stats(X)
        sep = min_separation(truth.locations, T) if S >= 2 else 1.0
        gains_vec = np.asarray(shape.transform(pair.omega_union), dtype=complex).ravel()
        oracle = oracle_subspace(gains_vec, Phi)
        U1 = oracle.basis[pair.sel1]
        sigmaS_U1 = float(np.linalg.svd(U1, compute_uv=False)[-1])
        if sub is not None:
            rec.dist_U = subspace_distance(sub, oracle)
            cond = check_prop_condition(sub.basis, oracle.basis, U1)
            rec.prop_cond_satisfied = cond.satisfied
            ctx = TheoryContext(
                T=T, S=S, kappa_Phi=rec.kappa_Phi,
                G_min=gain_stats.G_min, G_max=gain_stats.G_max,
                sigmaS_U1=sigmaS_U1, dist_U=rec.dist_U,
                pic_violation=rec.pic_violation,
            )
            rec.bound_prop1 = prop1_bound(ctx)
        rec.bound_thm = _thm_bound_for_point(
            point, sigma, gain_stats, lam_min, kappa_RX, sep, rec, shape
        )
    except Exception:
        pass  # diagnostics stay NaN; error_code reflects the solve path only

    rec.runtime_ms = (time.perf_counter() - t0) * 1e3
    return rec


def _thm_bound_for_point(point, sigma, gain_stats, lam_min, kappa_RX, sep, rec, shape):
    if lam_min <= 0.0:
        return math.nan
    if point.subarray == "maxoverlap":
        ctx = TheoryContext(
            T=point.T, S=point.S, M=point.M, L=point.L, sigma=sigma,
            G_min=gain_stats.G_min, rho=gain_stats.rho,
            lambdaS_RX=lam_min, kappa_RX=kappa_RX,
            pic_violation=rec.pic_violation, delta=sep,
        )
        bound, _ = thm1_bound(ctx)
        return bound
    # doublet: tilde quantities live on the full pool grid
    pool = np.arange(2 * point.M_tilde + 1) / (2.0 * point.T)
    gp = np.abs(np.asarray(shape.transform(pool)))
    if gp[:-1].min() == 0.0:
        return math.nan
    pic_pool = float(np.max(np.abs(np.diff(np.asarray(shape.transform(pool))))))
    ctx = TheoryContext(
        T=point.T, S=point.S, M=point.M, M_tilde=point.M_tilde, L=point.L,
        sigma=sigma, Gt_min=float(gp[:-1].min()),
        rho_tilde=float(gp[:-1].max() / gp[:-1].min()),
        lambdaS_RX=lam_min, kappa_RX=kappa_RX,
        pic_sup_pool=pic_pool, delta=sep,
    )
    bound, _ = thm2_bound(ctx)
    return bound


# ---------------------------------------------------------------------------
# sweep driver
# ---------------------------------------------------------------------------

def _run_star(args) -> TrialRecord:
    point, trial, seed = args
    rec = run_trial(point, seed)
    rec.trial = trial
    return rec


def _effective_workers(requested: int) -> int:
    cap = os.environ.get(WORKERS_ENV)
    workers = max(1, int(requested))
    if cap is not None:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {cap!r}")
    return workers


def run_sweep(config: SweepConfig, csv_path: Optional[str] = None) -> list:
    """Run all grid points x trials; optionally stream rows to a CSV.

    Rows are produced in (point_id, trial) order independent of the worker
    count. When csv_path is given, the file is written incrementally and a
    JSON manifest (<csv_path>.manifest.json) records the full configuration.
    """
    points = build_points(config)
    tasks = [
        (point, trial, trial_seed(config.master_seed, point.point_id, trial))
        for point in points
        for trial in range(config.trials_per_point)
    ]
    workers = _effective_workers(config.workers)
    started = time.time()

    writer = None
    fh = None
    if csv_path:
        fh = open(csv_path, "w", newline="")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)

    records = []
    try:
        if workers == 1:
            results = map(_run_star, tasks)
        else:
            pool = ProcessPoolExecutor(max_workers=workers)
            chunk = max(1, len(tasks) // (workers * 8))
            results = pool.map(_run_star, tasks, chunksize=chunk)
        for rec in results:
            records.append(rec)
            if writer is not None:
                writer.writerow(rec.to_row())
        if workers > 1:
            pool.shutdown()
    finally:
        if fh is not None:
            fh.close()

    if csv_path:
        manifest = {
            "config": dataclasses.asdict(config),
            "columns": CSV_COLUMNS,
            "n_points": len(points),
            "n_records": len(records),
            "workers": workers,
            "wall_seconds": time.time() - started,
            "csv": os.path.basename(csv_path),
        }
        with open(csv_path + ".manifest.json", "w") as mh:
            json.dump(manifest, mh, indent=2, sort_keys=True)
            mh.write("\n")
    return records


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _thin(values: list, scale: float) -> list:
    """Keep ~len * min(1, 2*scale) evenly spaced entries, endpoints included."""
    if scale >= 0.5 or len(values) <= 2:
        return list(values)
    target = max(2, round(len(values) * min(1.0, 2.0 * scale)))
    idx = np.unique(np.round(np.linspace(0, len(values) - 1, target)).astype(int))
    return [values[i] for i in idx]


def _scaled_trials(full: int, scale: float) -> int:
    return max(1, round(full * scale))


_FIG3_L = [5, 7, 10, 14, 20, 28, 40, 57, 80, 113, 160]
_FIG3_SNR = [10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0]


def _fig3(pulse: str, scale: float) -> SweepConfig:
    return SweepConfig(
        preset="", axes={"snr_db": _thin(_FIG3_SNR, scale), "L": _thin(_FIG3_L, scale)},
        T=1.0, S=5, M=240, delta=0.0125, pulse=pulse, subarray="maxoverlap",
        trials_per_point=_scaled_trials(1000, scale),
    )


def _preset_table(scale: float) -> dict:
    return {
        "fig3-trivial": lambda: _fig3("dirac", scale),
        "fig3-narrow": lambda: _fig3("cos2:0.9", scale),
        "fig3-wide": lambda: _fig3("cos2:0.75", scale),
        "fig4": lambda: SweepConfig(
            preset="", axes={"a_param": _thin(
                [0.75, 0.765, 0.78, 0.795, 0.81, 0.825, 0.84, 0.855, 0.87, 0.885, 0.9],
                scale)},
            T=1.0, S=5, M=160, delta=0.025, L=20, snr_db=20.0,
            pulse="cos2:0.9", subarray="maxoverlap",
            trials_per_point=_scaled_trials(500, scale),
        ),
        "fig5": lambda: SweepConfig(
            preset="", axes={
                "M_tilde": _thin([40, 60, 80, 100, 120, 160, 200, 230, 260], scale),
                "pulse": ["dirac", "cos2:1"],
            },
            T=1.0, S=7, M=40, delta=0.008, L=50, snr_db=28.0,
            subarray="doublet", trials_per_point=_scaled_trials(1000, scale),
        ),
        "fig6": lambda: SweepConfig(
            preset="", axes={
                "S": _thin(list(range(1, 11)), scale),
                "M": _thin([10, 20, 30, 40, 50, 60, 70, 80, 90, 100], scale),
            },
            T=1.0, M_tilde=260, delta=0.008, L=50, snr_db=26.0,
            pulse="cos2:1", subarray="doublet",
            trials_per_point=_scaled_trials(500, scale),
        ),
        "bounds": lambda: SweepConfig(
            preset="", axes={"snr_db": [10.0, 20.0, 30.0], "L": _thin([16, 32, 64, 128, 256], scale)},
            T=1.0, S=4, M=64, delta=0.02, pulse="cos2:0.9", subarray="maxoverlap",
            trials_per_point=_scaled_trials(1000, scale),
        ),
    }


def preset_names() -> list:
    return sorted(_preset_table(1.0))


def preset(name: str, scale: float = 0.1) -> SweepConfig:
    """Named experiment configuration at a given scale.

    scale multiplies the full trial count (1000 or 500 per preset) and thins
    the axis grids; scale = 0.1 is the desk default (100 trials/point),
    scale = 1 reproduces the full published runs.
    """
    if not 0.0 < scale <= 1.0:
        raise ConfigError(f"scale must be in (0, 1], got {scale}")
    table = _preset_table(scale)
    if name not in table:
        raise UnknownPreset(f"unknown preset {name!r}; available: {', '.join(sorted(table))}")
    config = table[name]()
    config.preset = name
    return config


# ---------------------------------------------------------------------------
# reading records back and verifying bounds
# ---------------------------------------------------------------------------

_FLOAT_COLS = {
    "snr_db", "delta", "a_param", "md", "dist_U", "sigmaS_U1hat", "kappa_Phi",
    "pic_violation", "bound_prop1", "bound_thm", "runtime_ms",
}
_INT_COLS = {"point_id", "trial", "seed", "S", "M", "M_tilde", "L",
             "n_doublets", "n_frequencies"}


def read_records(csv_path: str) -> list:
    """Parse a sweep CSV back into a list of per-row dicts (typed)."""
    from .errors import SchemaError

    rows = []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise SchemaError(f"unexpected CSV header in {csv_path}")
        for raw in reader:
            if len(raw) != len(CSV_COLUMNS):
                raise SchemaError(f"row with {len(raw)} fields in {csv_path}")
            row = {}
            for key, val in zip(CSV_COLUMNS, raw):
                if key in _FLOAT_COLS:
                    row[key] = math.nan if val == "" else float(val)
                elif key in _INT_COLS:
                    row[key] = None if val == "" else int(val)
                elif key == "prop_cond_satisfied":
                    row[key] = None if val == "" else val == "1"
                else:
                    row[key] = val
            rows.append(row)
    return rows


def _as_row_dict(rec) -> dict:
    if isinstance(rec, dict):
        return rec
    return {c: getattr(rec, c) for c in CSV_COLUMNS}


def verify_bounds(records) -> dict:
    """Bound-dominance report over sweep records.

    Per grid point: among successful trials, the fraction with md within the
    deterministic bound (restricted to trials where its validity condition
    held) and within the design bound, plus counts of errors and condition
    failures. The deterministic bound is a theorem under its condition, so
    prop1_violations should be zero; the design bound holds up to an absolute
    constant, so its fraction is reported but not asserted.
    """
    points: dict = {}
    for rec in records:
        row = _as_row_dict(rec)
        g = points.setdefault(row["point_id"], {
            "point_id": row["point_id"],
            "axis1_name": row["axis1_name"], "axis1_value": row["axis1_value"],
            "axis2_name": row["axis2_name"], "axis2_value": row["axis2_value"],
            "n_trials": 0, "n_errors": 0, "prop1_checked": 0, "prop1_within": 0,
            "prop1_cond_failures": 0, "thm_checked": 0, "thm_within": 0,
        })
        g["n_trials"] += 1
        if row["error_code"] != "none":
            g["n_errors"] += 1
            continue
        md = row["md"]
        if row["prop_cond_satisfied"] is True and not math.isnan(row["bound_prop1"]):
            g["prop1_checked"] += 1
            if md <= row["bound_prop1"]:
                g["prop1_within"] += 1
        elif row["prop_cond_satisfied"] is False:
            g["prop1_cond_failures"] += 1
        if not math.isnan(row["bound_thm"]) and not math.isnan(md):
            g["thm_checked"] += 1
            if md <= row["bound_thm"]:
                g["thm_within"] += 1

    out_points = []
    totals = {
        "n_trials": 0, "n_errors": 0, "prop1_checked": 0, "prop1_violations": 0,
        "prop1_cond_failures": 0, "thm_checked": 0, "thm_within": 0,
    }
    for pid in sorted(points):
        g = points[pid]
        g["prop1_violations"] = g["prop1_checked"] - g["prop1_within"]
        g["prop1_dominance"] = (
            g["prop1_within"] / g["prop1_checked"] if g["prop1_checked"] else None
        )
        g["thm_dominance"] = g["thm_within"] / g["thm_checked"] if g["thm_checked"] else None
        out_points.append(g)
        for key in totals:
            if key == "prop1_violations":
                totals[key] += g["prop1_violations"]
            else:
                totals[key] += g[key]
    totals["prop1_dominance"] = (
        (totals["prop1_checked"] - totals["prop1_violations"]) / totals["prop1_checked"]
        if totals["prop1_checked"] else None
    )
    totals["thm_dominance"] = (
        totals["thm_within"] / totals["thm_checked"] if totals["thm_checked"] else None
    )
    return {"points": out_points, "totals": totals}
