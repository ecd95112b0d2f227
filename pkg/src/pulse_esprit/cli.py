"""Command line interface: synth, estimate, sweep, verify, preset.

Exit codes: 0 success, 2 usage errors (argparse), 3 configuration/schema
errors, 4 model or numerical errors, 5 I/O errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from typing import Optional

import numpy as np

from . import experiments
from .errors import ConfigError, PulseEspritError, SchemaError
from .esprit import solve
from .experiments import SweepConfig, preset, preset_names, read_records, run_sweep, verify_bounds
from .signal_model import (
    GroundTruth,
    MeasurementSet,
    add_awgn,
    parse_pulse,
    sigma_from_snr,
    synthesize,
)
from .subarrays import SubArrayPair, max_overlap_design, random_doublet_design

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_MODEL = 4
EXIT_IO = 5

MEASUREMENT_COLUMNS = ["omega", "l", "re", "im"]


# ---------------------------------------------------------------------------
# measurement file I/O
# ---------------------------------------------------------------------------

def write_measurements(path: str, meas: MeasurementSet) -> None:
    """Write a measurement CSV with columns omega,l,re,im (one row per entry)."""
    import csv as _csv

    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh, lineterminator="\n")
        w.writerow(MEASUREMENT_COLUMNS)
        for i, omega in enumerate(meas.frequencies):
            for l in range(meas.L):
                z = meas.data[i, l]
                w.writerow([repr(float(omega)), l, repr(float(z.real)), repr(float(z.imag))])


def read_measurements(path: str) -> MeasurementSet:
    """Read a measurement CSV back into a MeasurementSet."""
    import csv as _csv

    cells = {}
    freqs = []
    seen = set()
    with open(path, newline="") as fh:
        reader = _csv.reader(fh)
        header = next(reader, None)
        if header != MEASUREMENT_COLUMNS:
            raise SchemaError(f"expected header {','.join(MEASUREMENT_COLUMNS)} in {path}")
        for row in reader:
            if len(row) != 4:
                raise SchemaError(f"measurement row with {len(row)} fields in {path}")
            try:
                omega, l = float(row[0]), int(row[1])
                z = complex(float(row[2]), float(row[3]))
            except ValueError as exc:
                raise SchemaError(f"bad measurement row {row!r} in {path}: {exc}")
            if omega not in seen:
                seen.add(omega)
                freqs.append(omega)
            if (omega, l) in cells:
                raise SchemaError(f"duplicate entry for omega={omega}, l={l} in {path}")
            cells[(omega, l)] = z
    if not cells:
        raise SchemaError(f"no measurement rows in {path}")
    freqs = sorted(freqs)
    L = max(l for (_, l) in cells) + 1
    Y = np.zeros((len(freqs), L), dtype=complex)
    for i, omega in enumerate(freqs):
        for l in range(L):
            if (omega, l) not in cells:
                raise SchemaError(f"missing entry for omega={omega}, l={l} in {path}")
            Y[i, l] = cells[(omega, l)]
    return MeasurementSet(frequencies=np.array(freqs), data=Y)


def pair_from_frequencies(
    frequencies: np.ndarray, T: float, subarray: str, doublet_shift: str = "half"
) -> SubArrayPair:
    """Reconstruct the sub-array pair implied by a measurement's frequency grid.

    Frequencies must sit on the design grid (1/T for maxoverlap, 1/(2T) for
    doublets) within 1e-9 relative tolerance. Every available shift pair is
    used as a sub-array row.
    """
    w = np.asarray(frequencies, dtype=float).ravel()
    spacing = 1.0 / T if subarray == "maxoverlap" else 1.0 / (2.0 * T)
    k = np.round(w / spacing).astype(int)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    if np.max(np.abs(w - k * spacing)) > 1e-9 * scale:
        raise SchemaError(f"frequencies do not sit on the {subarray} grid for T={T}")
    if np.unique(k).size != k.size:
        raise SchemaError("duplicate frequencies in measurement file")
    kset = {int(v): i for i, v in enumerate(k)}
    if subarray == "maxoverlap":
        step, starts = 1, [v for v in kset if v + 1 in kset]
    elif doublet_shift == "half":
        step, starts = 1, [v for v in kset if v % 2 == 0 and v + 1 in kset]
    else:
        step, starts = 2, [v for v in kset if v % 2 == 0 and v + 2 in kset]
    starts.sort()
    if not starts:
        raise SchemaError("no usable shift pairs in the measurement frequency grid")
    sel1 = np.array([kset[v] for v in starts])
    sel2 = np.array([kset[v + step] for v in starts])
    return SubArrayPair(
        omega1=w[sel1], omega2=w[sel2], shift_delta=step * spacing,
        omega_union=w, sel1=sel1, sel2=sel2,
        kind=subarray,
    )


# ---------------------------------------------------------------------------
# synthetic measurement construction shared by synth and estimate
# ---------------------------------------------------------------------------

def _build_synthetic(args) -> tuple:
    if args.tau is None:
        raise ConfigError("synthetic measurements need --tau")
    tau = np.array([float(x) for x in args.tau.split(",") if x.strip() != ""])
    shape = parse_pulse(args.pulse if hasattr(args, "pulse") and args.pulse else args.synthetic)
    rng = np.random.default_rng(args.seed)
    if args.subarray == "doublet":
        if args.M_tilde is None:
            raise ConfigError("doublet design needs --M-tilde")
        pair = random_doublet_design(args.M_tilde, args.M, args.T, rng, args.doublet_shift)
    else:
        pair = max_overlap_design(args.M, args.T)
    S = tau.size
    X = rng.standard_normal((S, args.L))
    if args.amplitude_dist == "complex":
        X = (X + 1j * rng.standard_normal((S, args.L))) / math.sqrt(2.0)
    truth = GroundTruth(period_T=args.T, locations=tau, amplitudes=X, shape=shape)
    clean = synthesize(truth, pair.omega_union)
    sigma = sigma_from_snr(clean, args.snr)
    meas = add_awgn(clean, sigma, rng)
    return truth, pair, meas


def _cmd_synth(args) -> int:
    truth, pair, meas = _build_synthetic(args)
    write_measurements(args.out, meas)
    print(f"wrote {meas.n_frequencies} frequencies x {meas.L} snapshots to {args.out} "
          f"(S={truth.S}, sigma={meas.noise_sigma:.6g})")
    return EXIT_OK


def _result_json(result, pair, args, amplitudes: bool) -> dict:
    out = {
        "locations": [float(t) for t in result.locations],
        "eigenvalues": [[float(z.real), float(z.imag)] for z in result.eigenvalues],
        "diagnostics": {k: float(v) for k, v in result.diagnostics.items()
                        if np.isscalar(v)},
        "frequencies": [float(w) for w in pair.omega_union],
        "shift_delta": float(pair.shift_delta),
        "S": int(result.locations.size),
        "T": float(args.T),
    }
    if result.gains is not None:
        out["gains"] = [[float(g.real), float(g.imag)] for g in result.gains]
    if amplitudes and result.amplitudes is not None:
        out["amplitudes"] = [
            [[float(z.real), float(z.imag)] for z in row] for row in result.amplitudes
        ]
    return out


def _cmd_estimate(args) -> int:
    if (args.input is None) == (args.synthetic is None):
        raise ConfigError("estimate needs exactly one of --input or --synthetic")
    if args.synthetic is not None:
        _, pair, meas = _build_synthetic(args)
    else:
        meas = read_measurements(args.input)
        pair = pair_from_frequencies(meas.frequencies, args.T, args.subarray, args.doublet_shift)
    result = solve(meas, pair, args.S, args.T)
    payload = _result_json(result, pair, args, args.amplitudes)
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote estimate to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep configuration files
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "sweep": {"preset", "scale", "trials", "seed", "workers", "out"},
    "model": {"pulse", "T", "S", "L", "snr_db", "delta", "amplitude_dist", "placement"},
    "subarray": {"kind", "M", "M_tilde", "doublet_shift"},
    "metrics": {"md_metric"},
    "axes": None,  # any axis name, validated by SweepConfig
}


def _read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys like S, M_tilde are case-sensitive
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}")
    entries: dict = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        allowed = _CONFIG_KEYS[section]
        for key, value in parser.items(section):
            if allowed is not None and key not in allowed:
                raise ConfigError(f"unknown key {key!r} in section [{section}] of {path}")
            entries[(section, key)] = value
    return entries


def _parse_axis_values(name: str, text: str) -> list:
    vals = [v.strip() for v in text.split(",") if v.strip() != ""]
    if name == "pulse":
        return vals
    if name in experiments._INT_AXES:
        return [int(v) for v in vals]
    return [float(v) for v in vals]


def _apply_entry(config: SweepConfig, section: str, key: str, value: str) -> None:
    try:
        if section == "sweep":
            if key == "trials":
                config.trials_per_point = int(value)
            elif key == "seed":
                config.master_seed = int(value)
            elif key == "workers":
                config.workers = int(value)
            # preset/scale/out handled by the caller
        elif section == "model":
            if key == "pulse":
                parse_pulse(value)
                config.pulse = value
            elif key == "T":
                config.T = float(value)
            elif key in ("S", "L"):
                setattr(config, key, int(value))
            elif key == "snr_db":
                config.snr_db = float(value)
            elif key == "delta":
                config.delta = float(value)
            elif key == "amplitude_dist":
                config.amplitude_dist = value
            elif key == "placement":
                config.placement = value
        elif section == "subarray":
            if key == "kind":
                config.subarray = value
            elif key == "M":
                config.M = int(value)
            elif key == "M_tilde":
                config.M_tilde = int(value) if value.strip() else None
            elif key == "doublet_shift":
                config.doublet_shift = value
        elif section == "metrics":
            config.md_metric = value
        elif section == "axes":
            config.axes[key] = _parse_axis_values(key, value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {section}.{key}: {value!r} ({exc})")


def build_sweep_config(
    config_path: Optional[str],
    preset_name: Optional[str],
    scale: Optional[float],
    overrides: list,
    seed: Optional[int],
    workers: Optional[int],
) -> tuple:
    """Merge config file, --set overrides, and dedicated flags into a SweepConfig.

    Precedence (low to high): preset defaults, config file, --set, dedicated
    flags. Returns (config, out_path or None).
    """
    entries = _read_config_file(config_path) if config_path else {}
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        dotted, value = item.split("=", 1)
        section, key = dotted.split(".", 1)
        if section not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config section {section!r} in --set")
        allowed = _CONFIG_KEYS[section]
        if allowed is not None and key not in allowed:
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        entries[(section, key)] = value

    name = preset_name or entries.get(("sweep", "preset"))
    eff_scale = scale if scale is not None else float(entries.get(("sweep", "scale"), 0.1))
    if name:
        config = preset(name, eff_scale)
    else:
        config = SweepConfig()
    for (section, key), value in entries.items():
        if section == "sweep" and key in ("preset", "scale", "out"):
            continue
        _apply_entry(config, section, key, value)
    if seed is not None:
        config.master_seed = seed
    if workers is not None:
        config.workers = workers
    # re-validate after mutation
    config.__post_init__()
    out = entries.get(("sweep", "out"))
    return config, out


def _cmd_sweep(args) -> int:
    config, file_out = build_sweep_config(
        args.config, args.preset, args.scale, args.set or [],
        args.seed, args.workers,
    )
    if config.master_seed is None:
        print("error: sweeps need --seed (or sweep.seed in the config file)", file=sys.stderr)
        return EXIT_USAGE
    out = args.out or file_out
    records = run_sweep(config, csv_path=out)
    n_err = sum(1 for r in records if r.error_code != "none")
    where = out if out else "(records kept in memory only; use --out to save)"
    print(f"sweep {config.preset}: {len(records)} trials over "
          f"{len(records) // max(1, config.trials_per_point)} points, "
          f"{n_err} failed; {where}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    rows = read_records(args.records)
    report = verify_bounds(rows)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    t = report["totals"]
    print(
        f"verify: {t['n_trials']} trials, {t['n_errors']} errors; "
        f"deterministic bound checked on {t['prop1_checked']} trials, "
        f"{t['prop1_violations']} violations; "
        f"design bound dominance "
        f"{'n/a' if t['thm_dominance'] is None else format(t['thm_dominance'], '.3f')}",
        file=sys.stderr,
    )
    return EXIT_OK if t["prop1_violations"] == 0 else EXIT_MODEL


def _cmd_preset(args) -> int:
    if args.action != "list":
        raise ConfigError(f"unknown preset action {args.action!r}; try 'preset list'")
    for name in preset_names():
        cfg = preset(name, scale=0.1)
        axes = ", ".join(f"{k}({len(v)})" for k, v in cfg.axes.items()) or "single point"
        print(f"{name:14s} subarray={cfg.subarray:10s} axes: {axes}; "
              f"{cfg.trials_per_point} trials/point at scale 0.1")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_model_args(p: argparse.ArgumentParser, with_pulse: bool) -> None:
    if with_pulse:
        p.add_argument("--pulse", default="dirac",
                       help="pulse spec: dirac | sinc:<band> | cos2:<a> | table:<path>")
    p.add_argument("--tau", help="comma-separated true locations in [0, T)")
    p.add_argument("--T", type=float, default=1.0, help="period (default 1)")
    p.add_argument("--M", type=int, default=16, help="sub-array size / expected doublets")
    p.add_argument("--M-tilde", dest="M_tilde", type=int, help="doublet pool size")
    p.add_argument("--L", type=int, default=8, help="number of snapshots")
    p.add_argument("--snr", type=float, default=math.inf,
                   help="SNR in dB against mean signal power; inf = noise-free")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--subarray", choices=["maxoverlap", "doublet"], default="maxoverlap")
    p.add_argument("--doublet-shift", choices=["half", "full"], default="half")
    p.add_argument("--amplitude-dist", choices=["complex", "real"], default="complex")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulse-esprit",
        description="Blind super-resolution of pulse streams via shift invariance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize a measurement CSV")
    _add_model_args(p_synth, with_pulse=True)
    p_synth.add_argument("--out", required=True, help="output measurement CSV path")
    p_synth.set_defaults(func=_cmd_synth)

    p_est = sub.add_parser("estimate", help="estimate locations/gains from measurements")
    p_est.add_argument("--input", help="measurement CSV (omega,l,re,im)")
    p_est.add_argument("--synthetic", metavar="PULSE",
                       help="synthesize in memory from this pulse spec instead of a file")
    p_est.add_argument("--S", type=int, required=True, help="number of pulses")
    _add_model_args(p_est, with_pulse=False)
    p_est.add_argument("--amplitudes", action="store_true",
                       help="include the estimated amplitude matrix in the JSON")
    p_est.add_argument("--out", help="write the JSON result here instead of stdout")
    p_est.set_defaults(func=_cmd_estimate)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p_sweep.add_argument("--preset", help="preset name (see 'preset list')")
    p_sweep.add_argument("--config", help="INI config file")
    p_sweep.add_argument("--scale", type=float, help="grid/trials scale in (0,1]; default 0.1")
    p_sweep.add_argument("--seed", type=int, help="master seed (required)")
    p_sweep.add_argument("--out", help="output records CSV path")
    p_sweep.add_argument("--workers", type=int, help="worker processes (capped by "
                        f"{experiments.WORKERS_ENV})")
    p_sweep.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                         help="override one config entry; repeatable")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="re-check md against recorded bounds")
    p_verify.add_argument("records", help="sweep records CSV")
    p_verify.add_argument("--out", help="write the JSON report here instead of stdout")
    p_verify.set_defaults(func=_cmd_verify)

    p_preset = sub.add_parser("preset", help="inspect presets")
    p_preset.add_argument("action", help="'list'")
    p_preset.set_defaults(func=_cmd_preset)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PulseEspritError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ValueError as exc:
        # invalid model construction reached a library check: same class as above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
