"""Monte Carlo sweeps: run, persist, verify.

A SweepConfig lays out a grid of experiment points (up to two swept axes),
run_sweep executes seeded trials per point and writes one CSV row each
plus a JSON manifest, and verify_bounds re-reads the rows and checks
every applicable bound against the realized error. The same pipeline is
available from the command line:

    pulse-esprit sweep --preset bounds --scale 0.1 --seed 7 --out out/
    pulse-esprit verify out/sweep.csv
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from pulse_esprit import SweepConfig, preset, read_records, run_sweep, verify_bounds

# desk-scale version of the snapshot-count study; presets scale the same way
cfg = SweepConfig(
    T=1.0, S=4, M=64, L=64, snr_db=15.0, delta=0.02, pulse="dirac",
    subarray="maxoverlap", axes={"L": [16, 64, 256, 1024]},
    trials_per_point=40, master_seed=42,
)

out = str(Path(tempfile.mkdtemp()) / "sweep.csv")
run_sweep(cfg, out)
manifest = json.loads(Path(out + ".manifest.json").read_text())
print(f"{manifest['n_records']} trials over {manifest['n_points']} points "
      f"-> {manifest['csv']}")

records = read_records(out)
for L in cfg.axes["L"]:
    md = [r["md"] for r in records if r["L"] == L and r["error_code"] == "none"]
    print(f"  L = {L:4d}   median md = {np.median(md):.4e}")
print("error roughly halves per 4x snapshots, the predicted 1/sqrt(L) decay")

totals = verify_bounds(records)["totals"]
print(f"\nbound verification over {totals['n_trials']} trials:")
print(f"  deterministic bound checked {totals['prop1_checked']} times, "
      f"{totals['prop1_violations']} violations")
print(f"  design bound checked {totals['thm_checked']} times, "
      f"dominant in {totals['thm_within']}")

# the named presets reproduce the published studies; scale trades trials for time
tiny = preset("bounds", scale=0.05)
print(f"\npreset 'bounds' at scale 0.05: axes {tiny.axes}, "
      f"{tiny.trials_per_point} trials per point")
