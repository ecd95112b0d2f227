import { CSV_COLUMNS, ColumnName } from "../src/schema";

export const DEFAULTS: Record<ColumnName, string> = {
  preset: "",
  point_id: "0",
  axis1_name: "L",
  axis1_value: "64",
  axis2_name: "",
  axis2_value: "",
  trial: "0",
  seed: "12345678901234567890",
  S: "4",
  M: "64",
  M_tilde: "",
  L: "64",
  snr_db: "15.0",
  delta: "0.02",
  pulse: "dirac",
  a_param: "",
  subarray: "maxoverlap",
  md: "0.001",
  dist_U: "0.01",
  sigmaS_U1hat: "0.9",
  kappa_Phi: "1.1",
  pic_violation: "0.0",
  n_doublets: "0",
  n_frequencies: "64",
  bound_prop1: "0.1",
  bound_thm: "0.5",
  prop_cond_satisfied: "1",
  error_code: "none",
  runtime_ms: "3.5",
};

/** Build sweep CSV text from per-row overrides of the default record. */
export function makeCsv(rows: Array<Partial<Record<ColumnName, string>>>): string {
  const lines = rows.map((r) => CSV_COLUMNS.map((c) => r[c] ?? DEFAULTS[c]).join(","));
  return [CSV_COLUMNS.join(","), ...lines].join("\n") + "\n";
}
