/**
 * Sweep CSV schema: the 28-column record format written by
 * `pulse-esprit sweep`, parsed into typed rows plus the derived
 * rel_noise column (10^(-snr_db/10), the noise-to-signal power ratio).
 */

import Papa from "papaparse";

export const CSV_COLUMNS = [
  "preset", "point_id", "axis1_name", "axis1_value", "axis2_name", "axis2_value",
  "trial", "seed", "S", "M", "M_tilde", "L", "snr_db", "delta", "pulse", "a_param",
  "subarray", "md", "dist_U", "sigmaS_U1hat", "kappa_Phi", "pic_violation",
  "n_doublets", "n_frequencies", "bound_prop1", "bound_thm",
  "prop_cond_satisfied", "error_code", "runtime_ms",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

const FLOAT_COLS = new Set<ColumnName>([
  "snr_db", "delta", "a_param", "md", "dist_U", "sigmaS_U1hat", "kappa_Phi",
  "pic_violation", "bound_prop1", "bound_thm", "runtime_ms",
]);
const INT_COLS = new Set<ColumnName>([
  "point_id", "trial", "S", "M", "M_tilde", "L", "n_doublets", "n_frequencies",
]);

export interface SweepRow {
  preset: string;
  point_id: number;
  axis1_name: string;
  axis1_value: string;
  axis2_name: string;
  axis2_value: string;
  trial: number;
  seed: string; // uint64, beyond Number.MAX_SAFE_INTEGER; kept verbatim
  S: number;
  M: number;
  M_tilde: number | null;
  L: number;
  snr_db: number;
  delta: number;
  pulse: string;
  a_param: number;
  subarray: string;
  md: number;
  dist_U: number;
  sigmaS_U1hat: number;
  kappa_Phi: number;
  pic_violation: number;
  n_doublets: number;
  n_frequencies: number;
  bound_prop1: number;
  bound_thm: number;
  prop_cond_satisfied: boolean | null;
  error_code: string;
  runtime_ms: number;
  rel_noise: number;
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export class EmptySelection extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptySelection";
  }
}

function toFloat(value: string, column: string, line: number): number {
  if (value === "" || value === "nan") return NaN;
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  const v = Number(value);
  if (Number.isNaN(v)) {
    throw new SchemaError(`row ${line}: column ${column} has non-numeric value ${JSON.stringify(value)}`);
  }
  return v;
}

function toInt(value: string, column: string, line: number): number | null {
  if (value === "") return null;
  const v = Number(value);
  if (!Number.isInteger(v)) {
    throw new SchemaError(`row ${line}: column ${column} has non-integer value ${JSON.stringify(value)}`);
  }
  return v;
}

/** Parse sweep CSV text; the header must be exactly the 28 known columns. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.length !== CSV_COLUMNS.length || !CSV_COLUMNS.every((c, i) => fields[i] === c)) {
    throw new SchemaError(
      `unexpected CSV header: got [${fields.join(",")}], want the sweep record columns`
    );
  }
  for (const err of parsed.errors) {
    throw new SchemaError(`CSV parse error at row ${err.row}: ${err.message}`);
  }

  return parsed.data.map((raw, i) => {
    const line = i + 2; // 1-based, after the header
    const row: Record<string, unknown> = {};
    for (const col of CSV_COLUMNS) {
      const value = raw[col];
      if (value === undefined) {
        throw new SchemaError(`row ${line}: missing cell in column ${col}`);
      }
      if (col === "seed") {
        row[col] = value;
      } else if (FLOAT_COLS.has(col)) {
        row[col] = toFloat(value, col, line);
      } else if (INT_COLS.has(col)) {
        const v = toInt(value, col, line);
        if (v === null && col !== "M_tilde") {
          throw new SchemaError(`row ${line}: column ${col} is empty`);
        }
        row[col] = v;
      } else if (col === "prop_cond_satisfied") {
        row[col] = value === "" ? null : value === "1";
      } else {
        row[col] = value;
      }
    }
    row.rel_noise = Math.pow(10, -(row.snr_db as number) / 10);
    return row as unknown as SweepRow;
  });
}

/** Columns usable as plot axes: every CSV column plus the derived rel_noise. */
export function isKnownColumn(name: string): boolean {
  return name === "rel_noise" || (CSV_COLUMNS as readonly string[]).includes(name);
}
