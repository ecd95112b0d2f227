/**
 * Grid-point aggregation: the statistic of md over the trials of each sweep
 * point, with the point's axis coordinates attached. Rows whose trial failed
 * (error_code other than "none") or whose md is not finite are excluded.
 */

import { EmptySelection, SchemaError, SweepRow, isKnownColumn } from "./schema.js";

export type Stat = "median" | "mean" | "p90";

export function statValue(values: number[], stat: Stat): number {
  if (values.length === 0) return NaN;
  if (stat === "mean") {
    let s = 0;
    for (const v of values) s += v;
    return s / values.length;
  }
  const sorted = [...values].sort((a, b) => a - b);
  if (stat === "median") {
    const m = sorted.length >> 1;
    return sorted.length % 2 ? sorted[m] : (sorted[m - 1] + sorted[m]) / 2;
  }
  // p90: nearest-rank percentile
  return sorted[Math.ceil(0.9 * sorted.length) - 1];
}

export interface PointAggregate {
  point_id: number;
  /** value of the x column at this point */
  x: number;
  /** value of the y column (heatmaps only) */
  y?: number;
  /** series label (line plots with a categorical second axis) */
  series?: string;
  /** the chosen statistic of md over the used trials */
  value: number;
  n_trials: number;
  n_used: number;
}

function columnValue(row: SweepRow, column: string): unknown {
  return (row as unknown as Record<string, unknown>)[column];
}

/** Per-point value of a column, verified constant across the point's rows. */
function pointColumn(rows: SweepRow[], column: string): unknown {
  const first = columnValue(rows[0], column);
  for (const row of rows) {
    if (columnValue(row, column) !== first) {
      throw new SchemaError(
        `column ${column} is not constant within point ${rows[0].point_id}; ` +
        `cannot use it as a plot axis`
      );
    }
  }
  return first;
}

function numericPointColumn(rows: SweepRow[], column: string): number {
  const v = pointColumn(rows, column);
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`column ${column} is not numeric at point ${rows[0].point_id}`);
  }
  return v;
}

export interface AggregateSpec {
  x: string;
  y?: string;
  series?: string;
  stat: Stat;
}

/**
 * One aggregate per grid point, ordered by point_id. Points where every
 * trial failed are dropped; if nothing is left, EmptySelection.
 */
export function aggregateByPoint(rows: SweepRow[], spec: AggregateSpec): PointAggregate[] {
  for (const col of [spec.x, spec.y, spec.series]) {
    if (col !== undefined && !isKnownColumn(col)) {
      throw new SchemaError(`unknown column ${JSON.stringify(col)}`);
    }
  }
  const byPoint = new Map<number, SweepRow[]>();
  for (const row of rows) {
    const group = byPoint.get(row.point_id);
    if (group) group.push(row);
    else byPoint.set(row.point_id, [row]);
  }

  const out: PointAggregate[] = [];
  for (const pid of [...byPoint.keys()].sort((a, b) => a - b)) {
    const group = byPoint.get(pid)!;
    const used = group.filter((r) => r.error_code === "none" && Number.isFinite(r.md));
    if (used.length === 0) continue;
    const agg: PointAggregate = {
      point_id: pid,
      x: numericPointColumn(group, spec.x),
      value: statValue(used.map((r) => r.md), spec.stat),
      n_trials: group.length,
      n_used: used.length,
    };
    if (spec.y !== undefined) agg.y = numericPointColumn(group, spec.y);
    if (spec.series !== undefined) agg.series = String(pointColumn(group, spec.series));
    out.push(agg);
  }
  if (out.length === 0) {
    throw new EmptySelection("no grid point has a successful trial with finite md");
  }
  return out;
}

/**
 * Pick the series column for a line plot: the swept axis that is not the x
 * column, when the sweep has two axes. rel_noise counts as snr_db, since it
 * is derived from it one-to-one.
 */
export function inferSeriesColumn(rows: SweepRow[], x: string): string | undefined {
  const xAxis = x === "rel_noise" ? "snr_db" : x;
  const names = new Set<string>();
  for (const row of rows) {
    if (row.axis1_name !== "") names.add(row.axis1_name);
    if (row.axis2_name !== "") names.add(row.axis2_name);
  }
  names.delete(xAxis);
  if (names.size > 1) {
    throw new SchemaError(
      `cannot infer the series column: axes [${[...names].join(",")}] remain after x; pass --series`
    );
  }
  // one curve per value of the remaining swept axis, if any
  return [...names][0];
}
