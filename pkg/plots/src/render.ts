/**
 * Render pipeline: sweep CSV in, SVG figure plus a JSON sidecar of the
 * plotted aggregates out. Same CSV and spec always produce identical bytes.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseSweepCsv, SchemaError } from "./schema.js";
import { aggregateByPoint, inferSeriesColumn, PointAggregate, Stat } from "./aggregate.js";
import { lineChart, heatmapChart, ChartOpts } from "./svg.js";

export interface PlotSpec {
  kind: "heatmap" | "line";
  x: string;
  y?: string;
  series?: string;
  stat: Stat;
  logx?: boolean;
  logy?: boolean;
  logz?: boolean;
  out: string;
}

export interface RenderResult {
  svgPath: string;
  sidecarPath: string;
  aggregates: PointAggregate[];
}

export function buildSvg(csvText: string, csvName: string, spec: PlotSpec): { svg: string; sidecar: string; aggregates: PointAggregate[] } {
  const rows = parseSweepCsv(csvText);

  let series = spec.series;
  if (spec.kind === "line" && series === undefined) {
    series = inferSeriesColumn(rows, spec.x);
  }
  if (spec.kind === "heatmap") {
    if (!spec.y) throw new SchemaError("heatmap needs a y column");
    series = undefined;
  }

  const aggregates = aggregateByPoint(rows, {
    x: spec.x,
    y: spec.kind === "heatmap" ? spec.y : undefined,
    series,
    stat: spec.stat,
  });

  const opts: ChartOpts = {
    title: spec.kind === "heatmap"
      ? `${spec.stat} matched distance over (${spec.x}, ${spec.y})`
      : `${spec.stat} matched distance vs ${spec.x}`,
    subtitle: `source: ${csvName}` + (series ? `  series: ${series}` : ""),
    xLabel: spec.x,
    yLabel: spec.kind === "heatmap" ? spec.y! : `${spec.stat} md`,
    logx: spec.logx,
    logy: spec.logy,
    logz: spec.logz,
  };

  const svg = spec.kind === "heatmap" ? heatmapChart(aggregates, opts) : lineChart(aggregates, opts);

  const sidecar = JSON.stringify(
    {
      kind: spec.kind,
      x: spec.x,
      ...(spec.kind === "heatmap" ? { y: spec.y } : {}),
      ...(series !== undefined ? { series } : {}),
      stat: spec.stat,
      source: csvName,
      groups: aggregates.map((a) => ({
        point_id: a.point_id,
        x: a.x,
        ...(a.y !== undefined ? { y: a.y } : {}),
        ...(a.series !== undefined ? { series: a.series } : {}),
        value: a.value,
        n_trials: a.n_trials,
        n_used: a.n_used,
      })),
    },
    null,
    2,
  ) + "\n";

  return { svg, sidecar, aggregates };
}

/** Read the CSV, write `spec.out` (SVG markup) and `spec.out + ".json"`. */
export function render(csvPath: string, spec: PlotSpec): RenderResult {
  const text = readFileSync(csvPath, "utf8");
  const { svg, sidecar, aggregates } = buildSvg(text, basename(csvPath), spec);
  writeFileSync(spec.out, svg);
  const sidecarPath = spec.out + ".json";
  writeFileSync(sidecarPath, sidecar);
  return { svgPath: spec.out, sidecarPath, aggregates };
}
