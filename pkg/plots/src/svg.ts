/**
 * Deterministic SVG chart builders. Output depends only on the aggregates
 * and the plot options: fixed layout and palette, no clock, value formatting
 * via the ECMAScript number-to-string algorithms.
 */

import { PointAggregate } from "./aggregate.js";
import { SchemaError } from "./schema.js";

export interface ChartOpts {
  title: string;
  subtitle: string;
  xLabel: string;
  yLabel: string;
  logx?: boolean;
  logy?: boolean;
  logz?: boolean;
}

const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f77f00", "#7b2cbf", "#0096c7", "#9c6644"];

// dark blue -> teal -> yellow, lerped in RGB
const RAMP: Array<[number, number, number]> = [
  [33, 5, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37],
];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtNum(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(6)));
  }
  return v.toExponential(2).replace(/\.?0+e/, "e");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || Math.abs(max) || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let k = Math.ceil(Math.log10(min) - 1e-9); k <= Math.log10(max) + 1e-9; k++) {
    ticks.push(Math.pow(10, k));
  }
  return ticks.length >= 2 ? ticks : [min, max];
}

interface Axis {
  of: (v: number) => number;
  ticks: number[];
}

function makeAxis(values: number[], lo: number, hi: number, log: boolean, label: string): Axis {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (log) {
    if (min <= 0) throw new SchemaError(`log scale on ${label} needs positive values, got ${min}`);
    const lmin = Math.log10(min), lmax = Math.log10(max);
    const span = lmax - lmin || 1;
    return {
      of: (v) => lo + ((Math.log10(v) - lmin) / span) * (hi - lo),
      ticks: decadeTicks(min, max),
    };
  }
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  return {
    of: (v) => lo + ((v - min) / span) * (hi - lo),
    ticks: niceTicks(min, max, 6).filter((t) => t >= min - 1e-9 * span && t <= max + 1e-9 * span),
  };
}

function rampColor(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(x));
  const f = x - i;
  const ch = (j: number) => Math.round(RAMP[i][j] + f * (RAMP[i + 1][j] - RAMP[i][j]));
  return `rgb(${ch(0)},${ch(1)},${ch(2)})`;
}

function header(W: number, H: number, opts: ChartOpts): string {
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="14" y="17" font-size="12" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  s += `<text x="14" y="30" font-size="8" fill="#888">${esc(opts.subtitle)}</text>\n`;
  return s;
}

/** Line chart: one polyline per series, points marked, legend when needed. */
export function lineChart(aggregates: PointAggregate[], opts: ChartOpts): string {
  const W = 640, H = 420;
  const ml = 70, mr = 20, mt = 44, mb = 52;
  const x0 = ml, x1 = W - mr, y0 = H - mb, y1 = mt;

  const bySeries = new Map<string, PointAggregate[]>();
  for (const a of aggregates) {
    const key = a.series ?? "";
    const group = bySeries.get(key);
    if (group) group.push(a);
    else bySeries.set(key, [a]);
  }
  const labels = [...bySeries.keys()].sort((a, b) => {
    const na = Number(a), nb = Number(b);
    return Number.isFinite(na) && Number.isFinite(nb) ? na - nb : a < b ? -1 : a > b ? 1 : 0;
  });

  const xs = aggregates.map((a) => a.x);
  const vs = aggregates.map((a) => a.value);
  const xAxis = makeAxis(xs, x0, x1, !!opts.logx, "x");
  const yAxis = makeAxis(vs, y0, y1, !!opts.logy, "y");

  let s = header(W, H, opts);

  for (const t of yAxis.ticks) {
    const y = yAxis.of(t).toFixed(1);
    s += `<line x1="${x0}" y1="${y}" x2="${x1}" y2="${y}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<text x="${x0 - 5}" y="${(yAxis.of(t) + 3).toFixed(1)}" text-anchor="end" font-size="8" fill="#666">${esc(fmtNum(t))}</text>\n`;
  }
  for (const t of xAxis.ticks) {
    const x = xAxis.of(t).toFixed(1);
    s += `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 4}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x}" y="${y0 + 15}" text-anchor="middle" font-size="8" fill="#666">${esc(fmtNum(t))}</text>\n`;
  }
  s += `<line x1="${x0}" y1="${y1}" x2="${x0}" y2="${y0}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<text x="${(x0 + x1) / 2}" y="${H - 8}" text-anchor="middle" font-size="9" fill="#444">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="9" fill="#444" transform="rotate(-90,14,${(y0 + y1) / 2})">${esc(opts.yLabel)}</text>\n`;

  labels.forEach((label, li) => {
    const color = PALETTE[li % PALETTE.length];
    const pts = [...bySeries.get(label)!].sort((a, b) => a.x - b.x);
    const path = pts.map((p) => `${xAxis.of(p.x).toFixed(1)},${yAxis.of(p.value).toFixed(1)}`).join(" ");
    s += `<polyline fill="none" stroke="${color}" stroke-width="1.4" points="${path}"/>\n`;
    for (const p of pts) {
      s += `<circle cx="${xAxis.of(p.x).toFixed(1)}" cy="${yAxis.of(p.value).toFixed(1)}" r="2.2" fill="${color}"/>\n`;
    }
  });

  if (labels.length > 1 || labels[0] !== "") {
    const lw = Math.max(...labels.map((l) => l.length)) * 5.5 + 30;
    const lx = x1 - lw, ly = y1 + 8;
    s += `<rect x="${lx - 4}" y="${ly - 9}" width="${lw + 8}" height="${labels.length * 12 + 6}" rx="2" fill="white" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
    labels.forEach((label, li) => {
      const color = PALETTE[li % PALETTE.length];
      const yy = ly + li * 12;
      s += `<line x1="${lx}" y1="${yy}" x2="${lx + 14}" y2="${yy}" stroke="${color}" stroke-width="1.4"/>\n`;
      s += `<text x="${lx + 18}" y="${yy + 3}" font-size="8" fill="#444">${esc(label)}</text>\n`;
    });
  }

  return s + `</svg>\n`;
}

/** Heatmap: one cell per grid point on the (x, y) lattice, color = value. */
export function heatmapChart(aggregates: PointAggregate[], opts: ChartOpts): string {
  const W = 640, H = 420;
  const ml = 70, mr = 86, mt = 44, mb = 52;
  const pw = W - ml - mr, ph = H - mt - mb;

  const xs = [...new Set(aggregates.map((a) => a.x))].sort((a, b) => a - b);
  const ys = [...new Set(aggregates.map((a) => a.y!))].sort((a, b) => a - b);
  const seen = new Set<string>();
  for (const a of aggregates) {
    const key = `${a.x}|${a.y}`;
    if (seen.has(key)) {
      throw new SchemaError(`two grid points land on the same heatmap cell (${fmtNum(a.x)}, ${fmtNum(a.y!)})`);
    }
    seen.add(key);
  }

  const values = aggregates.map((a) => a.value);
  let vmin = Math.min(...values);
  let vmax = Math.max(...values);
  let scale: (v: number) => number;
  if (opts.logz) {
    if (vmin <= 0) throw new SchemaError(`log color scale needs positive values, got ${vmin}`);
    const lmin = Math.log10(vmin), lmax = Math.log10(vmax);
    scale = (v) => (lmax === lmin ? 0.5 : (Math.log10(v) - lmin) / (lmax - lmin));
  } else {
    scale = (v) => (vmax === vmin ? 0.5 : (v - vmin) / (vmax - vmin));
  }

  const cw = pw / xs.length, chh = ph / ys.length;
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));

  let s = header(W, H, opts);

  for (const a of aggregates) {
    const cx = ml + xi.get(a.x)! * cw;
    // row 0 (smallest y) at the bottom
    const cy = mt + (ys.length - 1 - yi.get(a.y!)!) * chh;
    s += `<rect x="${cx.toFixed(2)}" y="${cy.toFixed(2)}" width="${cw.toFixed(2)}" height="${chh.toFixed(2)}" fill="${rampColor(scale(a.value))}"/>\n`;
  }

  s += `<rect x="${ml}" y="${mt}" width="${pw}" height="${ph}" fill="none" stroke="#333" stroke-width="0.7"/>\n`;
  xs.forEach((v, i) => {
    const x = (ml + (i + 0.5) * cw).toFixed(1);
    s += `<text x="${x}" y="${mt + ph + 13}" text-anchor="middle" font-size="8" fill="#666">${esc(fmtNum(v))}</text>\n`;
  });
  ys.forEach((v, i) => {
    const y = (mt + (ys.length - 1 - i + 0.5) * chh + 3).toFixed(1);
    s += `<text x="${ml - 5}" y="${y}" text-anchor="end" font-size="8" fill="#666">${esc(fmtNum(v))}</text>\n`;
  });
  s += `<text x="${ml + pw / 2}" y="${H - 8}" text-anchor="middle" font-size="9" fill="#444">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="9" fill="#444" transform="rotate(-90,14,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // color bar
  const bx = ml + pw + 18, bw = 12;
  const steps = 24;
  for (let i = 0; i < steps; i++) {
    const by = mt + ph - ((i + 1) / steps) * ph;
    s += `<rect x="${bx}" y="${by.toFixed(2)}" width="${bw}" height="${(ph / steps).toFixed(2)}" fill="${rampColor((i + 0.5) / steps)}"/>\n`;
  }
  s += `<rect x="${bx}" y="${mt}" width="${bw}" height="${ph}" fill="none" stroke="#333" stroke-width="0.5"/>\n`;
  const mid = opts.logz ? Math.sqrt(vmin * vmax) : (vmin + vmax) / 2;
  [[vmin, mt + ph], [mid, mt + ph / 2], [vmax, mt]].forEach(([v, y]) => {
    s += `<text x="${bx + bw + 4}" y="${(y as number) + 3}" font-size="8" fill="#666">${esc(fmtNum(v as number))}</text>\n`;
  });

  return s + `</svg>\n`;
}
