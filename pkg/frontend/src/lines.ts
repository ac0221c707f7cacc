/** Distribution comparison chart: overlaid series in fixed class order. */

import { DistributionExport, SchemaError } from "./schema.js";
import { PALETTE } from "./color.js";
import { el, fmt, svgDocument, text } from "./svg.js";

export interface SeriesSpec {
  label: string;
  table: DistributionExport;
}

export interface LinesOptions {
  width?: number;
  height?: number;
  /** Add the equiprobable reference multiplicity_i / sum(multiplicity). */
  equiprobable?: boolean;
  /** Probabilities below this floor are clamped on the log axis. */
  floor?: number;
  title?: string;
}

const SERIES_COLORS = ["#1f77b4", "#000000", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];
const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

function marker(kind: (typeof MARKERS)[number], x: number, y: number, r: number, color: string): string {
  switch (kind) {
    case "circle":
      return el("circle", { cx: x, cy: y, r, fill: color });
    case "square":
      return el("rect", { x: x - r, y: y - r, width: 2 * r, height: 2 * r, fill: color });
    case "diamond":
      return el("path", {
        d: `M ${fmt(x)} ${fmt(y - r * 1.3)} L ${fmt(x + r * 1.3)} ${fmt(y)} ` +
          `L ${fmt(x)} ${fmt(y + r * 1.3)} L ${fmt(x - r * 1.3)} ${fmt(y)} Z`,
        fill: color,
      });
    case "triangle":
      return el("path", {
        d: `M ${fmt(x)} ${fmt(y - r * 1.2)} L ${fmt(x + r * 1.2)} ${fmt(y + r)} ` +
          `L ${fmt(x - r * 1.2)} ${fmt(y + r)} Z`,
        fill: color,
      });
  }
}

export function renderLines(series: SeriesSpec[], options: LinesOptions = {}): string {
  if (series.length === 0) throw new SchemaError("need at least one series");
  const base = series[0].table;
  for (const spec of series.slice(1)) {
    if (spec.table.rows.length !== base.rows.length) {
      throw new SchemaError(
        `series ${spec.label} has ${spec.table.rows.length} rows, expected ${base.rows.length}`);
    }
    spec.table.rows.forEach((row, i) => {
      if (row.output !== base.rows[i].output) {
        throw new SchemaError(
          `series ${spec.label} row ${i} is ${row.output}, expected ${base.rows[i].output}`);
      }
    });
  }

  const width = options.width ?? 760;
  const height = options.height ?? 360;
  const floor = options.floor ?? 1e-6;
  const title = options.title ?? `output distributions, ${base.matrix}`;
  const left = 56;
  const top = 28;
  const plotW = width - left - 16;
  const plotH = height - top - 64;

  const values: { label: string; data: number[] }[] = series.map((spec) => ({
    label: spec.label,
    data: spec.table.rows.map((row) => row.probability),
  }));
  if (options.equiprobable) {
    const total = base.rows.reduce((acc, row) => acc + row.class_multiplicity, 0);
    values.push({
      label: "equiprobable",
      data: base.rows.map((row) => row.class_multiplicity / total),
    });
  }

  const finite = values.flatMap((s) => s.data).filter((v) => v > floor);
  const vMax = Math.max(...finite, floor * 10);
  const logMin = Math.floor(Math.log10(floor));
  const logMax = Math.ceil(Math.log10(vMax));
  const yOf = (p: number): number => {
    const clamped = Math.max(p, floor);
    const t = (Math.log10(clamped) - logMin) / (logMax - logMin);
    return top + plotH - t * plotH;
  };
  const k = base.rows.length;
  const xOf = (i: number): number => left + (k === 1 ? plotW / 2 : (i * plotW) / (k - 1));

  const body: string[] = [];
  body.push(text(left, 14, title, { "font-size": 12, fill: PALETTE.axis }));

  for (let decade = logMin; decade <= logMax; decade += 1) {
    const y = yOf(10 ** decade);
    body.push(el("line", { x1: left, y1: y, x2: left + plotW, y2: y, stroke: PALETTE.gridLine, "stroke-width": 0.6 }));
    body.push(text(left - 6, y + 3, `1e${decade}`, { "font-size": 9, "text-anchor": "end", fill: PALETTE.axis }));
  }
  body.push(el("rect", { x: left, y: top, width: plotW, height: plotH, fill: "none", stroke: PALETTE.axis, "stroke-width": 0.8 }));
  body.push(text(left + plotW / 2, top + plotH + 16,
    "output classes (many particles in few modes on the left)",
    { "font-size": 10, "text-anchor": "middle", fill: PALETTE.axis }));

  values.forEach((spec, si) => {
    const color = SERIES_COLORS[si % SERIES_COLORS.length];
    const kind = MARKERS[si % MARKERS.length];
    const path = spec.data
      .map((v, i) => `${i === 0 ? "M" : "L"} ${fmt(xOf(i))} ${fmt(yOf(v))}`)
      .join(" ");
    body.push(el("path", { d: path, fill: "none", stroke: color, "stroke-width": 1, "stroke-dasharray": si % 2 ? "4 2" : "none" }));
    spec.data.forEach((v, i) => {
      body.push(marker(kind, xOf(i), yOf(v), 2.4, color));
    });
    const legendX = left + 8;
    const legendY = top + plotH + 30 + si * 12;
    body.push(marker(kind, legendX, legendY - 3, 2.8, color));
    body.push(text(legendX + 10, legendY, spec.label, { "font-size": 10, fill: PALETTE.axis }));
  });

  return svgDocument(width, height, body);
}
