/** Enhancement heatmap over inequivalent class pairs (inputs on rows). */

import { GridExport, SchemaError } from "./schema.js";
import { PALETTE, divergingLogColor, scaleStops } from "./color.js";
import { el, fmt, svgDocument, text } from "./svg.js";

export interface HeatmapOptions {
  /** Cell edge length in px. */
  cell?: number;
  /** Saturation point of the diverging scale, in log2 units. */
  maxLog2?: number;
  /** Draw occupation labels along the axes (off for very large grids). */
  labels?: boolean;
  title?: string;
}

export function cellColor(
  cell: { tag: string; enhancement: number | null },
  maxLog2: number,
): string {
  if (cell.tag === "predicted_zero") return PALETTE.predictedZero;
  if (cell.tag === "unpredicted_zero") return PALETTE.unpredictedZero;
  if (cell.enhancement === null) return PALETTE.undefinedEnhancement;
  return divergingLogColor(cell.enhancement, maxLog2);
}

export function renderHeatmap(grid: GridExport, options: HeatmapOptions = {}): string {
  const k = grid.classes.length;
  const cellSize = options.cell ?? (k > 40 ? 10 : 14);
  const maxLog2 = options.maxLog2 ?? 4;
  const labels = options.labels ?? k <= 64;
  const title = options.title ?? `${grid.species} enhancement, ${grid.matrix}, N=${grid.particles}`;

  const index = new Map<string, number>();
  grid.classes.forEach((cls, i) => index.set(cls.occupation, i));
  for (const cell of grid.cells) {
    if (!index.has(cell.input) || !index.has(cell.output)) {
      throw new SchemaError(`cell (${cell.input} -> ${cell.output}) not covered by the class list`);
    }
  }

  const labelSpace = labels ? 8 + 6 * Math.max(...grid.classes.map((c) => c.occupation.length)) : 8;
  const left = labelSpace;
  const top = 24 + (labels ? labelSpace : 8);
  const legendHeight = 56;
  const width = left + k * cellSize + 16;
  const height = top + k * cellSize + legendHeight + 16;

  const body: string[] = [];
  body.push(text(left, 14, title, { "font-size": 12, fill: PALETTE.axis }));

  for (const cell of grid.cells) {
    const row = index.get(cell.input)!;
    const col = index.get(cell.output)!;
    body.push(el("rect", {
      x: left + col * cellSize,
      y: top + row * cellSize,
      width: cellSize,
      height: cellSize,
      fill: cellColor(cell, maxLog2),
    }));
  }
  body.push(el("rect", {
    x: left, y: top, width: k * cellSize, height: k * cellSize,
    fill: "none", stroke: PALETTE.axis, "stroke-width": 0.5,
  }));

  if (labels) {
    grid.classes.forEach((cls, i) => {
      body.push(text(left - 4, top + i * cellSize + cellSize * 0.72, cls.occupation, {
        "font-size": Math.min(8, cellSize - 2),
        "text-anchor": "end",
        fill: PALETTE.axis,
      }));
      const x = left + i * cellSize + cellSize * 0.72;
      body.push(el(
        "text",
        {
          x,
          y: top - 4,
          "font-size": Math.min(8, cellSize - 2),
          "text-anchor": "start",
          fill: PALETTE.axis,
          "font-family": "Helvetica, Arial, sans-serif",
          transform: `rotate(-90 ${fmt(x)} ${fmt(top - 4)})`,
        },
        cls.occupation,
      ));
    });
  }

  // legend: diverging color bar plus the two zero-cell categories
  const legendY = top + k * cellSize + 18;
  const barWidth = Math.min(220, k * cellSize);
  const stops = scaleStops(32, maxLog2);
  const step = barWidth / stops.length;
  stops.forEach((color, i) => {
    body.push(el("rect", { x: left + i * step, y: legendY, width: step + 0.5, height: 10, fill: color }));
  });
  body.push(text(left, legendY + 22, `1/${2 ** maxLog2}`, { "font-size": 9, fill: PALETTE.axis }));
  body.push(text(left + barWidth / 2, legendY + 22, "1", {
    "font-size": 9, "text-anchor": "middle", fill: PALETTE.axis,
  }));
  body.push(text(left + barWidth, legendY + 22, `${2 ** maxLog2}`, {
    "font-size": 9, "text-anchor": "end", fill: PALETTE.axis,
  }));
  const catX = left + barWidth + 20;
  body.push(el("rect", { x: catX, y: legendY, width: 10, height: 10, fill: PALETTE.predictedZero }));
  body.push(text(catX + 14, legendY + 9, "suppressed (law)", { "font-size": 9, fill: PALETTE.axis }));
  body.push(el("rect", { x: catX, y: legendY + 14, width: 10, height: 10, fill: PALETTE.unpredictedZero }));
  body.push(text(catX + 14, legendY + 23, "suppressed (not predicted)", { "font-size": 9, fill: PALETTE.axis }));

  const fullWidth = Math.max(width, catX + 160);
  return svgDocument(fullWidth, height, body);
}
