/** Render multiport CLI exports to SVG (and optionally PNG via sharp).
 *
 * Usage:
 *   multiport-plots heatmap --input grid.json --out fig.svg [--png fig.png]
 *                           [--cell 12] [--max-log2 4] [--no-labels]
 *   multiport-plots lines   --input a.json --label "distinguishable"
 *                           --input b.json --label "bosons, pure"
 *                           [--equiprobable] --out fig.svg [--png fig.png]
 *
 * Exit codes: 0 ok, 2 usage or schema error, 3 I/O error.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseDistributionExport, parseGridExport, SchemaError } from "./schema.js";
import { renderHeatmap } from "./heatmap.js";
import { renderLines, SeriesSpec } from "./lines.js";

interface ParsedArgs {
  command: string;
  inputs: string[];
  labels: string[];
  out: string | null;
  png: string | null;
  cell: number | null;
  maxLog2: number | null;
  labelsOn: boolean;
  equiprobable: boolean;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): ParsedArgs {
  if (argv.length === 0) throw new UsageError("missing command (heatmap | lines)");
  const [command, ...rest] = argv;
  const parsed: ParsedArgs = {
    command,
    inputs: [],
    labels: [],
    out: null,
    png: null,
    cell: null,
    maxLog2: null,
    labelsOn: true,
    equiprobable: false,
  };
  for (let i = 0; i < rest.length; i += 1) {
    const flag = rest[i];
    const needValue = (): string => {
      i += 1;
      if (i >= rest.length) throw new UsageError(`${flag} needs a value`);
      return rest[i];
    };
    switch (flag) {
      case "--input": parsed.inputs.push(needValue()); break;
      case "--label": parsed.labels.push(needValue()); break;
      case "--out": parsed.out = needValue(); break;
      case "--png": parsed.png = needValue(); break;
      case "--cell": parsed.cell = Number(needValue()); break;
      case "--max-log2": parsed.maxLog2 = Number(needValue()); break;
      case "--no-labels": parsed.labelsOn = false; break;
      case "--equiprobable": parsed.equiprobable = true; break;
      default: throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (parsed.inputs.length === 0) throw new UsageError("need at least one --input");
  if (parsed.out === null && parsed.png === null) throw new UsageError("need --out (and/or --png)");
  return parsed;
}

function readJson(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf-8"));
}

type SharpFactory = (input: Buffer, options?: { density?: number }) => {
  png(): { toBuffer(): Promise<Buffer> };
};

async function writePng(svg: string, path: string): Promise<void> {
  let sharp: SharpFactory;
  try {
    sharp = (await import("sharp")).default as unknown as SharpFactory;
  } catch {
    throw new UsageError("--png needs the optional 'sharp' dependency (npm install sharp)");
  }
  const buffer = await sharp(Buffer.from(svg), { density: 192 }).png().toBuffer();
  writeFileSync(path, buffer);
}

export async function runCli(argv: string[]): Promise<number> {
  let args: ParsedArgs;
  try {
    args = parseArgs(argv);
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 2;
  }
  try {
    let svg: string;
    if (args.command === "heatmap") {
      if (args.inputs.length !== 1) throw new UsageError("heatmap takes exactly one --input");
      const grid = parseGridExport(readJson(args.inputs[0]));
      svg = renderHeatmap(grid, {
        cell: args.cell ?? undefined,
        maxLog2: args.maxLog2 ?? undefined,
        labels: args.labelsOn,
      });
    } else if (args.command === "lines") {
      const series: SeriesSpec[] = args.inputs.map((path, i) => ({
        label: args.labels[i] ?? path,
        table: parseDistributionExport(readJson(path)),
      }));
      svg = renderLines(series, { equiprobable: args.equiprobable });
    } else {
      throw new UsageError(`unknown command ${args.command}`);
    }
    if (args.out !== null) writeFileSync(args.out, svg);
    if (args.png !== null) await writePng(svg, args.png);
    return 0;
  } catch (error) {
    if (error instanceof UsageError || error instanceof SchemaError) {
      console.error(`error: ${error.message}`);
      return 2;
    }
    if (error instanceof SyntaxError || (error as NodeJS.ErrnoException).code !== undefined) {
      console.error(`error: ${(error as Error).message}`);
      return 3;
    }
    throw error;
  }
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
