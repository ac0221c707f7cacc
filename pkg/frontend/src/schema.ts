/** Types and validation for the multiport CLI JSON exports. */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export type LawDirection = "forward" | "reverse" | "none";
export type CellTag = "predicted_zero" | "unpredicted_zero" | "nonzero";

export interface GridClass {
  occupation: string;
  multiplicity: number;
}

export interface GridCell {
  input: string;
  output: string;
  probability: number;
  enhancement: number | null;
  law: LawDirection;
  tag: CellTag;
}

export interface GridExport {
  matrix: string;
  species: string;
  n: number;
  particles: number;
  pauli_only: boolean;
  classes: GridClass[];
  cells: GridCell[];
}

export interface DistributionRow {
  output: string;
  class_multiplicity: number;
  probability: number;
  enhancement: number | null;
  law_suppressed: boolean;
}

export interface DistributionExport {
  matrix: string;
  species: string;
  input: string | null;
  rows: DistributionRow[];
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function need<T>(cond: boolean, message: string): asserts cond {
  if (!cond) throw new SchemaError(message);
}

function asFiniteNumber(value: unknown, where: string): number {
  need(typeof value === "number" && Number.isFinite(value), `${where}: expected a finite number`);
  return value;
}

function asString(value: unknown, where: string): string {
  need(typeof value === "string", `${where}: expected a string`);
  return value;
}

function asBoolean(value: unknown, where: string): boolean {
  need(typeof value === "boolean", `${where}: expected a boolean`);
  return value;
}

function asEnhancement(value: unknown, where: string): number | null {
  if (value === null) return null;
  return asFiniteNumber(value, where);
}

const LAW_VALUES = new Set(["forward", "reverse", "none"]);
const TAG_VALUES = new Set(["predicted_zero", "unpredicted_zero", "nonzero"]);

export function parseGridExport(data: unknown): GridExport {
  need(isRecord(data), "grid export: expected a JSON object");
  const matrix = asString(data.matrix, "grid.matrix");
  const species = asString(data.species, "grid.species");
  const n = asFiniteNumber(data.n, "grid.n");
  const particles = asFiniteNumber(data.particles, "grid.particles");
  const pauliOnly = asBoolean(data.pauli_only, "grid.pauli_only");
  need(Array.isArray(data.classes), "grid.classes: expected an array");
  need(Array.isArray(data.cells), "grid.cells: expected an array");

  const classes: GridClass[] = (data.classes as unknown[]).map((entry, i) => {
    need(isRecord(entry), `grid.classes[${i}]: expected an object`);
    return {
      occupation: asString(entry.occupation, `grid.classes[${i}].occupation`),
      multiplicity: asFiniteNumber(entry.multiplicity, `grid.classes[${i}].multiplicity`),
    };
  });
  const cells: GridCell[] = (data.cells as unknown[]).map((entry, i) => {
    need(isRecord(entry), `grid.cells[${i}]: expected an object`);
    const law = asString(entry.law, `grid.cells[${i}].law`);
    const tag = asString(entry.tag, `grid.cells[${i}].tag`);
    need(LAW_VALUES.has(law), `grid.cells[${i}].law: unknown value ${law}`);
    need(TAG_VALUES.has(tag), `grid.cells[${i}].tag: unknown value ${tag}`);
    return {
      input: asString(entry.input, `grid.cells[${i}].input`),
      output: asString(entry.output, `grid.cells[${i}].output`),
      probability: asFiniteNumber(entry.probability, `grid.cells[${i}].probability`),
      enhancement: asEnhancement(entry.enhancement, `grid.cells[${i}].enhancement`),
      law: law as LawDirection,
      tag: tag as CellTag,
    };
  });
  need(classes.length > 0, "grid export holds no classes");
  need(cells.length === classes.length * classes.length,
    `grid export holds ${cells.length} cells for ${classes.length} classes`);
  return { matrix, species, n, particles, pauli_only: pauliOnly, classes, cells };
}

export function parseDistributionExport(data: unknown): DistributionExport {
  need(isRecord(data), "distribution export: expected a JSON object");
  const matrix = asString(data.matrix, "distribution.matrix");
  const species = asString(data.species, "distribution.species");
  const input = data.input === null ? null : asString(data.input, "distribution.input");
  need(Array.isArray(data.rows), "distribution.rows: expected an array");
  const rows: DistributionRow[] = (data.rows as unknown[]).map((entry, i) => {
    need(isRecord(entry), `distribution.rows[${i}]: expected an object`);
    return {
      output: asString(entry.output, `distribution.rows[${i}].output`),
      class_multiplicity: asFiniteNumber(entry.class_multiplicity, `distribution.rows[${i}].class_multiplicity`),
      probability: asFiniteNumber(entry.probability, `distribution.rows[${i}].probability`),
      enhancement: asEnhancement(entry.enhancement, `distribution.rows[${i}].enhancement`),
      law_suppressed: asBoolean(entry.law_suppressed, `distribution.rows[${i}].law_suppressed`),
    };
  });
  need(rows.length > 0, "distribution export holds no rows");
  return { matrix, species, input, rows };
}
