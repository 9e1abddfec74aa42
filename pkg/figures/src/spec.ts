/**
 * Figure specifications: the JSON schema the CLI consumes and its
 * validation.  A spec file holds one spec object or an array of them;
 * relative paths inside a file resolve against the file's directory.
 */

import * as path from "node:path";
import * as fs from "node:fs";
import { FIELDS, FieldName } from "./fields";

export type FigureKind = "surface" | "heatmap" | "series" | "slice";

const KINDS: ReadonlySet<string> = new Set(["surface", "heatmap", "series", "slice"]);

export class SpecError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "SpecError";
  }
}

export interface FigureSpec {
  kind: FigureKind;
  /** Snapshot files, or exactly one diagnostics CSV for `series`. */
  inputs: string[];
  out: string;
  field: FieldName;
  /** RadialFit JSON to overlay on a series plot. */
  fit?: string;
  title?: string;
  axis?: "x" | "y";
  column?: string;
  vMin?: number;
  vMax?: number;
  width: number;
  height: number;
}

const FIELD_ALIASES: Record<string, FieldName> = {
  u_r: "ur",
  u_phi: "uphi",
  "u_φ": "uphi",
};

function asField(raw: unknown, ctx: string): FieldName {
  if (raw === undefined) {
    return "h";
  }
  if (typeof raw !== "string") {
    throw new SpecError(`${ctx}: field must be a string`);
  }
  const name = FIELD_ALIASES[raw] ?? raw;
  if (!(FIELDS as readonly string[]).includes(name)) {
    throw new SpecError(`${ctx}: unknown field '${raw}' (use ${FIELDS.join(", ")})`);
  }
  return name as FieldName;
}

function asNumber(raw: unknown, what: string, ctx: string): number | undefined {
  if (raw === undefined) {
    return undefined;
  }
  if (typeof raw !== "number" || !Number.isFinite(raw)) {
    throw new SpecError(`${ctx}: ${what} must be a finite number`);
  }
  return raw;
}

function asSize(raw: unknown, what: string, fallback: number, ctx: string): number {
  if (raw === undefined) {
    return fallback;
  }
  if (typeof raw !== "number" || !Number.isInteger(raw) || raw < 64 || raw > 4096) {
    throw new SpecError(`${ctx}: ${what} must be an integer in [64, 4096]`);
  }
  return raw;
}

/** Validate one raw spec object; `baseDir` anchors relative paths. */
export function validateSpec(raw: unknown, baseDir: string, ctx = "spec"): FigureSpec {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new SpecError(`${ctx}: expected an object`);
  }
  const o = raw as Record<string, unknown>;

  const known = new Set([
    "kind", "inputs", "input", "out", "field", "fit", "title",
    "axis", "column", "vmin", "vmax", "width", "height",
  ]);
  for (const key of Object.keys(o)) {
    if (!known.has(key)) {
      throw new SpecError(`${ctx}: unknown key '${key}'`);
    }
  }

  if (typeof o.kind !== "string" || !KINDS.has(o.kind)) {
    throw new SpecError(`${ctx}: kind must be one of surface, heatmap, series, slice`);
  }
  const kind = o.kind as FigureKind;

  const rawInputs = o.inputs ?? o.input;
  let inputs: string[];
  if (typeof rawInputs === "string") {
    inputs = [rawInputs];
  } else if (Array.isArray(rawInputs) && rawInputs.every((p) => typeof p === "string")) {
    inputs = rawInputs as string[];
  } else if (rawInputs === undefined) {
    inputs = [];
  } else {
    throw new SpecError(`${ctx}: inputs must be a path or an array of paths`);
  }
  if (inputs.length === 0) {
    throw new SpecError(`${ctx}: no input files given`);
  }
  if ((kind === "surface" || kind === "heatmap" || kind === "series") && inputs.length !== 1) {
    throw new SpecError(`${ctx}: ${kind} takes exactly one input, got ${inputs.length}`);
  }

  if (typeof o.out !== "string" || o.out.length === 0) {
    throw new SpecError(`${ctx}: out must be a non-empty path`);
  }

  if (o.fit !== undefined && kind !== "series") {
    throw new SpecError(`${ctx}: fit overlay only applies to series plots`);
  }
  if (o.fit !== undefined && typeof o.fit !== "string") {
    throw new SpecError(`${ctx}: fit must be a path`);
  }
  if (o.axis !== undefined && kind !== "slice") {
    throw new SpecError(`${ctx}: axis only applies to slice plots`);
  }
  if (o.axis !== undefined && o.axis !== "x" && o.axis !== "y") {
    throw new SpecError(`${ctx}: axis must be "x" or "y"`);
  }
  if (o.column !== undefined && (kind !== "series" || typeof o.column !== "string")) {
    throw new SpecError(`${ctx}: column selects a series CSV column`);
  }
  if (o.title !== undefined && typeof o.title !== "string") {
    throw new SpecError(`${ctx}: title must be a string`);
  }

  const anchor = (p: string): string => (path.isAbsolute(p) ? p : path.join(baseDir, p));

  return {
    kind,
    inputs: inputs.map(anchor),
    out: anchor(o.out),
    field: asField(o.field, ctx),
    fit: o.fit !== undefined ? anchor(o.fit as string) : undefined,
    title: o.title as string | undefined,
    axis: o.axis as "x" | "y" | undefined,
    column: o.column as string | undefined,
    vMin: asNumber(o.vmin, "vmin", ctx),
    vMax: asNumber(o.vmax, "vmax", ctx),
    width: asSize(o.width, "width", 760, ctx),
    height: asSize(o.height, "height", 520, ctx),
  };
}

/** Load a spec file: one object or an array of them. */
export function loadSpecFile(filePath: string): FigureSpec[] {
  let text: string;
  try {
    text = fs.readFileSync(filePath, "utf8");
  } catch (err) {
    throw new SpecError(`cannot read ${filePath}: ${(err as Error).message}`);
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    throw new SpecError(`${filePath}: not valid JSON: ${(err as Error).message}`);
  }
  const baseDir = path.dirname(path.resolve(filePath));
  const items = Array.isArray(parsed) ? parsed : [parsed];
  if (items.length === 0) {
    throw new SpecError(`${filePath}: spec file is empty`);
  }
  return items.map((item, k) => validateSpec(item, baseDir, `${filePath}[${k}]`));
}
