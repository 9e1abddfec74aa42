#!/usr/bin/env node
/**
 * sgnplot: render figures from solver snapshot and diagnostics files.
 *
 * Two calling styles:
 *   sgnplot suite.json [more.json ...]     batch mode, specs from JSON
 *   sgnplot --kind slice --input a.sgn2 --input b.sgn2 --out fig.png
 *
 * Exit codes: 0 all figures rendered, 2 bad spec or usage,
 * 1 input parse or render failure (each reported per file).
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { loadSpecFile, validateSpec, FigureSpec, SpecError } from "./spec";
import { renderFigure } from "./figure";

function collectSpecs(argv: Record<string, unknown>): FigureSpec[] {
  const files = (argv._ as Array<string | number>).map(String);
  if (files.length > 0 && argv.kind !== undefined) {
    throw new SpecError("give spec files or --kind flags, not both");
  }
  if (files.length > 0) {
    return files.flatMap((f) => loadSpecFile(f));
  }
  if (argv.kind === undefined) {
    throw new SpecError("nothing to do: pass a spec file or --kind (see --help)");
  }
  const raw: Record<string, unknown> = {
    kind: argv.kind,
    inputs: argv.input,
    out: argv.out,
  };
  for (const key of ["field", "fit", "title", "axis", "column", "vmin", "vmax", "width", "height"]) {
    if (argv[key] !== undefined) {
      raw[key] = argv[key];
    }
  }
  return [validateSpec(raw, process.cwd(), "flags")];
}

export function main(args: string[]): number {
  const argv = yargs(args)
    .usage("sgnplot <spec.json...> | sgnplot --kind ... --input ... --out ...")
    .option("kind", { type: "string", describe: "surface | heatmap | series | slice" })
    .option("input", { type: "string", array: true, describe: "snapshot file(s) or one diagnostics CSV" })
    .option("out", { type: "string", describe: "output PNG path" })
    .option("field", { type: "string", describe: "h | ux | uy | ur | uphi | diff" })
    .option("fit", { type: "string", describe: "RadialFit JSON to overlay (series)" })
    .option("title", { type: "string" })
    .option("axis", { type: "string", describe: "slice direction: x | y" })
    .option("column", { type: "string", describe: "series CSV column (default hmin)" })
    .option("vmin", { type: "number" })
    .option("vmax", { type: "number" })
    .option("width", { type: "number" })
    .option("height", { type: "number" })
    .help()
    .strict()
    .exitProcess(false)
    .parseSync();

  let specs: FigureSpec[];
  try {
    specs = collectSpecs(argv as Record<string, unknown>);
  } catch (err) {
    if (err instanceof SpecError) {
      process.stderr.write(`sgnplot: ${err.message}\n`);
      return 2;
    }
    throw err;
  }

  let failures = 0;
  for (const spec of specs) {
    try {
      renderFigure(spec);
      process.stdout.write(`${spec.kind} -> ${spec.out}\n`);
    } catch (err) {
      failures += 1;
      process.stderr.write(`sgnplot: ${spec.out}: ${(err as Error).message}\n`);
    }
  }
  return failures > 0 ? 1 : 0;
}

/* istanbul ignore next */
if (require.main === module) {
  process.exitCode = main(hideBin(process.argv));
}
