/** Glue between validated specs and the pure renderers: reads inputs,
 * dispatches on kind, writes the PNG. */

import { FigureSpec } from "./spec";
import { readSnapshot, Snapshot } from "./snapshot";
import { readDiagnostics, readRadialFit, RadialFit } from "./csv";
import { extractField } from "./fields";
import { renderSurface, renderHeatmap, renderSlice, renderSeries, RenderOptions } from "./render";
import { Raster } from "./raster";

/** Render one figure; throws on unreadable inputs or field errors. */
export function renderFigure(spec: FigureSpec): void {
  const opts: RenderOptions = {
    width: spec.width,
    height: spec.height,
    title: spec.title,
    vMin: spec.vMin,
    vMax: spec.vMax,
    axis: spec.axis,
    column: spec.column,
  };

  let raster: Raster;
  if (spec.kind === "series") {
    const diag = readDiagnostics(spec.inputs[0]);
    const fit: RadialFit | null = spec.fit !== undefined ? readRadialFit(spec.fit) : null;
    raster = renderSeries(diag, fit, opts);
  } else {
    const snaps: Snapshot[] = spec.inputs.map(readSnapshot);
    const fields = snaps.map((snap) => extractField(snap, spec.field));
    if (spec.kind === "surface") {
      raster = renderSurface(snaps[0], fields[0], opts);
    } else if (spec.kind === "heatmap") {
      raster = renderHeatmap(snaps[0], fields[0], opts);
    } else {
      raster = renderSlice(snaps, fields, opts);
    }
  }
  raster.writePng(spec.out);
}
