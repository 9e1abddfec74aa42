/** Axes layout: data-to-pixel transforms, tick placement, frame drawing. */

import { Raster } from "./raster";
import { Rgb, sequential, diverging } from "./colormap";
import { textWidth, GLYPH_HEIGHT } from "./font";

export const AXIS_COLOR: Rgb = [40, 40, 40];
export const GRID_COLOR: Rgb = [225, 225, 225];

export interface Frame {
  /** Plot rectangle in pixels (top-left corner, width, height). */
  readonly x0: number;
  readonly y0: number;
  readonly w: number;
  readonly h: number;
  /** Data ranges mapped onto the rectangle. */
  readonly xMin: number;
  readonly xMax: number;
  readonly yMin: number;
  readonly yMax: number;
}

/** Data x -> pixel column (y grows downward, so py inverts). */
export function px(f: Frame, x: number): number {
  return f.x0 + ((x - f.xMin) / (f.xMax - f.xMin)) * f.w;
}

export function py(f: Frame, y: number): number {
  return f.y0 + f.h - ((y - f.yMin) / (f.yMax - f.yMin)) * f.h;
}

/** Widen a degenerate range so transforms stay finite. */
export function padRange(min: number, max: number): [number, number] {
  if (min === max) {
    const eps = Math.abs(min) > 1e-300 ? Math.abs(min) * 1e-3 : 1e-3;
    return [min - eps, max + eps];
  }
  return [min, max];
}

/** Tick positions on the 1-2-5 ladder covering [min, max]. */
export function niceTicks(min: number, max: number, target = 6): number[] {
  const span = max - min;
  if (!(span > 0) || !Number.isFinite(span)) {
    return [min];
  }
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(min / step - 1e-9) * step;
  for (let v = first; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Compact label for a tick value given the tick spacing. */
export function formatTick(v: number, step: number): string {
  if (v === 0) {
    return "0";
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  if (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-4) {
    return v.toExponential(1).replace("e", "e");
  }
  return v.toFixed(Math.min(decimals, 6));
}

export function drawFrame(r: Raster, f: Frame, xLabel: string, yLabel: string): void {
  const xt = niceTicks(f.xMin, f.xMax);
  const yt = niceTicks(f.yMin, f.yMax);
  const xStep = xt.length > 1 ? xt[1] - xt[0] : 1;
  const yStep = yt.length > 1 ? yt[1] - yt[0] : 1;

  for (const v of xt) {
    const cx = Math.round(px(f, v));
    r.line(cx, f.y0, cx, f.y0 + f.h, GRID_COLOR);
  }
  for (const v of yt) {
    const cy = Math.round(py(f, v));
    r.line(f.x0, cy, f.x0 + f.w, cy, GRID_COLOR);
  }

  // Box on top of the grid lines.
  r.line(f.x0, f.y0, f.x0 + f.w, f.y0, AXIS_COLOR);
  r.line(f.x0, f.y0 + f.h, f.x0 + f.w, f.y0 + f.h, AXIS_COLOR);
  r.line(f.x0, f.y0, f.x0, f.y0 + f.h, AXIS_COLOR);
  r.line(f.x0 + f.w, f.y0, f.x0 + f.w, f.y0 + f.h, AXIS_COLOR);

  for (const v of xt) {
    const cx = Math.round(px(f, v));
    r.line(cx, f.y0 + f.h, cx, f.y0 + f.h + 4, AXIS_COLOR);
    const label = formatTick(v, xStep);
    r.text(cx - Math.floor(textWidth(label) / 2), f.y0 + f.h + 7, label, AXIS_COLOR);
  }
  for (const v of yt) {
    const cy = Math.round(py(f, v));
    r.line(f.x0 - 4, cy, f.x0, cy, AXIS_COLOR);
    const label = formatTick(v, yStep);
    r.text(f.x0 - 6 - textWidth(label), cy - Math.floor(GLYPH_HEIGHT / 2), label, AXIS_COLOR);
  }

  if (xLabel) {
    r.text(
      f.x0 + Math.floor(f.w / 2) - Math.floor(textWidth(xLabel) / 2),
      f.y0 + f.h + 22,
      xLabel,
      AXIS_COLOR,
    );
  }
  if (yLabel) {
    // Horizontal label above the axis; rotated text is not worth the blur.
    r.text(f.x0 - 6 - textWidth(yLabel), Math.max(2, f.y0 - 14), yLabel, AXIS_COLOR);
  }
}

/** Vertical colorbar with min/max labels. */
export function drawColorbar(
  r: Raster,
  x: number,
  y: number,
  w: number,
  h: number,
  divergingMap: boolean,
  vMin: number,
  vMax: number,
): void {
  const map = divergingMap ? diverging : sequential;
  for (let row = 0; row < h; row++) {
    const t = 1 - row / (h - 1);
    const color = map(t);
    for (let col = 0; col < w; col++) {
      r.set(x + col, y + row, color);
    }
  }
  r.line(x, y, x + w, y, AXIS_COLOR);
  r.line(x, y + h, x + w, y + h, AXIS_COLOR);
  r.line(x, y, x, y + h, AXIS_COLOR);
  r.line(x + w, y, x + w, y + h, AXIS_COLOR);
  const top = vMax.toPrecision(3);
  const bottom = vMin.toPrecision(3);
  r.text(x + w + 4, y - 3, top, AXIS_COLOR);
  r.text(x + w + 4, y + h - 4, bottom, AXIS_COLOR);
}
