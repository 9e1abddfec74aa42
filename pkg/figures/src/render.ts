/**
 * Figure renderers: surface, heatmap, slice, series.
 *
 * Each renderer takes already-parsed inputs and draws into a Raster;
 * callers decide file names.  All four are deterministic functions of
 * their inputs.
 */

import { Raster } from "./raster";
import { Rgb, sequential, diverging, LINE_COLORS } from "./colormap";
import {
  Frame,
  px,
  py,
  padRange,
  drawFrame,
  drawColorbar,
  AXIS_COLOR,
} from "./layout";
import { textWidth, GLYPH_HEIGHT } from "./font";
import { Snapshot } from "./snapshot";
import { Diagnostics, RadialFit } from "./csv";
import { FieldData } from "./fields";

export interface RenderOptions {
  width: number;
  height: number;
  title?: string;
  /** Color range override; defaults to the data range. */
  vMin?: number;
  vMax?: number;
  /** Slice direction ("x" cuts along x at y=0, "y" the transpose). */
  axis?: "x" | "y";
  /** Series column name (default "hmin"). */
  column?: string;
}

function fieldRange(values: Float64Array, opts: RenderOptions, divergingMap: boolean): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (divergingMap) {
    const amp = Math.max(Math.abs(lo), Math.abs(hi), 1e-300);
    [lo, hi] = [-amp, amp];
  }
  if (opts.vMin !== undefined) lo = opts.vMin;
  if (opts.vMax !== undefined) hi = opts.vMax;
  return padRange(lo, hi);
}

function colorAt(t: number, divergingMap: boolean): Rgb {
  return divergingMap ? diverging(t) : sequential(t);
}

function drawTitle(r: Raster, title: string | undefined): void {
  if (title) {
    r.text(Math.max(4, Math.floor((r.width - textWidth(title)) / 2)), 6, title, AXIS_COLOR);
  }
}

/** Subsampling stride so surface meshes stay below ~180 cells per axis. */
function meshStride(n: number): number {
  return Math.max(1, Math.ceil(n / 180));
}

function shade(c: Rgb, f: number): Rgb {
  return [Math.round(c[0] * f), Math.round(c[1] * f), Math.round(c[2] * f)];
}

/** Oblique-projection surface plot, painted back to front. */
export function renderSurface(snap: Snapshot, field: FieldData, opts: RenderOptions): Raster {
  const r = new Raster(opts.width, opts.height);
  drawTitle(r, opts.title);

  const { Nx: nx, Ny: ny } = snap.grid;
  const sx = meshStride(nx);
  const sy = meshStride(ny);
  const is: number[] = [];
  for (let i = 0; i < nx; i += sx) is.push(i);
  if (is[is.length - 1] !== nx - 1) is.push(nx - 1);
  const js: number[] = [];
  for (let j = 0; j < ny; j += sy) js.push(j);
  if (js[js.length - 1] !== ny - 1) js.push(ny - 1);

  const [vLo, vHi] = fieldRange(field.values, opts, field.diverging);

  // Projection: x spans most of the width, y recedes up and to the
  // right, z is vertical.  Margins leave room for title and colorbar.
  const mLeft = 20;
  const mRight = 78;
  const mTop = 26;
  const mBottom = 16;
  const depthX = 0.28 * (opts.width - mLeft - mRight);
  const depthY = 0.32 * (opts.height - mTop - mBottom);
  const plotW = opts.width - mLeft - mRight - depthX;
  const plotH = opts.height - mTop - mBottom - depthY;

  const proj = (u: number, v: number, z: number): [number, number] => {
    const zn = (z - vLo) / (vHi - vLo);
    return [
      mLeft + u * plotW + v * depthX,
      mTop + depthY - v * depthY + (1 - zn) * plotH,
    ];
  };

  const at = (i: number, j: number): number => field.values[i * ny + j];

  // Back rows first (larger j recedes); each cell is one filled quad.
  for (let jj = js.length - 2; jj >= 0; jj--) {
    for (let ii = 0; ii < is.length - 1; ii++) {
      const i0 = is[ii];
      const i1 = is[ii + 1];
      const j0 = js[jj];
      const j1 = js[jj + 1];
      const zs = [at(i0, j0), at(i1, j0), at(i1, j1), at(i0, j1)];
      const zMean = (zs[0] + zs[1] + zs[2] + zs[3]) / 4;
      const corners: Array<[number, number]> = [
        proj(i0 / (nx - 1), j0 / (ny - 1), zs[0]),
        proj(i1 / (nx - 1), j0 / (ny - 1), zs[1]),
        proj(i1 / (nx - 1), j1 / (ny - 1), zs[2]),
        proj(i0 / (nx - 1), j1 / (ny - 1), zs[3]),
      ];
      const tNorm = (zMean - vLo) / (vHi - vLo);
      r.fillPolygon(
        corners.map((c) => c[0]),
        corners.map((c) => c[1]),
        colorAt(tNorm, field.diverging),
      );
    }
    // Ridge line along the front edge of the row keeps the mesh legible.
    const j0 = js[jj];
    for (let ii = 0; ii < is.length - 1; ii++) {
      const i0 = is[ii];
      const i1 = is[ii + 1];
      const a = proj(i0 / (nx - 1), j0 / (ny - 1), at(i0, j0));
      const b = proj(i1 / (nx - 1), j0 / (ny - 1), at(i1, j0));
      const tNorm = (at(i0, j0) - vLo) / (vHi - vLo);
      r.line(Math.round(a[0]), Math.round(a[1]), Math.round(b[0]), Math.round(b[1]), shade(colorAt(tNorm, field.diverging), 0.55));
    }
  }

  drawColorbar(r, opts.width - 46, mTop + 8, 12, opts.height - mTop - mBottom - 16, field.diverging, vLo, vHi);
  const note = `${field.label}(x,y)  t=${formatTime(snap.t)}`;
  r.text(mLeft, opts.height - 12, note, AXIS_COLOR);
  return r;
}

function formatTime(t: number): string {
  const s = t.toFixed(3);
  return s.replace(/\.?0+$/, "") || "0";
}

/** Top-down heatmap with axes in physical coordinates and a colorbar. */
export function renderHeatmap(snap: Snapshot, field: FieldData, opts: RenderOptions): Raster {
  const r = new Raster(opts.width, opts.height);
  drawTitle(r, opts.title);

  const { Nx: nx, Ny: ny, Lx: lx, Ly: ly, x: xs, y: ys } = snap.grid;
  const f: Frame = {
    x0: 56,
    y0: 24,
    w: opts.width - 56 - 72,
    h: opts.height - 24 - 40,
    xMin: xs[0],
    xMax: xs[nx - 1],
    yMin: ys[0],
    yMax: ys[ny - 1],
  };
  const [vLo, vHi] = fieldRange(field.values, opts, field.diverging);

  for (let row = 0; row < f.h; row++) {
    const yv = f.yMax - (row / (f.h - 1)) * (f.yMax - f.yMin);
    let j = Math.round(((yv - ys[0]) / (2 * Math.PI * ly)) * ny);
    j = Math.min(ny - 1, Math.max(0, j));
    for (let col = 0; col < f.w; col++) {
      const xv = f.xMin + (col / (f.w - 1)) * (f.xMax - f.xMin);
      let i = Math.round(((xv - xs[0]) / (2 * Math.PI * lx)) * nx);
      i = Math.min(nx - 1, Math.max(0, i));
      const t = (field.values[i * ny + j] - vLo) / (vHi - vLo);
      r.set(f.x0 + col, f.y0 + row, colorAt(Math.min(1, Math.max(0, t)), field.diverging));
    }
  }

  drawFrame(r, f, "x", field.label);
  drawColorbar(r, opts.width - 58, f.y0, 12, f.h, field.diverging, vLo, vHi);
  r.text(f.x0 + 4, f.y0 + f.h + 28, `t=${formatTime(snap.t)}`, AXIS_COLOR);
  return r;
}

/** 1D cuts through the origin, one curve per snapshot, with a legend. */
export function renderSlice(snaps: readonly Snapshot[], fields: readonly FieldData[], opts: RenderOptions): Raster {
  const axis = opts.axis ?? "x";
  const r = new Raster(opts.width, opts.height);
  drawTitle(r, opts.title);

  interface Curve {
    coords: Float64Array;
    values: Float64Array;
    label: string;
  }
  const curves: Curve[] = snaps.map((snap, k) => {
    const { Nx: nx, Ny: ny } = snap.grid;
    const vals = fields[k].values;
    if (axis === "x") {
      // Row at y = 0 (index ny/2); coords run along x.
      const j = Math.round(ny / 2);
      const out = new Float64Array(nx);
      for (let i = 0; i < nx; i++) out[i] = vals[i * ny + j];
      return { coords: snap.grid.x, values: out, label: `t=${formatTime(snap.t)}` };
    }
    const i = Math.round(nx / 2);
    const out = new Float64Array(ny);
    for (let j = 0; j < ny; j++) out[j] = vals[i * ny + j];
    return { coords: snap.grid.y, values: out, label: `t=${formatTime(snap.t)}` };
  });

  let yLo = Infinity;
  let yHi = -Infinity;
  for (const c of curves) {
    for (const v of c.values) {
      if (v < yLo) yLo = v;
      if (v > yHi) yHi = v;
    }
  }
  if (opts.vMin !== undefined) yLo = opts.vMin;
  if (opts.vMax !== undefined) yHi = opts.vMax;
  [yLo, yHi] = padRange(yLo, yHi);
  const pad = 0.05 * (yHi - yLo);

  const f: Frame = {
    x0: 62,
    y0: 24,
    w: opts.width - 62 - 20,
    h: opts.height - 24 - 44,
    xMin: curves[0].coords[0],
    xMax: curves[0].coords[curves[0].coords.length - 1],
    yMin: yLo - pad,
    yMax: yHi + pad,
  };
  drawFrame(r, f, axis, fields[0].label);

  curves.forEach((c, k) => {
    const color = LINE_COLORS[k % LINE_COLORS.length];
    for (let i = 1; i < c.coords.length; i++) {
      r.line(
        Math.round(px(f, c.coords[i - 1])),
        Math.round(py(f, c.values[i - 1])),
        Math.round(px(f, c.coords[i])),
        Math.round(py(f, c.values[i])),
        color,
      );
    }
  });

  // Legend in the top-right corner of the frame.
  const legendW = Math.max(...curves.map((c) => textWidth(c.label))) + 22;
  curves.forEach((c, k) => {
    const ly0 = f.y0 + 6 + k * (GLYPH_HEIGHT + 4);
    const lx0 = f.x0 + f.w - legendW;
    r.line(lx0, ly0 + 3, lx0 + 12, ly0 + 3, LINE_COLORS[k % LINE_COLORS.length], 2);
    r.text(lx0 + 16, ly0, c.label, AXIS_COLOR);
  });
  return r;
}

/** Scalar diagnostics column against time, with an optional fitted law. */
export function renderSeries(
  diag: Diagnostics,
  fit: RadialFit | null,
  opts: RenderOptions,
): Raster {
  const column = opts.column ?? "hmin";
  const t = diag.series.get("t");
  const y = diag.series.get(column);
  if (t === undefined || y === undefined) {
    throw new RangeError(`diagnostics ${diag.path} has no column '${column}'`);
  }
  const r = new Raster(opts.width, opts.height);
  drawTitle(r, opts.title);

  let yLo = Infinity;
  let yHi = -Infinity;
  for (const v of y) {
    if (v < yLo) yLo = v;
    if (v > yHi) yHi = v;
  }
  if (opts.vMin !== undefined) yLo = opts.vMin;
  if (opts.vMax !== undefined) yHi = opts.vMax;
  [yLo, yHi] = padRange(yLo, yHi);
  const pad = 0.05 * (yHi - yLo);

  const f: Frame = {
    x0: 62,
    y0: 24,
    w: opts.width - 62 - 20,
    h: opts.height - 24 - 44,
    xMin: t[0],
    xMax: t[t.length - 1],
    yMin: yLo - pad,
    yMax: yHi + pad,
  };
  drawFrame(r, f, "t", column);

  // Fit drawn first and thicker, so the data curve lies on top of it;
  // agreement shows as the thin curve hiding inside the thick one.
  if (fit) {
    const fitColor = LINE_COLORS[1];
    const steps = 200;
    let prev: [number, number] | null = null;
    for (let k = 0; k <= steps; k++) {
      const tv = fit.tMin + ((f.xMax - fit.tMin) * k) / steps;
      const scale = 1 + fit.b * tv;
      const yv = fit.a / (scale * scale);
      const pt: [number, number] = [Math.round(px(f, tv)), Math.round(py(f, yv))];
      if (prev) {
        r.line(prev[0], prev[1], pt[0], pt[1], fitColor, 3);
      }
      prev = pt;
    }
  }

  const dataColor = LINE_COLORS[0];
  for (let i = 1; i < t.length; i++) {
    r.line(
      Math.round(px(f, t[i - 1])),
      Math.round(py(f, y[i - 1])),
      Math.round(px(f, t[i])),
      Math.round(py(f, y[i])),
      dataColor,
    );
  }

  const entries: Array<[string, Rgb, number]> = [[column, dataColor, 1]];
  if (fit) {
    entries.push([`fit a/(1+bt)2, t>=${fit.tMin}`, LINE_COLORS[1], 3]);
  }
  const legendW = Math.max(...entries.map(([s]) => textWidth(s))) + 22;
  entries.forEach(([label, color, thick], k) => {
    const ly0 = f.y0 + 6 + k * (GLYPH_HEIGHT + 5);
    const lx0 = f.x0 + f.w - legendW;
    r.line(lx0, ly0 + 3, lx0 + 12, ly0 + 3, color, thick);
    r.text(lx0 + 16, ly0, label, AXIS_COLOR);
  });
  return r;
}
