/**
 * Minimal software rasterizer over an RGBA byte buffer.
 *
 * Everything the renderers draw goes through this module, so figure
 * output is deterministic: no font libraries, no GPU, no antialiasing
 * beyond what the primitives do themselves.
 */

import { PNG } from "pngjs";
import * as fs from "node:fs";
import * as path from "node:path";
import { Rgb } from "./colormap";
import { glyph, GLYPH_ADVANCE, GLYPH_HEIGHT, GLYPH_WIDTH } from "./font";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Rgb = [255, 255, 255]) {
    if (!Number.isInteger(width) || !Number.isInteger(height) || width <= 0 || height <= 0) {
      throw new RangeError(`invalid raster size ${width}x${height}`);
    }
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = background[0];
      this.data[4 * i + 1] = background[1];
      this.data[4 * i + 2] = background[2];
      this.data[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return;
    }
    const i = 4 * (y * this.width + x);
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
    this.data[i + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    const xa = Math.max(0, x0);
    const ya = Math.max(0, y0);
    const xb = Math.min(this.width, x0 + w);
    const yb = Math.min(this.height, y0 + h);
    for (let y = ya; y < yb; y++) {
      for (let x = xa; x < xb; x++) {
        this.set(x, y, color);
      }
    }
  }

  /** Bresenham segment with optional thickness (square pen). */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb, thickness = 1): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    const r = Math.floor(thickness / 2);
    for (;;) {
      if (thickness <= 1) {
        this.set(xa, ya, color);
      } else {
        this.fillRect(xa - r, ya - r, thickness, thickness, color);
      }
      if (xa === xb && ya === yb) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  /** Filled convex polygon via scanline between edge intersections. */
  fillPolygon(xs: readonly number[], ys: readonly number[], color: Rgb): void {
    const n = xs.length;
    if (n < 3) {
      return;
    }
    const yMin = Math.max(0, Math.floor(Math.min(...ys)));
    const yMax = Math.min(this.height - 1, Math.ceil(Math.max(...ys)));
    for (let y = yMin; y <= yMax; y++) {
      let left = Infinity;
      let right = -Infinity;
      const yc = y + 0.5;
      for (let i = 0; i < n; i++) {
        const j = (i + 1) % n;
        const ya = ys[i];
        const yb = ys[j];
        if ((yc < ya) === (yc < yb)) {
          continue;
        }
        const x = xs[i] + ((yc - ya) / (yb - ya)) * (xs[j] - xs[i]);
        left = Math.min(left, x);
        right = Math.max(right, x);
      }
      if (left <= right) {
        for (let x = Math.max(0, Math.round(left)); x <= Math.min(this.width - 1, Math.round(right)); x++) {
          this.set(x, y, color);
        }
      }
    }
  }

  /** Draw text with the built-in 5x7 font; (x, y) is the top-left corner. */
  text(x: number, y: number, s: string, color: Rgb, scale = 1): void {
    let cx = x;
    for (const ch of s) {
      const rows = glyph(ch);
      for (let r = 0; r < GLYPH_HEIGHT; r++) {
        for (let c = 0; c < GLYPH_WIDTH; c++) {
          if ((rows[r] >> (GLYPH_WIDTH - 1 - c)) & 1) {
            if (scale === 1) {
              this.set(cx + c, y + r, color);
            } else {
              this.fillRect(cx + c * scale, y + r * scale, scale, scale, color);
            }
          }
        }
      }
      cx += GLYPH_ADVANCE * scale;
    }
  }

  /** Encode to PNG and write atomically (temp file + rename). */
  writePng(outPath: string): void {
    const png = new PNG({ width: this.width, height: this.height });
    Buffer.from(this.data.buffer, this.data.byteOffset, this.data.length).copy(png.data);
    const bytes = PNG.sync.write(png);
    const dir = path.dirname(outPath);
    fs.mkdirSync(dir, { recursive: true });
    const tmp = path.join(dir, `.${path.basename(outPath)}.tmp`);
    fs.writeFileSync(tmp, bytes);
    fs.renameSync(tmp, outPath);
  }
}
