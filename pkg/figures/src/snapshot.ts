/**
 * Reader for sgn2d binary snapshot files (.sgn2).
 *
 * Layout: a 64-byte little-endian header (magic "SGN2", uint32 version
 * word, uint64 Nx and Ny, float64 Lx, Ly, t, g, h_inf) followed by the
 * fields h, vx, vy and, when bit 8 of the version word is set, sigma,
 * each Nx*Ny row-major float64.
 */

import { readFileSync } from "node:fs";

export const MAGIC = "SGN2";
export const VERSION = 1;
export const SIGMA_FLAG = 1 << 8;
const HEADER_SIZE = 64;

/** Raised for any structural problem with a snapshot file. */
export class SnapshotFormatError extends Error {
  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "SnapshotFormatError";
  }
}

export interface Grid {
  readonly Nx: number;
  readonly Ny: number;
  readonly Lx: number;
  readonly Ly: number;
  /** Node coordinates: x[i] = -pi*Lx + 2*pi*Lx*i/Nx, likewise y. */
  readonly x: Float64Array;
  readonly y: Float64Array;
}

export interface Snapshot {
  readonly path: string;
  readonly grid: Grid;
  readonly t: number;
  readonly g: number;
  readonly hInf: number;
  readonly h: Float64Array;
  readonly vx: Float64Array;
  readonly vy: Float64Array;
  readonly sigma: Float64Array | null;
}

function isPow2(n: number): boolean {
  return n >= 1 && Number.isInteger(n) && (n & (n - 1)) === 0;
}

function axisCoords(n: number, L: number): Float64Array {
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = -Math.PI * L + (2 * Math.PI * L * i) / n;
  }
  return out;
}

function readField(
  buf: Buffer,
  offset: number,
  count: number,
  path: string,
  name: string,
): Float64Array {
  // Copy out of the file buffer so the view owns aligned memory.
  const out = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    const v = buf.readDoubleLE(offset + 8 * i);
    if (!Number.isFinite(v)) {
      throw new SnapshotFormatError(path, `non-finite value in field ${name}`);
    }
    out[i] = v;
  }
  return out;
}

/** Parse one snapshot file, validating the header and payload sizes. */
export function readSnapshot(path: string): Snapshot {
  const buf = readFileSync(path);
  if (buf.length < HEADER_SIZE) {
    throw new SnapshotFormatError(
      path,
      `truncated header (${buf.length} of ${HEADER_SIZE} bytes)`,
    );
  }
  if (buf.toString("latin1", 0, 4) !== MAGIC) {
    throw new SnapshotFormatError(path, "bad magic (not a snapshot file)");
  }
  const version = buf.readUInt32LE(4);
  const hasSigma = (version & SIGMA_FLAG) !== 0;
  if ((version & ~SIGMA_FLAG) !== VERSION) {
    throw new SnapshotFormatError(path, `unsupported version ${version}`);
  }
  const nxBig = buf.readBigUInt64LE(8);
  const nyBig = buf.readBigUInt64LE(16);
  if (nxBig > 1n << 20n || nyBig > 1n << 20n) {
    throw new SnapshotFormatError(path, "grid dimensions out of range");
  }
  const Nx = Number(nxBig);
  const Ny = Number(nyBig);
  const Lx = buf.readDoubleLE(24);
  const Ly = buf.readDoubleLE(32);
  const t = buf.readDoubleLE(40);
  const g = buf.readDoubleLE(48);
  const hInf = buf.readDoubleLE(56);
  if (!isPow2(Nx) || Nx < 8 || !isPow2(Ny) || Ny < 8 || Lx <= 0 || Ly <= 0) {
    throw new SnapshotFormatError(
      path,
      `header describes an invalid grid (${Nx}x${Ny}, periods ${Lx}, ${Ly})`,
    );
  }
  const count = Nx * Ny;
  const nFields = hasSigma ? 4 : 3;
  const expected = HEADER_SIZE + 8 * count * nFields;
  if (buf.length !== expected) {
    throw new SnapshotFormatError(
      path,
      `payload size ${buf.length - HEADER_SIZE} does not match ` +
        `${nFields} fields of ${count} values`,
    );
  }

  const at = (k: number) => HEADER_SIZE + 8 * count * k;
  return {
    path,
    grid: { Nx, Ny, Lx, Ly, x: axisCoords(Nx, Lx), y: axisCoords(Ny, Ly) },
    t,
    g,
    hInf,
    h: readField(buf, at(0), count, path, "h"),
    vx: readField(buf, at(1), count, path, "vx"),
    vy: readField(buf, at(2), count, path, "vy"),
    sigma: hasSigma ? readField(buf, at(3), count, path, "sigma") : null,
  };
}
