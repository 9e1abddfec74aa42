/**
 * Field selectors: everything a figure can show, derived from snapshot
 * contents alone.  Velocity components come from u = v - grad(sigma)/h,
 * so they need a snapshot that carries sigma.
 */

import { Snapshot } from "./snapshot";
import { spectralDerivative } from "./fft";

export const FIELDS = ["h", "ux", "uy", "ur", "uphi", "diff"] as const;
export type FieldName = (typeof FIELDS)[number];

export class FieldError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "FieldError";
  }
}

export interface FieldData {
  readonly values: Float64Array;
  /** Diverging fields are colored symmetrically about zero. */
  readonly diverging: boolean;
  readonly label: string;
}

function recoverVelocity(s: Snapshot): [Float64Array, Float64Array] {
  if (s.sigma === null) {
    throw new FieldError(
      `${s.path}: velocity fields need a snapshot with sigma`,
    );
  }
  const { Nx, Ny, Lx, Ly } = s.grid;
  const sx = spectralDerivative(s.sigma, Nx, Ny, Lx, Ly, "x");
  const sy = spectralDerivative(s.sigma, Nx, Ny, Lx, Ly, "y");
  const ux = new Float64Array(Nx * Ny);
  const uy = new Float64Array(Nx * Ny);
  for (let i = 0; i < ux.length; i++) {
    ux[i] = s.vx[i] - sx[i] / s.h[i];
    uy[i] = s.vy[i] - sy[i] / s.h[i];
  }
  return [ux, uy];
}

function polarSplit(s: Snapshot): [Float64Array, Float64Array] {
  const [ux, uy] = recoverVelocity(s);
  const { Nx, Ny, x, y } = s.grid;
  const ur = new Float64Array(Nx * Ny);
  const uphi = new Float64Array(Nx * Ny);
  for (let i = 0; i < Nx; i++) {
    for (let j = 0; j < Ny; j++) {
      const idx = i * Ny + j;
      const r = Math.hypot(x[i], y[j]);
      if (r === 0) continue; // removable singularity, leave 0
      ur[idx] = (x[i] * ux[idx] + y[j] * uy[idx]) / r;
      uphi[idx] = (x[i] * uy[idx] - y[j] * ux[idx]) / r;
    }
  }
  return [ur, uphi];
}

/** Extract one named field from a snapshot. */
export function extractField(s: Snapshot, name: FieldName): FieldData {
  switch (name) {
    case "h":
      return { values: s.h, diverging: false, label: "h" };
    case "diff":
      // Difference snapshots store the difference in the h slot.
      return { values: s.h, diverging: true, label: "dh" };
    case "ux":
      return { values: recoverVelocity(s)[0], diverging: true, label: "ux" };
    case "uy":
      return { values: recoverVelocity(s)[1], diverging: true, label: "uy" };
    case "ur":
      return { values: polarSplit(s)[0], diverging: true, label: "u_r" };
    case "uphi":
      return { values: polarSplit(s)[1], diverging: true, label: "u_phi" };
  }
}
