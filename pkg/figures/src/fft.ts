/**
 * Just enough Fourier machinery to differentiate snapshot fields.
 *
 * Grids in snapshot files are powers of two by construction, so a
 * radix-2 transform covers every input.  Derivatives follow the solver
 * conventions: wavenumber m/L for mode m, and the sign-ambiguous
 * Nyquist mode dropped from odd-order derivatives.
 */

/** In-place iterative radix-2 FFT (inverse includes the 1/n factor). */
export function fft(re: Float64Array, im: Float64Array, invert: boolean): void {
  const n = re.length;
  if ((n & (n - 1)) !== 0) {
    throw new Error(`fft length ${n} is not a power of two`);
  }
  for (let i = 1, j = 0; i < n; i++) {
    let bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      [re[i], re[j]] = [re[j], re[i]];
      [im[i], im[j]] = [im[j], im[i]];
    }
  }
  for (let len = 2; len <= n; len <<= 1) {
    const ang = ((invert ? 1 : -1) * 2 * Math.PI) / len;
    const wRe = Math.cos(ang);
    const wIm = Math.sin(ang);
    for (let i = 0; i < n; i += len) {
      let curRe = 1.0;
      let curIm = 0.0;
      for (let j = 0; j < len / 2; j++) {
        const a = i + j;
        const b = i + j + len / 2;
        const tRe = re[b] * curRe - im[b] * curIm;
        const tIm = re[b] * curIm + im[b] * curRe;
        re[b] = re[a] - tRe;
        im[b] = im[a] - tIm;
        re[a] += tRe;
        im[a] += tIm;
        const nextRe = curRe * wRe - curIm * wIm;
        curIm = curRe * wIm + curIm * wRe;
        curRe = nextRe;
      }
    }
  }
  if (invert) {
    for (let i = 0; i < n; i++) {
      re[i] /= n;
      im[i] /= n;
    }
  }
}

/** Signed wavenumbers for n modes of period 2*pi*L, Nyquist zeroed. */
function oddWavenumbers(n: number, L: number): Float64Array {
  const k = new Float64Array(n);
  for (let m = 0; m < n; m++) {
    const signed = m <= n / 2 ? m : m - n;
    k[m] = signed / L;
  }
  k[n / 2] = 0.0;
  return k;
}

/**
 * Spectral derivative of a row-major (Nx, Ny) field along one axis.
 * axis "x" varies the row index (stride Ny), axis "y" the column.
 */
export function spectralDerivative(
  field: Float64Array,
  Nx: number,
  Ny: number,
  Lx: number,
  Ly: number,
  axis: "x" | "y",
): Float64Array {
  const n = axis === "x" ? Nx : Ny;
  const lines = axis === "x" ? Ny : Nx;
  const stride = axis === "x" ? Ny : 1;
  const k = oddWavenumbers(n, axis === "x" ? Lx : Ly);
  const out = new Float64Array(Nx * Ny);
  const re = new Float64Array(n);
  const im = new Float64Array(n);
  for (let line = 0; line < lines; line++) {
    const base = axis === "x" ? line : line * Ny;
    for (let m = 0; m < n; m++) {
      re[m] = field[base + m * stride];
      im[m] = 0.0;
    }
    fft(re, im, false);
    // Multiply by i*k: (re + i*im) * i*k = -k*im + i*k*re.
    for (let m = 0; m < n; m++) {
      const tmp = re[m];
      re[m] = -k[m] * im[m];
      im[m] = k[m] * tmp;
    }
    fft(re, im, true);
    for (let m = 0; m < n; m++) {
      out[base + m * stride] = re[m];
    }
  }
  return out;
}
