/** Color scales: a perceptual sequential map and a diverging one. */

export type Rgb = readonly [number, number, number];

const SEQUENTIAL: ReadonlyArray<Rgb> = [
  [68, 1, 84],
  [72, 31, 112],
  [67, 58, 128],
  [56, 83, 139],
  [46, 107, 142],
  [37, 130, 142],
  [31, 153, 138],
  [42, 176, 127],
  [82, 197, 105],
  [142, 214, 69],
  [253, 231, 37],
];

const DIVERGING: ReadonlyArray<Rgb> = [
  [33, 102, 172],
  [103, 169, 207],
  [209, 229, 240],
  [247, 247, 247],
  [253, 219, 199],
  [239, 138, 98],
  [178, 24, 43],
];

function sample(stops: ReadonlyArray<Rgb>, t: number): Rgb {
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (stops.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.min(lo + 1, stops.length - 1);
  const frac = pos - lo;
  return [
    Math.round(stops[lo][0] + frac * (stops[hi][0] - stops[lo][0])),
    Math.round(stops[lo][1] + frac * (stops[hi][1] - stops[lo][1])),
    Math.round(stops[lo][2] + frac * (stops[hi][2] - stops[lo][2])),
  ];
}

/** t in [0, 1] -> RGB on the sequential scale. */
export function sequential(t: number): Rgb {
  return sample(SEQUENTIAL, t);
}

/** t in [0, 1] -> RGB on the diverging scale (0.5 is neutral). */
export function diverging(t: number): Rgb {
  return sample(DIVERGING, t);
}

/** Line colors for multi-curve plots, cycled by index. */
export const LINE_COLORS: ReadonlyArray<Rgb> = [
  [31, 119, 180],
  [214, 39, 40],
  [44, 160, 44],
  [255, 127, 14],
  [148, 103, 189],
  [23, 190, 207],
];
