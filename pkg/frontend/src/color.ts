/** Color handling: a blue-white-red diverging scale on log2(enhancement). */

export const PALETTE = {
  predictedZero: "#000000", // suppressed and predicted by the law
  unpredictedZero: "#2ca02c", // suppressed, but not predicted
  undefinedEnhancement: "#bdbdbd",
  axis: "#333333",
  gridLine: "#dddddd",
} as const;

const BLUE: RGB = [33, 102, 172];
const WHITE: RGB = [255, 255, 255];
const RED: RGB = [178, 24, 43];

type RGB = [number, number, number];

function mix(a: RGB, b: RGB, t: number): RGB {
  return [0, 1, 2].map((i) => Math.round(a[i] + (b[i] - a[i]) * t)) as RGB;
}

function hex([r, g, b]: RGB): string {
  const h = (v: number) => v.toString(16).padStart(2, "0");
  return `#${h(r)}${h(g)}${h(b)}`;
}

/**
 * Map an enhancement ratio onto the diverging scale, centered at 1 on a log
 * axis: log2(e) = -maxLog2 is saturated blue, 0 is white, +maxLog2 saturated red.
 */
export function divergingLogColor(enhancement: number, maxLog2 = 4): string {
  if (!(enhancement > 0)) return hex(BLUE); // hard suppression, off the scale
  let t = Math.log2(enhancement) / maxLog2;
  t = Math.max(-1, Math.min(1, t));
  return t < 0 ? hex(mix(WHITE, BLUE, -t)) : hex(mix(WHITE, RED, t));
}

/** Sampled gradient stops for the color bar legend. */
export function scaleStops(count: number, maxLog2 = 4): string[] {
  const stops: string[] = [];
  for (let i = 0; i < count; i += 1) {
    const t = -1 + (2 * i) / (count - 1);
    stops.push(divergingLogColor(2 ** (t * maxLog2), maxLog2));
  }
  return stops;
}
