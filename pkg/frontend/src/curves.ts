/** Geometry for the response-curve charts (server-sampled ordinates only). */

import type { CurveSamples } from "./api.js";

export interface PlotPoint {
  x: number;
  y: number;
}

export interface PlotSeries {
  name: string;
  color: string;
  points: PlotPoint[];
}

/** Map [0,1]² curve samples into pixel-space polylines for a canvas. */
export function toPixelSpace(
  points: PlotPoint[],
  width: number,
  height: number,
  pad = 8,
): PlotPoint[] {
  const w = width - 2 * pad;
  const h = height - 2 * pad;
  return points.map((p) => ({
    x: pad + p.x * w,
    y: pad + (1 - p.y) * h,
  }));
}

export function curveSeries(samples: CurveSamples): PlotSeries[] {
  const zip = (ys: number[]): PlotPoint[] =>
    samples.x.map((x, i) => ({ x, y: ys[i] }));
  return [
    { name: "gamma", color: "#5470c6", points: zip(samples.gamma) },
    { name: "tone", color: "#ee6666", points: zip(samples.tone) },
    { name: "red", color: "#c03030", points: zip(samples.ccm_r) },
    { name: "green", color: "#30a030", points: zip(samples.ccm_g) },
    { name: "blue", color: "#3050c0", points: zip(samples.ccm_b) },
  ];
}

/** Best-so-far error curve for the search panel (monotone non-increasing). */
export function bestErrorCurve(errors: number[]): number[] {
  const out: number[] = [];
  let best = Infinity;
  for (const e of errors) {
    best = Math.min(best, e);
    out.push(best);
  }
  return out;
}
