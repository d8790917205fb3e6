/** Chart point mapping. Pure: chart geometry derives only from API data,
 * so identical job results always chart identical pixels. */

import type { SimReportSummary, SweepResult } from "./types.js";

export interface ChartPoint {
  x: number;
  y: number;
  px: number;
  py: number;
}

export interface SweepChart {
  parameter: string;
  points: ChartPoint[];
  minIndex: number;
  interiorMinimum: boolean;
}

export const CHART = { width: 420, height: 220, padding: 34 } as const;

function scale(value: number, lo: number, hi: number, outLo: number, outHi: number): number {
  if (hi === lo) {
    return (outLo + outHi) / 2;
  }
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

export function sweepChart(result: SweepResult, metric: "makespan_mean" | "efficiency_mean" = "makespan_mean"): SweepChart {
  const parameter = result.parameters[0] ?? "";
  const xs = result.rows.map((row) => row.bindings[parameter]);
  const ys = result.rows.map((row) => row.report[metric]);
  const [xLo, xHi] = [Math.min(...xs), Math.max(...xs)];
  const [yLo, yHi] = [Math.min(...ys), Math.max(...ys)];
  const points = xs.map((x, i) => ({
    x,
    y: ys[i],
    px: scale(x, xLo, xHi, CHART.padding, CHART.width - CHART.padding),
    py: scale(ys[i], yLo, yHi, CHART.height - CHART.padding, CHART.padding),
  }));
  let minIndex = 0;
  ys.forEach((y, i) => {
    if (y < ys[minIndex]) minIndex = i;
  });
  return {
    parameter,
    points,
    minIndex,
    interiorMinimum: minIndex > 0 && minIndex < points.length - 1,
  };
}

export interface OverheadBar {
  category: string;
  seconds: number;
  width: number;
}

export function overheadBars(report: SimReportSummary): OverheadBar[] {
  const entries = Object.entries(report.overhead_breakdown);
  const max = entries.reduce((m, [, v]) => Math.max(m, v), 0);
  return entries.map(([category, seconds]) => ({
    category,
    seconds,
    width: max > 0 ? seconds / max : 0,
  }));
}

export function polylinePath(points: ChartPoint[]): string {
  return points.map((p, i) => `${i === 0 ? "M" : "L"}${p.px.toFixed(2)},${p.py.toFixed(2)}`).join(" ");
}
