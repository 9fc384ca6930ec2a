/**
 * Figure construction from harness CSVs: metric-vs-density/power lines from
 * sweep.csv, and best-fitness convergence curves from trace files.
 */

import { basename } from "path";
import { readCsv } from "./csv.js";
import { convergenceSeries, sweepSeries } from "./series.js";
import { Panel, renderChart } from "./svg.js";

export interface SweepFigureSpec {
  kind: "sweep";
  input: string;           // sweep.csv
  x: string;               // e.g. rho_ue or p_max_dbm
  metric: string;          // e.g. total_energy_j
  group: string[];         // e.g. ["solver", "lam"]
  out: string;
  title: string;
  xLabel: string;
  yLabel: string;
}

export interface ConvergenceFigureSpec {
  kind: "convergence";
  inputs: string[];        // trace CSVs, one per overlaid run
  labels?: string[];       // defaults to trace file names
  stage?: string;          // "ga" or "pso"; omit for one panel per stage
  out: string;
  title: string;
  yLabel?: string;
}

export type FigureSpec = SweepFigureSpec | ConvergenceFigureSpec;

export function renderSweepFigure(spec: SweepFigureSpec): string {
  const table = readCsv(spec.input);
  const series = sweepSeries(table, spec.x, spec.metric, spec.group);
  const panel: Panel = { series, xLabel: spec.xLabel, yLabel: spec.yLabel };
  return renderChart(spec.title, [panel]);
}

export function renderConvergenceFigure(spec: ConvergenceFigureSpec): string {
  const tables = spec.inputs.map((path, i) => ({
    label: spec.labels?.[i] ?? basename(path, ".csv"),
    table: readCsv(path),
  }));
  const byStage = convergenceSeries(tables, spec.stage);
  const panels: Panel[] = byStage.map(({ stage, series }) => ({
    series,
    subtitle: byStage.length > 1 ? `${stage} stage` : undefined,
    xLabel: "iteration",
    yLabel: spec.yLabel ?? "best fitness",
  }));
  return renderChart(spec.title, panels);
}

export function renderFigure(spec: FigureSpec): string {
  return spec.kind === "sweep"
    ? renderSweepFigure(spec)
    : renderConvergenceFigure(spec);
}
