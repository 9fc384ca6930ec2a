/**
 * Turning metric rows into plottable series: group, aggregate, sort.
 *
 * Sweep figures draw one line per solver (and per band split for the
 * full-offload baseline), with the y value at each x being the median over
 * seeds -- medians because penalized cells are heavy-tailed.
 */

import { Table, columnIndex, toNumber } from "./csv.js";

export interface Series {
  label: string;
  points: { x: number; y: number }[];
}

export function median(values: number[]): number {
  if (values.length === 0) return NaN;
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 === 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

/** Labels like "has" or "cm λ=0.25"; lam only distinguishes the cm rows. */
function groupLabel(parts: string[]): string {
  const [solver, lam] = parts;
  return lam === "" || lam === undefined ? solver : `${solver} λ=${lam}`;
}

export function sweepSeries(
  table: Table,
  xKey: string,
  metricKey: string,
  groupKeys: string[],
): Series[] {
  const [xIdx, mIdx] = columnIndex(table, [xKey, metricKey]);
  const gIdx = columnIndex(table, groupKeys);

  const buckets = new Map<string, Map<number, number[]>>();
  for (const row of table.rows) {
    const label = groupLabel(gIdx.map((i) => row[i]));
    const x = toNumber(row[xIdx]);
    const y = toNumber(row[mIdx]);
    let byX = buckets.get(label);
    if (!byX) buckets.set(label, (byX = new Map()));
    let ys = byX.get(x);
    if (!ys) byX.set(x, (ys = []));
    ys.push(y);
  }

  return [...buckets.keys()].sort().map((label) => {
    const byX = buckets.get(label)!;
    const points = [...byX.keys()]
      .sort((a, b) => a - b)
      .map((x) => ({ x, y: median(byX.get(x)!) }));
    return { label, points };
  });
}

export interface StageSeries {
  stage: string;
  series: Series[];
}

/** Best-fitness curves from trace files, one bundle per optimizer stage. */
export function convergenceSeries(
  tables: { label: string; table: Table }[],
  stageFilter?: string,
): StageSeries[] {
  const stages = new Map<string, Series[]>();
  for (const { label, table } of tables) {
    const [stageIdx, iterIdx, bestIdx] = columnIndex(table, [
      "stage",
      "iteration",
      "best_fitness",
    ]);
    const byStage = new Map<string, { x: number; y: number }[]>();
    for (const row of table.rows) {
      const stage = row[stageIdx];
      if (stageFilter && stage !== stageFilter) continue;
      let points = byStage.get(stage);
      if (!points) byStage.set(stage, (points = []));
      points.push({ x: toNumber(row[iterIdx]), y: toNumber(row[bestIdx]) });
    }
    for (const [stage, points] of byStage) {
      points.sort((a, b) => a.x - b.x);
      let list = stages.get(stage);
      if (!list) stages.set(stage, (list = []));
      list.push({ label, points });
    }
  }
  return [...stages.keys()].sort().map((stage) => ({
    stage,
    series: stages.get(stage)!,
  }));
}
