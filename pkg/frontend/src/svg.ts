/**
 * Deterministic SVG line charts: fixed styles, fixed precision, no
 * timestamps, so the same data always renders to the same bytes.
 */

import { Series } from "./series.js";

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];
const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

const PANEL_W = 460;
const PANEL_H = 360;
const MARGIN = { top: 42, right: 16, bottom: 52, left: 74 };

export interface Panel {
  series: Series[];
  subtitle?: string;
  xLabel: string;
  yLabel: string;
}

function fmt(v: number): string {
  return v.toFixed(2);
}

/** Tick labels trim trailing zeros so axes read naturally. */
function tickLabel(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e5 || abs < 1e-3) return v.toExponential(1);
  return parseFloat(v.toPrecision(6)).toString();
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function ticks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const step = niceStep(hi - lo, target);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

interface Scale {
  lo: number;
  hi: number;
  map(v: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (!(hi > lo)) {
    // degenerate domain (single x or flat metric): pad symmetrically
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.05 : 1;
    lo -= pad;
    hi += pad;
  }
  const k = (outHi - outLo) / (hi - lo);
  return { lo, hi, map: (v: number) => outLo + (v - lo) * k };
}

function marker(kind: (typeof MARKERS)[number], x: number, y: number,
                color: string): string {
  const r = 3.2;
  switch (kind) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${fmt(2 * r)}" ` +
        `height="${fmt(2 * r)}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)}L${fmt(x + r + 1)} ${fmt(y)}` +
        `L${fmt(x)} ${fmt(y + r + 1)}L${fmt(x - r - 1)} ${fmt(y)}Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)}L${fmt(x + r + 1)} ${fmt(y + r)}` +
        `L${fmt(x - r - 1)} ${fmt(y + r)}Z" fill="${color}"/>`;
  }
}

function renderPanel(panel: Panel, offsetX: number, styleOf: Map<string, number>): string {
  const x0 = offsetX + MARGIN.left;
  const x1 = offsetX + PANEL_W - MARGIN.right;
  const y0 = PANEL_H - MARGIN.bottom;
  const y1 = MARGIN.top;

  const finite = panel.series.flatMap((s) =>
    s.points.filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y)));
  const xs = finite.map((p) => p.x);
  const ys = finite.map((p) => p.y);
  const sx = linearScale(Math.min(...xs), Math.max(...xs), x0, x1);
  const sy = linearScale(Math.min(...ys), Math.max(...ys), y0, y1);

  const parts: string[] = [];
  parts.push(`<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" ` +
    `height="${fmt(y0 - y1)}" fill="none" stroke="#333" stroke-width="1"/>`);

  for (const t of ticks(sx.lo, sx.hi)) {
    const px = sx.map(t);
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" ` +
      `y2="${fmt(y0 + 4)}" stroke="#333" stroke-width="1"/>`);
    parts.push(`<text x="${fmt(px)}" y="${fmt(y0 + 18)}" text-anchor="middle" ` +
      `font-size="11">${tickLabel(t)}</text>`);
  }
  for (const t of ticks(sy.lo, sy.hi)) {
    const py = sy.map(t);
    parts.push(`<line x1="${fmt(x0 - 4)}" y1="${fmt(py)}" x2="${fmt(x0)}" ` +
      `y2="${fmt(py)}" stroke="#333" stroke-width="1"/>`);
    parts.push(`<line x1="${fmt(x0)}" y1="${fmt(py)}" x2="${fmt(x1)}" ` +
      `y2="${fmt(py)}" stroke="#ddd" stroke-width="0.5"/>`);
    parts.push(`<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" ` +
      `font-size="11">${tickLabel(t)}</text>`);
  }

  for (const s of panel.series) {
    const styleIdx = styleOf.get(s.label) ?? 0;
    const color = PALETTE[styleIdx % PALETTE.length];
    const kind = MARKERS[styleIdx % MARKERS.length];
    const pts = s.points.filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y));
    if (pts.length > 1) {
      const path = pts.map((p) => `${fmt(sx.map(p.x))},${fmt(sy.map(p.y))}`).join(" ");
      parts.push(`<polyline points="${path}" fill="none" stroke="${color}" ` +
        `stroke-width="1.6"/>`);
    }
    for (const p of pts) {
      parts.push(marker(kind, sx.map(p.x), sy.map(p.y), color));
    }
  }

  if (panel.subtitle) {
    parts.push(`<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y1 - 8)}" ` +
      `text-anchor="middle" font-size="12" font-style="italic">${panel.subtitle}</text>`);
  }
  parts.push(`<text x="${fmt((x0 + x1) / 2)}" y="${fmt(PANEL_H - 16)}" ` +
    `text-anchor="middle" font-size="12">${escapeXml(panel.xLabel)}</text>`);
  parts.push(`<text x="${fmt(offsetX + 18)}" y="${fmt((y0 + y1) / 2)}" ` +
    `text-anchor="middle" font-size="12" ` +
    `transform="rotate(-90 ${fmt(offsetX + 18)} ${fmt((y0 + y1) / 2)})">` +
    `${escapeXml(panel.yLabel)}</text>`);
  return parts.join("\n");
}

export function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render panels side by side under one title with a shared legend. */
export function renderChart(title: string, panels: Panel[]): string {
  const labels = [...new Set(panels.flatMap((p) => p.series.map((s) => s.label)))];
  const styleOf = new Map(labels.map((label, i) => [label, i]));

  const legendRows = Math.ceil(labels.length / 4);
  const width = PANEL_W * panels.length;
  const height = PANEL_H + 24 + legendRows * 18;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${fmt(width / 2)}" y="20" text-anchor="middle" ` +
    `font-size="14" font-weight="bold">${escapeXml(title)}</text>`);

  panels.forEach((panel, i) => parts.push(renderPanel(panel, i * PANEL_W, styleOf)));

  labels.forEach((label, i) => {
    const col = i % 4;
    const row = Math.floor(i / 4);
    const lx = 70 + col * Math.max(120, (width - 120) / 4);
    const ly = PANEL_H + 10 + row * 18;
    const color = PALETTE[i % PALETTE.length];
    parts.push(`<line x1="${fmt(lx)}" y1="${fmt(ly)}" x2="${fmt(lx + 22)}" ` +
      `y2="${fmt(ly)}" stroke="${color}" stroke-width="1.6"/>`);
    parts.push(marker(MARKERS[i % MARKERS.length], lx + 11, ly, color));
    parts.push(`<text x="${fmt(lx + 28)}" y="${fmt(ly + 4)}" font-size="11">` +
      `${escapeXml(label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
