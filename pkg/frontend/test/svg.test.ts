import { describe, expect, it } from "vitest";
import { renderChart, ticks } from "../src/svg.js";

describe("ticks", () => {
  it("picks round steps", () => {
    expect(ticks(0, 10)).toEqual([0, 2, 4, 6, 8, 10]);
    expect(ticks(0, 1)).toEqual([0, 0.2, 0.4, 0.6000000000000001, 0.8, 1]);
  });

  it("degenerate span yields the single value", () => {
    expect(ticks(5, 5)).toEqual([5]);
  });
});

describe("renderChart", () => {
  const series = [
    { label: "has", points: [{ x: 5, y: 2 }, { x: 15, y: 4 }] },
    { label: "cmt", points: [{ x: 5, y: 42 }, { x: 15, y: 114 }] },
  ];
  const panel = { series, xLabel: "devices", yLabel: "energy (J)" };

  it("is deterministic", () => {
    const a = renderChart("t", [panel]);
    const b = renderChart("t", [panel]);
    expect(a).toBe(b);
  });

  it("draws one polyline per multi-point series plus markers", () => {
    const svg = renderChart("t", [panel]);
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain("<circle");
    expect(svg).toContain("has");
    expect(svg).toContain("energy (J)");
  });

  it("renders a single point without a line and without crashing", () => {
    const svg = renderChart("single", [{
      series: [{ label: "cmt", points: [{ x: 5, y: 42 }] }],
      xLabel: "x", yLabel: "y",
    }]);
    expect(svg).not.toContain("<polyline");
    expect(svg).toContain("<circle");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("skips non-finite points but keeps the rest", () => {
    const svg = renderChart("t", [{
      series: [{
        label: "has",
        points: [{ x: 0, y: -Infinity }, { x: 1, y: 2 }, { x: 2, y: 3 }],
      }],
      xLabel: "x", yLabel: "y",
    }]);
    expect(svg).toContain("<polyline");
  });

  it("lays out one panel per entry", () => {
    const svg = renderChart("two", [panel, { ...panel, subtitle: "second" }]);
    expect(svg).toContain("second");
    expect(svg.match(/<rect x=/g)!.length).toBeGreaterThanOrEqual(2);
  });

  it("escapes markup in labels", () => {
    const svg = renderChart("a < b & c", [panel]);
    expect(svg).toContain("a &lt; b &amp; c");
  });
});
