/**
 * Figure specification and rendering: benchmark CSV in, SVG file out.
 */

import * as fs from "fs";

import { aggregate, Metric } from "./aggregate";
import { parseBenchmarkCsv } from "./csv";
import { renderBarChart } from "./svg";

export interface FigureSpec {
  metric: Metric;
  input: string;
  output: string;
  referenceLine?: number;
}

const TITLES: Record<Metric, string> = {
  coverage: "Empirical coverage of confidence regions",
  width: "Mean width of the non-zero part",
  zero_proportion: "Proportion of regions containing zero",
};

const Y_LABELS: Record<Metric, string> = {
  coverage: "coverage",
  width: "mean width",
  zero_proportion: "proportion containing zero",
};

export function validateSpec(spec: FigureSpec): void {
  if (!(spec.metric in TITLES)) {
    throw new Error(`unknown metric "${spec.metric}"`);
  }
  if (spec.referenceLine !== undefined) {
    if (!(spec.referenceLine > 0 && spec.referenceLine < 1)) {
      throw new Error(
        `reference line must lie strictly in (0, 1), got ${spec.referenceLine}`
      );
    }
  }
}

/** Render one figure; returns the SVG text that was written. */
export function render(spec: FigureSpec): string {
  validateSpec(spec);
  const rows = parseBenchmarkCsv(fs.readFileSync(spec.input, "utf8"));
  if (rows.length === 0) {
    process.stderr.write(
      `warning: ${spec.input} has a header but no rows; rendering an empty chart\n`
    );
  }
  const agg = aggregate(rows, spec.metric);
  const proportional = spec.metric !== "width";
  const svg = renderBarChart(agg, {
    title: TITLES[spec.metric],
    yLabel: Y_LABELS[spec.metric],
    yMax: proportional ? 1 : undefined,
    referenceLine: spec.referenceLine,
  });
  fs.writeFileSync(spec.output, svg);
  return svg;
}
