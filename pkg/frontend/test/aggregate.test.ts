import assert from "node:assert/strict";
import { test } from "node:test";

import { aggregate } from "../src/aggregate";
import { BenchmarkRow, parseBenchmarkCsv } from "../src/csv";

function row(overrides: Partial<BenchmarkRow>): BenchmarkRow {
  return {
    rep: 0,
    data_regime: "general",
    method: "general_conf",
    true_effect: 0.3,
    covered: 1,
    width: 0.5,
    contains_zero: 1,
    runtime_ms: 1,
    ...overrides,
  };
}

test("means per cell and metric-column mapping", () => {
  const rows = [
    row({ covered: 1, width: 0.2, contains_zero: 1 }),
    row({ covered: 0, width: 0.4, contains_zero: 1 }),
    row({ method: "ev_conf", covered: 1, width: 0.1, contains_zero: 0 }),
  ];
  const coverage = aggregate(rows, "coverage");
  assert.equal(coverage.cells.length, 2);
  assert.equal(coverage.cells[0].value, 0.5);
  const width = aggregate(rows, "width");
  assert.equal(width.cells[0].value, (0.2 + 0.4) / 2);
  const zero = aggregate(rows, "zero_proportion");
  assert.equal(zero.cells[1].value, 0);
});

test("canonical regime and method ordering", () => {
  const rows = [
    row({ data_regime: "ev", method: "ev_conf" }),
    row({ data_regime: "general", method: "general_conf" }),
    row({ data_regime: "partial_ev", method: "partial_ev_conf" }),
  ];
  const agg = aggregate(rows, "coverage");
  assert.deepEqual(agg.regimes, ["general", "partial_ev", "ev"]);
  assert.deepEqual(agg.methods, ["general_conf", "partial_ev_conf", "ev_conf"]);
});

test("empty input aggregates to an empty grid", () => {
  const agg = aggregate([], "coverage");
  assert.deepEqual(agg.cells, []);
  assert.deepEqual(agg.regimes, []);
});

test("aggregation matches the backend summary on the fixture", () => {
  const fs = require("node:fs");
  const path = require("node:path");
  const dir = path.join(__dirname, "..", "..", "test", "fixtures");
  const rows = parseBenchmarkCsv(
    fs.readFileSync(path.join(dir, "bench.csv"), "utf8")
  );
  const summary = JSON.parse(
    fs.readFileSync(path.join(dir, "bench_summary.json"), "utf8")
  );
  const byMetric = {
    coverage: aggregate(rows, "coverage"),
    width: aggregate(rows, "width"),
    zero_proportion: aggregate(rows, "zero_proportion"),
  } as const;
  for (const cell of summary.cells) {
    for (const [metric, key] of [
      ["coverage", "coverage"],
      ["width", "mean_width"],
      ["zero_proportion", "zero_proportion"],
    ] as const) {
      const got = byMetric[metric].cells.find(
        (c) => c.dataRegime === cell.data_regime && c.method === cell.method
      );
      assert.ok(got, `missing cell ${cell.data_regime}/${cell.method}`);
      assert.ok(
        Math.abs(got.value - cell[key]) <= 1e-12,
        `${metric} ${cell.data_regime}/${cell.method}: ${got.value} vs ${cell[key]}`
      );
    }
  }
});
