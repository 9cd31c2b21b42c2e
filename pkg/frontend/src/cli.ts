#!/usr/bin/env node
/**
 * plots --metric coverage --in bench.csv --out fig1.svg [--ref 0.95]
 *
 * Renders one grouped-bar figure from a benchmark CSV. The coverage
 * metric draws a 0.95 reference line by default; pass --ref to override
 * (or to add a line to the other metrics).
 *
 * Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input.
 */

import { Metric } from "./aggregate";
import { SchemaError } from "./csv";
import { FigureSpec, render } from "./render";

const USAGE =
  "usage: plots --metric coverage|width|zero_proportion --in bench.csv --out figure.svg [--ref 0.95]";

function parseArgs(argv: string[]): FigureSpec {
  const flags = new Map<string, string>();
  for (let at = 0; at < argv.length; at += 2) {
    const name = argv[at];
    const value = argv[at + 1];
    if (!name.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    flags.set(name.slice(2), value);
  }
  const metric = flags.get("metric");
  const input = flags.get("in");
  const output = flags.get("out");
  if (!metric || !input || !output) {
    throw new Error(USAGE);
  }
  if (!["coverage", "width", "zero_proportion"].includes(metric)) {
    throw new Error(`unknown metric "${metric}"\n${USAGE}`);
  }
  const spec: FigureSpec = {
    metric: metric as Metric,
    input,
    output,
  };
  const ref = flags.get("ref");
  if (ref !== undefined) {
    spec.referenceLine = Number(ref);
    if (Number.isNaN(spec.referenceLine)) {
      throw new Error(`--ref is not a number: "${ref}"`);
    }
  } else if (metric === "coverage") {
    spec.referenceLine = 0.95;
  }
  return spec;
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  try {
    render(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 3;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`cannot read ${spec.input}\n`);
      return 3;
    }
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
