"""A small Monte-Carlo coverage study, end to end.

Runs the benchmark harness over the 3 x 3 grid (data regime x method) at a
small scale, prints the per-cell summary, and leaves the CSV + summary
JSON behind for the plotting frontend, e.g.:

    cd frontend && npm run build
    node dist/cli.js --metric coverage --in ../demo_bench.csv \
        --out coverage.svg --ref 0.95
"""
from causalconf.benchmark import BenchmarkConfig, run_benchmark

config = BenchmarkConfig(
    d=4,
    n_values=(500,),
    reps=60,
    alpha=0.05,
    effect_truth="nonzero",
    seed=2,
    out="demo_bench",
)
paths = run_benchmark(config)
print("wrote:", ", ".join(str(p) for p in paths))
print()

import json

summary = json.loads(open("demo_bench_summary.json").read())
print(f"{'data regime':>12s} {'method':>17s} {'coverage':>9s} {'width':>7s} {'zero%':>6s}")
for cell in summary["cells"]:
    print(
        f"{cell['data_regime']:>12s} {cell['method']:>17s} "
        f"{cell['coverage']:9.3f} {cell['mean_width']:7.3f} "
        f"{cell['zero_proportion']:6.2f}"
    )
print()
print("reading guide: a method covers reliably when its variance assumption")
print("holds for the data regime (the diagonal and everything left of it)")
