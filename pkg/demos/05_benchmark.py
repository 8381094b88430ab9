"""A small benchmark: exact coordinate descent against the baseline.

Each cell simulates a data set, solves one path and records the best
relative error, the support recovery AUROC and the wall time. The full
study (20 seeds, p up to 500, n = 300) is ``qcd bench`` on the command line;
this is a few-second version of it.
"""

from qcd import run_benchmark

report = run_benchmark(dims=[60], seeds=[1, 2, 3], n=50, methods=("qcd", "qicd"),
                       variants=("warm", "warm_nudge"), grid_len=40)
for row in report.summary():
    print(f"{row['method']:>4} {row['variant']:>10}: min error {100 * row['mean_min_rmse']:.2f}% "
          f"(sd {100 * row['sd_min_rmse']:.2f}), AUROC {row['mean_auroc']:.3f}, "
          f"{row['mean_time_s']:.3f} s per path")

# Both methods solve the same grid, so objectives can be compared lambda by lambda.
q = report.cell("qcd", "warm", 60, 1)
a = report.cell("qicd", "warm", 60, 1)
lower = sum(x < y for x, y in zip(q["objective"], a["objective"]))
print(f"seed 1: exact descent reaches the lower objective at {lower}/{len(q['objective'])} lambdas")
