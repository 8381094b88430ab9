"""Exact update against the frozen-weight weighted-median update.

The baseline approximates each coordinate problem by freezing weights at
the current iterate and taking a weighted median. On a tiny problem the
two choices can be compared against the true one-dimensional objective.
"""

from qcd.demo import demo_exact_vs_approx, find_divergent_seed

seed = find_divergent_seed()
trace = demo_exact_vs_approx(seed)
print(f"seed {seed}: n={trace.dataset.n}, p={trace.dataset.p}, tau={trace.tau}, lambda={trace.lam}")
for step in trace.steps:
    note = "  <- different" if step.differs else ""
    print(f"iteration {step.iteration}, coordinate {step.coordinate}: "
          f"exact {step.qcd_choice:+.4f} (objective {step.qcd_value:.4f}), "
          f"weighted median {step.qicd_choice:+.4f} (objective {step.qicd_value:.4f}){note}")

# ``trace.rows()`` yields the full objective curves; the CLI writes them with
# ``qcd demo --out-dir DIR`` for plotting.
