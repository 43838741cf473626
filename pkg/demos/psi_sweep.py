"""Small connectivity sweep: how often is the circular flow number at most 3?

Runs the same sweep as ``signflow experiment-psi`` in process and
summarises the rows by edge connectivity.  No conclusion about the exact
threshold is drawn; the rows are raw data.

    python demos/psi_sweep.py
"""

from collections import defaultdict

from signflow.cli import psi_rows, render_csv

rows = list(psi_rows(1, ["triangle-multi", "cycle-multi", "complete-multi"], [3, 4], [1, 2, 3],
                     ["none", "single", "distinct:3", "random:2"], [0, 1]))
print(render_csv(rows))

by_lambda = defaultdict(lambda: [0, 0, 0])
for row in rows:
    tally = by_lambda[row["lambda"]]
    if row["within_bound"].startswith("skipped"):
        tally[2] += 1
    else:
        tally[0] += row["within_bound"] == "yes"
        tally[1] += 1
for lam in sorted(by_lambda):
    yes, total, skipped = by_lambda[lam]
    print(f"lambda={lam:2d}: phi_c <= 3 on {yes}/{total} instances ({skipped} skipped)")
