"""
Comparing the printed formula, the reduction pipeline and the oracle
====================================================================

The hexagonal action of Z/6 is where they part ways: the oracle gives 10,
the pipeline gives 4 or 6 depending on the prime used, and the closed
formula gives yet other values.
"""

from zn_ktheory import cross_check, validate_action

hexagonal = validate_action(2, 6, [[1, -1], [1, 0]], name="hexagonal")
report = cross_check(hexagonal)
for cell, ranks in report.table.items():
    print(f"{cell.label:45s} {ranks}")
print("verdict:", report.verdict)
for d in report.divergences:
    if d.second.mode == "oracle" or d.first.mode == "oracle":
        print(f"  {d.first.label} vs {d.second.label}: delta0={d.delta0}")
