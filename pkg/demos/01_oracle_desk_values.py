"""
Ranks of K_0 and K_1 from fixed points on the dual torus
========================================================

Four small actions whose ranks can be checked by hand.
"""

from zn_ktheory import delocalized_rank, package_groups, validate_action
from zn_ktheory.families import cyclotomic

cases = [
    validate_action(1, 2, [[-1]], name="infinite dihedral"),
    validate_action(2, 2, [[-1, 0], [0, -1]], name="pillowcase"),
    cyclotomic(3),
    validate_action(2, 6, [[1, -1], [1, 0]], name="hexagonal"),
]

for spec in cases:
    report = package_groups(delocalized_rank(spec))
    print(f"{spec.name:20s} K_0 / K_1 = {report.groups}")
    # each group element g = h^t contributes the invariant cohomology of its fixed set
    for part in report.details["per_element"]:
        print(f"    t={part['t']}: {part['components']} component(s) of dimension "
              f"{part['fixed_rank']}, contributes ({part['rank0']}, {part['rank1']})")
