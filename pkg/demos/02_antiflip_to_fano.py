"""
Anti-flips towards a Fano model
===============================

Cross the negative walls of B^d_n stage by stage and watch the degrees
turn positive.
"""

from toricflip import run_construction
from toricflip.constructions import stage_family

for d, n in [(4, 2), (4, 3), (6, 4), (5, 3)]:
    rep = run_construction(d, n)
    print(f"B^{d}_{n}: {rep.outcome}, {rep.flip_count} flips")
    for rec in rep.schedule:
        print(f"   stage {rec.stage} step {rec.step}: {rec.relation}  (degree {rec.degree})")
    if rep.obstruction is not None:
        print("   stopped at", rep.obstruction.relation, "which has degree 0")

# %%
# Degrees of the three families at each stage of B^6_4
rep = run_construction(6, 4)
for r, F in rep.stage_snapshots.items():
    fams = stage_family(F, r)
    print(r, {k: sorted({rel.degree for rel in v}) for k, v in fams.items() if v})

# %%
# The endpoint
for rel in rep.final.sorted_relations():
    print(f"{str(rel):40s} {rel.degree}")
