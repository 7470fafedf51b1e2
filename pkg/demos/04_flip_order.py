"""
Does the flip order matter?
===========================

With three points the order inside a stage makes no difference. With four
it does: after flipping y1 + y2 in B^4_4, the wall y3 + y4 is no longer
extremal, and crossing it anyway gives a fan that is not projective.
"""

from itertools import permutations

from toricflip import blowup_at_points, is_extremal, run_construction, star_flip, verify
from toricflip.constructions import antiflip_schedule
from toricflip.mori import decompose

B = blowup_at_points(4, 3)
ends = set()
for order in permutations(antiflip_schedule(B, 1)):
    F = B
    for spec in order:
        F = star_flip(F, spec)
    ends.add(F.to_json())
print("distinct endpoints over all orders for B^4_3:", len(ends))

# %%
B = blowup_at_points(4, 4)
F = star_flip(B, B.relation({"y1", "y2"}))
wall = F.relation({"y3", "y4"})
print(wall, "extremal:", is_extremal(F, wall))
for rel, w in decompose(F, wall).items():
    print(f"   {w} x ({rel})")

# %%
# Cross it without the check
G = star_flip(F, wall, check_extremal=False)
report = verify(G)
print("smooth and complete:", report.smooth_complete.ok)
print("round trip:", report.round_trip)
print("projective:", report.projective)

# %%
# The lexicographic order checks every wall before crossing and gets through
rep = run_construction(4, 4)
print(rep.outcome, rep.flip_count, "flips")
for rec in rep.schedule:
    print("  ", rec.relation)
