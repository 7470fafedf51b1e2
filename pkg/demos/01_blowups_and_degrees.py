"""
Blowing up projective space at fixed points
===========================================

Build P^4, blow it up at two torus-fixed points, and read the Fano test off
the primitive relations.
"""

from toricflip import blowup_at_points, is_fano, projective_space
from toricflip.oracle import reconstruct

P = projective_space(4)
print(P.relations[0], "degree", P.relations[0].degree)

# %%
# Each point blow-up adds a ray y_i = -x_i.
B = blowup_at_points(4, 2)
for r in B.sorted_relations():
    print(f"{str(r):32s} degree {r.degree}")

# y1 + y2 = x3 + x4 + x5 has degree -1, so B is not Fano
print("fano:", is_fano(B))

# %%
# The fan itself, recovered from the relations alone
C = reconstruct(B)
print(len(C.max_cones), "maximal cones")
for cone in C.sorted_cones():
    print("  ", ",".join(cone))
