"""
Checking a fan by brute force
=============================

The rewrite rules never look at cones. The oracle rebuilds them, certifies
the fan, and derives the relations back from the cones alone.
"""

from toricflip import blow_up, blowup_at_points, verify
from toricflip.oracle import check_smooth_complete, projectivity_certificate, recompute, reconstruct

B = blowup_at_points(5, 3)
C = reconstruct(B)
print(check_smooth_complete(C).to_dict())
print("round trip:", recompute(C) == B)

# %%
# A strictly convex support function, one value per ray
cert = projectivity_certificate(C)
print({v: str(cert.support[v]) for v in cert.labels})

# %%
# Removing a cone leaves facets with a single neighbour
broken = C.without(sorted(C.max_cones, key=sorted)[0])
print(check_smooth_complete(broken).bad_facets[:3])

# %%
# Blow up a 2-dimensional cone and verify the result
G = blow_up(B, {"x4", "x5"}, "z")
print(verify(G).to_dict()["ok"], len(G.relations), "relations")
