"""Export the region atlas and check that the layerings tile the outer region.

The atlas is the plot-ready picture of the rate space: the outer region plus
one sub-region per layering, each as half-spaces (and vertices in low
dimension).  Sweeping a grid over the outer region shows every interior point
is claimed by at least one layering.
"""

import numpy as np

import cflayers as cf

joint = cf.build_joint(cf.demo_spec(2, seed=7))
atlas = cf.export_atlas(joint, with_vertices=True)

print(f"channel digest: {atlas.channel_digest[:16]}...")
print("outer region half-spaces:")
for hs in atlas.outer:
    print(f"  sum of R over {sorted(hs.subset)} < {hs.rhs:.6f}")
print("outer region vertices:", [tuple(round(v, 6) for v in p) for p in atlas.outer_vertices])

for entry in atlas.entries:
    verts = [tuple(round(v, 6) for v in p) for p in entry.vertices]
    print(f"\nlayering {entry.layering.to_text()}:")
    for hs in entry.halfspaces:
        print(f"  sum of R over {sorted(hs.subset)} < {hs.rhs:.6f}")
    print(f"  vertices: {verts}")

# Cover check: every grid point with a little slack inside the outer region
# belongs to at least one layering's region.
nodes = sorted(joint.relays)
subsets = list(cf.region.subsets_by_mask(joint.relay_set))
a = np.array([[1.0 if i in s else 0.0 for i in nodes] for s in subsets])
b_outer = np.array([hs.rhs for hs in atlas.outer])
caps = b_outer[:2]
grid = np.stack(
    [m.ravel() for m in np.meshgrid(*(np.linspace(0, c, 60) for c in caps), indexing="ij")],
    axis=1,
)
sums = grid @ a.T
inside = np.all(b_outer - sums > 1e-3, axis=1)
covered = np.zeros(len(grid), dtype=bool)
for entry in atlas.entries:
    rhs = np.array([hs.rhs for hs in entry.halfspaces])
    covered |= np.all(rhs - sums > 1e-9, axis=1)
print(f"\ngrid points strictly inside the outer region: {int(inside.sum())}")
print(f"of those, covered by some layering:            {int((inside & covered).sum())}")
assert not np.any(inside & ~covered)
