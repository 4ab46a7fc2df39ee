"""
Mapper graph of a noisy circle
==============================

Pull an interval cover of the x-coordinate back to a noisy circle, cluster
each slice and connect slices that share points.  The result is a single
cycle.
"""

###########################################################################
# A 2000-point circle with a little Gaussian noise:

from distmapper import ClusterParams, FilterValues, sequential_mapper
from distmapper.cover import build_chain_cover, build_sub_covers, flatten_cover
from distmapper.dataio import generate_shape

cloud = generate_shape("circle", 2000, noise=0.03, seed=1)
fv = FilterValues(cloud.points[:, 0])
print("filter range", fv.range)

###########################################################################
# One chunk with eight overlapping intervals is an ordinary Mapper cover.

pc = build_sub_covers(build_chain_cover(*fv.range, n_chunks=1, overlap_width=0.1), 8, 0.3)
cover = flatten_cover(pc)
for gid, iv in cover:
    print(f"  {gid}: ({iv.lo:+.3f}, {iv.hi:+.3f})")

###########################################################################
# Two clusters per interval in the middle of the range (upper and lower
# arc), one at each end.

g = sequential_mapper(cloud, fv, cover, ClusterParams(eps=0.1, min_pts=3))
for key in sorted(g.nodes):
    print(f"  interval {key.cover_id}: {len(key.points)} points")
print(f"{g.n_nodes} nodes, {g.n_edges} edges, independent cycles: {g.cycle_rank()}")
