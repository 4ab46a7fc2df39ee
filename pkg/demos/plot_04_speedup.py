"""
Amdahl's law and measured speedup
=================================

The theoretical table, then a measured speedup curve on a synthetic torus.
On a machine with fewer cores than workers the measured speedup stays near
(or below) one.
"""

import os

from distmapper import ClusterParams, CoverParams, FilterValues
from distmapper.dataio import generate_shape
from distmapper.perf import amdahl_table, format_amdahl_table, run_benchmark

print(format_amdahl_table(amdahl_table()))

###########################################################################
# Measured on a 40k-point torus:

cloud = generate_shape("torus", 40000, noise=0.01, seed=7)
fv = FilterValues(cloud.points[:, 0])
report = run_benchmark(cloud, fv, CoverParams(4, 4, 0.25), ClusterParams(0.15, 3),
                       worker_counts=[1, 2, 4], repeats=3)
print("cpus:", os.cpu_count())
print(f"parallel share at one worker: {report.parallel_fraction:.3f}")
for w, s in report.stats.items():
    print(f"workers={w}: best {s.best:.3f}s  speedup {s.speedup:.2f}  efficiency {s.efficiency:.2f}"
          f"  (Amdahl bound {report.amdahl_prediction(w):.2f})")
