"""Amdahl's law and a speedup harness for the chunked Mapper."""
from __future__ import annotations

import os
import statistics
import time
from dataclasses import dataclass, field

from .clustering import ClusterParams
from .cover import CoverParams, preprocess_cover
from .distributed import distributed_mapper
from .graph import graph_equal
from .sequential import FilterValues, PointCloud

AMDAHL_PARTS = (0.25, 0.50, 0.94, 0.99)
AMDAHL_NS = (10, 100, 1000)


class DomainError(ValueError):
    pass


class EquivalenceViolation(RuntimeError):
    pass


def amdahl_speedup(part: float, n: int) -> float:
    """Speedup ``1 / ((1 - part) + part / n)`` for parallel fraction ``part`` on ``n`` processors."""
    if not 0 <= part <= 1:
        raise DomainError(f"part must lie in [0, 1], got {part}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 1.0 / ((1.0 - part) + part / n)


def amdahl_table(parts=AMDAHL_PARTS, ns=AMDAHL_NS) -> dict:
    """``{n: {part: speedup rounded to 2 decimals}}``."""
    return {n: {p: round(amdahl_speedup(p, n), 2) for p in parts} for n in ns}


def format_amdahl_table(table: dict) -> str:
    parts = list(next(iter(table.values())))
    lines = ["N".ljust(6) + "".join(f"part={p:<6}".rjust(12) for p in parts)]
    for n, row in table.items():
        lines.append(str(n).ljust(6) + "".join(f"{row[p]:.2f}".rjust(12) for p in parts))
    return "\n".join(lines)


@dataclass
class WorkerStats:
    workers: int
    times: list
    speedup: float = 0.0
    efficiency: float = 0.0

    @property
    def best(self) -> float:
        return min(self.times)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.times)

    @property
    def median(self) -> float:
        return statistics.median(self.times)

    @property
    def worst(self) -> float:
        return max(self.times)

    def as_dict(self) -> dict:
        return {"workers": self.workers, "times_s": self.times, "best_s": self.best,
                "mean_s": self.mean, "median_s": self.median, "max_s": self.worst,
                "speedup": self.speedup, "efficiency": self.efficiency}


@dataclass
class SpeedupReport:
    stats: dict = field(default_factory=dict)
    parallel_fraction: float = 0.0
    phase_times_s: dict = field(default_factory=dict)
    n_points: int = 0
    n_nodes: int = 0
    n_edges: int = 0
    cpu_count: int = 0

    @property
    def speedups(self) -> dict:
        return {w: s.speedup for w, s in self.stats.items()}

    @property
    def efficiencies(self) -> dict:
        return {w: s.efficiency for w, s in self.stats.items()}

    def amdahl_prediction(self, n: int) -> float:
        return amdahl_speedup(min(max(self.parallel_fraction, 0.0), 1.0), n)

    def as_dict(self) -> dict:
        return {
            "n_points": self.n_points, "n_nodes": self.n_nodes, "n_edges": self.n_edges,
            "cpu_count": self.cpu_count,
            "parallel_fraction": self.parallel_fraction,
            "phase_times_s": self.phase_times_s,
            "workers": [s.as_dict() for s in self.stats.values()],
            "amdahl_prediction": {str(w): self.amdahl_prediction(w) for w in self.stats},
        }


def speedup_from_times(times: dict) -> dict:
    """``{workers: (speedup, efficiency)}`` relative to ``times[1]``."""
    base = times[1]
    return {w: (base / t, base / t / w) for w, t in times.items()}


def run_benchmark(cloud: PointCloud, fv: FilterValues, cover_params: CoverParams,
                  cluster_params: ClusterParams, worker_counts=(1, 2, 4),
                  repeats: int = 3, warmup: bool = True) -> SpeedupReport:
    """Time :func:`distributed_mapper` for each worker count.

    Speedups use the best of ``repeats`` timings against the one-worker run.
    Every run must produce the same graph.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    counts = sorted(set(worker_counts) | {1})
    pc = preprocess_cover(*fv.range, cover_params)
    reference = None
    report = SpeedupReport(n_points=len(cloud), cpu_count=os.cpu_count() or 1)
    phases = []
    if warmup:
        reference, _ = distributed_mapper(cloud, fv, pc, cluster_params, workers=1)
    for w in counts:
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            graph, timing = distributed_mapper(cloud, fv, pc, cluster_params, workers=w)
            times.append(time.perf_counter() - start)
            if reference is None:
                reference = graph
            elif not graph_equal(graph, reference):
                raise EquivalenceViolation(f"graph with {w} workers differs from reference")
            if w == 1:
                phases.append(timing)
        report.stats[w] = WorkerStats(w, times)
    for w, (s, e) in speedup_from_times({w: st.best for w, st in report.stats.items()}).items():
        report.stats[w].speedup, report.stats[w].efficiency = s, e
    best = min(phases, key=lambda t: t.total)
    report.parallel_fraction = best.parallel_fraction
    report.phase_times_s = {"plan": best.plan, "parallel": best.parallel, "merge": best.merge}
    report.n_nodes, report.n_edges = reference.n_nodes, reference.n_edges
    return report
