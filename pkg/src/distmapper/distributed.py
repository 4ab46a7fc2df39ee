"""Chunked Mapper: per-chunk graphs built concurrently, then glued together.

Each chunk of a :class:`~distmapper.cover.PreprocessedCover` is processed on
its own with the sequential construction.  Clusters of an overlap interval
are computed by both neighbouring chunks and come out identical, so merging
is a disjoint union followed by a quotient that identifies those duplicates.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .clustering import ClusterParams
from .cover import PreprocessedCover
from .graph import MapperGraph, disjoint_union, quotient
from .sequential import (CoverDoesNotCoverRange, FilterValues, PointCloud,
                         mapper_on_subset)


class MergeMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class ChunkTask:
    chunk_index: int
    chunk_points: np.ndarray
    sub_cover: tuple


@dataclass(frozen=True)
class MergePlan:
    """Per internal boundary: the shared interval id and the node pairs to identify."""

    boundaries: tuple

    @property
    def n_duplicates(self) -> int:
        return sum(len(pairs) for _, pairs in self.boundaries)


@dataclass(frozen=True)
class Timings:
    """Wall-clock seconds of each phase of a distributed run."""

    plan: float
    parallel: float
    merge: float

    @property
    def total(self) -> float:
        return self.plan + self.parallel + self.merge

    @property
    def parallel_fraction(self) -> float:
        return self.parallel / self.total if self.total > 0 else 0.0

    def as_ms(self) -> dict:
        return {"plan": 1e3 * self.plan, "parallel": 1e3 * self.parallel,
                "merge": 1e3 * self.merge, "total": 1e3 * self.total}


def plan_chunks(cloud: PointCloud, fv: FilterValues, pc: PreprocessedCover) -> list[ChunkTask]:
    v = fv.values
    seen = np.zeros(len(v), dtype=bool)
    tasks = []
    for i, (chunk, sub) in enumerate(zip(pc.chain.chunks, pc.sub_covers)):
        mask = (v > chunk.lo) & (v < chunk.hi)
        seen |= mask
        tasks.append(ChunkTask(i, np.flatnonzero(mask), tuple(sub)))
    if not seen.all():
        bad = int(np.flatnonzero(~seen)[0])
        raise CoverDoesNotCoverRange(f"point {bad} (f={v[bad]}) lies in no chunk")
    return tasks


def _chunk_worker(task: ChunkTask, coords, values, params) -> MapperGraph:
    return mapper_on_subset(task.chunk_points, coords, values, task.sub_cover, params)


def run_chunk(task: ChunkTask, cloud: PointCloud, fv: FilterValues,
              params: ClusterParams) -> MapperGraph:
    idx = task.chunk_points
    return _chunk_worker(task, cloud.points[idx], fv.values[idx], params)


def plan_merge(graphs: list[MapperGraph], pc: PreprocessedCover) -> MergePlan:
    if len(graphs) != pc.n_chunks:
        raise MergeMismatch(f"{len(graphs)} graphs for {pc.n_chunks} chunks")
    shared = set(pc.shared_ids)
    owners: dict = {}
    for i, g in enumerate(graphs):
        for key in g.nodes:
            owners.setdefault(key, []).append(i)
    for key, where in owners.items():
        if len(where) > 1 and key.cover_id not in shared:
            raise MergeMismatch(f"node {key.cover_id}/{key.points[:5]} found in chunks {where}")

    boundaries = []
    for i, sid in enumerate(pc.shared_ids):
        left = {k for k in graphs[i].nodes if k.cover_id == sid}
        right = {k for k in graphs[i + 1].nodes if k.cover_id == sid}
        if left != right:
            odd = sorted(left ^ right)[0]
            raise MergeMismatch(f"shared interval {sid}: cluster of {len(odd.points)} points "
                                f"(min index {odd.points[0]}) present on one side only")
        boundaries.append((sid, tuple(((i, k), (i + 1, k)) for k in sorted(left))))
    return MergePlan(tuple(boundaries))


def merge_chunk_graphs(graphs: list[MapperGraph], pc: PreprocessedCover) -> MapperGraph:
    if len(graphs) == 1:
        return graphs[0]
    plan = plan_merge(graphs, pc)
    union = disjoint_union(*graphs)
    paired = {}
    for _, pairs in plan.boundaries:
        for a, b in pairs:
            paired[a] = paired[b] = (a, b)
    blocks = []
    for tagged in union.nodes:
        if tagged not in paired:
            blocks.append((tagged,))
        elif paired[tagged][0] == tagged:
            blocks.append(paired[tagged])
    return quotient(union, blocks, block_key=lambda block: block[0][1])


def distributed_mapper(cloud: PointCloud, fv: FilterValues, pc: PreprocessedCover,
                       params: ClusterParams, workers: int = 1) -> tuple[MapperGraph, Timings]:
    """Mapper graph of ``cloud`` over the flattened ``pc``, built chunk-wise.

    With ``workers == 1`` chunks run in-process one after another; otherwise a
    process pool with ``workers`` processes handles them.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if len(fv) != len(cloud):
        raise ValueError(f"{len(fv)} filter values for {len(cloud)} points")
    t0 = time.perf_counter()
    tasks = plan_chunks(cloud, fv, pc)
    t1 = time.perf_counter()
    if workers == 1 or len(tasks) == 1:
        graphs = [run_chunk(t, cloud, fv, params) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk_worker, t, cloud.points[t.chunk_points],
                                   fv.values[t.chunk_points], params) for t in tasks]
            graphs = [f.result() for f in futures]
    t2 = time.perf_counter()
    graph = merge_chunk_graphs(graphs, pc)
    t3 = time.perf_counter()
    return graph, Timings(t1 - t0, t2 - t1, t3 - t2)
