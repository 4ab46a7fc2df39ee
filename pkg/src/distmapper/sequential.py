"""Reference sequential Mapper: pull back, cluster, connect overlapping clusters."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .clustering import ClusterParams, dbscan
from .cover import Interval
from .graph import MapperGraph, NodeData, NodeKey


class CoverDoesNotCoverRange(ValueError):
    pass


@dataclass(frozen=True)
class PointCloud:
    """``points`` is an ``(n, d)`` array; row ``k`` has global index ``k``.

    ``extra`` optionally holds non-coordinate columns (for example from a
    CSV file) usable as filters.
    """

    points: np.ndarray
    extra: Optional[np.ndarray] = None
    extra_names: tuple = ()

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-D array")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class FilterValues:
    values: np.ndarray
    range: tuple = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        object.__setattr__(self, "values", v)
        rng = (float(v.min()), float(v.max())) if len(v) else (0.0, 0.0)
        object.__setattr__(self, "range", rng)

    def __len__(self):
        return len(self.values)


def pullback(fv: FilterValues, interval: Interval) -> np.ndarray:
    """Sorted indices of points whose filter value lies in the open interval."""
    v = fv.values
    return np.flatnonzero((v > interval.lo) & (v < interval.hi))


def mapper_on_subset(indices: np.ndarray, coords: np.ndarray, values: np.ndarray,
                     cover: Sequence[tuple[int, Interval]],
                     params: ClusterParams) -> MapperGraph:
    """Mapper graph of the points ``indices`` (global ids) over ``cover``.

    ``coords`` and ``values`` are row-aligned with ``indices``.
    """
    indices = np.asarray(indices, dtype=np.int64)
    order = np.argsort(indices, kind="stable")
    indices, coords, values = indices[order], np.asarray(coords)[order], np.asarray(values)[order]
    n = len(indices)
    g = MapperGraph()
    covered = np.zeros(n, dtype=bool)
    # labels[c][k] = node of local point k in cover element c, or -1
    labels = {}
    node_keys = {}
    for gid, iv in cover:
        local = np.flatnonzero((values > iv.lo) & (values < iv.hi))
        if len(local) == 0:
            continue
        covered[local] = True
        clustering = dbscan(indices[local], coords[local], params)
        lab = np.full(n, -1, dtype=np.intp)
        sub = indices[local]
        keys = []
        for c, members in enumerate(clustering.clusters):
            key = NodeKey(gid, members)
            g.add_node(key, NodeData(frozenset(members), iv))
            keys.append(key)
            lab[local[np.searchsorted(sub, members)]] = c
        labels[gid] = lab
        node_keys[gid] = keys

    if n and not covered.all():
        bad = int(indices[np.flatnonzero(~covered)[0]])
        raise CoverDoesNotCoverRange(f"point {bad} (f={values[~covered][0]}) lies in no cover interval")

    used = [(gid, iv) for gid, iv in sorted(cover, key=lambda item: (item[1], item[0])) if gid in labels]
    for a in range(len(used)):
        gid_a, iv_a = used[a]
        for b in range(a + 1, len(used)):
            gid_b, iv_b = used[b]
            if iv_b.lo >= iv_a.hi:
                break
            if gid_a == gid_b or not iv_a.intersects(iv_b):
                continue
            la, lb = labels[gid_a], labels[gid_b]
            both = (la >= 0) & (lb >= 0)
            if not both.any():
                continue
            pairs, counts = np.unique(np.stack([la[both], lb[both]], axis=1), axis=0, return_counts=True)
            for (ca, cb), w in zip(pairs, counts):
                g.add_edge(node_keys[gid_a][ca], node_keys[gid_b][cb], int(w))
    return g


def sequential_mapper(cloud: PointCloud, fv: FilterValues,
                      cover: Sequence[tuple[int, Interval]],
                      params: ClusterParams) -> MapperGraph:
    if len(fv) != len(cloud):
        raise ValueError(f"{len(fv)} filter values for {len(cloud)} points")
    return mapper_on_subset(np.arange(len(cloud)), cloud.points, fv.values, cover, params)
