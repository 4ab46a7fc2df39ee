"""Deterministic DBSCAN variant used to split each pullback set into clusters.

Differences from textbook DBSCAN, all chosen so that the result depends only
on the *set* of input points:

* neighbourhoods include the query point and use ``distance <= eps``;
* a border point joins the cluster of its nearest core point, ties going to
  the core point with the lowest global index;
* noise points are returned as singleton clusters, so every input point lands
  in exactly one cluster.

Clusters are ordered by their smallest global index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ClusterParams:
    eps: float
    min_pts: int = 1

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.min_pts < 1:
            raise ValueError("min_pts must be >= 1")


@dataclass(frozen=True)
class Clustering:
    clusters: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.clusters)

    def labels(self, indices) -> np.ndarray:
        """Cluster number for each entry of ``indices``."""
        lookup = {p: c for c, members in enumerate(self.clusters) for p in members}
        return np.array([lookup[int(p)] for p in indices], dtype=np.intp)


def _prepare(indices, coords):
    indices = np.asarray(indices, dtype=np.int64).ravel()
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords.reshape(len(indices), -1) if len(indices) else coords.reshape(0, 1)
    if coords.ndim != 2 or coords.shape[0] != indices.shape[0]:
        raise DimensionMismatch(f"{indices.shape[0]} indices but coordinates of shape {coords.shape}")
    if len(np.unique(indices)) != len(indices):
        raise ValueError("global indices must be distinct")
    order = np.argsort(indices, kind="stable")
    return indices[order], coords[order]


def _pair_distances(coords, i, j):
    diff = coords[i] - coords[j]
    return np.sqrt((diff * diff).sum(axis=-1))


def _assemble(indices, n, core, core_labels, border_owner):
    """Group local points into clusters given core component labels.

    ``border_owner[k]`` is the local index of the core point that border
    point ``k`` attaches to, or -1 for noise / core points.
    """
    groups: dict[tuple, list[int]] = {}
    for k in range(n):
        if core[k]:
            key = ("c", core_labels[k])
        elif border_owner[k] >= 0:
            key = ("c", core_labels[border_owner[k]])
        else:
            key = ("n", k)
        groups.setdefault(key, []).append(int(indices[k]))
    clusters = sorted(tuple(sorted(g)) for g in groups.values())
    return Clustering(tuple(clusters))


def _choose_owners(indices, n, core, i, j, dist):
    """Nearest core neighbour of each non-core point, lowest index on ties."""
    owner = np.full(n, -1, dtype=np.intp)
    # orient every pair as (non-core point, core point)
    fwd = ~core[i] & core[j]
    bwd = core[i] & ~core[j]
    pts = np.concatenate([i[fwd], j[bwd]])
    cores = np.concatenate([j[fwd], i[bwd]])
    d = np.concatenate([dist[fwd], dist[bwd]])
    if len(pts) == 0:
        return owner
    # local order equals global-index order, so comparing local ids breaks ties correctly
    order = np.lexsort((cores, d, pts))
    pts, cores = pts[order], cores[order]
    first = np.ones(len(pts), dtype=bool)
    first[1:] = pts[1:] != pts[:-1]
    owner[pts[first]] = cores[first]
    return owner


def dbscan(indices, coords, params: ClusterParams) -> Clustering:
    """Cluster the points ``coords[k]`` carrying global ids ``indices[k]``.

    Neighbour candidates come from a KD-tree; the final ``<= eps`` decision is
    made on distances recomputed exactly, so results match the brute-force
    oracle bit for bit.
    """
    indices, coords = _prepare(indices, coords)
    n = len(indices)
    if n == 0:
        return Clustering(())
    tree = cKDTree(coords)
    pairs = tree.query_pairs(params.eps * (1 + 1e-9) + 1e-300, output_type="ndarray")
    i, j = pairs[:, 0], pairs[:, 1]
    dist = _pair_distances(coords, i, j)
    keep = dist <= params.eps
    i, j, dist = i[keep], j[keep], dist[keep]

    degree = np.bincount(np.concatenate([i, j]), minlength=n) + 1
    core = degree >= params.min_pts
    both = core[i] & core[j]
    graph = coo_matrix((np.ones(both.sum()), (i[both], j[both])), shape=(n, n))
    _, core_labels = connected_components(graph, directed=False)
    owner = _choose_owners(indices, n, core, i, j, dist)
    return _assemble(indices, n, core, core_labels, owner)


def brute_force_clusters(indices, coords, params: ClusterParams) -> Clustering:
    """Reference implementation: full distance matrix and an explicit union-find."""
    indices, coords = _prepare(indices, coords)
    n = len(indices)
    if n == 0:
        return Clustering(())
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    dist = _pair_distances(coords, ii, jj)
    adj = dist <= params.eps
    core = adj.sum(axis=1) >= params.min_pts

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in range(n):
        if not core[p]:
            continue
        for q in range(p + 1, n):
            if core[q] and adj[p, q]:
                rp, rq = find(p), find(q)
                if rp != rq:
                    parent[max(rp, rq)] = min(rp, rq)

    members: dict[int, set[int]] = {}
    for p in range(n):
        if core[p]:
            members.setdefault(find(p), set()).add(int(indices[p]))
    singletons = []
    for p in range(n):
        if core[p]:
            continue
        best = None
        for q in range(n):
            if core[q] and adj[p, q]:
                cand = (dist[p, q], int(indices[q]))
                if best is None or cand < best[0]:
                    best = (cand, q)
        if best is None:
            singletons.append((int(indices[p]),))
        else:
            members[find(best[1])].add(int(indices[p]))
    clusters = [tuple(sorted(m)) for m in members.values()] + singletons
    return Clustering(tuple(sorted(clusters)))
