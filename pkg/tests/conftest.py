import numpy as np
import pytest

from distmapper.clustering import ClusterParams, brute_force_clusters
from distmapper.cover import CoverParams, preprocess_cover
from distmapper.graph import MapperGraph, NodeData, NodeKey
from distmapper.sequential import FilterValues, PointCloud


def random_instance(seed):
    """A random (cloud, filter, cover, cluster params) tuple within the acceptance ranges."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(50, 501))
    d = int(rng.choice([1, 2, 3]))
    n_blobs = int(rng.integers(1, 6))
    centers = rng.uniform(-3, 3, (n_blobs, d))
    pts = centers[rng.integers(0, n_blobs, n)] + rng.normal(0, rng.uniform(0.1, 1.0), (n, d))
    kind = rng.integers(0, 3)
    if kind == 0:
        values = pts[:, 0]
    elif kind == 1:
        values = np.linalg.norm(pts, axis=1)
    else:
        values = pts @ rng.normal(size=d)
    fv = FilterValues(values)
    a, b = fv.range
    n_chunks = int(rng.choice([1, 2, 3, 4, 8]))
    gain = float(rng.uniform(0.1, 0.5))
    width = None
    if rng.random() < 0.5:
        width = float(rng.uniform(0.05, 0.95)) * (b - a) / n_chunks
    cover = CoverParams(n_chunks, int(rng.integers(1, 6)), gain, width)
    spread = float(np.std(pts)) or 1.0
    params = ClusterParams(float(rng.uniform(0.05, 0.6)) * spread, int(rng.integers(1, 6)))
    return PointCloud(pts), fv, preprocess_cover(a, b, cover), params


def brute_mapper(cloud, fv, cover, params):
    """Mapper built the slow way: loops for pullbacks, all-pairs set intersection for edges."""
    g = MapperGraph()
    nodes = []
    for gid, iv in cover:
        members = [k for k, v in enumerate(fv.values) if iv.lo < v < iv.hi]
        if not members:
            continue
        for cluster in brute_force_clusters(members, cloud.points[members], params).clusters:
            key = NodeKey(gid, cluster)
            g.add_node(key, NodeData(frozenset(cluster), iv))
            nodes.append(key)
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if u.cover_id != v.cover_id:
                w = len(set(u.points) & set(v.points))
                if w:
                    g.add_edge(u, v, w)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
