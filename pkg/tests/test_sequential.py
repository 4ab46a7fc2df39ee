import numpy as np
import pytest

from distmapper.clustering import ClusterParams
from distmapper.cover import Interval, flatten_cover
from distmapper.dataio import generate_shape
from distmapper.graph import NodeKey, graph_equal
from distmapper.sequential import (CoverDoesNotCoverRange, FilterValues, PointCloud,
                                   pullback, sequential_mapper)

from conftest import brute_mapper, random_instance


def test_pullback_open_interval():
    fv = FilterValues([0.1, 0.5, 0.9])
    assert pullback(fv, Interval(0.4, 1.0)).tolist() == [1, 2]
    assert pullback(fv, Interval(0.5, 0.9)).tolist() == []
    assert pullback(fv, Interval(2, 3)).tolist() == []


def five_points():
    xs = np.arange(5, dtype=float)
    return PointCloud(xs[:, None]), FilterValues(xs)


def test_five_point_example():
    cloud, fv = five_points()
    cover = [(0, Interval(-0.5, 2.2)), (1, Interval(1.8, 4.5))]
    g = sequential_mapper(cloud, fv, cover, ClusterParams(1.5, 1))
    oracle = brute_mapper(cloud, fv, cover, ClusterParams(1.5, 1))
    assert graph_equal(g, oracle)
    assert (g.n_nodes, g.n_edges) == (2, 1)
    assert g.edges == {(NodeKey(0, (0, 1, 2)), NodeKey(1, (2, 3, 4))): 1}


def test_empty_pullback_adds_no_node():
    cloud, fv = five_points()
    cover = [(0, Interval(-1, 5)), (1, Interval(10, 11))]
    g = sequential_mapper(cloud, fv, cover, ClusterParams(1.5, 1))
    assert {k.cover_id for k in g.nodes} == {0}


def test_uncovered_point_is_an_error():
    cloud, fv = five_points()
    with pytest.raises(CoverDoesNotCoverRange):
        sequential_mapper(cloud, fv, [(0, Interval(-1, 2))], ClusterParams(1.0))


def test_noisy_circle_has_one_cycle():
    cloud = generate_shape("circle", 2000, 0.03, seed=1)
    fv = FilterValues(cloud.points[:, 0])
    from distmapper.cover import build_chain_cover, build_sub_covers
    pc = build_sub_covers(build_chain_cover(*fv.range, 1, 0.1), 8, 0.3)
    g = sequential_mapper(cloud, fv, flatten_cover(pc), ClusterParams(0.1, 3))
    assert g.cycle_rank() == 1


@pytest.mark.parametrize("seed", range(25))
def test_matches_brute_force_mapper(seed):
    cloud, fv, pc, params = random_instance(1000 + seed)
    flat = flatten_cover(pc)
    g = sequential_mapper(cloud, fv, flat, params)
    assert graph_equal(g, brute_mapper(cloud, fv, flat, params))
    # clusters of one cover element partition its pullback
    for gid, iv in flat:
        members = sorted(p for k in g.nodes if k.cover_id == gid for p in k.points)
        assert members == pullback(fv, iv).tolist()
    # edges only join interval-intersecting cover elements
    ivs = dict(flat)
    for u, v in g.edges:
        assert ivs[u.cover_id].intersects(ivs[v.cover_id])


@pytest.mark.parametrize("seed", range(5))
def test_point_order_does_not_matter(seed):
    cloud, fv, pc, params = random_instance(2000 + seed)
    flat = flatten_cover(pc)
    g = sequential_mapper(cloud, fv, flat, params)
    perm = np.random.default_rng(seed).permutation(len(cloud))
    h = sequential_mapper(PointCloud(cloud.points[perm]), FilterValues(fv.values[perm]), flat, params)
    # relabel h's point ids back to the original indexing
    relabel = {}
    for k, d in h.nodes.items():
        relabel[k] = NodeKey(k.cover_id, tuple(sorted(int(perm[p]) for p in k.points)))
    nodes_h = sorted(relabel.values())
    edges_h = sorted(tuple(sorted((relabel[u], relabel[v]))) + (w,) for (u, v), w in h.edges.items())
    assert nodes_h == sorted(g.nodes)
    assert edges_h == sorted(tuple(sorted((u, v))) + (w,) for (u, v), w in g.edges.items())
