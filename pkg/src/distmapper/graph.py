"""Mapper graph value type with disjoint union, quotient and canonical equality."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, NamedTuple, Optional

from .cover import Interval


class InvalidPartition(ValueError):
    pass


class NodeKey(NamedTuple):
    """A Mapper node: cover element id plus the sorted point ids of its cluster."""

    cover_id: int
    points: tuple[int, ...]


@dataclass(frozen=True)
class NodeData:
    points: frozenset
    interval: Optional[Interval] = None

    @property
    def size(self) -> int:
        return len(self.points)


def _edge(u, v):
    return (u, v) if sort_key(u) <= sort_key(v) else (v, u)


def sort_key(key):
    """Total order over node keys of mixed shape (ints, tuples, frozensets)."""
    if isinstance(key, NodeKey):
        return (3, key)
    if isinstance(key, (frozenset, set)):
        return (1, tuple(sorted(sort_key(k) for k in key)))
    if isinstance(key, tuple):
        return (2, tuple(sort_key(k) for k in key))
    return (0, key)


@dataclass
class MapperGraph:
    """Undirected weighted graph; ``edges`` maps an ordered key pair to its weight.

    Mapper graphs use :class:`NodeKey` keys, but any hashable works so the
    same type also carries side-tagged unions and plain test graphs.
    """

    nodes: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)

    def add_node(self, key: Hashable, data: Optional[NodeData] = None):
        self.nodes[key] = data if data is not None else NodeData(frozenset())

    def add_edge(self, u, v, weight: int = 1):
        if u not in self.nodes or v not in self.nodes:
            raise KeyError(f"edge ({u!r}, {v!r}) references a missing node")
        e = _edge(u, v)
        self.edges[e] = self.edges.get(e, 0) + weight

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def self_loops(self) -> list:
        return [e for e in self.edges if e[0] == e[1]]

    def n_components(self) -> int:
        parent = {k: k for k in self.nodes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return len({find(k) for k in self.nodes})

    def cycle_rank(self) -> int:
        """Number of independent cycles, ``|E| - |V| + #components``."""
        return self.n_edges - self.n_nodes + self.n_components()

    def canonical(self):
        nodes = tuple(sorted(((k, d.size) for k, d in self.nodes.items()),
                             key=lambda item: sort_key(item[0])))
        edges = tuple(sorted(((u, v, w) for (u, v), w in self.edges.items()),
                             key=lambda item: (sort_key(item[0]), sort_key(item[1]), item[2])))
        return nodes, edges


def graph_from_edges(edges: Iterable[tuple], nodes: Iterable = ()) -> MapperGraph:
    g = MapperGraph()
    for k in nodes:
        g.add_node(k)
    for u, v in edges:
        for k in (u, v):
            if k not in g.nodes:
                g.add_node(k)
        g.add_edge(u, v)
    return g


def disjoint_union(*graphs: MapperGraph) -> MapperGraph:
    """Union of the graphs with every key tagged ``(side, key)``."""
    out = MapperGraph()
    for side, g in enumerate(graphs):
        for k, d in g.nodes.items():
            out.nodes[(side, k)] = d
        for (u, v), w in g.edges.items():
            out.edges[_edge((side, u), (side, v))] = w
    return out


def quotient(g: MapperGraph, partition: Iterable[Iterable],
             block_key: Optional[Callable[[list], Hashable]] = None,
             loops: bool = True) -> MapperGraph:
    """Collapse each block of ``partition`` to one node.

    Edges map blockwise; parallel edges merge with summed weights and an edge
    inside a block becomes a self-loop, or is dropped when ``loops`` is False
    (the simple-graph quotient).  ``block_key`` names the new node (default:
    the frozenset of member keys).
    """
    owner = {}
    blocks = []
    for block in partition:
        block = list(block)
        if not block:
            raise InvalidPartition("empty block")
        for k in block:
            if k not in g.nodes:
                raise InvalidPartition(f"unknown node {k!r}")
            if k in owner:
                raise InvalidPartition(f"node {k!r} in two blocks")
            owner[k] = len(blocks)
        blocks.append(block)
    missing = [k for k in g.nodes if k not in owner]
    if missing:
        raise InvalidPartition(f"{len(missing)} nodes not covered, e.g. {missing[0]!r}")

    name = block_key or frozenset
    keys = [name(block) for block in blocks]
    if len(set(keys)) != len(keys):
        raise InvalidPartition("block keys collide")
    out = MapperGraph()
    for key, block in zip(keys, blocks):
        members = [g.nodes[k] for k in block]
        points = frozenset().union(*(d.points for d in members))
        out.nodes[key] = NodeData(points, members[0].interval)
    for (u, v), w in g.edges.items():
        bu, bv = owner[u], owner[v]
        if bu != bv or loops:
            out.add_edge(keys[bu], keys[bv], w)
    return out


def graph_equal(g1: MapperGraph, g2: MapperGraph) -> bool:
    return g1.canonical() == g2.canonical()
