"""Point-cloud readers, synthetic shapes, filter functions and graph export."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .clustering import DimensionMismatch
from .cover import Interval
from .graph import MapperGraph, NodeData, NodeKey
from .sequential import FilterValues, PointCloud

PathLike = Union[str, Path]


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class FormatError(ParseError):
    pass


class CountMismatch(ParseError):
    pass


class AxisOutOfBounds(IndexError):
    pass


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_points_csv(path: PathLike, dimension: Optional[int] = None) -> PointCloud:
    """Read comma-separated reals, one point per row.

    A first row containing anything non-numeric is taken as a header.  When
    ``dimension`` is given, only the first ``dimension`` columns are
    coordinates and the rest are kept as named extra columns.
    """
    rows = []
    header = None
    width = None
    try:
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                cells = [c.strip() for c in row]
                if not cells or all(c == "" for c in cells):
                    continue
                if header is None and not rows and not all(_is_number(c) for c in cells):
                    header = cells
                    width = len(cells)
                    continue
                if width is None:
                    width = len(cells)
                if len(cells) != width:
                    raise ParseError(f"expected {width} columns, found {len(cells)}", lineno)
                try:
                    rows.append([float(c) for c in cells])
                except ValueError:
                    raise ParseError(f"non-numeric value in {row!r}", lineno) from None
    except (UnicodeDecodeError, csv.Error) as exc:
        raise ParseError(f"unreadable CSV: {exc}") from None
    if not rows:
        raise ParseError("no data rows")
    data = np.array(rows, dtype=float)
    if not np.isfinite(data).all():
        raise ParseError("non-finite value in data")
    names = tuple(header) if header else tuple(f"c{k}" for k in range(width))
    if dimension is None:
        return PointCloud(data, extra=data, extra_names=names)
    if not 1 <= dimension <= width:
        raise DimensionMismatch(f"dimension {dimension} but rows have {width} columns")
    return PointCloud(data[:, :dimension], extra=data, extra_names=names)


def _meaningful_lines(fh):
    for lineno, raw in enumerate(fh, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_points_off(path: PathLike) -> PointCloud:
    """Vertices of an OFF mesh as a 3-D point cloud; faces are ignored."""
    try:
        with open(path) as fh:
            lines = _meaningful_lines(fh)
            first = next(lines, None)
            if first is None or not first[1].startswith("OFF"):
                raise FormatError("missing OFF header", first[0] if first else 1)
            rest = first[1][3:].split()
            if rest:
                lineno, counts = first[0], rest
            else:
                nxt = next(lines, None)
                if nxt is None:
                    raise FormatError("missing counts line")
                lineno, counts = nxt[0], nxt[1].split()
            try:
                n_vertices = int(counts[0])
            except (IndexError, ValueError):
                raise FormatError(f"bad counts line {counts!r}", lineno) from None
            if n_vertices < 0:
                raise FormatError("negative vertex count", lineno)
            verts = np.empty((n_vertices, 3))
            for k in range(n_vertices):
                item = next(lines, None)
                if item is None:
                    raise CountMismatch(f"declared {n_vertices} vertices, found {k}")
                lineno, line = item
                parts = line.split()
                if len(parts) < 3:
                    raise FormatError("vertex needs 3 coordinates", lineno)
                try:
                    verts[k] = [float(x) for x in parts[:3]]
                except ValueError:
                    raise FormatError(f"bad vertex {line!r}", lineno) from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"not a text file: {exc}") from None
    if not np.isfinite(verts).all():
        raise FormatError("non-finite vertex coordinate")
    return PointCloud(verts)


def write_points_csv(cloud: PointCloud, path: PathLike):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{k}" for k in range(cloud.dim)])
        for row in cloud.points:
            w.writerow([repr(float(x)) for x in row])


SHAPES = ("circle", "sphere", "torus")


def generate_shape(shape: str, n: int, noise: float = 0.0, seed: int = 0) -> PointCloud:
    """Sample ``n`` points from a circle (2-D), unit sphere or torus (R=2, r=0.5).

    Uses numpy's PCG64 generator so a seed reproduces the same cloud.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if noise < 0:
        raise ValueError("noise must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    if shape == "circle":
        t = rng.uniform(0, 2 * math.pi, n)
        pts = np.column_stack([np.cos(t), np.sin(t)])
    elif shape == "sphere":
        v = rng.standard_normal((n, 3))
        pts = v / np.linalg.norm(v, axis=1, keepdims=True)
    elif shape == "torus":
        u = rng.uniform(0, 2 * math.pi, n)
        v = rng.uniform(0, 2 * math.pi, n)
        ring = 2.0 + 0.5 * np.cos(v)
        pts = np.column_stack([ring * np.cos(u), ring * np.sin(u), 0.5 * np.sin(v)])
    else:
        raise ValueError(f"unknown shape {shape!r}; choose from {SHAPES}")
    if noise > 0:
        pts = pts + rng.normal(0.0, noise, pts.shape)
    return PointCloud(pts)


@dataclass(frozen=True)
class FilterSpec:
    kind: str  # "coordinate", "l2norm" or "column"
    axis: Union[int, str, None] = None

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        """Parse ``coord:K``, ``l2norm`` or ``col:NAME``."""
        if text == "l2norm":
            return cls("l2norm")
        kind, _, arg = text.partition(":")
        if kind in ("coord", "coordinate") and arg.lstrip("-").isdigit():
            return cls("coordinate", int(arg))
        if kind in ("col", "column") and arg:
            return cls("column", int(arg) if arg.isdigit() else arg)
        raise ValueError(f"bad filter spec {text!r}")

    def __str__(self):
        if self.kind == "l2norm":
            return "l2norm"
        return f"{'coord' if self.kind == 'coordinate' else 'col'}:{self.axis}"


def evaluate_filter(cloud: PointCloud, spec: FilterSpec) -> FilterValues:
    if spec.kind == "coordinate":
        if not 0 <= spec.axis < cloud.dim:
            raise AxisOutOfBounds(f"axis {spec.axis} out of range for {cloud.dim}-D points")
        return FilterValues(cloud.points[:, spec.axis].copy())
    if spec.kind == "l2norm":
        return FilterValues(np.linalg.norm(cloud.points, axis=1))
    if spec.kind == "column":
        if cloud.extra is None:
            raise AxisOutOfBounds("cloud has no extra columns")
        col = spec.axis
        if isinstance(col, str):
            if col not in cloud.extra_names:
                raise AxisOutOfBounds(f"no column named {col!r}")
            col = cloud.extra_names.index(col)
        if not 0 <= col < cloud.extra.shape[1]:
            raise AxisOutOfBounds(f"column {col} out of range")
        return FilterValues(cloud.extra[:, col].copy())
    raise ValueError(f"unknown filter kind {spec.kind!r}")


def _ordered_nodes(g: MapperGraph):
    return sorted(g.nodes, key=lambda k: (k.cover_id, k.points))


def export_dot(g: MapperGraph, path: PathLike):
    """Write an undirected DOT graph; node ids are ``c<cover>_<min point>``."""
    names = {k: f"c{k.cover_id}_{k.points[0]}" for k in g.nodes}
    biggest = max((d.size for d in g.nodes.values()), default=1)
    lines = ["graph G {"]
    for k in _ordered_nodes(g):
        size = g.nodes[k].size
        width = 0.2 + 0.8 * size / biggest
        lines.append(f'  {names[k]} [label="{k.cover_id} | n={size}", width={width:.3f}];')
    for (u, v), w in sorted(g.edges.items(), key=lambda e: e[0]):
        lines.append(f'  {names[u]} -- {names[v]} [label="{w}", weight={w}];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def graph_to_dict(g: MapperGraph, cover=(), meta: Optional[dict] = None) -> dict:
    order = _ordered_nodes(g)
    pos = {k: i for i, k in enumerate(order)}
    edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), w) for (u, v), w in g.edges.items())
    return {
        "meta": meta or {},
        "cover": [{"id": gid, "lo": iv.lo, "hi": iv.hi} for gid, iv in cover],
        "nodes": [{"cover_id": k.cover_id, "points": list(k.points), "size": len(k.points)}
                  for k in order],
        "edges": [{"a": a, "b": b, "weight": w} for a, b, w in edges],
    }


def graph_from_dict(doc: dict) -> MapperGraph:
    intervals = {c["id"]: Interval(c["lo"], c["hi"]) for c in doc.get("cover", [])}
    g = MapperGraph()
    keys = []
    for node in doc["nodes"]:
        key = NodeKey(int(node["cover_id"]), tuple(int(p) for p in node["points"]))
        g.add_node(key, NodeData(frozenset(key.points), intervals.get(key.cover_id)))
        keys.append(key)
    for e in doc["edges"]:
        g.add_edge(keys[e["a"]], keys[e["b"]], int(e["weight"]))
    return g


def export_json(g: MapperGraph, path: PathLike, cover=(), meta: Optional[dict] = None):
    Path(path).write_text(json.dumps(graph_to_dict(g, cover, meta), indent=1))


def read_json_graph(path: PathLike) -> MapperGraph:
    return graph_from_dict(json.loads(Path(path).read_text()))
