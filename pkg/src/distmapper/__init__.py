"""Sequential and chunk-parallel Mapper graphs of point clouds under a scalar filter."""
from .clustering import ClusterParams, Clustering, brute_force_clusters, dbscan
from .cover import (ChainCover, CoverParams, Interval, PreprocessedCover, build_chain_cover,
                    build_sub_covers, flatten_cover, preprocess_cover,
                    validate_preprocessed_cover)
from .distributed import (ChunkTask, MergePlan, distributed_mapper, merge_chunk_graphs,
                          plan_chunks, run_chunk)
from .graph import MapperGraph, NodeKey, disjoint_union, graph_equal, quotient
from .perf import amdahl_speedup, amdahl_table, run_benchmark
from .sequential import FilterValues, PointCloud, pullback, sequential_mapper

__version__ = "0.1.0"
