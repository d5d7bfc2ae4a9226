"""Trace-driven simulation of the Pangloss delta-transition Markov prefetcher."""

from .baselines import (
    GlobalDeltaPrefetcher,
    NextLinePrefetcher,
    NullPrefetcher,
    PREFETCHER_KINDS,
    make_prefetcher,
)
from .delta_cache import DeltaCache
from .engine import EngineConfig, PanglossPrefetcher, Prefetcher, PrefetchCandidate, traverse
from .geometry import (
    GEOMETRIES,
    L1_GEOMETRY,
    L2_GEOMETRY,
    PAGE_BYTES,
    LevelGeometry,
    in_page,
    split_address,
    to_byte_address,
)
from .memsim import CacheConfig, SimMetrics, run_simulation
from .page_cache import PageCache, PageHit
from .profiler import TransitionMatrix, export_matrix, profile
from .space import SpaceBudget, space_budget
from .tracegen import (
    DeltaCycle,
    Interleaved,
    SecondaryAccess,
    Stride,
    TraceSpec,
    UniformRandom,
    build_spec,
    generate,
    generate_granules,
    parse_pattern,
    read_trace,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "CacheConfig",
    "DeltaCache",
    "DeltaCycle",
    "EngineConfig",
    "GEOMETRIES",
    "GlobalDeltaPrefetcher",
    "Interleaved",
    "L1_GEOMETRY",
    "L2_GEOMETRY",
    "LevelGeometry",
    "NextLinePrefetcher",
    "NullPrefetcher",
    "PAGE_BYTES",
    "PREFETCHER_KINDS",
    "PageCache",
    "PageHit",
    "PanglossPrefetcher",
    "PrefetchCandidate",
    "Prefetcher",
    "SecondaryAccess",
    "SimMetrics",
    "SpaceBudget",
    "Stride",
    "TraceSpec",
    "TransitionMatrix",
    "UniformRandom",
    "build_spec",
    "export_matrix",
    "generate",
    "generate_granules",
    "in_page",
    "make_prefetcher",
    "parse_pattern",
    "profile",
    "read_trace",
    "run_simulation",
    "space_budget",
    "split_address",
    "to_byte_address",
    "traverse",
    "write_trace",
]
