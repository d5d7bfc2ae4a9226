"""Single-level LRU cache model that scores candidate streams.

There is no timing: a prefetch fills instantly and refreshes recency like
any other fill. A line filled by prefetch stays marked until its first
demand touch; a demand hit on a marked line is a covered would-be miss
(one coverage event), and a marked line evicted untouched is a wasted
prefetch. Candidates for lines already resident are dropped, not issued.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable

from .engine import Prefetcher

_DEMAND = 0
_PREFETCH = 1
_PREFETCH_WARMUP = 2  # issued during warmup; excluded from all counters


@dataclass(frozen=True)
class CacheConfig:
    size_bytes: int = 512 * 1024
    line_bytes: int = 64
    ways: int = 8

    def __post_init__(self) -> None:
        if self.line_bytes & (self.line_bytes - 1):
            raise ValueError("line_bytes must be a power of two")
        sets = self.sets
        if sets < 1 or sets & (sets - 1):
            raise ValueError("size / (line_bytes * ways) must be a power of two")

    @property
    def sets(self) -> int:
        return self.size_bytes // (self.line_bytes * self.ways)


@dataclass
class SimMetrics:
    demand_accesses: int = 0
    demand_hits: int = 0
    demand_misses: int = 0
    prefetches_issued: int = 0
    prefetches_useful: int = 0
    prefetches_unused_evicted: int = 0
    valid_transitions: int = 0
    invalidated_transitions: int = 0

    @property
    def accuracy(self) -> float:
        """Useful prefetches per issued prefetch."""
        return self.prefetches_useful / self.prefetches_issued if self.prefetches_issued else 0.0

    @property
    def coverage(self) -> float:
        """Fraction of would-be misses removed by prefetching."""
        denom = self.prefetches_useful + self.demand_misses
        return self.prefetches_useful / denom if denom else 0.0

    def as_dict(self) -> dict:
        return {
            "demand_accesses": self.demand_accesses,
            "demand_hits": self.demand_hits,
            "demand_misses": self.demand_misses,
            "prefetches_issued": self.prefetches_issued,
            "prefetches_useful": self.prefetches_useful,
            "prefetches_unused_evicted": self.prefetches_unused_evicted,
            "valid_transitions": self.valid_transitions,
            "invalidated_transitions": self.invalidated_transitions,
            "accuracy": self.accuracy,
            "coverage": self.coverage,
        }


METRICS_CSV_HEADER = (
    "config_hash,prefetcher,demand_accesses,demand_hits,demand_misses,"
    "prefetches_issued,prefetches_useful,prefetches_unused_evicted,"
    "valid_transitions,invalidated_transitions,accuracy,coverage"
)


def metrics_csv_row(config_hash: str, prefetcher_kind: str, metrics: SimMetrics) -> str:
    m = metrics
    return (
        f"{config_hash},{prefetcher_kind},{m.demand_accesses},{m.demand_hits},"
        f"{m.demand_misses},{m.prefetches_issued},{m.prefetches_useful},"
        f"{m.prefetches_unused_evicted},{m.valid_transitions},"
        f"{m.invalidated_transitions},{m.accuracy:.6f},{m.coverage:.6f}"
    )


def run_simulation(
    trace: Iterable[int],
    prefetcher: Prefetcher,
    cache_cfg: CacheConfig | None = None,
    warmup: int = 0,
) -> SimMetrics:
    """Replay demand accesses through the cache model and the prefetcher.

    The first `warmup` accesses exercise the cache and the prefetcher but
    update no counters; prefetches issued during warmup are excluded on
    both sides, so useful <= issued holds. Transition counters are read
    off the prefetcher over the counted window.
    """
    cfg = cache_cfg or CacheConfig()
    line_shift = cfg.line_bytes.bit_length() - 1
    set_mask = cfg.sets - 1
    ways = cfg.ways
    sets: list[OrderedDict[int, int]] = [OrderedDict() for _ in range(cfg.sets)]
    metrics = SimMetrics()
    geo = prefetcher.geo
    offset_bits = geo.offset_bits
    shift_back = geo.granularity_shift

    counting = False
    base_valid = base_invalid = 0
    processed = 0
    for index, addr in enumerate(trace):
        if not counting and index >= warmup:
            counting = True
            base_valid = prefetcher.valid_transitions
            base_invalid = prefetcher.invalidated_transitions
        processed += 1

        line = addr >> line_shift
        cache_set = sets[line & set_mask]
        mark = cache_set.pop(line, None)
        if mark is not None:
            cache_set[line] = _DEMAND  # pop+reinsert refreshes recency
            if counting:
                metrics.demand_accesses += 1
                metrics.demand_hits += 1
                if mark == _PREFETCH:
                    metrics.prefetches_useful += 1
        else:
            if len(cache_set) >= ways:
                _, evicted = cache_set.popitem(last=False)
                if counting and evicted == _PREFETCH:
                    metrics.prefetches_unused_evicted += 1
            cache_set[line] = _DEMAND
            if counting:
                metrics.demand_accesses += 1
                metrics.demand_misses += 1

        for cand in prefetcher.on_access(addr):
            cand_line = (((cand.page << offset_bits) | cand.offset) << shift_back) >> line_shift
            cand_set = sets[cand_line & set_mask]
            if cand_line in cand_set:
                continue
            if len(cand_set) >= ways:
                _, evicted = cand_set.popitem(last=False)
                if counting and evicted == _PREFETCH:
                    metrics.prefetches_unused_evicted += 1
            cand_set[cand_line] = _PREFETCH if counting else _PREFETCH_WARMUP
            if counting:
                metrics.prefetches_issued += 1

    if processed == 0:
        raise ValueError("empty trace")
    if counting:
        metrics.valid_transitions = prefetcher.valid_transitions - base_valid
        metrics.invalidated_transitions = prefetcher.invalidated_transitions - base_invalid
    return metrics
