"""Per-access pipeline and the chain traversal heuristic.

Every demand access is split into (page, offset), run through the page
tracker to recover that page's previous delta, used to train the
next-delta table, and finally seeds a traversal of the learned chain:

  step  take the children of the current delta whose probability strictly
        exceeds the threshold (1/3 by default, so at most two can clear
        it), emit a candidate for each that stays inside the page, then
        follow the single most probable child.
  stop  once `degree` candidates are emitted, no child clears the
        threshold, or `max_steps` steps have run.

A candidate that lands outside the page is dropped but the walk itself
continues, so a pattern learned from other starting offsets still covers
the tail of the current page. Page misses seed the walk from the sentinel
state, whose set holds the learned first-delta-after-page-entry
distribution. Threshold comparisons are done on raw integer counters, so
exact probability ties at the threshold never prefetch.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .delta_cache import DeltaCache
from .geometry import LevelGeometry, split_address
from .page_cache import PageCache


class PrefetchCandidate(NamedTuple):
    page: int
    offset: int
    path_depth: int
    probability_rank: int


@dataclass
class EngineConfig:
    """Traversal knobs. degree is the prefetch degree; max_steps bounds the
    walk when out-of-page discards keep it from reaching the degree."""

    geo: LevelGeometry
    degree: int = 4
    max_steps: int | None = None  # defaults to 2 * degree
    threshold: Fraction = Fraction(1, 3)
    dedupe: bool = True

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.max_steps is None:
            self.max_steps = 2 * self.degree
        if self.max_steps < self.degree:
            raise ValueError("max_steps must be >= degree")
        self.threshold = Fraction(self.threshold)
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


def traverse(
    cache: DeltaCache,
    start_delta: int,
    base_offset: int,
    page: int,
    cfg: EngineConfig,
) -> list[PrefetchCandidate]:
    """Walk the learned chain from start_delta, emitting in-page candidates."""
    top = cfg.geo.offsets_per_page
    num = cfg.threshold.numerator
    den = cfg.threshold.denominator
    out: list[PrefetchCandidate] = []
    seen: set[int] = set()
    current = start_delta
    base = base_offset
    for depth in range(cfg.max_steps):
        entries = cache.entries(current)
        total = sum(counter for _, counter in entries)
        above = [(d, c) for d, c in entries if c * den > total * num]
        if not above:
            break
        above.sort(key=lambda entry: -entry[1])  # stable: way order on ties
        # k children strictly above num/den force k*num < den (2 at 1/3)
        assert len(above) * num < den
        for rank, (child, _) in enumerate(above):
            target = base + child
            if 0 <= target < top and (not cfg.dedupe or target not in seen):
                out.append(PrefetchCandidate(page, target, depth, rank))
                if len(out) == cfg.degree:
                    return out
                seen.add(target)
        # follow the top child even when it leaves the page: the path stays
        # valid so later in-page offsets can still be reached
        current = above[0][0]
        base += current
    return out


class Prefetcher:
    """Shared surface: feed demand accesses in program order, get candidate
    (page, offset) prefetches back. Subclasses keep whatever state they need.
    """

    kind = "none"

    def __init__(self, geo: LevelGeometry):
        self.geo = geo
        self.valid_transitions = 0
        self.invalidated_transitions = 0

    def on_access(self, addr: int) -> list[PrefetchCandidate]:
        raise NotImplementedError


class PanglossPrefetcher(Prefetcher):
    """Page tracker + next-delta table + chain traversal."""

    kind = "pangloss"

    def __init__(self, config: EngineConfig):
        super().__init__(config.geo)
        self.config = config
        self.delta_cache = DeltaCache(config.geo)
        self.page_cache = PageCache(config.geo)

    def on_access(self, addr: int) -> list[PrefetchCandidate]:
        page, offset = split_address(addr, self.geo)
        hit = self.page_cache.access(page, offset)
        if hit is None:
            # first sighting of the page: nothing to train, predict from the
            # page-entry state
            self.invalidated_transitions += 1
            return traverse(self.delta_cache, self.geo.sentinel, offset, page, self.config)
        if hit.delta == 0:
            # repeated location: nothing to learn, nothing worth fetching
            return []
        self.delta_cache.train(hit.prev_delta, hit.delta)
        self.valid_transitions += 1
        return traverse(self.delta_cache, hit.delta, offset, page, self.config)
