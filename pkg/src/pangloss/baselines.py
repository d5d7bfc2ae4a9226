"""Reference prefetchers sharing the engine's on_access contract."""

from .engine import EngineConfig, PanglossPrefetcher, Prefetcher, PrefetchCandidate, traverse
from .delta_cache import DeltaCache
from .geometry import split_address


class NullPrefetcher(Prefetcher):
    kind = "none"

    def __init__(self, config: EngineConfig):
        super().__init__(config.geo)

    def on_access(self, addr: int) -> list[PrefetchCandidate]:
        return []


class NextLinePrefetcher(Prefetcher):
    """Sequential baseline: the next `degree` offsets, clipped to the page."""

    kind = "next-line"

    def __init__(self, config: EngineConfig):
        super().__init__(config.geo)
        self.degree = config.degree

    def on_access(self, addr: int) -> list[PrefetchCandidate]:
        page, offset = split_address(addr, self.geo)
        top = self.geo.offsets_per_page
        return [
            PrefetchCandidate(page, offset + step, step - 1, 0)
            for step in range(1, self.degree + 1)
            if offset + step < top
        ]


class GlobalDeltaPrefetcher(Prefetcher):
    """Ablation: the same table and traversal, but deltas compare full
    consecutive addresses instead of per-page state. Pairs that cross a
    page yield no transition and reset the chain state to the sentinel.
    """

    kind = "global-delta"

    def __init__(self, config: EngineConfig):
        super().__init__(config.geo)
        self.config = config
        self.delta_cache = DeltaCache(config.geo)
        self._prev_granule: int | None = None
        self._prev_delta = config.geo.sentinel

    def on_access(self, addr: int) -> list[PrefetchCandidate]:
        geo = self.geo
        page, offset = split_address(addr, geo)
        granule = (page << geo.offset_bits) | offset
        prev = self._prev_granule
        self._prev_granule = granule
        if prev is None:
            return traverse(self.delta_cache, geo.sentinel, offset, page, self.config)
        if (prev >> geo.offset_bits) != page:
            # invalidated: the latest address belongs to another page
            self.invalidated_transitions += 1
            self._prev_delta = geo.sentinel
            return traverse(self.delta_cache, geo.sentinel, offset, page, self.config)
        delta = granule - prev
        if delta == 0:
            self._prev_delta = 0
            return []
        self.delta_cache.train(self._prev_delta, delta)
        self.valid_transitions += 1
        self._prev_delta = delta
        return traverse(self.delta_cache, delta, offset, page, self.config)


PREFETCHER_KINDS = ("pangloss", "next-line", "global-delta", "none")

_CLASSES = {
    cls.kind: cls
    for cls in (PanglossPrefetcher, NextLinePrefetcher, GlobalDeltaPrefetcher, NullPrefetcher)
}


def make_prefetcher(kind: str, config: EngineConfig) -> Prefetcher:
    try:
        cls = _CLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown prefetcher {kind!r}; choose from {PREFETCHER_KINDS}") from None
    return cls(config)
