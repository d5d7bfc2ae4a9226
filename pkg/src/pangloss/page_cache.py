"""Per-page last-offset and last-delta tracker.

Interleaved streams obfuscate a global delta sequence: consecutive
accesses rarely land in the same page, so raw address differences are
garbage. Keeping the last offset and the last delta per page lets each
page's own transitions be reconstructed. Pages are found by a short tag
(false positives are accepted silently) and replaced with 1-bit NRU.
"""

from typing import NamedTuple

from .geometry import LevelGeometry


class PageHit(NamedTuple):
    prev_delta: int  # delta stored before this access; sentinel if first in page
    prev_offset: int
    delta: int  # offset - prev_offset; 0 means the same location repeated


class PageCache:
    def __init__(self, geo: LevelGeometry):
        self.geo = geo
        self._index_bits = geo.page_sets.bit_length() - 1
        self._set_mask = geo.page_sets - 1
        self._tag_mask = (1 << geo.page_tag_bits) - 1
        self._ways = geo.page_ways
        # per set: [tag, delta_prev, offset_prev, nru] in way order
        self._sets: list[list[list[int]]] = [[] for _ in range(geo.page_sets)]
        self._touched = [0] * geo.page_sets  # way of the most recent hit/insert

    def access(self, page: int, offset: int) -> PageHit | None:
        """Probe a page and update its entry.

        On a hit the pre-update state plus the freshly computed delta is
        returned and the entry moves to (delta, offset, recently-used). On a
        miss a fresh entry is inserted with the sentinel delta and None is
        returned.
        """
        set_index = page & self._set_mask
        tag = (page >> self._index_bits) & self._tag_mask
        entries = self._sets[set_index]
        for way, entry in enumerate(entries):
            if entry[0] == tag:
                hit = PageHit(entry[1], entry[2], offset - entry[2])
                entry[1] = hit.delta
                entry[2] = offset
                entry[3] = 1
                self._touched[set_index] = way
                return hit
        fresh = [tag, self.geo.sentinel, offset, 1]
        if len(entries) < self._ways:
            self._touched[set_index] = len(entries)
            entries.append(fresh)
        else:
            way = self.nru_victim(set_index)
            entries[way] = fresh
            self._touched[set_index] = way
        return None

    def nru_victim(self, set_index: int) -> int:
        """Way to evict from a full set: the lowest way with a clear NRU bit.

        If every bit is set, all bits except the most recently touched way
        are cleared first.
        """
        entries = self._sets[set_index]
        for way, entry in enumerate(entries):
            if not entry[3]:
                return way
        last = self._touched[set_index]
        for way, entry in enumerate(entries):
            if way != last:
                entry[3] = 0
        return 1 if last == 0 else 0

    def dump_csv(self, path) -> None:
        """Write every valid entry as set,way,tag,delta_prev,offset_prev,nru."""
        with open(path, "w") as out:
            out.write("set,way,tag,delta_prev,offset_prev,nru\n")
            for set_index, entries in enumerate(self._sets):
                for way, (tag, delta_prev, offset_prev, nru) in enumerate(entries):
                    out.write(f"{set_index},{way},{tag},{delta_prev},{offset_prev},{nru}\n")
