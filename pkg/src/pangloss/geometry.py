"""Address arithmetic and per-level table geometry.

Byte addresses are split into (page, offset) at a level-specific
granularity: 64-byte lines for the L2 tables, 8-byte words for L1.
Offsets live inside a fixed 4 KB page, so deltas (signed offset
differences) need one bit more than an offset. The most negative
representable delta can never arise as an intra-page difference and is
reserved as the "no previous delta" sentinel.
"""

from dataclasses import dataclass

PAGE_BYTES = 4096


@dataclass(frozen=True)
class LevelGeometry:
    """Bit-level shape of one prefetcher level.

    offset_bits        log2 of the offsets in a 4 KB page
    granularity_shift  address bits below offset granularity (6 = 64 B lines)
    delta_ways         associativity of the next-delta table
    lfu_bits           width of its frequency counters
    page_sets/ways     shape of the per-page tracker
    page_tag_bits      short page tag; false positives are accepted
    """

    name: str
    offset_bits: int
    granularity_shift: int
    delta_ways: int = 16
    lfu_bits: int = 8
    page_sets: int = 256
    page_ways: int = 12
    page_tag_bits: int = 10

    def __post_init__(self) -> None:
        if (1 << self.granularity_shift) * self.offsets_per_page != PAGE_BYTES:
            raise ValueError(
                f"{self.name}: granularity {1 << self.granularity_shift} B x "
                f"{self.offsets_per_page} offsets must cover one {PAGE_BYTES} B page"
            )

    @property
    def offsets_per_page(self) -> int:
        return 1 << self.offset_bits

    @property
    def delta_bits(self) -> int:
        # one sign bit on top of an offset
        return self.offset_bits + 1

    @property
    def delta_sets(self) -> int:
        # one set per representable delta, sentinel included
        return 1 << self.delta_bits

    @property
    def sentinel(self) -> int:
        """Most negative representable delta; never a real offset difference."""
        return -self.offsets_per_page

    @property
    def counter_max(self) -> int:
        return (1 << self.lfu_bits) - 1


L2_GEOMETRY = LevelGeometry("l2", offset_bits=6, granularity_shift=6, lfu_bits=8)
L1_GEOMETRY = LevelGeometry("l1", offset_bits=9, granularity_shift=3, lfu_bits=7)

GEOMETRIES = {"l2": L2_GEOMETRY, "l1": L1_GEOMETRY}


def split_address(addr: int, geo: LevelGeometry) -> tuple[int, int]:
    """Split a byte address into (page number, in-page offset)."""
    granule = addr >> geo.granularity_shift
    return granule >> geo.offset_bits, granule & (geo.offsets_per_page - 1)


def in_page(offset: int, geo: LevelGeometry) -> bool:
    """True iff a (possibly signed) offset still lies inside the page."""
    return 0 <= offset < geo.offsets_per_page


def to_byte_address(page: int, offset: int, geo: LevelGeometry) -> int:
    """Rebuild the byte address of a (page, offset) pair, granularity-aligned."""
    return ((page << geo.offset_bits) | offset) << geo.granularity_shift
