"""Storage budget accounting for the table geometries.

Kilobytes are decimal (1 KB = 1000 bytes) and rounded half-up to one
decimal, which is the only convention under which the per-structure
figures and the totals reconcile.
"""

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .geometry import L1_GEOMETRY, L2_GEOMETRY, LevelGeometry


def bits_to_kb(bits: int) -> float:
    return float((Decimal(bits) / 8000).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class StructureBudget:
    level: str
    structure: str
    sets: int
    ways: int
    entry_bits: int

    @property
    def bits(self) -> int:
        return self.sets * self.ways * self.entry_bits

    @property
    def kilobytes(self) -> float:
        return bits_to_kb(self.bits)


@dataclass(frozen=True)
class SpaceBudget:
    structures: tuple[StructureBudget, ...]

    @property
    def total_bits(self) -> int:
        return sum(item.bits for item in self.structures)

    @property
    def total_kilobytes(self) -> float:
        return bits_to_kb(self.total_bits)

    def level_bits(self, level: str) -> int:
        return sum(item.bits for item in self.structures if item.level == level)

    def level_kilobytes(self, level: str) -> float:
        return bits_to_kb(self.level_bits(level))


def delta_cache_budget(geo: LevelGeometry) -> StructureBudget:
    # each way stores a delta plus its frequency counter
    return StructureBudget(geo.name, "delta cache", geo.delta_sets, geo.delta_ways,
                           geo.delta_bits + geo.lfu_bits)


def page_cache_budget(geo: LevelGeometry) -> StructureBudget:
    # tag + previous delta + previous offset + NRU bit
    return StructureBudget(geo.name, "page cache", geo.page_sets, geo.page_ways,
                           geo.page_tag_bits + geo.delta_bits + geo.offset_bits + 1)


def space_budget(geometries: tuple[LevelGeometry, ...] = (L1_GEOMETRY, L2_GEOMETRY)) -> SpaceBudget:
    structures = []
    for geo in geometries:
        structures.append(delta_cache_budget(geo))
        structures.append(page_cache_budget(geo))
    return SpaceBudget(tuple(structures))


def format_table(budget: SpaceBudget) -> str:
    lines = [f"{'structure':<18}{'sets':>6}{'ways':>6}{'bits/entry':>12}{'bits':>10}{'KB':>8}"]
    for item in budget.structures:
        label = f"{item.level} {item.structure}"
        lines.append(
            f"{label:<18}{item.sets:>6}{item.ways:>6}{item.entry_bits:>12}"
            f"{item.bits:>10}{item.kilobytes:>8.1f}"
        )
    lines.append(f"{'llc':<18}{'none':>6}{'':>6}{'':>12}{0:>10}{0.0:>8.1f}")
    lines.append(f"{'total':<18}{'':>6}{'':>6}{'':>12}{budget.total_bits:>10}{budget.total_kilobytes:>8.1f}")
    levels = sorted({item.level for item in budget.structures})
    for level in levels:
        label = f"{level} only"
        lines.append(
            f"{label:<18}{'':>6}{'':>6}{'':>12}{budget.level_bits(level):>10}"
            f"{budget.level_kilobytes(level):>8.1f}"
        )
    return "\n".join(lines)
