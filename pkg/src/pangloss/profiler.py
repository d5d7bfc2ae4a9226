"""Delta-transition counting and matrix artifacts.

Counts (previous delta, current delta) pairs over a trace into a dense
matrix spanning every valid delta. Two counting modes exist: "global"
counts a pair only when three consecutive accesses share a page, while
"per-page" reconstructs each page's own delta stream with the page
tracker and therefore counts at least as many transitions on interleaved
traces. Artifacts are a nonzero-cell CSV, a log-scaled PGM heatmap and a
probability-sorted edge list.
"""

import math

import numpy as np

from .geometry import LevelGeometry, split_address
from .page_cache import PageCache


class TransitionMatrix:
    """Dense (from_delta, to_delta) counts over deltas in [-radius, radius]."""

    def __init__(self, geo: LevelGeometry):
        self.geo = geo
        self.radius = geo.offsets_per_page - 1
        size = 2 * self.radius + 1
        self.counts = np.zeros((size, size), dtype=np.int64)
        self.total = 0

    def add(self, from_delta: int, to_delta: int, count: int = 1) -> None:
        # both hops must be jointly realizable inside one page: some start
        # offset keeps o, o+from and o+from+to in bounds
        low = max(0, -from_delta, -(from_delta + to_delta))
        high = min(self.radius, self.radius - from_delta, self.radius - from_delta - to_delta)
        assert low <= high, (from_delta, to_delta)
        self.counts[from_delta + self.radius, to_delta + self.radius] += count
        self.total += count

    def count(self, from_delta: int, to_delta: int) -> int:
        return int(self.counts[from_delta + self.radius, to_delta + self.radius])

    def nonzero(self) -> list[tuple[int, int, int]]:
        """(from_delta, to_delta, count) for every nonzero cell, ordered."""
        rows, cols = np.nonzero(self.counts)
        return [
            (int(r) - self.radius, int(c) - self.radius, int(self.counts[r, c]))
            for r, c in zip(rows, cols)
        ]

    def row_probability(self, from_delta: int, to_delta: int) -> float:
        row_total = int(self.counts[from_delta + self.radius].sum())
        return self.count(from_delta, to_delta) / row_total if row_total else 0.0


PROFILE_MODES = ("global", "per-page")


def profile(trace, geo: LevelGeometry, mode: str = "global") -> TransitionMatrix:
    """Count delta transitions over a byte-address trace.

    global: windows of three consecutive accesses falling in one page.
    per-page: page-tracker reconstruction, immune to stream interleaving.
    Zero deltas carry no pattern information and are skipped by both modes.
    """
    matrix = TransitionMatrix(geo)
    if mode == "global":
        before_prev = prev = None  # (page, offset)
        for addr in trace:
            page, offset = split_address(addr, geo)
            if prev is not None and before_prev is not None and page == prev[0] == before_prev[0]:
                from_delta = prev[1] - before_prev[1]
                to_delta = offset - prev[1]
                if from_delta and to_delta:
                    matrix.add(from_delta, to_delta)
            before_prev, prev = prev, (page, offset)
    elif mode == "per-page":
        tracker = PageCache(geo)
        sentinel = geo.sentinel
        for addr in trace:
            page, offset = split_address(addr, geo)
            hit = tracker.access(page, offset)
            if hit is not None and hit.delta and hit.prev_delta and hit.prev_delta != sentinel:
                matrix.add(hit.prev_delta, hit.delta)
    else:
        raise ValueError(f"unknown profile mode {mode!r}; choose from {PROFILE_MODES}")
    return matrix


def export_matrix(matrix: TransitionMatrix, prefix) -> dict[str, str]:
    """Write PREFIX.csv (nonzero cells with in-row probability), PREFIX.pgm
    (log-scaled grayscale heatmap) and PREFIX.edges (probability-sorted
    edge list). Returns the written paths keyed by artifact name."""
    paths = {
        "csv": f"{prefix}.csv",
        "pgm": f"{prefix}.pgm",
        "edges": f"{prefix}.edges",
    }
    cells = matrix.nonzero()

    with open(paths["csv"], "w") as out:
        out.write("from_delta,to_delta,count,row_probability\n")
        for from_delta, to_delta, count in cells:
            prob = matrix.row_probability(from_delta, to_delta)
            out.write(f"{from_delta},{to_delta},{count},{prob:.9f}\n")

    side = 2 * matrix.radius + 1
    max_count = int(matrix.counts.max())
    if max_count:
        # dividing before scaling pins the hottest cell to exactly 255
        ratio = np.log1p(matrix.counts.T) / math.log1p(max_count)
        # image rows run over to_delta, columns over from_delta
        image = np.floor(255.0 * ratio).astype(np.uint8)
    else:
        image = np.zeros((side, side), dtype=np.uint8)
    with open(paths["pgm"], "wb") as out:
        out.write(f"P5\n{side} {side}\n255\n".encode("ascii"))
        out.write(image.tobytes())

    ranked = sorted(
        cells,
        key=lambda cell: (-matrix.row_probability(cell[0], cell[1]), cell[0], cell[1]),
    )
    with open(paths["edges"], "w") as out:
        for from_delta, to_delta, count in ranked:
            prob = matrix.row_probability(from_delta, to_delta)
            out.write(f"{from_delta} {to_delta} {count} {prob:.9f}\n")

    return paths
