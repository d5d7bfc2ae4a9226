"""Set-associative next-delta table with frequency counters.

This is the Markov-chain approximation: the table is indexed by the
current delta and the ways of a set hold the most frequent
immediately-next deltas, each with an LFU-style counter. A counter that
would overflow its bit width triggers a halving of every counter in its
set, which keeps the count proportions while letting phased-out deltas
decay to eviction. A transition probability is a counter's share of its
set sum.

Sets are kept compacted in way order: the lowest invalid way is always
the slot after the last valid entry, so list position doubles as way
index.
"""

from .geometry import LevelGeometry


class DeltaCache:
    def __init__(self, geo: LevelGeometry):
        self.geo = geo
        self._bias = 1 << (geo.delta_bits - 1)  # sentinel lands in set 0
        self._cap = geo.counter_max
        self._ways = geo.delta_ways
        # per set: [next_delta, counter] in way order, valid entries only
        self._sets: list[list[list[int]]] = [[] for _ in range(geo.delta_sets)]

    def set_index(self, delta: int) -> int:
        return delta + self._bias

    def train(self, from_delta: int, to_delta: int) -> None:
        """Record one observed transition from_delta -> to_delta.

        from_delta may be the sentinel (the page-entry state) or 0 (after a
        repeated-offset access); to_delta must be a real nonzero delta. On a
        hit the counter is bumped, halving the whole set first if it sits at
        the cap so the bumped value still fits in lfu_bits. On a miss the
        way with the smallest counter is replaced (lowest way index on
        ties).
        """
        top = self.geo.offsets_per_page
        assert -top <= from_delta < top, from_delta
        assert -top < to_delta < top and to_delta != 0, to_delta
        entries = self._sets[from_delta + self._bias]
        for entry in entries:
            if entry[0] == to_delta:
                if entry[1] >= self._cap:
                    self._halve(entries)
                entry[1] += 1
                return
        if len(entries) < self._ways:
            entries.append([to_delta, 1])
            return
        victim = 0
        for way in range(1, len(entries)):
            if entries[way][1] < entries[victim][1]:
                victim = way
        entries[victim] = [to_delta, 1]

    @staticmethod
    def _halve(entries: list[list[int]]) -> None:
        # floor halving; entries cut to zero are dropped, freeing their way
        for entry in entries:
            entry[1] >>= 1
        entries[:] = [entry for entry in entries if entry[1]]

    def entries(self, current_delta: int) -> list[tuple[int, int]]:
        """Valid (next_delta, counter) pairs of a set, in way order."""
        return [(delta, counter) for delta, counter in self._sets[current_delta + self._bias]]

    def set_total(self, current_delta: int) -> int:
        return sum(counter for _, counter in self._sets[current_delta + self._bias])

    def lookup(self, current_delta: int) -> list[tuple[int, float]]:
        """(next_delta, probability) pairs, most probable first.

        Probability is the counter's share of the set sum; ties keep way
        order. Empty list for an empty set.
        """
        entries = self._sets[current_delta + self._bias]
        total = sum(counter for _, counter in entries)
        if not total:
            return []
        ranked = sorted(entries, key=lambda entry: -entry[1])
        return [(delta, counter / total) for delta, counter in ranked]

    def dump_csv(self, path) -> None:
        """Write every valid entry as set_index,source_delta,next_delta,counter,probability."""
        with open(path, "w") as out:
            out.write("set_index,source_delta,next_delta,counter,probability\n")
            for index, entries in enumerate(self._sets):
                if not entries:
                    continue
                source = index - self._bias
                total = sum(counter for _, counter in entries)
                for delta, counter in entries:
                    out.write(f"{index},{source},{delta},{counter},{counter / total:.6f}\n")
