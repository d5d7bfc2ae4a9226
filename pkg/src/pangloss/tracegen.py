"""Deterministic synthetic access patterns and trace file IO.

Patterns produce granule positions (page * offsets_per_page + offset)
that are turned into byte addresses for a given level geometry. Position
streams run linearly through pages, wrapping modulo `pages` full pages,
so page crossings appear exactly where the pattern puts them.

Trace files come in two shapes: text (one lowercase hex byte address per
line, LF-terminated) and bin (little-endian 64-bit addresses, headerless).
"""

import random
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .geometry import L2_GEOMETRY, LevelGeometry


@dataclass(frozen=True)
class Stride:
    """Constant delta: positions 0, d, 2d, ..."""

    delta: int

    def __post_init__(self) -> None:
        if self.delta == 0:
            raise ValueError("stride delta must be nonzero")


@dataclass(frozen=True)
class DeltaCycle:
    """Repeating delta list: (1, 2, 3) visits offsets 0, 1, 3, 6, 7, 9, ..."""

    deltas: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.deltas:
            raise ValueError("delta cycle must not be empty")
        if 0 in self.deltas:
            raise ValueError("delta cycle must not contain zero")


@dataclass(frozen=True)
class SecondaryAccess:
    """A stride stream with an extra access at +extra every `period`
    iterations. stride=4, extra=1, period=1 gives 0, 1, 4, 5, 8, 9, ...;
    period>1 leaves plain stride pairs between the secondary ones."""

    stride: int
    extra: int
    period: int = 1

    def __post_init__(self) -> None:
        if self.stride == 0:
            raise ValueError("stride must be nonzero")
        if self.extra == 0 or self.extra == self.stride:
            raise ValueError("extra offset must be nonzero and differ from the stride")
        if self.period < 1:
            raise ValueError("period must be >= 1")


@dataclass(frozen=True)
class UniformRandom:
    """Independent uniform positions over the whole page span."""


@dataclass(frozen=True)
class Interleaved:
    """Round-robin one access per sub-spec. Sub-spec lengths are derived
    from the parent length; their base pages and seeds are their own."""

    streams: tuple["TraceSpec", ...]

    def __post_init__(self) -> None:
        if not self.streams:
            raise ValueError("interleave needs at least one stream")


Pattern = Union[Stride, DeltaCycle, SecondaryAccess, UniformRandom, Interleaved]


@dataclass(frozen=True)
class TraceSpec:
    pattern: Pattern
    length: int
    base_page: int = 0
    pages: int = 1024
    seed: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.pages < 1:
            raise ValueError("pages must be >= 1")
        if self.base_page < 0:
            raise ValueError("base_page must be >= 0")


def generate_granules(spec: TraceSpec, geo: LevelGeometry = L2_GEOMETRY) -> list[int]:
    """Granule positions for a spec; pure function of the spec."""
    offsets = geo.offsets_per_page
    span = spec.pages * offsets
    base = spec.base_page * offsets
    pattern = spec.pattern

    if isinstance(pattern, Stride):
        d = pattern.delta
        return [base + (i * d) % span for i in range(spec.length)]

    if isinstance(pattern, DeltaCycle):
        out = []
        position = 0
        cycle = pattern.deltas
        n = len(cycle)
        for i in range(spec.length):
            out.append(base + position % span)
            position += cycle[i % n]
        return out

    if isinstance(pattern, SecondaryAccess):
        out = []
        iteration = 0
        while len(out) < spec.length:
            anchor = iteration * pattern.stride
            out.append(base + anchor % span)
            if len(out) < spec.length and iteration % pattern.period == 0:
                out.append(base + (anchor + pattern.extra) % span)
            iteration += 1
        return out

    if isinstance(pattern, UniformRandom):
        rng = random.Random(spec.seed)
        return [base + rng.randrange(span) for _ in range(spec.length)]

    if isinstance(pattern, Interleaved):
        streams = pattern.streams
        need = -(-spec.length // len(streams))  # ceil
        columns = [generate_granules(replace(sub, length=need), geo) for sub in streams]
        out = []
        for row in range(need):
            for column in columns:
                out.append(column[row])
                if len(out) == spec.length:
                    return out
        return out

    raise TypeError(f"unknown pattern {pattern!r}")


def generate(spec: TraceSpec, geo: LevelGeometry = L2_GEOMETRY) -> list[int]:
    """Byte-address trace for a spec."""
    shift = geo.granularity_shift
    return [granule << shift for granule in generate_granules(spec, geo)]


# ---------------------------------------------------------------------------
# pattern mini-language, shared by the CLI and tests


def parse_pattern(text: str) -> Pattern:
    """Parse compact pattern syntax:

    stride:D | multi:D1,D2,... | cycle:D1,D2,... | secondary:STRIDE,EXTRA[,PERIOD]
    | random
    """
    name, _, rest = text.partition(":")
    try:
        if name == "stride":
            return Stride(int(rest))
        if name in ("multi", "cycle"):
            return DeltaCycle(tuple(int(part) for part in rest.split(",")))
        if name == "secondary":
            parts = [int(part) for part in rest.split(",")]
            if len(parts) == 2:
                return SecondaryAccess(parts[0], parts[1])
            if len(parts) == 3:
                return SecondaryAccess(parts[0], parts[1], parts[2])
            raise ValueError("secondary takes stride,extra[,period]")
        if name == "random":
            if rest:
                raise ValueError("random takes no arguments")
            return UniformRandom()
    except ValueError as err:
        raise ValueError(f"bad pattern {text!r}: {err}") from None
    raise ValueError(f"unknown pattern {text!r}")


def build_spec(
    pattern_text: str,
    *,
    length: int,
    base_page: int = 0,
    pages: int = 1024,
    seed: int = 0,
) -> TraceSpec:
    """TraceSpec from pattern syntax. `interleave:SUB+SUB+...` round-robins
    the given sub-patterns, placing each stream `pages` pages apart."""
    if pattern_text.startswith("interleave:"):
        subs = pattern_text[len("interleave:"):].split("+")
        streams = tuple(
            TraceSpec(
                parse_pattern(sub),
                length=length,
                base_page=base_page + stream * pages,
                pages=pages,
                seed=seed + stream,
            )
            for stream, sub in enumerate(subs)
        )
        return TraceSpec(Interleaved(streams), length, base_page, pages, seed)
    return TraceSpec(parse_pattern(pattern_text), length, base_page, pages, seed)


# ---------------------------------------------------------------------------
# trace file formats

TEXT_SNIFF_BYTES = frozenset(b"0123456789abcdefABCDEFxX \t\r\n")


def write_trace(path, addresses, fmt: str = "text") -> None:
    if fmt == "text":
        with open(path, "w") as out:
            out.writelines(f"{addr:x}\n" for addr in addresses)
    elif fmt == "bin":
        np.asarray(list(addresses), dtype="<u8").tofile(path)
    else:
        raise ValueError(f"unknown trace format {fmt!r}")


def sniff_format(path) -> str:
    if str(path).endswith(".bin"):
        return "bin"
    with open(path, "rb") as handle:
        head = handle.read(256)
    if head and not set(head) <= TEXT_SNIFF_BYTES:
        return "bin"
    return "text"


def read_trace(path, fmt: str = "auto") -> list[int]:
    if fmt == "auto":
        fmt = sniff_format(path)
    if fmt == "text":
        addresses = []
        with open(path) as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    addresses.append(int(line, 16))
                except ValueError:
                    raise ValueError(f"{path}: bad trace record at line {number}: {line!r}") from None
        return addresses
    if fmt == "bin":
        with open(path, "rb") as handle:
            data = handle.read()
        if len(data) % 8:
            raise ValueError(f"{path}: binary trace truncated at record {len(data) // 8}")
        return [int(addr) for addr in np.frombuffer(data, dtype="<u8")]
    raise ValueError(f"unknown trace format {fmt!r}")
