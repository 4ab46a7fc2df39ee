"""Interval covers of a filter range.

A chain cover splits the range ``[a, b]`` into ``N`` overlapping chunks where
only consecutive chunks meet.  Each chunk then receives its own uniform
interval cover.  The overlap of chunks ``i`` and ``i+1`` is inserted verbatim
into both sub-covers and every other interval is kept strictly inside its
chunk's private span, so the Mapper graphs of neighbouring chunks can be
glued by identifying the duplicated overlap clusters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

PAD_FRACTION = 0.005


class CoverError(ValueError):
    pass


class InvalidRange(CoverError):
    pass


class OverlapTooWide(CoverError):
    pass


class Interval(NamedTuple):
    """Open interval ``(lo, hi)``."""

    lo: float
    hi: float

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def intersects(self, other: "Interval") -> bool:
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def intersection(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _checked(lo: float, hi: float) -> Interval:
    if not lo < hi:
        raise CoverError(f"degenerate interval ({lo}, {hi})")
    return Interval(float(lo), float(hi))


def covers_span(intervals: Sequence[Interval], lo: float, hi: float,
                closed: bool = False) -> bool:
    """True if the union of open ``intervals`` contains ``(lo, hi)``.

    With ``closed=True`` the endpoints themselves must be covered too.
    """
    ivs = sorted(intervals)
    reach = lo
    # For an open target the very first point (lo) need not be covered.
    strict = closed
    i = 0
    best = None
    while True:
        while i < len(ivs) and (ivs[i].lo < reach or (not strict and ivs[i].lo <= reach)):
            if ivs[i].hi > reach and (best is None or ivs[i].hi > best):
                best = ivs[i].hi
            i += 1
        if best is None:
            return False
        reach, best, strict = best, None, True
        if reach > hi or (not closed and reach >= hi):
            return True


@dataclass(frozen=True)
class ChainCover:
    range: tuple[float, float]
    chunks: tuple[Interval, ...]

    @property
    def n_chunks(self) -> int:
        return len(self.chunks)

    def overlap(self, i: int) -> Interval:
        """Overlap of chunk ``i`` and ``i + 1`` (0-based)."""
        ov = self.chunks[i].intersection(self.chunks[i + 1])
        if ov is None:
            raise CoverError(f"chunks {i} and {i + 1} do not overlap")
        return ov


def default_overlap_width(a: float, b: float, n_chunks: int, gain: float) -> float:
    return gain * (b - a) / n_chunks


def build_chain_cover(a: float, b: float, n_chunks: int,
                      overlap_width: Optional[float] = None,
                      gain: float = 0.25) -> ChainCover:
    """N-chain cover of ``[a, b]`` with chunk overlaps of width ``overlap_width``.

    The outermost chunks are padded by half a percent of the range so the
    extreme filter values sit strictly inside an open interval.  When
    ``overlap_width`` is None it defaults to ``gain`` times the chunk length.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise InvalidRange(f"need a < b, got [{a}, {b}]")
    if n_chunks < 1:
        raise CoverError("n_chunks must be >= 1")
    length = (b - a) / n_chunks
    w = default_overlap_width(a, b, n_chunks, gain) if overlap_width is None else float(overlap_width)
    if w <= 0:
        raise CoverError("overlap_width must be positive")
    if n_chunks > 1 and w >= length:
        raise OverlapTooWide(f"overlap_width {w} must be < chunk length {length}")
    pad = PAD_FRACTION * (b - a)
    chunks = []
    for k in range(1, n_chunks + 1):
        lo = a - pad if k == 1 else a + (k - 1) * length - w / 2
        hi = b + pad if k == n_chunks else a + k * length + w / 2
        chunks.append(_checked(lo, hi))
    return ChainCover((a, b), tuple(chunks))


@dataclass(frozen=True)
class PreprocessedCover:
    """Chain cover together with one sub-cover per chunk.

    ``sub_covers[i]`` is a tuple of ``(global_id, Interval)`` pairs in
    ascending interval order.  ``shared_ids[i]`` is the id of the interval
    shared by chunks ``i`` and ``i + 1``.
    """

    chain: ChainCover
    sub_covers: tuple[tuple[tuple[int, Interval], ...], ...]
    shared_ids: tuple[int, ...]
    resolution: Optional[int] = None
    gain: Optional[float] = None
    global_ids: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = {}
        for sub in self.sub_covers:
            for gid, iv in sub:
                ids.setdefault(iv, gid)
        object.__setattr__(self, "global_ids", ids)

    @property
    def n_chunks(self) -> int:
        return len(self.sub_covers)

    @property
    def range(self) -> tuple[float, float]:
        return self.chain.range

    def interval(self, gid: int) -> Interval:
        for sub in self.sub_covers:
            for g, iv in sub:
                if g == gid:
                    return iv
        raise KeyError(gid)


def uniform_cover(lo: float, hi: float, resolution: int, gain: float) -> list[Interval]:
    """``resolution`` equal intervals with fractional overlap ``gain`` spanning ``[lo, hi]``.

    Intervals are clipped to ``(lo, hi)``; the first starts exactly at ``lo``
    and the last ends exactly at ``hi``.
    """
    if resolution < 1:
        raise CoverError("resolution must be >= 1")
    if not 0 < gain <= 0.5:
        raise CoverError("gain must lie in (0, 0.5]")
    length = (hi - lo) / ((resolution - 1) * (1 - gain) + 1)
    stride = length * (1 - gain)
    out = []
    for j in range(resolution):
        s = lo if j == 0 else max(lo, lo + j * stride)
        e = hi if j == resolution - 1 else min(hi, lo + j * stride + length)
        out.append(_checked(s, e))
    return out


def build_sub_covers(chain: ChainCover, resolution: int, gain: float) -> PreprocessedCover:
    n = chain.n_chunks
    shared = [chain.overlap(i) for i in range(n - 1)]
    raw = []
    for i, chunk in enumerate(chain.chunks):
        start = shared[i - 1].midpoint if i > 0 else chunk.lo
        end = shared[i].midpoint if i < n - 1 else chunk.hi
        members = uniform_cover(start, end, resolution, gain)
        if i > 0:
            members.insert(0, shared[i - 1])
        if i < n - 1:
            members.append(shared[i])
        raw.append(members)

    ordered = sorted({iv for members in raw for iv in members})
    ids = {iv: gid for gid, iv in enumerate(ordered)}
    sub_covers = tuple(tuple((ids[iv], iv) for iv in sorted(members)) for members in raw)
    return PreprocessedCover(chain, sub_covers, tuple(ids[s] for s in shared),
                             resolution=resolution, gain=gain)


@dataclass(frozen=True)
class CoverParams:
    n_chunks: int = 1
    resolution: int = 5
    gain: float = 0.25
    overlap_width: Optional[float] = None


def preprocess_cover(a: float, b: float, params: CoverParams) -> PreprocessedCover:
    """Chain cover plus sub-covers in one call."""
    chain = build_chain_cover(a, b, params.n_chunks, params.overlap_width, params.gain)
    return build_sub_covers(chain, params.resolution, params.gain)


def flatten_cover(pc: PreprocessedCover) -> list[tuple[int, Interval]]:
    seen = {}
    for sub in pc.sub_covers:
        for gid, iv in sub:
            seen.setdefault(gid, iv)
    return sorted(seen.items(), key=lambda item: (item[1], item[0]))


class Violation(NamedTuple):
    kind: str
    detail: str
    first: Optional[Interval] = None
    second: Optional[Interval] = None


def validate_preprocessed_cover(pc: PreprocessedCover) -> list[Violation]:
    """Every violated cover invariant; an empty list means the cover is valid.

    Violation kinds: ``invalid-interval``, ``chain-overlap-missing``,
    ``chain-nonadjacent-overlap``, ``chain-gap``, ``sub-cover-gap``,
    ``missing-shared``, ``shared-mismatch``, ``cross-chunk-overlap``,
    ``nonadjacent-overlap``, ``id-conflict``.
    """
    out: list[Violation] = []
    chunks = pc.chain.chunks
    n = len(chunks)
    a, b = pc.chain.range

    for iv in chunks + tuple(iv for sub in pc.sub_covers for _, iv in sub):
        if not iv.lo < iv.hi:
            out.append(Violation("invalid-interval", f"empty interval {iv}", iv))

    for i in range(n):
        for j in range(i + 1, n):
            meet = chunks[i].intersects(chunks[j])
            if j == i + 1 and not meet:
                out.append(Violation("chain-overlap-missing", f"chunks {i},{j}", chunks[i], chunks[j]))
            elif j > i + 1 and meet:
                out.append(Violation("chain-nonadjacent-overlap", f"chunks {i},{j}", chunks[i], chunks[j]))
    if not covers_span(chunks, a, b, closed=True):
        out.append(Violation("chain-gap", f"chunks do not cover [{a}, {b}]"))

    if len(pc.sub_covers) != n:
        out.append(Violation("sub-cover-gap", f"{len(pc.sub_covers)} sub-covers for {n} chunks"))
        return out

    by_id: dict[int, Interval] = {}
    for sub in pc.sub_covers:
        for gid, iv in sub:
            if by_id.setdefault(gid, iv) != iv and gid not in pc.shared_ids:
                out.append(Violation("id-conflict", f"id {gid} names two intervals", by_id[gid], iv))

    for i, (chunk, sub) in enumerate(zip(chunks, pc.sub_covers)):
        if not covers_span([iv for _, iv in sub], chunk.lo, chunk.hi):
            out.append(Violation("sub-cover-gap", f"sub-cover {i} does not cover chunk {chunk}", chunk))

    if len(pc.shared_ids) != n - 1:
        out.append(Violation("missing-shared", f"{len(pc.shared_ids)} shared ids for {n - 1} boundaries"))
        return out

    for i, gid in enumerate(pc.shared_ids):
        left = [iv for g, iv in pc.sub_covers[i] if g == gid]
        right = [iv for g, iv in pc.sub_covers[i + 1] if g == gid]
        if not left or not right:
            out.append(Violation("missing-shared", f"shared id {gid} absent from sub-cover "
                                 f"{i if not left else i + 1}"))
            continue
        expected = chunks[i].intersection(chunks[i + 1])
        if left[0] != right[0]:
            out.append(Violation("shared-mismatch", f"boundary {i}: shared interval differs",
                                 left[0], right[0]))
        elif expected is not None and left[0] != expected:
            out.append(Violation("shared-mismatch", f"boundary {i}: shared interval is not the chunk overlap",
                                 left[0], expected))

        for g, u in pc.sub_covers[i]:
            for h, v in pc.sub_covers[i + 1]:
                if g == gid or h == gid:
                    continue
                if u.intersects(v):
                    out.append(Violation("cross-chunk-overlap", f"sub-covers {i},{i + 1}", u, v))

    for i in range(n):
        for j in range(i + 2, n):
            for _, u in pc.sub_covers[i]:
                for _, v in pc.sub_covers[j]:
                    if u.intersects(v):
                        out.append(Violation("nonadjacent-overlap", f"sub-covers {i},{j}", u, v))
    return out
