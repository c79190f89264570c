"""Hypergraph data model, uniform sampling from H(n, M) and the instance format.

A hyperedge is stored as a Python ``int`` bitmask: vertex ``v`` (1-based)
is bit ``v - 1``.  Python integers are arbitrary width, so the same
encoding covers one machine word (n <= 64) and multi-word sets alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    CapacityError,
    DuplicateEdgeError,
    EmptyEdgeError,
    HeaderError,
    ParameterError,
    ParseError,
    VertexRangeError,
)

#: Hard cap on the vertex count of any hypergraph.
MAX_VERTICES = 1024
#: Largest n for which the complete hypergraph (2^n - 1 edges) is materialized.
COMPLETE_MAX_VERTICES = 24

#: Identifier of the pinned RNG family; printed by ``hypermatch --version``.
RNG_FAMILY = "numpy-PCG64/SeedSequence-v1"

VertexSet = int
SeedLike = Union[int, np.random.Generator]


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    """Encode 1-based vertex ids as a bitmask."""
    mask = 0
    for v in vertices:
        if v < 1:
            raise ParameterError(f"vertex ids are 1-based, got {v}")
        mask |= 1 << (v - 1)
    return mask


def members(mask: VertexSet) -> list[int]:
    """Sorted 1-based vertex ids of a bitmask."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def popcount(mask: VertexSet) -> int:
    return bin(mask).count("1")


def canonical_key(mask: VertexSet) -> tuple[int, int]:
    return (popcount(mask), mask)


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if n > MAX_VERTICES:
        raise CapacityError(f"n = {n} exceeds the vertex cap {MAX_VERTICES}")


@dataclass(frozen=True)
class Hypergraph:
    """A simple hypergraph on vertices ``1..n``.

    ``edges`` is stored in canonical order (popcount, then numeric value);
    construction sorts and validates whatever is passed in.
    """

    n: int
    edges: tuple[VertexSet, ...]

    def __post_init__(self):
        _check_n(self.n)
        edges = sorted(self.edges, key=canonical_key)
        if not edges:
            raise ParameterError("a hypergraph needs at least one edge")
        limit = 1 << self.n
        prev = None
        for e in edges:
            if e <= 0:
                raise ParameterError("edges must be nonempty vertex sets")
            if e >= limit:
                raise ParameterError(f"edge {members(e)} has a vertex above n = {self.n}")
            if e == prev:
                raise ParameterError(f"duplicate edge {members(e)}")
            prev = e
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(n, tuple(vertex_set(s) for s in sets))

    @property
    def M(self) -> int:
        return len(self.edges)

    def edge_sets(self) -> list[list[int]]:
        return [members(e) for e in self.edges]

    def __contains__(self, mask) -> bool:
        return mask in self._edge_set

    @property
    def _edge_set(self) -> frozenset:
        # Cached lazily; the dataclass is frozen so bypass __setattr__.
        cached = self.__dict__.get("_cache_edge_set")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_cache_edge_set", cached)
        return cached


def support_size(h: Hypergraph) -> int:
    """Number of vertices incident to at least one edge."""
    union = 0
    for e in h.edges:
        union |= e
    return popcount(union)


def complete_hypergraph(n: int) -> Hypergraph:
    """All ``2**n - 1`` nonempty subsets of ``[n]``."""
    _check_n(n)
    if n > COMPLETE_MAX_VERTICES:
        raise CapacityError(
            f"complete hypergraph on n = {n} would hold 2^{n} - 1 edges; "
            f"cap is n <= {COMPLETE_MAX_VERTICES}"
        )
    return Hypergraph(n, tuple(range(1, 1 << n)))


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(master: int, *keys: int) -> int:
    """Stable 64-bit child seed for ``(master, *keys)``.

    Depends only on the arguments, never on call order, so parallel
    workers reproduce serial runs exactly.
    """
    ss = np.random.SeedSequence([int(master), *map(int, keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _draw_masks(rng: np.random.Generator, n: int, size: int) -> list[int]:
    """Uniform draws from the nonempty subsets of [n] (possibly with repeats)."""
    if n <= 63:
        return [int(x) for x in rng.integers(1, 1 << n, size=size, dtype=np.uint64)]
    words = (n + 63) // 64
    full = (1 << n) - 1
    raw = rng.integers(0, np.iinfo(np.uint64).max, size=(size, words),
                       dtype=np.uint64, endpoint=True)
    out = []
    for row in raw:
        mask = 0
        for w in row[::-1]:
            mask = (mask << 64) | int(w)
        mask &= full
        if mask:
            out.append(mask)
    return out


def _distinct_masks(rng: np.random.Generator, n: int, count: int) -> set[int]:
    chosen: set[int] = set()
    while len(chosen) < count:
        need = count - len(chosen)
        for mask in _draw_masks(rng, n, need + (need >> 2) + 1):
            chosen.add(mask)
            if len(chosen) == count:
                break
    return chosen


def sample_hypergraph(n: int, M: int, seed: SeedLike) -> Hypergraph:
    """Draw a hypergraph uniformly from H(n, M).

    Nonempty bit patterns are drawn uniformly and duplicates rejected,
    which yields a uniform M-subset.  When more than half of all edges are
    requested, the complement is sampled instead.  ``seed`` is either an
    integer or an existing ``numpy.random.Generator``.
    """
    _check_n(n)
    total = (1 << n) - 1
    if not 1 <= M <= total:
        raise ParameterError(f"M must lie in [1, 2^n - 1] = [1, {total}], got {M}")
    rng = as_generator(seed)
    if 2 * M > total and n <= 63:
        missing = _distinct_masks(rng, n, total - M)
        edges = tuple(e for e in range(1, total + 1) if e not in missing)
    else:
        edges = tuple(_distinct_masks(rng, n, M))
    return Hypergraph(n, edges)


def serialize_instance(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.M}"]
    lines.extend(" ".join(map(str, members(e))) for e in h.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Hypergraph:
    """Parse the ``"n M"`` header plus one sorted edge per line."""
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise HeaderError("empty instance", line=1)
    header = lines[0].split()
    if len(header) != 2:
        raise HeaderError("header must be 'n M'", line=1)
    try:
        n, M = int(header[0]), int(header[1])
    except ValueError:
        raise HeaderError("header fields must be integers", line=1) from None
    if n < 1 or M < 1:
        raise HeaderError("n and M must be positive", line=1)
    if n > MAX_VERTICES:
        raise CapacityError(f"n = {n} exceeds the vertex cap {MAX_VERTICES}")
    body = lines[1:]
    while len(body) > M and not body[-1].strip():
        body.pop()
    if len(body) != M:
        raise HeaderError(f"header announces {M} edges, found {len(body)} lines", line=1)
    seen: set[int] = set()
    edges = []
    for lineno, line in enumerate(body, start=2):
        tokens = line.split()
        if not tokens:
            raise EmptyEdgeError("empty edge", line=lineno)
        try:
            ids = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", line=lineno) from None
        for v in ids:
            if not 1 <= v <= n:
                raise VertexRangeError(f"vertex {v} outside [1, {n}]", line=lineno)
        mask = vertex_set(ids)
        if popcount(mask) != len(ids):
            raise ParseError("repeated vertex within an edge", line=lineno)
        if mask in seen:
            raise DuplicateEdgeError(f"duplicate edge {sorted(ids)}", line=lineno)
        seen.add(mask)
        edges.append(mask)
    return Hypergraph(n, tuple(edges))


def edges_from_sets(sets: Sequence[Iterable[int]]) -> list[VertexSet]:
    return [vertex_set(s) for s in sets]
