"""Exact maximum-cardinality hyper-matching (maximum set packing).

The main entry point is :func:`max_matching_exact`, a depth-first
branch-and-bound that branches on the lowest free vertex.  A brute-force
enumerator and an exact counter of size-k matchings serve as oracles, and
:func:`export_ilp` writes the 0/1 program in LP-file format.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, GuardError
from .hypergraph import Hypergraph, VertexSet, members, popcount

DEFAULT_NODE_BUDGET = 10**8
BRUTEFORCE_MAX_EDGES = 22
COUNT_BUDGET = 10**7


@dataclass(frozen=True)
class Matching:
    """Pairwise-disjoint edges of a hypergraph.

    ``indices`` point into the owning hypergraph's canonical edge list;
    ``edges`` repeats the corresponding bitmasks.
    """

    edges: tuple[VertexSet, ...]
    indices: tuple[int, ...]
    optimal: bool = True

    @property
    def size(self) -> int:
        return len(self.edges)

    def edge_sets(self) -> list[list[int]]:
        return [members(e) for e in self.edges]


@dataclass(frozen=True)
class SolveStats:
    nodes_explored: int
    prune_count: int
    elapsed: float


def _make_matching(h: Hypergraph, chosen, optimal=True) -> Matching:
    position = {e: i for i, e in enumerate(h.edges)}
    idx = sorted(position[e] for e in chosen)
    return Matching(tuple(h.edges[i] for i in idx), tuple(idx), optimal)


def is_matching(h: Hypergraph, edges: Sequence[VertexSet]) -> bool:
    """True iff every listed edge belongs to ``h`` and all are pairwise disjoint."""
    used = 0
    seen = set()
    for e in edges:
        if e not in h or e in seen:
            return False
        if used & e:
            return False
        seen.add(e)
        used |= e
    return True


def minimal_edges(edges: Sequence[VertexSet]) -> list[VertexSet]:
    """Drop every edge that strictly contains another edge.

    ``edges`` must be in canonical order; the result keeps that order.
    """
    kept: list[VertexSet] = []
    for e in edges:
        for k in kept:
            if k & e == k:
                break
        else:
            kept.append(e)
    return kept


class _OutOfNodes(Exception):
    pass


def max_matching_exact(
    h: Hypergraph,
    *,
    preprocess: bool = True,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[Matching, SolveStats]:
    """Maximum hyper-matching by vertex-branching branch-and-bound.

    At each node the lowest vertex covered by a remaining candidate edge is
    either left unmatched or matched by one of the candidates containing
    it.  A node is pruned when its size plus an upper bound on the edges
    still packable cannot beat the incumbent.  Two bounds are used: the
    number of covered free vertices, and the largest t such that the t
    smallest remaining edges fit into those vertices.

    With ``preprocess`` the solver first discards strict supersets of other
    edges and then takes every singleton edge outright; neither step can
    lower the optimum.

    Raises :class:`BudgetExceeded` carrying the incumbent (flagged
    non-optimal) when more than ``node_budget`` nodes are expanded.
    """
    start = time.perf_counter()
    forced: list[VertexSet] = []
    cands = list(h.edges)
    if preprocess:
        cands = minimal_edges(cands)
        forced = [e for e in cands if e & (e - 1) == 0]
        used = 0
        for e in forced:
            used |= e
        cands = [e for e in cands if not e & used]

    base = len(forced)
    best: list[VertexSet] = []
    chosen: list[VertexSet] = []
    nodes = 0
    prunes = 0

    def search(cands: list[VertexSet]) -> None:
        nonlocal nodes, prunes, best
        nodes += 1
        if nodes > node_budget:
            raise _OutOfNodes
        size = len(chosen)
        if size > len(best):
            best = chosen.copy()
        if not cands:
            return
        free = 0
        for e in cands:
            free |= e
        room = popcount(free)
        target = len(best) - size
        if room <= target:
            prunes += 1
            return
        # cands stay sorted by popcount, so the cheapest edges come first.
        fit = 0
        spent = 0
        for e in cands:
            spent += popcount(e)
            if spent > room:
                break
            fit += 1
        if fit <= target:
            prunes += 1
            return
        v = free & -free
        for e in cands:
            if e & v:
                chosen.append(e)
                search([c for c in cands if not c & e])
                chosen.pop()
        search([c for c in cands if not c & v])

    limit = sys.getrecursionlimit()
    if limit < h.n + 100:
        sys.setrecursionlimit(h.n + 100)
    optimal = True
    try:
        search(cands)
    except _OutOfNodes:
        optimal = False
    finally:
        sys.setrecursionlimit(limit)

    stats = SolveStats(nodes, prunes, time.perf_counter() - start)
    matching = _make_matching(h, forced + best, optimal)
    if not optimal:
        raise BudgetExceeded(matching, stats)
    return matching, stats


def max_matching_bruteforce(h: Hypergraph) -> Matching:
    """Maximum matching by checking all ``2**M`` edge subsets.

    The subset table is built one edge at a time: subset ``s | bit(i)`` is
    valid iff ``s`` is valid and disjoint from edge ``i``.
    """
    M = h.M
    if M > BRUTEFORCE_MAX_EDGES:
        raise GuardError(f"brute force enumerates 2^M subsets; M = {M} > {BRUTEFORCE_MAX_EDGES}")
    if h.n <= 62:
        union = np.zeros(1 << M, dtype=np.int64)
        for i, e in enumerate(h.edges):
            lo = union[: 1 << i]
            ok = (lo >= 0) & ((lo & e) == 0)
            union[1 << i: 1 << (i + 1)] = np.where(ok, lo | e, -1)
        valid = union >= 0
    else:
        table: list = [0]
        for e in h.edges:
            table += [u | e if u is not None and not u & e else None for u in table]
        valid = np.array([u is not None for u in table])
    subsets = np.arange(1 << M, dtype=np.int64)
    sizes = np.zeros(1 << M, dtype=np.int64)
    for i in range(M):
        sizes += (subsets >> i) & 1
    sizes[~valid] = -1
    best = int(np.argmax(sizes))
    return Matching(
        tuple(h.edges[i] for i in range(M) if best >> i & 1),
        tuple(i for i in range(M) if best >> i & 1),
    )


def count_matchings_of_size(h: Hypergraph, k: int, budget: int = COUNT_BUDGET) -> int:
    """Number of k-subsets of edges that are pairwise disjoint (X_k on ``h``)."""
    if k < 0:
        raise GuardError(f"k must be non-negative, got {k}")
    if k == 0:
        return 1
    if k > h.n or k > h.M:
        return 0
    if comb(h.M, k) > budget:
        raise GuardError(f"C({h.M}, {k}) = {comb(h.M, k)} exceeds the enumeration budget {budget}")
    edges = h.edges

    def count(start: int, used: int, left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for i in range(start, len(edges) - left + 1):
            e = edges[i]
            if not e & used:
                total += count(i + 1, used | e, left - 1)
        return total

    return count(0, 0, k)


def export_ilp(h: Hypergraph) -> str:
    """The 0/1 program for maximum hyper-matching in LP-file format.

    Variable ``x<i>`` selects edge ``i`` (canonical order); constraint
    ``v<s>`` limits vertex ``s`` to one selected edge.
    """
    lines = ["\\ maximum cardinality hyper-matching", "Maximize"]
    lines.append(" obj: " + " + ".join(f"x{i}" for i in range(h.M)))
    lines.append("Subject To")
    for v in range(1, h.n + 1):
        bit = 1 << (v - 1)
        terms = [f"x{i}" for i, e in enumerate(h.edges) if e & bit]
        if terms:
            lines.append(f" v{v}: " + " + ".join(terms) + " <= 1")
    lines.append("Binary")
    lines.extend(f" x{i}" for i in range(h.M))
    lines.append("End")
    return "\n".join(lines) + "\n"
