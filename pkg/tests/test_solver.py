import itertools
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from conftest import hypergraphs
from hypermatch.errors import BudgetExceeded, GuardError
from hypermatch.hypergraph import (
    Hypergraph,
    complete_hypergraph,
    derive_seed,
    sample_hypergraph,
    vertex_set,
)
from hypermatch.solver import (
    count_matchings_of_size,
    export_ilp,
    is_matching,
    max_matching_bruteforce,
    max_matching_exact,
    minimal_edges,
)


def H(n, *sets):
    return Hypergraph.from_sets(n, sets)


def exact_size(h, **kw):
    return max_matching_exact(h, **kw)[0].size


class TestIsMatching:
    def test_disjoint_singletons(self):
        h = H(2, [1], [2])
        assert is_matching(h, [vertex_set([1]), vertex_set([2])])

    def test_shared_vertex(self):
        h = H(3, [1, 2], [2, 3])
        assert not is_matching(h, [vertex_set([1, 2]), vertex_set([2, 3])])

    def test_empty_and_single(self):
        h = H(3, [1, 2], [2, 3])
        assert is_matching(h, [])
        assert all(is_matching(h, [e]) for e in h.edges)

    def test_foreign_edge(self):
        assert not is_matching(H(3, [1]), [vertex_set([2])])


class TestExact:
    def test_complete_3(self):
        m, stats = max_matching_exact(complete_hypergraph(3))
        assert m.size == 3
        assert m.edge_sets() == [[1], [2], [3]]
        assert m.optimal
        assert stats.nodes_explored >= 1 and stats.prune_count >= 0 and stats.elapsed >= 0

    def test_path(self):
        m, _ = max_matching_exact(H(4, [1, 2], [2, 3], [3, 4]))
        assert m.size == 2
        assert m.edge_sets() == [[1, 2], [3, 4]]

    def test_indices_point_into_edges(self):
        h = sample_hypergraph(9, 40, 1)
        m, _ = max_matching_exact(h)
        assert m.edges == tuple(h.edges[i] for i in m.indices)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_complete(self, n):
        assert exact_size(complete_hypergraph(n)) == n

    def test_budget(self):
        h = sample_hypergraph(12, 60, 4)
        with pytest.raises(BudgetExceeded) as info:
            max_matching_exact(h, node_budget=2, preprocess=False)
        best = info.value.matching
        assert not best.optimal
        assert is_matching(h, best.edges)
        assert info.value.stats.nodes_explored >= 2

    def test_large_vertex_ids(self):
        h = H(300, [1, 300], [150], [2, 299], [1, 2])
        assert exact_size(h) == 3


class TestBruteforce:
    def test_single(self):
        assert max_matching_bruteforce(H(1, [1])).size == 1

    def test_star(self):
        h = Hypergraph(4, tuple(e for e in range(1, 16) if e & 1))
        assert max_matching_bruteforce(h).size == 1

    def test_no_singletons(self):
        # Oracle: enumerate edge pairs/triples of {1..4} with >= 2 vertices.
        big = [e for e in range(1, 16) if bin(e).count("1") >= 2]
        best = max(
            r for r in range(1, 4)
            for combo in itertools.combinations(big, r)
            if all(not a & b for a, b in itertools.combinations(combo, 2))
        )
        assert best == 2
        assert max_matching_bruteforce(Hypergraph(4, tuple(big))).size == best

    def test_guard(self):
        with pytest.raises(GuardError):
            max_matching_bruteforce(sample_hypergraph(10, 23, 0))

    def test_wide_vertices(self):
        h = H(100, [1, 100], [100], [1], [50, 60], [60])
        assert max_matching_bruteforce(h).size == 3


class TestCount:
    def test_complete3_pairs(self):
        # Oracle: enumerate pairs of nonempty subsets of {1,2,3}.
        expected = sum(1 for a, b in itertools.combinations(range(1, 8), 2) if not a & b)
        assert expected == 6
        assert count_matchings_of_size(complete_hypergraph(3), 2) == expected

    @given(hypergraphs())
    def test_k1_is_M(self, h):
        assert count_matchings_of_size(h, 1) == h.M

    @given(hypergraphs())
    def test_k_above_n(self, h):
        assert count_matchings_of_size(h, h.n + 1) == 0

    @settings(max_examples=60)
    @given(hypergraphs(max_n=6, max_m=10), st.integers(1, 4))
    def test_against_combinations(self, h, k):
        expected = sum(
            1 for combo in itertools.combinations(h.edges, k)
            if all(not a & b for a, b in itertools.combinations(combo, 2))
        )
        assert count_matchings_of_size(h, k) == expected

    def test_guard(self):
        h = sample_hypergraph(20, 400, 0)
        with pytest.raises(GuardError):
            count_matchings_of_size(h, 5, budget=10**6)


class TestProperties:
    @settings(max_examples=500, deadline=None)
    @given(hypergraphs(max_n=10, max_m=15))
    def test_oracle_equivalence_and_validity(self, h):
        m, _ = max_matching_exact(h)
        assert is_matching(h, m.edges)
        assert m.size == max_matching_bruteforce(h).size

    @settings(max_examples=200, deadline=None)
    @given(hypergraphs(max_n=10, max_m=25))
    def test_preprocessing_sound(self, h):
        assert exact_size(h) == exact_size(h, preprocess=False)

    @settings(max_examples=200, deadline=None)
    @given(hypergraphs(max_n=9, max_m=20), st.data())
    def test_monotone_under_edge_addition(self, h, data):
        absent = [e for e in range(1, 1 << h.n) if e not in h]
        if not absent:
            return
        extra = data.draw(st.sampled_from(absent))
        bigger = Hypergraph(h.n, h.edges + (extra,))
        assert exact_size(bigger) >= exact_size(h)

    @settings(max_examples=100, deadline=None)
    @given(hypergraphs(max_n=10, max_m=20))
    def test_downward_closed(self, h):
        m, _ = max_matching_exact(h)
        for r in range(m.size + 1):
            for sub in itertools.combinations(m.edges, r):
                assert is_matching(h, list(sub))

    @given(hypergraphs(max_n=8, max_m=20))
    def test_minimal_edges_is_antichain(self, h):
        kept = minimal_edges(h.edges)
        for a, b in itertools.permutations(kept, 2):
            assert a & b != a
        for e in h.edges:
            assert any(k & e == k for k in kept)


def lp_to_milp(text):
    """Minimal reader for the LP subset :func:`export_ilp` emits."""
    section = None
    objective, rows, binaries = [], [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Subject To", "Binary", "End"):
            section = line
            continue
        if section == "Maximize":
            objective += re.findall(r"x(\d+)", line.split(":", 1)[1])
        elif section == "Subject To":
            name, body = line.split(":", 1)
            lhs, rhs = body.split("<=")
            rows.append((name.strip(), [int(i) for i in re.findall(r"x(\d+)", lhs)], float(rhs)))
        elif section == "Binary":
            binaries += [int(i) for i in re.findall(r"x(\d+)", line)]
    nvar = len(binaries)
    c = np.zeros(nvar)
    for i in objective:
        c[int(i)] = -1.0
    A = np.zeros((len(rows), nvar))
    ub = np.zeros(len(rows))
    for r, (_, idx, rhs) in enumerate(rows):
        A[r, idx] = 1.0
        ub[r] = rhs
    return c, A, ub, rows, binaries


class TestExportILP:
    def test_singletons(self):
        text = export_ilp(H(2, [1], [2]))
        assert " obj: x0 + x1" in text
        assert " v1: x0 <= 1" in text
        assert " v2: x1 <= 1" in text
        assert text.splitlines()[-1] == "End"
        _, _, _, _, binaries = lp_to_milp(text)
        assert binaries == [0, 1]

    def test_shared_vertex(self):
        text = export_ilp(H(3, [1, 2], [2, 3]))
        assert " v2: x0 + x1 <= 1" in text

    def test_sections_in_order(self):
        text = export_ilp(complete_hypergraph(3))
        heads = [l for l in text.splitlines() if l in ("Maximize", "Subject To", "Binary", "End")]
        assert heads == ["Maximize", "Subject To", "Binary", "End"]

    def test_isolated_vertex_has_no_row(self):
        text = export_ilp(H(3, [1]))
        assert "v2" not in text and "v3" not in text

    def test_external_solver_agrees(self):
        for i in range(50):
            rng = np.random.default_rng(derive_seed(99, i))
            n = int(rng.integers(2, 10))
            M = int(rng.integers(1, min(15, (1 << n) - 1) + 1))
            h = sample_hypergraph(n, M, rng)
            c, A, ub, rows, binaries = lp_to_milp(export_ilp(h))
            res = milp(
                c,
                constraints=LinearConstraint(A, -np.inf, ub) if rows else (),
                integrality=np.ones(len(binaries)),
                bounds=Bounds(0, 1),
            )
            assert res.success
            lp_opt = round(-res.fun)
            assert lp_opt == exact_size(h) == max_matching_bruteforce(h).size
