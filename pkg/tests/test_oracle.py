import random

import pytest

from qccycles.model import lift
from qccycles.oracle import (
    ExpansionBudgetExceeded,
    TannerGraph,
    bfs_girth,
    brute_count_cycles,
    cycles_through,
    orbit_count_cycles,
    qc_orbit_representatives,
)


def complete_bipartite(a, b):
    return TannerGraph.from_edges(a, b, [(c, u) for c in range(a) for u in range(b)])


def test_single_square():
    g = complete_bipartite(2, 2)
    assert bfs_girth(g) == 4
    assert brute_count_cycles(g, 4).nonzero() == {4: 1}


def test_complete_bipartite_counts():
    # K_{3,3}: choose 2+2 vertices for a square; 3!*2!/2 Hamiltonian 6-cycles
    assert brute_count_cycles(complete_bipartite(3, 3), 3).nonzero() == {4: 9, 6: 6}
    assert brute_count_cycles(complete_bipartite(2, 3), 3).nonzero() == {4: 3}


def test_forest_has_no_girth():
    g = TannerGraph.from_edges(2, 2, [(0, 0), (1, 1)])
    assert bfs_girth(g) is None
    assert brute_count_cycles(g, 4).girth is None


def test_reported_lengths_are_even(ex1):
    spec = brute_count_cycles(TannerGraph.from_lifted(lift(ex1.base, ex1.slopes)), 5)
    assert all(length % 2 == 0 for length in spec.counts)


def test_relabeling_invariance(ex2):
    g = TannerGraph.from_lifted(lift(ex2.base, ex2.slopes))
    rng = random.Random(7)
    checks = list(range(g.n_checks))
    variables = list(range(g.n_variables))
    rng.shuffle(checks)
    rng.shuffle(variables)
    h = g.relabeled(checks, variables)
    assert h != g
    assert brute_count_cycles(h, 8) == brute_count_cycles(g, 8)
    assert bfs_girth(h) == bfs_girth(g) == 12


def test_orbit_count_matches_min_root(ex1, ex2):
    for f in (ex1, ex2):
        g = TannerGraph.from_lifted(lift(f.base, f.slopes))
        reps = qc_orbit_representatives(f.base.v, f.base.k, f.m)
        assert orbit_count_cycles(g, reps, f.m, 8) == brute_count_cycles(g, 8)


def test_orbit_count_rejects_wrong_orbits(ex1):
    g = TannerGraph.from_lifted(lift(ex1.base, ex1.slopes))
    with pytest.raises(ValueError):
        orbit_count_cycles(g, [0], 5, 4)


def test_cycles_through_square_corner():
    assert cycles_through(complete_bipartite(2, 2), 0, 3) == {4: 1, 6: 0}


def test_budget_is_enforced(ex4):
    g = TannerGraph.from_lifted(lift(ex4.base, ex4.slopes))
    with pytest.raises(ExpansionBudgetExceeded) as info:
        brute_count_cycles(g, 8, budget=1000)
    assert info.value.budget == 1000
    assert "1000" in str(info.value)


def test_example_four_lift_girth(ex4):
    assert bfs_girth(TannerGraph.from_lifted(lift(ex4.base, ex4.slopes))) == 12


def test_edges_outside_graph_rejected():
    with pytest.raises(ValueError):
        TannerGraph.from_edges(1, 1, [(0, 1)])
