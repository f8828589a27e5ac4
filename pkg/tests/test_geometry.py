import numpy as np
import pytest

from qghot.catalog import complete_graph, cycle_graph, lasso_graph, path_graph
from qghot.geometry import diameter, distance, vertex_distance_matrix
from qghot.graphs import GraphPoint

from oracles import grid_distance, grid_diameter


def test_loop_distances():
    g = cycle_graph(1.0)
    assert distance(g, GraphPoint("e", 0.1), GraphPoint("e", 0.4)) == pytest.approx(0.3)
    assert distance(g, GraphPoint("e", 0.1), GraphPoint("e", 0.9)) == pytest.approx(0.2)


def test_lasso_distance_matches_grid_oracle():
    g = lasso_graph(1.0, 1.0)
    d = distance(g, GraphPoint("tail", 1.0), GraphPoint("loop", 0.5))
    assert d == pytest.approx(1.5, abs=1e-12)
    assert d == pytest.approx(grid_distance(g, GraphPoint("tail", 1.0),
                                            GraphPoint("loop", 0.5), step=1e-3), abs=5e-3)


def test_distance_symmetry_and_triangle(corpus):
    rng = np.random.default_rng(42)
    for _, g in corpus:
        vd = vertex_distance_matrix(g)
        ids = g.edge_ids
        pts = []
        for _ in range(3 * 1000):
            eid = ids[rng.integers(0, len(ids))]
            pts.append(GraphPoint(eid, float(rng.uniform(0, g.length(eid)))))
        scale = g.total_length
        for i in range(0, len(pts), 3):
            p, q, r = pts[i], pts[i + 1], pts[i + 2]
            dpq = distance(g, p, q, vd)
            assert dpq == pytest.approx(distance(g, q, p, vd), rel=1e-12)
            assert dpq <= distance(g, p, r, vd) + distance(g, r, q, vd) + 1e-12 * scale


@pytest.mark.parametrize(
    "g,expected",
    [
        (path_graph(1.0), 1.0),
        (cycle_graph(1.0), 0.5),
        # Frozen from the subdivision oracle: the farthest pair of the
        # equilateral K4 is two midpoints of disjoint edges, at distance 2.
        (complete_graph(4, 1.0), 2.0),
        (lasso_graph(1.0, 1.0), 1.5),
    ],
)
def test_diameter_examples(g, expected):
    assert diameter(g) == pytest.approx(expected, abs=1e-12)


def test_diameter_against_grid_oracle(corpus):
    step = 0.02
    for name, g in corpus:
        d = diameter(g)
        oracle = grid_diameter(g, step=step)
        assert abs(d - oracle) <= 2 * step, name
        # and never below the best vertex pair
        vd = vertex_distance_matrix(g)
        best_vv = max(max(row.values()) for row in vd.values())
        assert d >= best_vv - 1e-12
