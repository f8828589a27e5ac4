import math

import numpy as np
import pytest

from qghot.catalog import cycle_graph, lasso_graph, path_graph
from qghot.errors import MeshTooCoarse
from qghot.fem import build_mesh, count_below, fem_eigenpairs, fem_solve
from qghot.graphs import build_graph
from qghot.spectral import eigenvalue_list

from oracles import neumann_interval_spectrum

PI2 = math.pi**2


def test_path_fem_matches_closed_form():
    res = fem_solve(path_graph(1.0), 1e-3, 3)
    oracle = neumann_interval_spectrum(1.0, 3)
    assert res.mus[1] == pytest.approx(oracle[1], rel=1e-4)
    assert res.mus[2] == pytest.approx(oracle[2], rel=1e-4)


def test_loop_fem_double_eigenvalue():
    res = fem_solve(cycle_graph(1.0), 1e-3, 3)
    assert res.mus[1] == pytest.approx(4 * PI2, rel=1e-4)
    assert res.mus[2] == pytest.approx(4 * PI2, rel=1e-4)
    assert abs(res.mus[2] - res.mus[1]) <= 1e-6 * 4 * PI2


def test_lasso_fem_matches_secular():
    mus = eigenvalue_list(lasso_graph(1.0, 1.0), 4)
    res = fem_solve(lasso_graph(1.0, 1.0), 1e-3, 4)
    for a, b in zip(mus[1:], res.mus[1:]):
        assert float(b) == pytest.approx(a, rel=1e-4)


def test_mesh_too_coarse():
    g = build_graph({"vertices": ["a", "b"], "edges": [
        {"id": "e", "from": "a", "to": "b", "length": 1e-4}]})
    with pytest.raises(MeshTooCoarse):
        build_mesh(g, 1e-3)


def test_fem_convergence_order_on_path():
    oracle = neumann_interval_spectrum(1.0, 3)[1]
    errs = []
    hs = [4e-3, 2e-3, 1e-3]
    for h in hs:
        errs.append(abs(float(fem_solve(path_graph(1.0), h, 2).mus[1]) - oracle))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_fem_eigenpairs_multiplicity_clustering():
    pairs = fem_eigenpairs(cycle_graph(1.0), 1e-3, 3)
    assert pairs[0].mu == pytest.approx(0.0, abs=1e-8)
    assert pairs[1].multiplicity == 2
    assert pairs[1].basis == ()


def test_count_below_simple():
    g = path_graph(1.0)
    assert count_below(g, 2e-3, 1.5 * PI2) == 2  # 0 and pi^2
