import math

import numpy as np
import pytest

from qghot.catalog import (
    cycle_graph,
    krpamm_tree,
    lasso_graph,
    path_graph,
    pumpkin_graph,
    star_graph,
)
from qghot.errors import ValidationError, ZeroFunction
from qghot.graphs import GraphPoint, split_edge, suppress_degree_two
from qghot.spectral import (
    EdgeTrace,
    EigenFunction,
    derivative,
    eigenbasis,
    eigenvalue_list,
    eigenvalues,
    evaluate,
    l2_inner,
    mu2_pair,
    rayleigh_quotient,
    secular_matrix,
    vertex_residuals,
)

from oracles import neumann_interval_spectrum, quadrature_rayleigh

PI2 = math.pi**2


def test_secular_matrix_singularities():
    g = path_graph(1.0)
    s = secular_matrix(g, math.pi).singular_values()
    assert s[-1] < 1e-12 and s[-2] > 1e-3  # nullspace dimension 1
    s = secular_matrix(g, math.pi / 2).singular_values()
    assert s[-1] > 1e-3  # pi^2/4 is not a Neumann interval eigenvalue
    loop = cycle_graph(1.0)
    s = secular_matrix(loop, 2 * math.pi).singular_values()
    assert (s < 1e-12).sum() == 2  # two-dimensional eigenspace
    with pytest.raises(ValidationError):
        secular_matrix(g, 0.0)


def test_path_spectrum_matches_interval_oracle():
    g = path_graph(1.0)
    mus = eigenvalue_list(g, 5)
    for a, b in zip(mus, neumann_interval_spectrum(1.0, 5)):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def test_cycle_and_pumpkin_spectra():
    mus = eigenvalue_list(cycle_graph(1.0), 3)
    assert mus[0] == 0.0
    assert mus[1] == pytest.approx(4 * PI2, rel=1e-9)
    assert mus[2] == pytest.approx(4 * PI2, rel=1e-9)
    pairs = eigenvalues(pumpkin_graph(3, 1.0), 4)
    assert pairs[1].mu == pytest.approx(PI2, rel=1e-9)
    assert pairs[1].multiplicity == 3


def test_star_eigenbasis():
    pair = eigenbasis(star_graph(4, 1.0), 2)
    assert pair.mu == pytest.approx(PI2 / 4, rel=1e-9)
    assert pair.multiplicity == 3
    # Gram identity within tau_eig, by closed-form integrals
    for i, f in enumerate(pair.basis):
        for j, h in enumerate(pair.basis):
            assert l2_inner(f, h) == pytest.approx(
                1.0 if i == j else 0.0, abs=1e-9
            )
    assert pair.residual <= 1e-9


def test_path_mu2_trace_normalization():
    pair = mu2_pair(path_graph(1.0))
    (f,) = pair.basis
    (t,) = f.traces
    # int_0^1 2 cos^2(pi x) dx = 1, and the sign convention is positive at 0
    assert t.A == pytest.approx(math.sqrt(2.0), rel=1e-10)
    assert abs(t.B) < 1e-9
    assert evaluate(f, GraphPoint("e", 0.0)) == pytest.approx(math.sqrt(2.0), rel=1e-10)
    assert abs(evaluate(f, GraphPoint("e", 0.5))) < 1e-9


def test_loop_mu2_two_orthonormal_sinusoids():
    pair = mu2_pair(cycle_graph(1.0))
    assert pair.multiplicity == 2
    f, h = pair.basis
    assert f.norm() == pytest.approx(1.0, abs=1e-12)
    assert h.norm() == pytest.approx(1.0, abs=1e-12)
    assert abs(l2_inner(f, h)) < 1e-9


def test_vertex_conditions_and_mean_zero(corpus, pair_cache):
    from conftest import get_mu2

    for name, g in corpus:
        pair = get_mu2(pair_cache, name, g)
        for f in pair.basis:
            cont, kirch = vertex_residuals(g, f)
            assert cont <= 1e-9 * max(1.0, f.sup_abs())
            assert kirch <= 1e-9 * f.k * max(1.0, f.sup_abs())
            assert abs(f.mean()) <= 1e-9


def test_leaf_derivative_is_zero():
    pair = mu2_pair(star_graph(3, 1.0))
    f = pair.basis[0]
    for v in ("l0", "l1", "l2"):
        for eid, end, d in f.outgoing_derivatives(v):
            assert abs(d) <= 1e-9 * f.k * f.sup_abs()


def test_derivative_needs_direction_at_vertex():
    g = path_graph(1.0)
    f = mu2_pair(g).basis[0]
    with pytest.raises(ValidationError):
        derivative(f, GraphPoint("e", 0.0))
    d = derivative(f, GraphPoint("e", 0.0), direction=("e", "o"))
    assert abs(d) < 1e-9  # Neumann at the leaf
    assert derivative(f, GraphPoint("e", 0.25)) < 0  # cos decreasing


def test_rayleigh_quotient_eigen_and_constant(corpus, pair_cache):
    from conftest import get_mu2

    for name, g in corpus:
        pair = get_mu2(pair_cache, name, g)
        rq = rayleigh_quotient(g, pair.basis[0])
        assert rq == pytest.approx(pair.mu, rel=1e-10)
    g = path_graph(1.0)
    const = EigenFunction(g, 0.0, (EdgeTrace("e", 1.0, 0.0, 0.0),))
    assert rayleigh_quotient(g, const) == 0.0
    with pytest.raises(ZeroFunction):
        rayleigh_quotient(g, const.scaled(0.0))


class _Tent:
    """Tent on the unit path, peak at 1/2; vectorized callables."""

    def value(self, edge_id, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0.5, x, 1.0 - x)

    def derivative(self, edge_id, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0.5, 1.0, -1.0)


def test_rayleigh_tent_above_mu2():
    g = path_graph(1.0)
    rq = rayleigh_quotient(g, _Tent(), enforce_mean_zero=True)
    oracle = quadrature_rayleigh(g, _Tent().value, _Tent().derivative)
    # closed forms: int f'^2 = 1, int f^2 = 1/12, int f = 1/4,
    # so plain quotient 12 and mean-removed quotient 48; both dominate pi^2
    assert rq >= PI2
    assert rq == pytest.approx(48.0, rel=1e-6)
    assert oracle == pytest.approx(12.0, rel=1e-6)
    assert oracle >= PI2


def test_suppress_degree_two_preserves_spectrum():
    g = lasso_graph(1.0, 1.0)
    g2, _ = split_edge(g, GraphPoint("loop", 0.37))
    g3, _ = split_edge(g2, GraphPoint("tail", 0.61))
    mus = eigenvalue_list(g, 6)
    mus_sub = eigenvalue_list(g3, 6)
    mus_back = eigenvalue_list(suppress_degree_two(g3), 6)
    for a, b, c in zip(mus, mus_sub, mus_back):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)
        assert a == pytest.approx(c, rel=1e-9, abs=1e-9)


def test_spectrum_deterministic(corpus):
    name, g = corpus[10]
    first = eigenvalue_list(g, 6)
    second = eigenvalue_list(g, 6)
    assert first == second


def test_missed_root_regression():
    # A 6-edge random graph whose first two positive roots straddle one
    # fixed-step scan cell; the certified scan must find both.
    from qghot.catalog import random_graph
    from qghot.fem import fem_solve

    g = random_graph(4)
    mus = eigenvalue_list(g, 6)
    fem = fem_solve(g, 2e-3, 6).mus
    for a, b in zip(mus, fem):
        assert a == pytest.approx(float(b), rel=5e-4, abs=1e-6)


def test_weyl_count_matches_fem(corpus):
    # No missed roots: FEM and secular counts below a gap midpoint agree.
    from qghot.fem import count_below

    for name, g in corpus[:6]:
        mus = eigenvalue_list(g, 8)
        # choose the widest relative gap among indices 4..8 as the cut
        gaps = [(mus[i + 1] - mus[i], i) for i in range(3, 7)]
        width, i = max(gaps)
        if width <= 1e-6 * mus[i]:
            continue  # all clustered; no clean cut available
        bound = 0.5 * (mus[i] + mus[i + 1])
        secular_count = sum(1 for m in mus if m <= bound)
        assert count_below(g, 2e-3, bound) == secular_count, name


def test_krpamm_triple_eigenvalue():
    pairs = eigenvalues(krpamm_tree(0.05, 5), 4)
    assert pairs[1].mu == pytest.approx(PI2, rel=1e-10)
    assert pairs[1].multiplicity == 3
    assert pairs[1].index_range == (2, 4)
