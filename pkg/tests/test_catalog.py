import math

import pytest

from qghot.catalog import (
    EXAMPLE_IDS,
    LimitFamily,
    boundary_distinct_perturb,
    build_example,
    complete_symmetric_eigenfunction,
    krpamm_eigenfunction,
    krpamm_leaf_length,
    krpamm_ratio,
    krpamm_tree,
    limit_compare,
    rescale_to,
    standard_corpus,
    straighten_maxima,
    placement_limit_families,
    topology_placement,
)
from qghot.errors import (
    BadParameter,
    LimitEigenvalueMultiple,
    NoBoundary,
    NotSimple,
    PreconditionUnmet,
    ShorteningTooLarge,
    UnknownExample,
)
from qghot.geometry import diameter
from qghot.graphs import boundary, betti
from qghot.hotspots import extrema_single, ratio_of_function
from qghot.spectral import (
    mu2_pair,
    rayleigh_quotient,
    trace_l2_inner,
    vertex_residuals,
)

PI2 = math.pi**2


def test_every_example_builds():
    for ex in EXAMPLE_IDS:
        kwargs = {"eps": 0.05, "m": 3} if ex == "krpamm_tree" else {}
        g = build_example(ex, **kwargs)
        assert g.total_length > 0


def test_example_errors():
    with pytest.raises(UnknownExample):
        build_example("moebius")
    with pytest.raises(BadParameter):
        build_example("pumpkin", edges=1)
    with pytest.raises(BadParameter):
        build_example("krpamm_tree", eps=0.7, m=3)
    with pytest.raises(BadParameter):
        build_example("path", bogus=1)


def test_perturbed_figure8_structure():
    g = build_example("perturbed_figure8", eps=0.05)
    assert g.length("loop1") == math.pi and g.length("loop2") == math.pi
    assert g.length("pend1") == 0.05
    assert len(boundary(g).vertices) == 2


def test_krpamm_leaf_length_closed_form():
    # arctan(tan(pi(1/2-eps))/m)/pi, from A = sin(pi x0), F = -cos(pi x0)
    eps, m = 0.05, 20
    expect = math.atan(math.tan(math.pi * (0.5 - eps)) / m) / math.pi
    assert krpamm_leaf_length(eps, m) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("eps,m", [(0.05, 5), (0.05, 20)])
def test_krpamm_eigenfunction_exact(eps, m):
    g = krpamm_tree(eps, m)
    psi = krpamm_eigenfunction(g, eps, m)
    cont, kirch = vertex_residuals(g, psi)
    assert max(cont, kirch) <= 1e-9
    assert rayleigh_quotient(g, psi) == pytest.approx(PI2, rel=1e-12)
    assert diameter(g) == pytest.approx(1.0, abs=1e-12)
    assert ratio_of_function(g, psi) == pytest.approx(krpamm_ratio(eps, m), abs=1e-9)


def test_krpamm_lengthened_simple():
    g = krpamm_tree(0.05, 5, lengthen_delta=0.02)
    pair = mu2_pair(g)
    assert pair.multiplicity == 1
    assert pair.mu < PI2


def test_complete_symmetric_eigenfunction():
    g = build_example("complete", n=4)
    pair = mu2_pair(g)
    psi = complete_symmetric_eigenfunction(g, pair)
    cont, kirch = vertex_residuals(g, psi)
    assert max(cont, kirch) <= 1e-8
    assert rayleigh_quotient(g, psi) == pytest.approx(pair.mu, rel=1e-9)


def test_straighten_lasso():
    g = build_example("lasso")
    etas = []
    for x0 in (0.1, 0.05, 0.01):
        g2, eta_map = straighten_maxima(g, x0)
        assert len(eta_map) == 1
        etas.append(next(iter(eta_map.values())))
        pair = mu2_pair(g2)
        gpts, _ = extrema_single(pair.basis[0])
        bnd = boundary(g2).vertices
        assert len(gpts) == 2
        assert all(g2.point_vertex(p.location) in bnd for p in gpts)
    assert etas[0] > etas[1] > etas[2] > 0  # eta -> 0 with x0


def test_straighten_identity_when_boundary_only():
    g = build_example("path")
    g2, eta_map = straighten_maxima(g, 0.1)
    assert not eta_map
    assert g2.same_structure(g)


def test_straighten_errors():
    with pytest.raises(ShorteningTooLarge):
        straighten_maxima(build_example("lasso", loop=0.15, tail=1.0), 0.1)
    with pytest.raises(NotSimple):
        straighten_maxima(build_example("pumpkin"), 0.05)


def test_boundary_distinct_perturb():
    g = build_example("star", edges=3)
    out = boundary_distinct_perturb(g, eps=0.05, seed=1)
    pair = mu2_pair(out)
    assert pair.multiplicity == 1
    f = pair.basis[0]
    vals = sorted(f.vertex_value(v) for v in boundary(out).vertices)
    amp = f.sup_abs()
    for a, b in zip(vals, vals[1:]):
        assert b - a > 1e-9 * amp
    # pair sums preserved exactly
    assert out.total_length == pytest.approx(g.total_length, abs=0.0)

    path = build_example("path")
    assert boundary_distinct_perturb(path, 0.05).same_structure(path)
    with pytest.raises(NoBoundary):
        boundary_distinct_perturb(build_example("cycle"), 0.05)


def test_limit_family_structures():
    fams = placement_limit_families()
    lim_i = fams["i"].limit_graph()
    assert len(lim_i.edges) == 1 and betti(lim_i) == 0  # interval [0, 1]
    lim_ii = fams["ii"].limit_graph()
    assert len(lim_ii.edges) == 2 and betti(lim_ii) == 0
    assert lim_ii.total_length == pytest.approx(2.0)  # interval [0, 2]
    lim_iii = fams["iii"].limit_graph()
    assert sorted(e.is_loop for e in lim_iii.edges) == [False, True]  # lasso
    lim_iv = fams["iv"].limit_graph()
    assert len(lim_iv.vertices) == 1
    assert all(e.is_loop for e in lim_iv.edges)  # figure-8


def test_rescaling_preserves_l2_norm():
    fams = placement_limit_families()
    fam = fams["iii"]
    limit = fam.limit_graph()
    pair = mu2_pair(limit)
    psi = pair.basis[0]
    J = rescale_to(fam, psi, delta=0.01)
    for eid in fam.unit_edges:
        t_src = psi.trace(eid)
        t_img = J.traces[eid]
        n_src = trace_l2_inner(t_src, t_src, limit.length(eid))
        n_img = trace_l2_inner(t_img, t_img, fam.fixed_lengths[eid])
        assert n_img == pytest.approx(n_src, rel=1e-14)


def test_limit_compare_two_pendants():
    fam = placement_limit_families()["ii"]
    rows = limit_compare(fam, [0.1, 0.01, 0.001], index=2)
    assert all(rows[i][1] > rows[i + 1][1] for i in range(2))
    assert all(rows[i][2] > rows[i + 1][2] for i in range(2))
    # extrema at the two surviving leaves for small delta
    g = fam.graph_at(0.001)
    pair = mu2_pair(g)
    gpts, _ = extrema_single(pair.basis[0])
    bnd = boundary(g).vertices
    assert all(g.point_vertex(p.location) in bnd for p in gpts)


def test_family_iv_extrema_inside_the_two_cycles():
    fam = placement_limit_families()["iv"]
    g = fam.graph_at(0.001)
    pair = mu2_pair(g)
    gpts, _ = extrema_single(pair.basis[0])
    edges = {p.location.edge for p in gpts}
    assert edges == {"loopA", "loopB"}
    for p in gpts:
        assert g.point_vertex(p.location) is None  # interior to the loops


def test_limit_compare_multiple_rejected():
    base = build_example("pumpkin_on_stick").graph
    fam = LimitFamily(
        base,
        ("p0", "p1", "p2"),
        ("s1", "s2"),
        name="pumpkin-limit",
    )
    # limit is an equilateral 3-pumpkin whose mu_2 has multiplicity 3
    with pytest.raises(LimitEigenvalueMultiple):
        limit_compare(fam, [0.01], index=2)


def test_topology_placement_modes():
    gd = build_example("pumpkin_on_stick").graph
    for mode in ("i", "ii", "iii", "iv"):
        g, out = topology_placement(gd, mode)
        assert out.passed, (mode, out.details)
    with pytest.raises(PreconditionUnmet):
        topology_placement(build_example("star", edges=4).graph, "iii")


def test_corpus_deterministic():
    a = standard_corpus(seed=7)
    b = standard_corpus(seed=7)
    for (na, ga), (nb, gb) in zip(a, b):
        assert na == nb and ga.same_structure(gb)


def test_n_star_sizes_quick():
    g = build_example("n_star_long_short", n=3, eps=0.1)
    pair = mu2_pair(g)
    assert pair.multiplicity == 1
    gpts, lpts = extrema_single(pair.basis[0])
    assert len(gpts) == 3 and len(lpts) == 3
