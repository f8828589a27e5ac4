"""Extrema of mu_2-eigenfunctions and the structural theorem verifiers.

For a single eigenfunction the extremum sets are exact: each edge trace is
R cos(kx - phi), so interior critical points are (phi + j pi)/k and vertices
are classified by their one-sided outgoing derivatives (all must vanish;
Kirchhoff rules out mixed-sign configurations).  Nonzero local maxima have
positive values and minima negative ones, and zero-valued critical points are
excluded (the trace would vanish identically on the edge).

For a multiple mu_2 the sets M and M_loc are unions over the eigenspace and
can be uncountable; they are reported as certified subsets built from unit
direction sampling plus the quarter-period closure rule: two same-edge,
same-kind local extrema at edge distance <= pi/(2k) span a full segment of
extrema of intermediate combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import (
    NotAStar,
    NotMaxima,
    TooFarApart,
    ValidationError,
    ZeroEigenfunction,
)
from .geometry import diameter, distance, vertex_distance_matrix
from .graphs import GraphPoint, MetricGraph, boundary, disconnect_points, doubly_connected_part
from .spectral import EigenFunction, EigenPair, eigenvalue_list, mu2_pair

#: Relative tolerance for extremum value ties and zero-value exclusion.
TIE_REL = 1e-9
#: Relative one-sided derivative tolerance for vertex extremum detection.
VERTEX_DERIV_REL = 1e-7


@dataclass(frozen=True)
class ExtremumPoint:
    location: GraphPoint
    value: float
    kind: str   # "max" | "min"
    scope: str  # "local" | "global"
    source: tuple[float, ...] = (1.0,)


@dataclass(frozen=True)
class HotspotComponent:
    """A maximal run of extrema on one edge: a point when lo == hi."""

    edge: str
    lo: float
    hi: float
    kind: str
    value: float
    witnesses: tuple[tuple[float, ...], ...]

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def points(self) -> list[GraphPoint]:
        if self.is_point:
            return [GraphPoint(self.edge, self.lo)]
        return [GraphPoint(self.edge, self.lo), GraphPoint(self.edge, self.hi)]


@dataclass(frozen=True, eq=False)
class HotspotReport:
    graph: MetricGraph
    pair: EigenPair
    m_components: tuple[HotspotComponent, ...]
    m_loc_components: tuple[HotspotComponent, ...]
    n_directions: int
    method: str
    seed: int
    subset_certified: bool = True
    equality_claimed: bool = False
    closure_merges: int = 0

    def m_points(self) -> list[GraphPoint]:
        return [p for c in self.m_components for p in c.points()]

    def m_loc_points(self) -> list[GraphPoint]:
        return [p for c in self.m_loc_components for p in c.points()]

    def covered_fraction(self, edge_id: str, which: str = "m") -> float:
        """Fraction of the edge covered by components of any kind."""
        comps = self.m_components if which == "m" else self.m_loc_components
        L = self.graph.length(edge_id)
        spans = sorted(
            (c.lo, c.hi) for c in comps if c.edge == edge_id and not c.is_point
        )
        covered = 0.0
        cur = None
        for lo, hi in spans:
            if cur is None or lo > cur[1]:
                if cur is not None:
                    covered += cur[1] - cur[0]
                cur = [lo, hi]
            else:
                cur[1] = max(cur[1], hi)
        if cur is not None:
            covered += cur[1] - cur[0]
        return covered / L


@dataclass(frozen=True)
class VerifierOutcome:
    theorem: str
    passed: bool
    witnesses: tuple = ()
    tolerances: dict = field(default_factory=dict)
    details: str = ""


# ---------------------------------------------------------------------------
# Exact extrema of a single eigenfunction
# ---------------------------------------------------------------------------

def extrema_single(
    f: EigenFunction, source: tuple[float, ...] = (1.0,)
) -> tuple[list[ExtremumPoint], list[ExtremumPoint]]:
    """(M_psi, M_psi_loc) for one eigenfunction with k > 0."""
    if f.k <= 0:
        raise ZeroEigenfunction("extrema need k > 0 (nonconstant eigenfunction)")
    g = f.graph
    amp = f.sup_abs()
    if amp <= 0.0:
        raise ZeroEigenfunction("zero eigenfunction")
    val_tol = TIE_REL * amp
    pt_tol = g.point_tol

    local: list[ExtremumPoint] = []

    for e, t, L in zip(g.edges, f.traces, g.lengths):
        R = math.hypot(t.A, t.B)
        if R <= val_tol:
            continue  # identically (numerically) zero on this edge
        phi = math.atan2(t.B, t.A)
        j = math.ceil((f.k * pt_tol - phi) / math.pi)
        while True:
            x = (phi + j * math.pi) / f.k
            if x >= L - pt_tol:
                break
            if x > pt_tol:
                val = float(t.value(x))
                kind = "max" if val > 0 else "min"
                local.append(
                    ExtremumPoint(GraphPoint(e.id, x), val, kind, "local", source)
                )
            j += 1

    deriv_tol = VERTEX_DERIV_REL * f.k * amp
    for v in g.vertices:
        derivs = [d for _, _, d in f.outgoing_derivatives(v)]
        if max(abs(d) for d in derivs) > deriv_tol:
            continue
        val = f.vertex_value(v)
        if abs(val) <= val_tol:
            continue  # the "0 != psi(x)" exclusion
        kind = "max" if val > 0 else "min"
        local.append(
            ExtremumPoint(g.vertex_point(v), val, kind, "local", source)
        )

    if not local:
        raise ZeroEigenfunction("no extrema found; function is numerically zero")

    vmax = max(p.value for p in local)
    vmin = min(p.value for p in local)
    glob = [
        ExtremumPoint(p.location, p.value, p.kind, "global", source)
        for p in local
        if (p.kind == "max" and p.value >= vmax - val_tol)
        or (p.kind == "min" and p.value <= vmin + val_tol)
    ]
    key = {e.id: i for i, e in enumerate(g.edges)}
    order = lambda p: (key[p.location.edge], p.location.offset)
    return sorted(glob, key=order), sorted(local, key=order)


# ---------------------------------------------------------------------------
# Lemma machinery: combinations with a prescribed maximum
# ---------------------------------------------------------------------------

def combination_weight(k: float, y: float, seg_length: float) -> float:
    """alpha_y = -sin(k y)/sin(k (y - L)) in the chart where the two unit
    maxima sit at 0 and L = seg_length."""
    return -math.sin(k * y) / math.sin(k * (y - seg_length))


def _max_points_on_edge(f: EigenFunction, edge_id: str) -> list[tuple[float, float]]:
    _, loc = extrema_single(f)
    return [
        (p.location.offset, p.value)
        for p in loc
        if p.kind == "max" and p.location.edge == edge_id
    ]


def combine(f0: EigenFunction, f1: EigenFunction, y: GraphPoint) -> EigenFunction:
    """An eigenfunction whose unique critical point between two close maxima
    of f0 and f1 on y's edge is a maximum at y.

    f0 and f1 must take local maxima at points x1, x2 of y's edge with
    dist_e(x1, x2) <= pi/(2k), y strictly between; the combination is
    f0/R0 + alpha_y f1/R1 with the quarter-period weight, renormalized."""
    g = f0.graph
    k = f0.k
    m0 = _max_points_on_edge(f0, y.edge)
    m1 = _max_points_on_edge(f1, y.edge)
    if not m0 or not m1:
        raise NotMaxima(f"functions lack local maxima on edge {y.edge!r}")
    pick = None
    for x1, v1 in m0:
        for x2, v2 in m1:
            lo, hi = min(x1, x2), max(x1, x2)
            if lo - g.point_tol <= y.offset <= hi + g.point_tol and hi > lo:
                pick = (x1, v1, x2, v2)
                break
        if pick:
            break
    if pick is None:
        raise NotMaxima("y does not lie between maxima of f0 and f1 on its edge")
    x1, v1, x2, v2 = pick
    seg = abs(x2 - x1)
    if seg > math.pi / (2.0 * k) + g.point_tol:
        raise TooFarApart(
            f"maxima are {seg:.6g} apart; quarter period is {math.pi/(2*k):.6g}"
        )
    s_y = abs(y.offset - x1)
    alpha = combination_weight(k, s_y, seg)
    combined = f0.scaled(1.0 / v1).plus(f1.scaled(1.0 / v2), alpha)
    return combined.normalized()


# ---------------------------------------------------------------------------
# Sampled hot-spot sets for the full eigenspace
# ---------------------------------------------------------------------------

def _sample_directions(d: int, budget: int, seed: int) -> np.ndarray:
    """Unit directions: the canonical basis first, then a deterministic fill
    (half-circle grid for d=2, scrambled Sobol mapped to the sphere for
    d>=3)."""
    rows = [np.eye(d)]
    fill = max(budget - d, 0)
    if d == 2 and fill > 0:
        theta = np.pi * np.arange(fill) / fill
        rows.append(np.column_stack([np.cos(theta), np.sin(theta)]))
    elif fill > 0:
        sob = qmc.Sobol(d, scramble=True, seed=seed)
        draw = 1 << (fill - 1).bit_length()  # power of two keeps Sobol balanced
        u = sob.random(draw)[:fill]
        z = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
        norms = np.linalg.norm(z, axis=1)
        keep = norms > 1e-12
        rows.append(z[keep] / norms[keep, None])
    return np.vstack(rows)


def _runs_to_components(
    g: MetricGraph,
    cands: dict[tuple[str, str], list[tuple[float, float, tuple[float, ...]]]],
    merge_gap: float,
) -> tuple[list[HotspotComponent], int]:
    """Merge per-(edge, kind) candidate offsets into maximal runs."""
    comps: list[HotspotComponent] = []
    merges = 0
    tol = g.point_tol
    # Degenerate vertex runs are deduplicated across incident edges.
    vertex_point_done: set[tuple[str, str]] = set()
    vertex_in_segment: set[tuple[str, str]] = set()

    key = {e.id: i for i, e in enumerate(g.edges)}
    for (eid, kind) in sorted(cands, key=lambda t: (key[t[0]], t[1])):
        pts = sorted(cands[(eid, kind)])
        runs: list[list[tuple[float, float, tuple[float, ...]]]] = []
        for item in pts:
            if runs and item[0] - runs[-1][-1][0] <= merge_gap + tol:
                if item[0] - runs[-1][-1][0] > tol:
                    merges += 1
                runs[-1].append(item)
            else:
                runs.append([item])
        for run in runs:
            lo, hi = run[0][0], run[-1][0]
            value = max(r[1] for r in run) if kind == "max" else min(r[1] for r in run)
            wit = (run[0][2], run[-1][2]) if hi > lo else (run[0][2],)
            if hi > lo:
                for off in (lo, hi):
                    vtx = g.point_vertex(GraphPoint(eid, off))
                    if vtx is not None:
                        vertex_in_segment.add((vtx, kind))
                comps.append(HotspotComponent(eid, lo, hi, kind, value, wit))
            else:
                vtx = g.point_vertex(GraphPoint(eid, lo))
                if vtx is not None:
                    if (vtx, kind) in vertex_point_done:
                        continue
                    vertex_point_done.add((vtx, kind))
                comps.append(HotspotComponent(eid, lo, hi, kind, value, wit))
    # Drop lone vertex components already inside a segment of the same kind.
    final = []
    for c in comps:
        if c.is_point:
            vtx = g.point_vertex(GraphPoint(c.edge, c.lo))
            if vtx is not None and (vtx, c.kind) in vertex_in_segment:
                continue
        final.append(c)
    return final, merges


def _accumulate(
    g: MetricGraph,
    pts: list[ExtremumPoint],
    pool: dict[tuple[str, str], list[tuple[float, float, tuple[float, ...]]]],
) -> None:
    for p in pts:
        v = g.point_vertex(p.location)
        if v is None:
            pool.setdefault((p.location.edge, p.kind), []).append(
                (p.location.offset, p.value, p.source)
            )
        else:
            # A vertex extremum joins the chain of every incident edge slot.
            for e, end in g.graph.incident(v):
                off = 0.0 if end == "o" else g.length(e.id)
                pool.setdefault((e.id, p.kind), []).append((off, p.value, p.source))


def hotspot_sets(
    g: MetricGraph,
    pair: EigenPair,
    directions: int | None = None,
    seed: int = 0,
) -> HotspotReport:
    """Certified-subset report of (M, M_loc) for the mu_2 eigenspace.

    Simple mu_2: exact sets from the single eigenfunction.  Multiplicity
    d >= 2: union over sampled unit coefficient directions followed by the
    quarter-period closure."""
    d = pair.multiplicity
    if d == 1:
        dirs = np.array([[1.0]])
        method = "exact"
    else:
        budget = directions if directions is not None else (720 if d == 2 else 4096)
        dirs = _sample_directions(d, budget, seed)
        method = "great-circle" if d == 2 else "sobol-sphere"

    glob_pool: dict = {}
    loc_pool: dict = {}
    for c in dirs:
        f = pair.basis[0].scaled(float(c[0]))
        for ci, fi in zip(c[1:], pair.basis[1:]):
            f = f.plus(fi, float(ci))
        try:
            gpts, lpts = extrema_single(f, source=tuple(float(x) for x in c))
        except ZeroEigenfunction:
            continue
        _accumulate(g, gpts, glob_pool)
        _accumulate(g, lpts, loc_pool)

    merge_gap = math.pi / (2.0 * pair.k) if d > 1 else 0.0
    m_comps, merges1 = _runs_to_components(g, glob_pool, merge_gap)
    loc_comps, merges2 = _runs_to_components(g, loc_pool, merge_gap)
    return HotspotReport(
        graph=g,
        pair=pair,
        m_components=tuple(m_comps),
        m_loc_components=tuple(loc_comps),
        n_directions=len(dirs),
        method=method,
        seed=seed,
        subset_certified=True,
        equality_claimed=(d == 1),
        closure_merges=merges1 + merges2,
    )


# ---------------------------------------------------------------------------
# Theorem verifiers
# ---------------------------------------------------------------------------

def verify_location(g: MetricGraph, report: HotspotReport) -> VerifierOutcome:
    """Containment M subset M_loc subset (boundary) union int(D_Gamma)."""
    bnd = boundary(g)
    D = doubly_connected_part(g)
    bad: list[GraphPoint] = []
    for comp in report.m_components + report.m_loc_components:
        for p in comp.points():
            v = g.point_vertex(p)
            if v is not None and v in bnd.vertices:
                continue
            if not D.is_empty and D.contains_interior(p):
                continue
            bad.append(p)
    return VerifierOutcome(
        theorem="location-boundary-or-doubly-connected",
        passed=not bad,
        witnesses=tuple(bad),
        tolerances={"point": g.point_tol},
        details=f"{len(bad)} offending point(s)" if bad else "all components contained",
    )


def verify_no_disconnect(g: MetricGraph, f: EigenFunction) -> VerifierOutcome:
    """Disconnecting every nonzero local maximum keeps the graph connected."""
    _, loc = extrema_single(f)
    max_pts = [p.location for p in loc if p.kind == "max"]
    comps = disconnect_points(g, max_pts)
    return VerifierOutcome(
        theorem="no-disconnect-at-maxima",
        passed=len(comps) == 1,
        witnesses=tuple(max_pts) if len(comps) != 1 else (),
        details=f"{len(comps)} component(s) after disconnecting {len(max_pts)} maxima",
    )


def extrema_distance_ratio(g: MetricGraph, report: HotspotReport) -> float:
    """max pairwise distance among global extrema, over the diameter.

    Segments contribute their endpoints and midpoint."""
    pts: list[GraphPoint] = []
    for c in report.m_components:
        pts.extend(c.points())
        if not c.is_point:
            pts.append(GraphPoint(c.edge, 0.5 * (c.lo + c.hi)))
    if not pts:
        raise ValidationError("report has no global extrema")
    vd = vertex_distance_matrix(g)
    best = 0.0
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            best = max(best, distance(g, p, q, vd))
    return best / diameter(g)


def ratio_of_function(g: MetricGraph, f: EigenFunction) -> float:
    """extrema_distance_ratio of a single eigenfunction's M_psi."""
    gpts, _ = extrema_single(f)
    vd = vertex_distance_matrix(g)
    best = 0.0
    for i, p in enumerate(gpts):
        for q in gpts[i + 1:]:
            best = max(best, distance(g, p.location, q.location, vd))
    return best / diameter(g)


def _star_center(g: MetricGraph) -> str | None:
    if len(g.edges) - len(g.vertices) + 1 != 0:
        return None
    big = [v for v in g.vertices if g.degree(v) >= 2]
    if len(big) == 1 and all(g.degree(v) == 1 for v in g.vertices if v != big[0]):
        return big[0]
    if not big and len(g.edges) == 1:
        return g.edges[0].origin  # single edge: degenerate 1-star
    return None


def _is_flower(g: MetricGraph) -> bool:
    # A single loop is the cycle graph, not a flower for this check.
    return (
        len(g.vertices) == 1
        and len(g.edges) >= 2
        and all(e.is_loop for e in g.edges)
    )


def star_diameter_check(
    g: MetricGraph, n_samples: int = 32, seed: int = 0
) -> VerifierOutcome:
    """Every mu_2 eigenfunction of a star takes max and min at diameter
    distance; flowers reduce to the half-petal star.

    For stars with psi(v0) != 0 the length/slope relation
    L(e_j) = arctan(A_j/F)/k and the peak value sqrt(A_j^2 + F^2) are also
    verified on the computed traces."""
    center = _star_center(g)
    flower = _is_flower(g)
    if center is None and not flower:
        raise NotAStar("graph is neither a star nor a flower")

    diam = diameter(g)
    pair = mu2_pair(g)
    checks: list[str] = []
    witnesses: list = []
    tol = 1e-9

    if flower:
        # Remark-style reduction: the half-petal star has the same mu_2.
        from .graphs import DiscreteGraph, Edge

        v0 = g.vertices[0]
        leaves = tuple(f"leaf_{e.id}" for e in g.edges)
        star = MetricGraph(
            DiscreteGraph(
                (v0,) + leaves,
                tuple(Edge(f"h_{e.id}", v0, lf) for e, lf in zip(g.edges, leaves)),
            ),
            tuple(L / 2.0 for L in g.lengths),
        )
        mu_star = eigenvalue_list(star, 2)[1]
        if abs(mu_star - pair.mu) > 1e-8 * pair.mu:
            witnesses.append(("half-petal-mu2", mu_star, pair.mu))
        checks.append("half-petal reduction")

    rng = np.random.default_rng(seed)
    d = pair.multiplicity
    dirs = [np.eye(d)[i] for i in range(d)]
    for _ in range(n_samples):
        z = rng.normal(size=d)
        dirs.append(z / np.linalg.norm(z))

    vd = vertex_distance_matrix(g)
    for c in dirs:
        f = pair.basis[0].scaled(float(c[0]))
        for ci, fi in zip(c[1:], pair.basis[1:]):
            f = f.plus(fi, float(ci))
        try:
            gpts, _ = extrema_single(f)
        except ZeroEigenfunction:
            continue
        maxima = [p for p in gpts if p.kind == "max"]
        minima = [p for p in gpts if p.kind == "min"]
        for pm in maxima:
            for pn in minima:
                dmm = distance(g, pm.location, pn.location, vd)
                if abs(dmm - diam) > tol * max(diam, 1.0):
                    witnesses.append((pm.location, pn.location, dmm, diam))
        if center is not None:
            _check_star_relations(g, f, center, witnesses)
    checks.append(f"{len(dirs)} direction(s)")

    return VerifierOutcome(
        theorem="star-diameter",
        passed=not witnesses,
        witnesses=tuple(witnesses),
        tolerances={"distance": tol, "relations": 1e-8},
        details="; ".join(checks),
    )


def _check_star_relations(g: MetricGraph, f: EigenFunction, center: str, witnesses: list) -> None:
    amp = f.sup_abs()
    F = f.vertex_value(center)
    if abs(F) <= 1e-7 * amp:
        return
    if F < 0:
        f = f.scaled(-1.0)
        F = -F
    k = f.k
    for eid, end, dval in f.outgoing_derivatives(center):
        A_j = dval / k
        if A_j <= 1e-9 * amp:
            continue  # the rooted edge carrying the zero descends from v0
        L = g.length(eid)
        L_pred = math.atan2(A_j, F) / k
        peak_pred = math.hypot(A_j, F)
        # The peak must actually be attained at the leaf end of the edge.
        t = f.trace(eid)
        leaf_offset = L if end == "o" else 0.0
        peak = float(t.value(leaf_offset))
        if abs(L - L_pred) > 1e-8 * max(1.0, L):
            witnesses.append(("length-slope", eid, L, L_pred))
        if abs(peak - peak_pred) > 1e-8 * max(1.0, peak):
            witnesses.append(("peak-value", eid, peak, peak_pred))
