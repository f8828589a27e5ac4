"""Shortest-path metric and exact diameter of a metric graph.

Distances between arbitrary points combine the same-edge direct route with
the four routings through edge endpoints (via an all-pairs vertex distance
matrix).  The diameter maximizes, for every edge pair, the pointwise minimum
of the finitely many affine routing functions over the parameter rectangle;
since that minimum is piecewise affine, its maximum is attained at one of the
pairwise intersection points of the active pieces and boundary lines, which
are enumerated exactly.
"""

from __future__ import annotations

import heapq
import itertools

from .graphs import GraphPoint, MetricGraph

VertexDistances = dict[str, dict[str, float]]


def vertex_distance_matrix(g: MetricGraph) -> VertexDistances:
    """All-pairs shortest vertex distances (Dijkstra from every vertex)."""
    adj: dict[str, list[tuple[str, float]]] = {v: [] for v in g.vertices}
    for e, L in zip(g.edges, g.lengths):
        if e.is_loop:
            continue
        adj[e.origin].append((e.terminal, L))
        adj[e.terminal].append((e.origin, L))
    out: VertexDistances = {}
    for src in g.vertices:
        dist = {src: 0.0}
        heap = [(0.0, src)]
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist.get(v, float("inf")):
                continue
            for w, L in adj[v]:
                nd = d + L
                if nd < dist.get(w, float("inf")):
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        out[src] = dist
    return out


def _endpoint_costs(g: MetricGraph, p: GraphPoint) -> list[tuple[str, float]]:
    e = g.graph.edge(p.edge)
    L = g.length(p.edge)
    return [(e.origin, p.offset), (e.terminal, L - p.offset)]


def distance(
    g: MetricGraph, p: GraphPoint, q: GraphPoint, vd: VertexDistances | None = None
) -> float:
    """Shortest-path distance between two points of the graph."""
    g.point(p.edge, p.offset)
    g.point(q.edge, q.offset)
    if vd is None:
        vd = vertex_distance_matrix(g)
    best = float("inf")
    if p.edge == q.edge:
        best = abs(p.offset - q.offset)
    for a, ca in _endpoint_costs(g, p):
        for b, cb in _endpoint_costs(g, q):
            best = min(best, ca + vd[a][b] + cb)
    return best


def _pair_candidates(
    g: MetricGraph, vd: VertexDistances, e1: str, e2: str
) -> list[tuple[float, float]]:
    """Candidate (x, y) maximizers of dist on the rectangle of an edge pair."""
    L1, L2 = g.length(e1), g.length(e2)
    ed1, ed2 = g.graph.edge(e1), g.graph.edge(e2)
    # Affine routing pieces a*x + b*y + c as (a, b, c).
    pieces: list[tuple[float, float, float]] = []
    for a_vert, ax, acon in ((ed1.origin, 1.0, 0.0), (ed1.terminal, -1.0, L1)):
        for b_vert, by, bcon in ((ed2.origin, 1.0, 0.0), (ed2.terminal, -1.0, L2)):
            pieces.append((ax, by, acon + bcon + vd[a_vert][b_vert]))
    if e1 == e2:
        pieces.append((1.0, -1.0, 0.0))
        pieces.append((-1.0, 1.0, 0.0))

    # Lines a*x + b*y = c: equality of piece pairs, rectangle borders, and
    # the |x-y| kink diagonal.
    lines: list[tuple[float, float, float]] = []
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(pieces, 2):
        lines.append((a1 - a2, b1 - b2, c2 - c1))
    lines += [(1.0, 0.0, 0.0), (1.0, 0.0, L1), (0.0, 1.0, 0.0), (0.0, 1.0, L2)]
    if e1 == e2:
        lines.append((1.0, -1.0, 0.0))

    tol = 1e-12 * max(1.0, L1, L2)
    cands: set[tuple[float, float]] = {(0.0, 0.0), (0.0, L2), (L1, 0.0), (L1, L2)}
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-12:
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        if -tol <= x <= L1 + tol and -tol <= y <= L2 + tol:
            cands.add((min(max(x, 0.0), L1), min(max(y, 0.0), L2)))
    return sorted(cands)


def diameter(g: MetricGraph) -> float:
    """Exact diameter: max over all point pairs of the distance."""
    vd = vertex_distance_matrix(g)
    best = 0.0
    ids = g.edge_ids
    for i, e1 in enumerate(ids):
        for e2 in ids[i:]:
            for x, y in _pair_candidates(g, vd, e1, e2):
                d = distance(g, GraphPoint(e1, x), GraphPoint(e2, y), vd)
                if d > best:
                    best = d
    return best
