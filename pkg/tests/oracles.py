"""Independent oracles used by the tests.

Everything here deliberately avoids the package's own algorithms: distances
come from Dijkstra on a subdivided discrete graph, bridges from brute-force
edge removal, Betti numbers from spanning-tree counting, and interval
spectra from the closed form.  These stay independent of the code paths they
check.
"""

from __future__ import annotations

import heapq
import math

import numpy as np


def subdivision_adjacency(g, step: float):
    """Adjacency list of the graph with every edge subdivided at ~step,
    plus a locator mapping (edge id, node index) -> offset."""
    adj: dict = {}
    locator: dict = {}

    def add(u, v, w):
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))

    for e, L in zip(g.edges, g.lengths):
        n = max(2, int(math.ceil(L / step)))
        prev = ("v", e.origin)
        for i in range(1, n):
            node = ("n", e.id, i)
            locator[node] = (e.id, L * i / n)
            add(prev, node, L / n)
            prev = node
        add(prev, ("v", e.terminal), L / n)
    for v in g.vertices:
        locator[("v", v)] = None
    return adj, locator


def dijkstra(adj, src):
    dist = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for w, L in adj[u]:
            nd = d + L
            if nd < dist.get(w, math.inf):
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def grid_distance(g, p, q, step: float = 1e-3) -> float:
    """Shortest-path distance via subdivision Dijkstra, snapping the two
    points to the nearest subdivision nodes."""
    adj, _ = subdivision_adjacency(g, step)

    def attach(tag, point):
        L = g.length(point.edge)
        n = max(2, int(math.ceil(L / step)))
        i = point.offset / L * n
        lo = int(math.floor(i))
        node = ("x", tag)
        for j, frac in ((lo, i - lo), (lo + 1, lo + 1 - i)):
            if j <= 0:
                other = ("v", g.graph.edge(point.edge).origin)
            elif j >= n:
                other = ("v", g.graph.edge(point.edge).terminal)
            else:
                other = ("n", point.edge, j)
            adj.setdefault(node, []).append((other, frac * L / n))
            adj.setdefault(other, []).append((node, frac * L / n))
        return node

    a = attach("p", p)
    b = attach("q", q)
    return dijkstra(adj, a)[b]


def grid_diameter(g, step: float = 1e-2) -> float:
    """max-over-nodes eccentricity on the subdivided graph."""
    adj, _ = subdivision_adjacency(g, step)
    best = 0.0
    for src in list(adj):
        dist = dijkstra(adj, src)
        best = max(best, max(dist.values()))
    return best


def brute_force_bridges(g) -> set:
    """Edges whose removal disconnects the graph, by direct removal."""
    out = set()
    for e in g.edges:
        if e.is_loop:
            continue
        adj: dict = {v: set() for v in g.vertices}
        for f in g.edges:
            if f.id == e.id:
                continue
            adj[f.origin].add(f.terminal)
            adj[f.terminal].add(f.origin)
        seen = {g.vertices[0]}
        stack = [g.vertices[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(g.vertices):
            out.add(e.id)
    return out


def cycle_edges_by_removal(g) -> set:
    """Edges lying on a cycle: loops plus non-bridges (by the brute force)."""
    bridges = brute_force_bridges(g)
    return {e.id for e in g.edges if e.is_loop or e.id not in bridges}


def spanning_tree_extra_edges(g) -> int:
    """Number of edges a greedy spanning-tree construction leaves out."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    extra = 0
    for e in g.edges:
        a, b = find(e.origin), find(e.terminal)
        if a == b:
            extra += 1
        else:
            parent[a] = b
    return extra


def neumann_interval_spectrum(L: float, n: int) -> list[float]:
    """Closed-form Neumann spectrum of [0, L]: ((j-1) pi / L)^2."""
    return [((j - 1) * math.pi / L) ** 2 for j in range(1, n + 1)]


def quadrature_rayleigh(g, value_fn, deriv_fn, n: int = 4001) -> float:
    """Composite-Simpson Rayleigh quotient for per-edge callables."""
    from scipy.integrate import simpson

    num = den = 0.0
    for e, L in zip(g.edges, g.lengths):
        xs = np.linspace(0.0, L, n)
        v = np.asarray(value_fn(e.id, xs), dtype=float)
        d = np.asarray(deriv_fn(e.id, xs), dtype=float)
        num += float(simpson(d * d, x=xs))
        den += float(simpson(v * v, x=xs))
    return num / den
