"""Combinatorial and metric structure of compact metric graphs.

A metric graph is a finite connected multigraph (loops and parallel edges
allowed) whose edges carry positive lengths and are identified with intervals
[0, L(e)].  This module owns construction and validation, the structural
decompositions (boundary, bridges, doubly connected part), degree-two
suppression, and the surgery operations used by the catalog constructions.

All values are immutable after construction and every operation returns new
graphs; nothing here mutates its inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DanglingEndpoint,
    DisconnectedGraph,
    DuplicateId,
    InvalidPoint,
    NonpositiveLength,
    ValidationError,
)

# Relative point-coincidence tolerance: scaled by total length on each graph.
POINT_TOL_REL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    origin: str
    terminal: str

    @property
    def is_loop(self) -> bool:
        return self.origin == self.terminal


@dataclass(frozen=True, eq=False)
class DiscreteGraph:
    """Connected multigraph with ordered vertices and edges.

    The description order of ``edges`` is the canonical edge ordering used
    everywhere downstream (secular matrix layout, eigenfunction sign
    conventions, reports).
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise DuplicateId("duplicate vertex id")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise DuplicateId("duplicate edge id")
        for e in self.edges:
            if e.origin not in vset or e.terminal not in vset:
                raise DanglingEndpoint(f"edge {e.id!r} references unknown vertex")
        if not self.vertices:
            raise ValidationError("graph has no vertices")
        if not _is_connected(self.vertices, self.edges):
            raise DisconnectedGraph("graph is not connected")

    def degree(self, v: str) -> int:
        # Loops count twice.
        return sum((e.origin == v) + (e.terminal == v) for e in self.edges)

    def incident(self, v: str) -> list[tuple[Edge, str]]:
        """Incident (edge, end) slots at v; a loop yields both ends."""
        out = []
        for e in self.edges:
            if e.origin == v:
                out.append((e, "o"))
            if e.terminal == v:
                out.append((e, "t"))
        return out

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise InvalidPoint(f"unknown edge {edge_id!r}")


def _is_connected(vertices, edges) -> bool:
    if len(vertices) <= 1:
        return True
    adj: dict[str, set[str]] = {v: set() for v in vertices}
    for e in edges:
        adj[e.origin].add(e.terminal)
        adj[e.terminal].add(e.origin)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


@dataclass(frozen=True, order=True)
class GraphPoint:
    """A location on a metric graph: an edge id and an arclength offset."""

    edge: str
    offset: float


@dataclass(frozen=True, eq=False)
class MetricGraph:
    graph: DiscreteGraph
    lengths: tuple[float, ...]  # aligned with graph.edges

    def __post_init__(self):
        if len(self.lengths) != len(self.graph.edges):
            raise ValidationError("lengths do not match edges")
        if not self.graph.edges:
            raise ValidationError("metric graph needs at least one edge")
        for e, L in zip(self.graph.edges, self.lengths):
            if not (L > 0.0 and math.isfinite(L)):
                raise NonpositiveLength(f"edge {e.id!r} has length {L}")

    # -- basic accessors ----------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def length(self, edge_id: str) -> float:
        try:
            return self.lengths[self._edge_index(edge_id)]
        except KeyError:
            raise InvalidPoint(f"unknown edge {edge_id!r}") from None

    def _edge_index(self, edge_id: str) -> int:
        for i, e in enumerate(self.edges):
            if e.id == edge_id:
                return i
        raise KeyError(edge_id)

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    @property
    def point_tol(self) -> float:
        return POINT_TOL_REL * self.total_length

    def degree(self, v: str) -> int:
        return self.graph.degree(v)

    # -- points ---------------------------------------------------------------

    def point(self, edge_id: str, offset: float) -> GraphPoint:
        """Validated point; offsets within point_tol of an endpoint snap to it."""
        L = self.length(edge_id)
        tol = self.point_tol
        if offset < -tol or offset > L + tol:
            raise InvalidPoint(f"offset {offset} outside [0, {L}] on edge {edge_id!r}")
        offset = min(max(offset, 0.0), L)
        if offset < tol:
            offset = 0.0
        elif L - offset < tol:
            offset = L
        return GraphPoint(edge_id, offset)

    def vertex_point(self, v: str) -> GraphPoint:
        """Canonical representative of a vertex: first incident edge slot."""
        for e, L in zip(self.edges, self.lengths):
            if e.origin == v:
                return GraphPoint(e.id, 0.0)
            if e.terminal == v:
                return GraphPoint(e.id, L)
        raise InvalidPoint(f"unknown vertex {v!r}")

    def point_vertex(self, p: GraphPoint) -> str | None:
        """The vertex a point sits on, or None for edge-interior points."""
        e = self.graph.edge(p.edge)
        L = self.length(p.edge)
        tol = self.point_tol
        if p.offset <= tol:
            return e.origin
        if L - p.offset <= tol:
            return e.terminal
        return None

    def points_equal(self, p: GraphPoint, q: GraphPoint) -> bool:
        vp, vq = self.point_vertex(p), self.point_vertex(q)
        if vp is not None or vq is not None:
            return vp == vq
        return p.edge == q.edge and abs(p.offset - q.offset) <= self.point_tol

    # -- structural equality (used by tests) ---------------------------------

    def same_structure(self, other: "MetricGraph", tol: float = 0.0) -> bool:
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and all(abs(a - b) <= tol for a, b in zip(self.lengths, other.lengths))
        )

    def with_lengths(self, lengths: dict[str, float]) -> "MetricGraph":
        """Copy with some edge lengths replaced."""
        new = tuple(lengths.get(e.id, L) for e, L in zip(self.edges, self.lengths))
        return MetricGraph(self.graph, new)


@dataclass(frozen=True, eq=False)
class Subgraph:
    """A closed sub-part of a metric graph, with a point-membership test.

    ``edges`` lists fully contained edges, ``vertices`` the contained
    vertices, and ``interior_excluded_vertices`` those vertices of the
    subgraph that the *interior* membership test must exclude (attachment
    points of bridges or pendants).
    """

    parent: MetricGraph
    edges: frozenset[str] = frozenset()
    vertices: frozenset[str] = frozenset()
    interior_excluded_vertices: frozenset[str] = frozenset()
    intervals: dict[str, tuple[float, float]] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.edges and not self.vertices and not self.intervals

    def contains(self, p: GraphPoint, tol: float | None = None) -> bool:
        g = self.parent
        tol = g.point_tol if tol is None else tol
        v = g.point_vertex(p)
        if v is not None:
            return v in self.vertices
        if p.edge in self.edges:
            return True
        if p.edge in self.intervals:
            lo, hi = self.intervals[p.edge]
            return lo - tol <= p.offset <= hi + tol
        return False

    def contains_interior(self, p: GraphPoint, tol: float | None = None) -> bool:
        """Membership in the interior: excluded vertices are rejected."""
        g = self.parent
        v = g.point_vertex(p)
        if v is not None:
            return v in self.vertices and v not in self.interior_excluded_vertices
        return self.contains(p, tol)

    @property
    def total_length(self) -> float:
        g = self.parent
        out = sum(g.length(e) for e in self.edges)
        out += sum(hi - lo for lo, hi in self.intervals.values())
        return float(out)


# ---------------------------------------------------------------------------
# Construction and serialization
# ---------------------------------------------------------------------------

def build_graph(description: dict) -> MetricGraph:
    """Build and validate a metric graph from a structured description.

    The description mirrors the on-disk JSON schema::

        {"name": "...", "vertices": ["v1", ...],
         "edges": [{"id": "e1", "from": "v1", "to": "v2", "length": 1.0}, ...]}
    """
    if not isinstance(description, dict):
        raise ValidationError("graph description must be a mapping")
    try:
        vertices = tuple(str(v) for v in description["vertices"])
        raw_edges = description["edges"]
    except KeyError as exc:
        raise ValidationError(f"graph description missing field {exc}") from None
    edges = []
    lengths = []
    for rec in raw_edges:
        try:
            edges.append(Edge(str(rec["id"]), str(rec["from"]), str(rec["to"])))
            lengths.append(float(rec["length"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad edge record {rec!r}: {exc}") from None
    return MetricGraph(DiscreteGraph(vertices, tuple(edges)), tuple(lengths))


def graph_description(g: MetricGraph, name: str = "graph") -> dict:
    return {
        "name": name,
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "from": e.origin, "to": e.terminal, "length": L}
            for e, L in zip(g.edges, g.lengths)
        ],
    }


def load_graph(path: str | Path) -> MetricGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read graph file {path}: {exc}") from None
    try:
        description = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"graph file {path} is not valid JSON: {exc}") from None
    return build_graph(description)


def save_graph(g: MetricGraph, path: str | Path, name: str = "graph") -> None:
    Path(path).write_text(
        json.dumps(graph_description(g, name=name), indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# Structural decompositions
# ---------------------------------------------------------------------------

def betti(g: MetricGraph) -> int:
    """First Betti number E - V + 1 of a connected graph."""
    return len(g.edges) - len(g.vertices) + 1


def boundary(g: MetricGraph) -> Subgraph:
    """The set of vertices of degree one (loops count twice toward degree)."""
    leaves = frozenset(v for v in g.vertices if g.degree(v) == 1)
    return Subgraph(parent=g, vertices=leaves)


def bridges(g: MetricGraph) -> set[str]:
    """Edges whose removal (keeping endpoints) disconnects the graph.

    Iterative lowlink DFS on the multigraph; parallel edges and loops are
    never bridges.
    """
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    out: set[str] = set()
    counter = 0
    incident: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for e in g.edges:
        if e.is_loop:
            continue
        incident[e.origin].append((e.id, e.terminal))
        incident[e.terminal].append((e.id, e.origin))

    root = g.vertices[0]
    disc[root] = low[root] = counter
    counter += 1
    # Frames: [vertex, entering edge id, slot iterator, entering-copy skipped].
    stack: list[list] = [[root, None, iter(incident[root]), False]]
    while stack:
        frame = stack[-1]
        v = frame[0]
        advanced = False
        for eid, w in frame[2]:
            if eid == frame[1] and not frame[3]:
                # Skip exactly one copy of the entering edge; a parallel edge
                # with a different id still provides a back route.
                frame[3] = True
                continue
            if w not in disc:
                disc[w] = low[w] = counter
                counter += 1
                stack.append([w, eid, iter(incident[w]), False])
                advanced = True
                break
            low[v] = min(low[v], disc[w])
        if not advanced:
            stack.pop()
            if stack:
                pv = stack[-1][0]
                low[pv] = min(low[pv], low[v])
                if low[v] > disc[pv]:
                    out.add(frame[1])
    return out


def doubly_connected_part(g: MetricGraph) -> Subgraph:
    """The closed subgraph of all points lying on some cycle.

    Equivalently the fixed point of repeatedly deleting pendant edges and
    bridges: exactly the non-bridge edges together with their endpoints.  The
    interior excludes the vertices where bridges or pendants attach.
    """
    bridge_set = bridges(g)
    cyc_edges = frozenset(e.id for e in g.edges if not e.is_loop and e.id not in bridge_set)
    cyc_edges |= frozenset(e.id for e in g.edges if e.is_loop)
    verts = set()
    for e in g.edges:
        if e.id in cyc_edges:
            verts.add(e.origin)
            verts.add(e.terminal)
    excluded = frozenset(
        v for v in verts if any(e.id not in cyc_edges for e, _ in g.graph.incident(v))
    )
    return Subgraph(
        parent=g,
        edges=cyc_edges,
        vertices=frozenset(verts),
        interior_excluded_vertices=excluded,
    )


def n_components(vertices: tuple[str, ...], edges: tuple[Edge, ...]) -> int:
    adj: dict[str, set[str]] = {v: set() for v in vertices}
    for e in edges:
        adj[e.origin].add(e.terminal)
        adj[e.terminal].add(e.origin)
    seen: set[str] = set()
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


# ---------------------------------------------------------------------------
# Degree-two suppression
# ---------------------------------------------------------------------------

def suppress_degree_two(g: MetricGraph) -> MetricGraph:
    """Merge away non-essential degree-2 vertices (spectrum preserving).

    Every degree-2 vertex whose two incident edge slots belong to distinct
    edges is removed and the edges merged into one of summed length.  A pure
    cycle graph cannot be reduced past a single loop; it retains one marker
    vertex instead of raising.
    """
    vertices = list(g.vertices)
    edges = list(g.edges)
    lengths = list(g.lengths)

    changed = True
    while changed:
        changed = False
        for v in vertices:
            slots = [
                (i, end)
                for i, e in enumerate(edges)
                for end in (["o"] if e.origin == v else []) + (["t"] if e.terminal == v else [])
            ]
            if len(slots) != 2:
                continue
            (i1, end1), (i2, end2) = slots
            if i1 == i2:
                continue  # single loop at v: the cycle marker, irreducible
            e1, e2 = edges[i1], edges[i2]
            # Orient the merged edge through v: far end of e1 -> far end of e2.
            a = e1.terminal if end1 == "o" else e1.origin
            b = e2.terminal if end2 == "o" else e2.origin
            mid = f"{e1.id}+{e2.id}"
            taken = {e.id for e in edges}
            while mid in taken:
                mid += "'"
            merged = Edge(mid, a, b)
            new_len = lengths[i1] + lengths[i2]
            keep, drop = min(i1, i2), max(i1, i2)
            edges[keep] = merged
            lengths[keep] = new_len
            del edges[drop]
            del lengths[drop]
            vertices.remove(v)
            changed = True
            break
    return MetricGraph(DiscreteGraph(tuple(vertices), tuple(edges)), tuple(lengths))


# ---------------------------------------------------------------------------
# Surgery
# ---------------------------------------------------------------------------

def _fresh_vertex(taken: set[str], base: str = "w") -> str:
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def split_edge(g: MetricGraph, at: GraphPoint) -> tuple[MetricGraph, str]:
    """Split an edge at an interior point into two edges joined by a new
    degree-2 vertex.  Returns (graph, new vertex id).  At a vertex this is a
    no-op returning that vertex."""
    v = g.point_vertex(at)
    if v is not None:
        return g, v
    idx = g._edge_index(at.edge)
    e = g.edges[idx]
    L = g.lengths[idx]
    w = _fresh_vertex(set(g.vertices))
    e_a = Edge(f"{e.id}.1", e.origin, w)
    e_b = Edge(f"{e.id}.2", w, e.terminal)
    edges = list(g.edges)
    lengths = list(g.lengths)
    edges[idx:idx + 1] = [e_a, e_b]
    lengths[idx:idx + 1] = [at.offset, L - at.offset]
    vertices = g.vertices + (w,)
    return MetricGraph(DiscreteGraph(vertices, tuple(edges)), tuple(lengths)), w


def attach_pendant(g: MetricGraph, at: GraphPoint, length: float) -> tuple[MetricGraph, str, str]:
    """Attach a pendant edge of the given length at a point.

    Interior points are split first.  Returns (graph, new leaf vertex id,
    new edge id)."""
    if not length > 0:
        raise NonpositiveLength(f"pendant length {length} must be positive")
    g2, v = split_edge(g, at)
    leaf = _fresh_vertex(set(g2.vertices), base="p")
    eid = f"pend_{leaf}"
    taken = {e.id for e in g2.edges}
    i = 1
    while eid in taken:
        eid = f"pend_{leaf}_{i}"
        i += 1
    edges = g2.edges + (Edge(eid, v, leaf),)
    return (
        MetricGraph(DiscreteGraph(g2.vertices + (leaf,), edges), g2.lengths + (length,)),
        leaf,
        eid,
    )


def glue(g: MetricGraph, v1: str, v2: str) -> MetricGraph:
    """Identify two vertices (keeps v1's id)."""
    if v1 == v2:
        return g
    if v1 not in g.vertices or v2 not in g.vertices:
        raise InvalidPoint("glue endpoints must be vertices of the graph")
    edges = tuple(
        Edge(
            e.id,
            v1 if e.origin == v2 else e.origin,
            v1 if e.terminal == v2 else e.terminal,
        )
        for e in g.edges
    )
    vertices = tuple(v for v in g.vertices if v != v2)
    return MetricGraph(DiscreteGraph(vertices, edges), g.lengths)


def shrink_edge(g: MetricGraph, edge_id: str, new_length: float) -> MetricGraph:
    if not new_length > 0:
        raise NonpositiveLength(f"new length {new_length} must be positive")
    g.length(edge_id)  # validates the id
    return g.with_lengths({edge_id: new_length})


def disconnect_points(g: MetricGraph, points: list[GraphPoint]) -> list[MetricGraph]:
    """Disconnect the graph simultaneously at every given point.

    Each point (interior points are split into degree-2 vertices first) is
    replaced by deg(v) vertices of degree one.  Returns the list of connected
    components as valid metric graphs (a single entry when the graph stays
    connected)."""
    vertex_ids: set[str] = set()
    interior: dict[str, list[float]] = {}
    for p in points:
        v = g.point_vertex(p)
        if v is not None:
            vertex_ids.add(v)
        else:
            interior.setdefault(p.edge, []).append(p.offset)

    work = g
    tol = g.point_tol
    for eid in sorted(interior):
        cur_edge, base, prev = eid, 0.0, None
        for off in sorted(interior[eid]):
            if prev is not None and off - prev <= tol:
                continue  # coincident points disconnect once
            work, w = split_edge(work, GraphPoint(cur_edge, off - base))
            vertex_ids.add(w)
            cur_edge, base, prev = f"{cur_edge}.2", off, off

    vertices = list(work.vertices)
    taken = set(vertices)
    new_edges = []
    for e in work.edges:
        o, t = e.origin, e.terminal
        if o in vertex_ids:
            o = _fresh_vertex(taken, base=f"{e.origin}~")
            taken.add(o)
            vertices.append(o)
        if t in vertex_ids:
            t = _fresh_vertex(taken, base=f"{e.terminal}~")
            taken.add(t)
            vertices.append(t)
        new_edges.append(Edge(e.id, o, t))
    vertices = [v for v in vertices if v not in vertex_ids]

    return _split_components(tuple(vertices), tuple(new_edges), work)


def _split_components(
    vertices: tuple[str, ...], edges: tuple[Edge, ...], metric_src: MetricGraph
) -> list[MetricGraph]:
    adj: dict[str, set[str]] = {v: set() for v in vertices}
    for e in edges:
        adj[e.origin].add(e.terminal)
        adj[e.terminal].add(e.origin)
    seen: set[str] = set()
    comps: list[MetricGraph] = []
    for v in vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comp_vertices = tuple(u for u in vertices if u in comp)
        comp_edges = tuple(e for e in edges if e.origin in comp)
        comp_lengths = tuple(metric_src.length(e.id) for e in comp_edges)
        comps.append(
            MetricGraph(DiscreteGraph(comp_vertices, comp_edges), comp_lengths)
        )
    return comps


def surgery(g: MetricGraph, action: str, **kwargs):
    """Dispatch for the named surgery actions.

    Actions: attach_pendant(at, length), split_edge(at), glue(v1, v2),
    disconnect(at), shrink_edge(edge, new_length).  ``disconnect`` returns the
    graph when it stays connected and the list of components otherwise."""
    if action == "attach_pendant":
        return attach_pendant(g, kwargs["at"], kwargs["length"])[0]
    if action == "split_edge":
        return split_edge(g, kwargs["at"])[0]
    if action == "glue":
        return glue(g, kwargs["v1"], kwargs["v2"])
    if action == "shrink_edge":
        return shrink_edge(g, kwargs["edge"], kwargs["new_length"])
    if action == "disconnect":
        comps = disconnect_points(g, [kwargs["at"]])
        return comps[0] if len(comps) == 1 else comps
    raise ValidationError(f"unknown surgery action {action!r}")
