"""Static SVG rendering of a graph, an eigenfunction, and its hot spots.

The planar layout is a seeded force-directed embedding and carries no
semantics; the unrolled per-edge profile panel underneath is the meaningful
view (its marker coordinates are edge offsets).  Parallel edges are bowed
apart and loops drawn as small circles so multigraphs stay readable.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import networkx as nx
import numpy as np
from matplotlib.collections import LineCollection

from .graphs import MetricGraph
from .hotspots import HotspotReport
from .spectral import EigenFunction

matplotlib.rcParams["svg.hashsalt"] = "qghot"


def _layout(g: MetricGraph, seed: int) -> dict[str, np.ndarray]:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    for e in g.edges:
        if not e.is_loop:
            G.add_edge(e.origin, e.terminal)
    pos = nx.spring_layout(G, seed=seed)
    return {v: np.asarray(p, dtype=float) for v, p in pos.items()}


def _edge_curve(g: MetricGraph, pos, e, bow: float, n: int = 120) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)[:, None]
    if e.is_loop:
        c = pos[e.origin]
        r = 0.12 + 0.55 * abs(bow)
        ang0 = 2.0 * math.pi * bow
        theta = ang0 + 2.0 * math.pi * t
        center = c + r * np.array([math.cos(ang0), math.sin(ang0)])
        return center - r * np.column_stack([np.cos(theta), np.sin(theta)])[:: 1]
    p, q = pos[e.origin], pos[e.terminal]
    chord = q - p
    normal = np.array([-chord[1], chord[0]])
    nn = np.linalg.norm(normal)
    if nn > 0:
        normal = normal / nn
    return p + t * chord + (bow * np.sin(math.pi * t)) * normal


def _edge_bows(g: MetricGraph) -> dict[str, float]:
    groups: dict[tuple[str, str], list[str]] = {}
    for e in g.edges:
        key = tuple(sorted((e.origin, e.terminal)))
        groups.setdefault(key, []).append(e.id)
    bows = {}
    for ids in groups.values():
        m = len(ids)
        for i, eid in enumerate(ids):
            bows[eid] = 0.0 if m == 1 else 0.35 * (i - (m - 1) / 2.0) / max(m - 1, 1) * 2
    return bows


def plot_eigenfunction(
    g: MetricGraph,
    f: EigenFunction,
    report: HotspotReport | None,
    out_path: str,
    seed: int = 0,
    title: str = "",
) -> None:
    pos = _layout(g, seed)
    bows = _edge_bows(g)
    vmax = max(f.sup_abs(), 1e-12)

    fig, (ax, axp) = plt.subplots(
        2, 1, figsize=(8, 9), height_ratios=[2.2, 1.0], constrained_layout=True
    )
    ax.set_aspect("equal")
    ax.axis("off")

    marker_xy = []
    for e, L in zip(g.edges, g.lengths):
        curve = _edge_curve(g, pos, e, bows[e.id])
        xs = np.linspace(0.0, L, len(curve))
        vals = np.asarray(f.trace(e.id).value(xs))
        segs = np.stack([curve[:-1], curve[1:]], axis=1)
        lc = LineCollection(
            segs, cmap="coolwarm", norm=plt.Normalize(-vmax, vmax), linewidths=2.5
        )
        lc.set_array(0.5 * (vals[:-1] + vals[1:]))
        ax.add_collection(lc)
        if report is not None:
            for comp in report.m_components + report.m_loc_components:
                if comp.edge != e.id:
                    continue
                for off in {comp.lo, comp.hi}:
                    idx = int(round(off / L * (len(curve) - 1)))
                    marker_xy.append(curve[idx])
    for v, p in pos.items():
        ax.plot(*p, "o", color="black", markersize=4)
        ax.annotate(v, p, fontsize=8, xytext=(3, 3), textcoords="offset points")
    if marker_xy:
        m = np.array(marker_xy)
        ax.plot(m[:, 0], m[:, 1], "o", mfc="none", mec="dimgray", markersize=11, mew=2)
    ax.autoscale_view()
    ax.set_title(title or "eigenfunction and hot spots")

    # Unrolled per-edge profiles; the x coordinates here are semantic.
    x0 = 0.0
    gap = 0.05 * g.total_length / max(len(g.edges), 1)
    for e, L in zip(g.edges, g.lengths):
        xs = np.linspace(0.0, L, 200)
        vals = np.asarray(f.trace(e.id).value(xs))
        axp.plot(x0 + xs, vals, lw=1.5)
        axp.annotate(e.id, (x0 + L / 2.0, 0), fontsize=7, ha="center", va="top")
        if report is not None:
            for comp in report.m_components:
                if comp.edge != e.id:
                    continue
                for off in {comp.lo, comp.hi}:
                    axp.plot(
                        x0 + off,
                        float(f.trace(e.id).value(off)),
                        "o",
                        mfc="none",
                        mec="dimgray",
                        markersize=9,
                        mew=1.8,
                    )
        x0 += L + gap
    axp.axhline(0.0, color="gray", lw=0.6)
    axp.set_xlabel("unrolled arclength (per edge)")
    axp.set_ylabel("value")

    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
