"""Piecewise-linear finite elements on a metric graph.

Each edge is meshed into equal intervals; vertex unknowns are shared across
incident edges so continuity is built into the space and the Kirchhoff
condition is natural.  The generalized symmetric eigenproblem K x = mu M x is
solved densely at small sizes and by sparse shift-invert Lanczos above that.
This is the discretization oracle cross-checking the secular backend; the
eigenvalue error is O(h^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import MeshTooCoarse, ValidationError
from .graphs import MetricGraph
from .spectral import EigenPair

DENSE_LIMIT = 1200


@dataclass(frozen=True, eq=False)
class FemMesh:
    """Global DOF layout: vertices first, then per-edge interior nodes."""

    graph: MetricGraph
    n_dof: int
    edge_nodes: dict[str, np.ndarray]    # edge id -> global DOF indices, o..t
    edge_offsets: dict[str, np.ndarray]  # edge id -> node offsets in [0, L]


@dataclass(frozen=True, eq=False)
class FemResult:
    mesh: FemMesh
    mus: np.ndarray       # ascending
    vectors: np.ndarray   # (n_dof, n_eigs), M-orthonormal

    def edge_values(self, j: int, edge_id: str) -> tuple[np.ndarray, np.ndarray]:
        """(offsets, eigenvector j sampled along the edge)."""
        nodes = self.mesh.edge_nodes[edge_id]
        return self.mesh.edge_offsets[edge_id], self.vectors[nodes, j]


def build_mesh(g: MetricGraph, h: float) -> FemMesh:
    if not h > 0:
        raise ValidationError("mesh size h must be positive")
    vidx = {v: i for i, v in enumerate(g.vertices)}
    next_dof = len(g.vertices)
    edge_nodes: dict[str, np.ndarray] = {}
    edge_offsets: dict[str, np.ndarray] = {}
    for e, L in zip(g.edges, g.lengths):
        n_e = int(math.ceil(L / h))
        if n_e < 2:
            raise MeshTooCoarse(
                f"edge {e.id!r} (length {L}) gets {n_e} interval(s) at h={h}; need >= 2"
            )
        interior = np.arange(next_dof, next_dof + n_e - 1)
        next_dof += n_e - 1
        nodes = np.concatenate(([vidx[e.origin]], interior, [vidx[e.terminal]]))
        edge_nodes[e.id] = nodes
        edge_offsets[e.id] = np.linspace(0.0, L, n_e + 1)
    return FemMesh(graph=g, n_dof=next_dof, edge_nodes=edge_nodes, edge_offsets=edge_offsets)


def assemble(mesh: FemMesh) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    rows, cols, kvals, mvals = [], [], [], []
    g = mesh.graph
    for e in g.edges:
        nodes = mesh.edge_nodes[e.id]
        n_e = len(nodes) - 1
        ell = g.length(e.id) / n_e
        a, b = nodes[:-1], nodes[1:]
        # Element matrices: stiffness (1/ell)[[1,-1],[-1,1]], mass (ell/6)[[2,1],[1,2]].
        for rr, cc, kv, mv in (
            (a, a, 1.0 / ell, 2.0 * ell / 6.0),
            (b, b, 1.0 / ell, 2.0 * ell / 6.0),
            (a, b, -1.0 / ell, ell / 6.0),
            (b, a, -1.0 / ell, ell / 6.0),
        ):
            rows.append(rr)
            cols.append(cc)
            kvals.append(np.full(n_e, kv))
            mvals.append(np.full(n_e, mv))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    K = sp.coo_matrix((np.concatenate(kvals), (r, c)), shape=(mesh.n_dof, mesh.n_dof)).tocsr()
    M = sp.coo_matrix((np.concatenate(mvals), (r, c)), shape=(mesh.n_dof, mesh.n_dof)).tocsr()
    return K, M


def fem_solve(g: MetricGraph, h: float, count: int) -> FemResult:
    """First ``count`` eigenvalues and M-orthonormal eigenvectors."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    mesh = build_mesh(g, h)
    K, M = assemble(mesh)
    kreq = min(count + 2, mesh.n_dof - 1)
    if mesh.n_dof <= DENSE_LIMIT:
        mus, vecs = scipy.linalg.eigh(
            K.toarray(), M.toarray(), subset_by_index=[0, kreq - 1]
        )
    else:
        # Deterministic but symmetry-free start: a symmetric v0 (e.g. the
        # constant) can trap Lanczos in an invariant subspace and lose
        # degenerate copies on symmetric graphs.
        v0 = np.random.default_rng(20210317).standard_normal(mesh.n_dof)
        mus, vecs = spla.eigsh(K, k=kreq, M=M, sigma=-1.0, which="LM", v0=v0)
        order = np.argsort(mus)
        mus, vecs = mus[order], vecs[:, order]
    mus = np.maximum(mus, 0.0)  # mu_1 = 0 up to roundoff
    return FemResult(mesh=mesh, mus=mus[:count], vectors=vecs[:, :count])


def fem_eigenpairs(g: MetricGraph, h: float, count: int) -> list[EigenPair]:
    """EigenPairs from the FEM backend (no trace bases; multiplicities are
    clustered at the discretization accuracy)."""
    res = fem_solve(g, h, count)
    cluster_rel = 100.0 * h * h
    pairs: list[EigenPair] = []
    i = 0
    mus = res.mus
    while i < len(mus):
        j = i + 1
        while j < len(mus) and (mus[j] - mus[i]) <= cluster_rel * max(1.0, mus[i]):
            j += 1
        pairs.append(
            EigenPair(
                mu=float(np.mean(mus[i:j])),
                k=math.sqrt(max(float(np.mean(mus[i:j])), 0.0)),
                multiplicity=j - i,
                basis=(),
                index_range=(i + 1, j),
            )
        )
        i = j
    return pairs


def count_below(g: MetricGraph, h: float, mu_bound: float) -> int:
    """Number of FEM eigenvalues <= mu_bound (Weyl-type missed-root check)."""
    K = math.sqrt(max(mu_bound, 0.0))
    estimate = int(g.total_length * K / math.pi) + len(g.vertices) + 4
    res = fem_solve(g, h, estimate)
    if res.mus[-1] <= mu_bound:
        raise ValidationError("count_below estimate too small; raise the margin")
    return int(np.sum(res.mus <= mu_bound))
