"""Eigenvalues and eigenfunctions of the standard Laplacian on a metric graph.

Eigenfunctions are per-edge sinusoids psi_e(x) = A_e cos(kx) + B_e sin(kx).
For k > 0, mu = k^2 is an eigenvalue exactly when the vertex-condition matrix
M(k) (continuity rows plus one Kirchhoff row per vertex, derivative rows
divided by k so all entries stay O(1)) is singular; the nullspace dimension
is the multiplicity.  Eigenvalues are located by scanning the smallest
singular value of the row-normalized M(k) over a k-grid, refining each local
minimum by golden section, and counting near-zero singular values.  mu_1 = 0
is emitted analytically; the scan never goes near k = 0, where M(k) is
structurally degenerate.

The independent finite-element cross-check lives in qghot.fem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import (
    NullspaceDimensionMismatch,
    ScanExhausted,
    ValidationError,
    ZeroFunction,
)
from .graphs import GraphPoint, MetricGraph

#: Relative singular-value tolerance for multiplicity counting.
TAU_NULL = 1e-8
#: Residual tolerance for vertex conditions, orthonormality, mean-zero.
TAU_EIG = 1e-9
#: Relative golden-section refinement tolerance for root location.
K_REFINE_REL = 1e-12


# ---------------------------------------------------------------------------
# Traces and closed-form integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeTrace:
    """psi_e(x) = A cos(kx) + B sin(kx) on [0, L(e)]; the constant A if k=0."""

    edge: str
    A: float
    B: float
    k: float

    def value(self, x):
        if self.k == 0.0:
            return self.A * np.ones_like(np.asarray(x, dtype=float))
        return self.A * np.cos(self.k * np.asarray(x, dtype=float)) + self.B * np.sin(
            self.k * np.asarray(x, dtype=float)
        )

    def derivative(self, x):
        if self.k == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        x = np.asarray(x, dtype=float)
        return self.k * (-self.A * np.sin(self.k * x) + self.B * np.cos(self.k * x))


def _int_cc(k: float, L: float) -> float:
    return L / 2.0 + math.sin(2.0 * k * L) / (4.0 * k)


def _int_ss(k: float, L: float) -> float:
    return L / 2.0 - math.sin(2.0 * k * L) / (4.0 * k)


def _int_cs(k: float, L: float) -> float:
    return (1.0 - math.cos(2.0 * k * L)) / (4.0 * k)


def trace_l2_inner(t1: EdgeTrace, t2: EdgeTrace, L: float) -> float:
    """Closed-form int_0^L psi1 psi2 dx for traces at a common k."""
    if t1.k == 0.0:
        return t1.A * t2.A * L
    k = t1.k
    return (
        t1.A * t2.A * _int_cc(k, L)
        + (t1.A * t2.B + t1.B * t2.A) * _int_cs(k, L)
        + t1.B * t2.B * _int_ss(k, L)
    )


def trace_h1_inner(t1: EdgeTrace, t2: EdgeTrace, L: float) -> float:
    """Closed-form int_0^L psi1' psi2' dx."""
    if t1.k == 0.0:
        return 0.0
    k = t1.k
    return k * k * (
        t1.A * t2.A * _int_ss(k, L)
        - (t1.A * t2.B + t1.B * t2.A) * _int_cs(k, L)
        + t1.B * t2.B * _int_cc(k, L)
    )


def trace_mean(t: EdgeTrace, L: float) -> float:
    """Closed-form int_0^L psi dx."""
    if t.k == 0.0:
        return t.A * L
    return t.A * math.sin(t.k * L) / t.k + t.B * (1.0 - math.cos(t.k * L)) / t.k


def trace_sup_abs(t: EdgeTrace, L: float) -> float:
    """sup over [0, L] of |psi_e|."""
    if t.k == 0.0:
        return abs(t.A)
    R = math.hypot(t.A, t.B)
    if R == 0.0:
        return 0.0
    phi = math.atan2(t.B, t.A)
    # |cos(kx - phi)| hits 1 iff some critical point (phi + j*pi)/k is inside.
    j_lo = math.ceil((-phi) / math.pi - 1e-12)
    if phi + j_lo * math.pi <= t.k * L + 1e-12:
        return R
    return max(abs(float(t.value(0.0))), abs(float(t.value(L))))


# ---------------------------------------------------------------------------
# Eigenfunctions and eigenpairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenFunction:
    """A Laplacian eigenfunction as one trace per edge at a common k."""

    graph: MetricGraph
    k: float
    traces: tuple[EdgeTrace, ...]  # aligned with graph.edges

    @property
    def mu(self) -> float:
        return self.k * self.k

    def trace(self, edge_id: str) -> EdgeTrace:
        for t in self.traces:
            if t.edge == edge_id:
                return t
        raise ValidationError(f"no trace for edge {edge_id!r}")

    def value_at(self, p: GraphPoint) -> float:
        return float(self.trace(p.edge).value(p.offset))

    def vertex_value(self, v: str) -> float:
        p = self.graph.vertex_point(v)
        return self.value_at(p)

    def outgoing_derivatives(self, v: str) -> list[tuple[str, str, float]]:
        """One-sided derivatives pointing away from v, one per incident slot."""
        out = []
        for e, end in self.graph.graph.incident(v):
            t = self.trace(e.id)
            L = self.graph.length(e.id)
            if end == "o":
                out.append((e.id, "o", float(t.derivative(0.0))))
            else:
                out.append((e.id, "t", -float(t.derivative(L))))
        return out

    def norm(self) -> float:
        return math.sqrt(
            sum(
                trace_l2_inner(t, t, L)
                for t, L in zip(self.traces, self.graph.lengths)
            )
        )

    def mean(self) -> float:
        return sum(trace_mean(t, L) for t, L in zip(self.traces, self.graph.lengths))

    def sup_abs(self) -> float:
        return max(
            trace_sup_abs(t, L) for t, L in zip(self.traces, self.graph.lengths)
        )

    def sup_abs_derivative(self) -> float:
        # psi_e' = k(-A sin + B cos) is a trace with amplitudes (kB, -kA).
        sups = []
        for t, L in zip(self.traces, self.graph.lengths):
            dt = EdgeTrace(t.edge, t.k * t.B, -t.k * t.A, t.k)
            sups.append(trace_sup_abs(dt, L))
        return max(sups)

    def scaled(self, c: float) -> "EigenFunction":
        return EigenFunction(
            self.graph,
            self.k,
            tuple(EdgeTrace(t.edge, c * t.A, c * t.B, t.k) for t in self.traces),
        )

    def normalized(self) -> "EigenFunction":
        n = self.norm()
        if n == 0.0:
            raise ZeroFunction("cannot normalize the zero function")
        return self.scaled(1.0 / n)

    def plus(self, other: "EigenFunction", c: float = 1.0) -> "EigenFunction":
        traces = tuple(
            EdgeTrace(t1.edge, t1.A + c * t2.A, t1.B + c * t2.B, t1.k)
            for t1, t2 in zip(self.traces, other.traces)
        )
        return EigenFunction(self.graph, self.k, traces)


def l2_inner(f: EigenFunction, g: EigenFunction) -> float:
    return sum(
        trace_l2_inner(t1, t2, L)
        for t1, t2, L in zip(f.traces, g.traces, f.graph.lengths)
    )


def vertex_residuals(g: MetricGraph, f: EigenFunction) -> tuple[float, float]:
    """(max continuity mismatch, max |Kirchhoff sum| / k) over all vertices."""
    cont = 0.0
    kirch = 0.0
    for v in g.vertices:
        vals = []
        dsum = 0.0
        for e, end in g.graph.incident(v):
            t = f.trace(e.id)
            L = g.length(e.id)
            x = 0.0 if end == "o" else L
            vals.append(float(t.value(x)))
            dsum += float(t.derivative(x)) * (1.0 if end == "o" else -1.0)
        if len(vals) > 1:
            cont = max(cont, max(vals) - min(vals))
        kirch = max(kirch, abs(dsum) / max(f.k, 1.0))
    return cont, kirch


@dataclass(frozen=True, eq=False)
class EigenPair:
    mu: float
    k: float
    multiplicity: int
    basis: tuple[EigenFunction, ...]
    index_range: tuple[int, int]  # 1-based inclusive positions in the spectrum
    residual: float = 0.0

    @property
    def is_simple(self) -> bool:
        return self.multiplicity == 1


# ---------------------------------------------------------------------------
# Secular matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SecularSystem:
    """M(k) over columns (A_e, B_e) per edge in description order."""

    k: float
    matrix: np.ndarray

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)


class SecularEvaluator:
    """Precompiled vertex-condition matrix, evaluated in batch over k.

    Per vertex: chained continuity rows between consecutive incident slots
    (a loop contributes its two ends as two slots, hence one continuity row
    equating the values at 0 and L), then one Kirchhoff row summing the
    outgoing derivatives divided by k.  Only terminal-side blocks depend on
    k (through cos(kL), sin(kL)), which also yields a sharp Lipschitz bound
    for sigma_min."""

    def __init__(self, g: MetricGraph):
        self.graph = g
        E = len(g.edges)
        self.shape = (2 * E, 2 * E)
        idx = {e.id: i for i, e in enumerate(g.edges)}
        const: list[tuple[int, int, float]] = []
        cos_e: list[tuple[int, int, float, float]] = []  # coeff*cos(k L)
        sin_e: list[tuple[int, int, float, float]] = []
        row_deriv2: list[float] = []  # sum of L^2 over k-dependent blocks

        def add_value(row, eid, end, coeff, acc):
            i = idx[eid]
            if end == "o":
                const.append((row, 2 * i, coeff))
            else:
                L = g.length(eid)
                cos_e.append((row, 2 * i, coeff, L))
                sin_e.append((row, 2 * i + 1, coeff, L))
                acc.append(L * L)

        def add_deriv(row, eid, end, acc):
            i = idx[eid]
            if end == "o":
                const.append((row, 2 * i + 1, 1.0))
            else:
                L = g.length(eid)
                sin_e.append((row, 2 * i, 1.0, L))
                cos_e.append((row, 2 * i + 1, -1.0, L))
                acc.append(L * L)

        row = 0
        for v in g.vertices:
            slots = g.graph.incident(v)
            for (e1, end1), (e2, end2) in zip(slots, slots[1:]):
                acc: list[float] = []
                add_value(row, e1.id, end1, 1.0, acc)
                add_value(row, e2.id, end2, -1.0, acc)
                row_deriv2.append(sum(acc))
                row += 1
            acc = []
            for e, end in slots:
                add_deriv(row, e.id, end, acc)
            row_deriv2.append(sum(acc))
            row += 1
        assert row == 2 * E

        self._const = const
        self._cos = cos_e
        self._sin = sin_e
        # d/dk of a row has squared norm sum L^2 over its k-dependent blocks;
        # the floored row normalization at worst doubles it (Weyl inequality
        # then bounds |d sigma_min / dk|).
        self.lipschitz = 2.0 * math.sqrt(sum(row_deriv2)) * 1.1 + 1e-12

    def matrices(self, ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        M = np.zeros((len(ks),) + self.shape)
        for r, c, val in self._const:
            M[:, r, c] += val
        for r, c, coeff, L in self._cos:
            M[:, r, c] += coeff * np.cos(ks * L)
        for r, c, coeff, L in self._sin:
            M[:, r, c] += coeff * np.sin(ks * L)
        # Loop rows (value(0)=value(L) and the loop Kirchhoff block) vanish
        # identically at the loop's own periods; flooring the normalizer
        # keeps such automatically-satisfied conditions from becoming
        # spurious directional constraints (all other rows have norm >= 1).
        norms = np.maximum(np.linalg.norm(M, axis=2), 1.0)
        return M / norms[:, :, None]

    def sigma_min(self, ks: np.ndarray, chunk: int = 64) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        out = np.empty(len(ks))
        for i in range(0, len(ks), chunk):
            out[i:i + chunk] = np.linalg.svd(
                self.matrices(ks[i:i + chunk]), compute_uv=False
            )[:, -1]
        return out


def secular_matrix(g: MetricGraph, k: float) -> SecularSystem:
    """The vertex-condition matrix at a single wavenumber k > 0."""
    if not k > 0:
        raise ValidationError("secular matrix requires k > 0")
    M = SecularEvaluator(g).matrices(np.array([k]))[0]
    return SecularSystem(k=k, matrix=M)


# ---------------------------------------------------------------------------
# Root scan
# ---------------------------------------------------------------------------

def _sigma_min(g: MetricGraph, k: float) -> float:
    return float(SecularEvaluator(g).sigma_min(np.array([k]))[0])


def _golden_min(f, a: float, b: float, rel_tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * abs(a + b) / 2.0:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return c if fc < fd else d


def _mult_of_singular_values(s: np.ndarray) -> int:
    # sigma_max is floored: the single-loop graph degenerates completely at
    # its roots (every trace is an eigenfunction there).
    return int(np.sum(s < TAU_NULL * max(float(s[0]), 1.0)))


def _mult_at(ev: SecularEvaluator, k: float) -> int:
    s = np.linalg.svd(ev.matrices(np.array([k]))[0], compute_uv=False)
    return _mult_of_singular_values(s)


def _roots_in_interval(
    ev: SecularEvaluator, a: float, b: float, w_refine: float
) -> list[tuple[float, int]]:
    """All secular roots in [a, b] by Lipschitz-certified bisection.

    A cell cannot contain a root when sigma_min at either endpoint exceeds
    lip * width (Weyl inequality); cells that cannot be excluded are halved
    level-synchronously (one batched evaluation per level) down to w_refine.
    Surviving leaves merge into clusters; each sampled local minimum of a
    cluster is refined once by golden section."""
    lip = ev.lipschitz
    cache: dict[float, float] = {}

    def batch(pts: list[float]) -> None:
        new = [p for p in pts if p not in cache]
        if new:
            vals = ev.sigma_min(np.array(new))
            for p, s in zip(new, vals):
                cache[p] = float(s)

    def sig_scalar(k: float) -> float:
        return float(ev.sigma_min(np.array([k]))[0])

    cells = [(a, b)]
    batch([a, b])
    leaves: list[tuple[float, float]] = []
    while cells:
        cells = [
            (lo, hi)
            for lo, hi in cells
            if cache[lo] <= lip * (hi - lo) and cache[hi] <= lip * (hi - lo)
        ]
        if not cells:
            break
        if cells[0][1] - cells[0][0] <= w_refine:
            leaves = sorted(cells)
            break
        mids = [0.5 * (lo + hi) for lo, hi in cells]
        batch(mids)
        cells = [seg for (lo, hi), m in zip(cells, mids) for seg in ((lo, m), (m, hi))]

    roots: list[tuple[float, int]] = []
    i = 0
    while i < len(leaves):
        j = i
        while j + 1 < len(leaves) and leaves[j + 1][0] <= leaves[j][1] + 1e-15 * b:
            j += 1
        grid = [leaves[m][0] for m in range(i, j + 1)] + [leaves[j][1]]
        vals = [cache[k] for k in grid]
        for m in range(len(grid)):
            left = vals[m - 1] if m > 0 else math.inf
            right = vals[m + 1] if m + 1 < len(grid) else math.inf
            if vals[m] <= left and vals[m] <= right:
                lo_b = grid[m - 1] if m > 0 else grid[m]
                hi_b = grid[m + 1] if m + 1 < len(grid) else grid[m]
                k_star = (
                    _golden_min(sig_scalar, lo_b, hi_b, K_REFINE_REL)
                    if hi_b > lo_b
                    else grid[m]
                )
                mult = _mult_at(ev, k_star)
                if mult >= 1:
                    roots.append((k_star, mult))
        i = j + 1

    roots.sort()
    out: list[tuple[float, int]] = []
    for k_star, mult in roots:
        if out and abs(out[-1][0] - k_star) < 1e-9 * max(k_star, 1.0):
            continue
        out.append((k_star, mult))
    return out


def _scan_positive_roots(g: MetricGraph, needed: int) -> list[tuple[float, int]]:
    """Locate (k*, multiplicity) for the smallest positive eigenvalues.

    ``needed`` counts positive eigenvalues with multiplicity.  The window
    grows geometrically until enough roots are certified by the adaptive
    Lipschitz scan."""
    Ltot = g.total_length
    ev = SecularEvaluator(g)
    w_refine = min(math.pi / (4.0 * max(g.lengths)), math.pi / (4.0 * Ltot)) / 256.0
    # mu_2 >= pi^2/L^2 (equality iff path), so nothing lies below pi/Ltot.
    k_lo = 0.7 * math.pi / Ltot
    k_min_valid = (1.0 - 1e-9) * math.pi / Ltot
    k_hi = (needed + 2.0) * math.pi / Ltot

    roots: list[tuple[float, int]] = []
    lo = k_lo
    for _round in range(48):
        found = _roots_in_interval(ev, lo, k_hi, w_refine)
        for k, m in found:
            if k < k_min_valid:
                continue
            if roots and abs(roots[-1][0] - k) < 1e-9 * max(k, 1.0):
                continue
            roots.append((k, m))
        if sum(m for _, m in roots) >= needed:
            return roots
        lo = k_hi
        k_hi *= 1.4
    raise ScanExhausted(
        f"found {sum(m for _, m in roots)} of {needed} positive eigenvalues "
        f"scanning k up to {k_hi:.3g}"
    )


# ---------------------------------------------------------------------------
# Nullspace bases
# ---------------------------------------------------------------------------

def _coefficient_basis(M: np.ndarray, mult: int) -> list[np.ndarray]:
    """Deterministic nullspace basis, seeded by coordinate vectors in
    description order and orthonormalized in coefficient space."""
    _, s, Vh = np.linalg.svd(M)
    null = Vh[-mult:]
    if null.shape[0] != mult:
        raise NullspaceDimensionMismatch(f"nullspace rank {null.shape[0]} != {mult}")
    P = null.T @ null
    accepted: list[np.ndarray] = []
    for j in range(M.shape[1]):
        w = P[:, j].copy()
        for u in accepted:
            w -= (w @ u) * u
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            accepted.append(w / nw)
        if len(accepted) == mult:
            break
    if len(accepted) != mult:
        raise NullspaceDimensionMismatch("could not seed a full nullspace basis")
    return accepted


def _coeff_to_function(g: MetricGraph, k: float, c: np.ndarray) -> EigenFunction:
    traces = tuple(
        EdgeTrace(e.id, float(c[2 * i]), float(c[2 * i + 1]), k)
        for i, e in enumerate(g.edges)
    )
    return EigenFunction(g, k, traces)


def _fix_sign(f: EigenFunction) -> EigenFunction:
    scale = max(max(abs(t.A), abs(t.B)) for t in f.traces)
    tol = 1e-7 * scale
    for t in f.traces:
        if abs(t.A) > tol:
            return f if t.A > 0 else f.scaled(-1.0)
        if abs(t.B) > tol:
            return f if t.B > 0 else f.scaled(-1.0)
    return f


def _orthonormal_basis(g: MetricGraph, k: float, coeffs: list[np.ndarray]) -> tuple[EigenFunction, ...]:
    funcs: list[EigenFunction] = []
    for c in coeffs:
        f = _coeff_to_function(g, k, c)
        for prev in funcs:
            f = f.plus(prev, -l2_inner(f, prev))
        funcs.append(f.normalized())
    return tuple(_fix_sign(f) for f in funcs)


def eigenbasis_at(g: MetricGraph, k_star: float, mult: int) -> tuple[EigenFunction, ...]:
    """Orthonormal eigenfunction basis at a located root k*."""
    M = secular_matrix(g, k_star).matrix
    coeffs = _coefficient_basis(M, mult)
    return _orthonormal_basis(g, k_star, coeffs)


def _constant_pair(g: MetricGraph) -> EigenPair:
    A = 1.0 / math.sqrt(g.total_length)
    traces = tuple(EdgeTrace(e.id, A, 0.0, 0.0) for e in g.edges)
    f = EigenFunction(g, 0.0, traces)
    return EigenPair(mu=0.0, k=0.0, multiplicity=1, basis=(f,), index_range=(1, 1))


# ---------------------------------------------------------------------------
# Public solvers
# ---------------------------------------------------------------------------

def eigenvalues(g: MetricGraph, count: int, backend: str = "secular", h: float = 1e-3) -> list[EigenPair]:
    """The first ``count`` eigenvalues (with multiplicity) as EigenPairs.

    backend="secular" attaches orthonormal trace bases; backend="fem" returns
    discretization eigenvalues with empty bases (multiplicities inferred by
    clustering at the mesh accuracy).
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if backend == "fem":
        from .fem import fem_eigenpairs

        return fem_eigenpairs(g, h=h, count=count)
    if backend != "secular":
        raise ValidationError(f"unknown backend {backend!r}")

    pairs = [_constant_pair(g)]
    total = 1
    if count == 1:
        return pairs
    roots = _scan_positive_roots(g, count - 1)
    for k_star, mult in roots:
        basis = eigenbasis_at(g, k_star, mult)
        res = 0.0
        for f in basis:
            c, kk = vertex_residuals(g, f)
            res = max(res, c, kk)
        pairs.append(
            EigenPair(
                mu=k_star * k_star,
                k=k_star,
                multiplicity=mult,
                basis=basis,
                index_range=(total + 1, total + mult),
                residual=res,
            )
        )
        total += mult
        if total >= count:
            break
    if total < count:
        raise ScanExhausted(f"located {total} of {count} eigenvalues")
    return pairs


def eigenvalue_list(g: MetricGraph, count: int, backend: str = "secular", h: float = 1e-3) -> list[float]:
    """Eigenvalues expanded by multiplicity, as plain floats."""
    out: list[float] = []
    for p in eigenvalues(g, count, backend=backend, h=h):
        out.extend([p.mu] * p.multiplicity)
    return out[:count]


def eigenbasis(g: MetricGraph, pair_index: int, count: int | None = None) -> EigenPair:
    """The pair_index-th (1-based) distinct EigenPair with orthonormal basis."""
    n = count if count is not None else max(2, pair_index + 2)
    pairs = eigenvalues(g, n)
    while len(pairs) < pair_index:
        n += 4
        pairs = eigenvalues(g, n)
    return pairs[pair_index - 1]


def mu2_pair(g: MetricGraph) -> EigenPair:
    """The EigenPair of the smallest positive eigenvalue."""
    return eigenvalues(g, 2)[1]


# ---------------------------------------------------------------------------
# Evaluation and Rayleigh quotient
# ---------------------------------------------------------------------------

def evaluate(f: EigenFunction, p: GraphPoint) -> float:
    return f.value_at(p)


def derivative(f: EigenFunction, p: GraphPoint, direction: tuple[str, str] | None = None) -> float:
    """Derivative at p.  Interior points: in the edge chart direction.
    At a vertex, ``direction`` names an incident slot (edge id, "o"|"t") and
    the derivative points away from the vertex."""
    v = f.graph.point_vertex(p)
    if v is None:
        return float(f.trace(p.edge).derivative(p.offset))
    if direction is None:
        raise ValidationError("derivative at a vertex needs an incident-edge direction")
    eid, end = direction
    t = f.trace(eid)
    if end == "o":
        return float(t.derivative(0.0))
    return -float(t.derivative(f.graph.length(eid)))


def rayleigh_quotient(g: MetricGraph, f, enforce_mean_zero: bool = False) -> float:
    """int |f'|^2 / int |f|^2, closed form for traces, Simpson otherwise.

    Non-trace inputs provide vectorized ``value(edge_id, x)`` and
    ``derivative(edge_id, x)``."""
    if isinstance(f, EigenFunction):
        num = sum(trace_h1_inner(t, t, L) for t, L in zip(f.traces, g.lengths))
        den = sum(trace_l2_inner(t, t, L) for t, L in zip(f.traces, g.lengths))
        mean = f.mean()
    else:
        num = den = mean = 0.0
        for e, L in zip(g.edges, g.lengths):
            xs = np.linspace(0.0, L, 2001)
            vals = np.asarray(f.value(e.id, xs), dtype=float)
            ders = np.asarray(f.derivative(e.id, xs), dtype=float)
            num += float(simpson(ders * ders, x=xs))
            den += float(simpson(vals * vals, x=xs))
            mean += float(simpson(vals, x=xs))
    if enforce_mean_zero:
        den -= mean * mean / g.total_length
    if den <= 1e-14 * max(1.0, num):
        raise ZeroFunction("Rayleigh quotient of the (near-)zero function")
    return num / den
