"""qghot command-line front end.

Subcommands: solve, hotspots, verify, reproduce, sweep, plot.  Exit codes
are a stable contract: 0 success, 1 verifier/fact failure, 2 input or
validation error, 3 numerical failure.  QGHOT_TOL overrides the residual
tolerance.  Reports go to stdout and, with --out, are also written
atomically to a file; CSV output is selected with --format csv.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

from . import __version__, catalog, hotspots, reports, spectral
from .errors import (
    InapplicableCheck,
    MultiplicityChange,
    NotAStar,
    SolverError,
    UnknownExample,
    ValidationError,
)
from .geometry import diameter
from .graphs import boundary, load_graph
from .reports import Report, RunConfig


def _parse_params(param_args: list[str]) -> dict:
    """--param key=value[,key=value...]; ':'-separated values become lists."""
    out: dict = {}
    for arg in param_args or []:
        for piece in arg.split(","):
            if "=" not in piece:
                raise ValidationError(f"bad --param piece {piece!r}; expected key=value")
            key, val = piece.split("=", 1)
            if ":" in val:
                out[key] = [_num(x) for x in val.split(":")]
            else:
                out[key] = _num(val)
    return out


def _num(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _load_source(cfg: RunConfig):
    if cfg.example is not None:
        return catalog.build_example(cfg.example, **cfg.params), cfg.example
    if cfg.graph is None:
        raise ValidationError("need --graph FILE or --example ID")
    return load_graph(cfg.graph), os.path.basename(cfg.graph)


def _emit(report: Report, cfg: RunConfig, started: float) -> None:
    report.timing_ms = (time.time() - started) * 1000.0
    text = report.render()
    sys.stdout.write(text)
    # sweep and plot own --out for their CSV / image payloads.
    if cfg.out and cfg.fmt == "report" and cfg.command not in ("sweep", "plot"):
        reports.atomic_write(cfg.out, text)


def _mu2_and_report(g, cfg: RunConfig):
    pair = spectral.mu2_pair(g)
    rep = hotspots.hotspot_sets(g, pair, directions=cfg.directions, seed=cfg.seed)
    return pair, rep


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    started = time.time()
    g, name = _load_source(cfg)
    pairs = spectral.eigenvalues(g, cfg.k, backend=cfg.backend, h=cfg.h)
    report = Report(cfg, __version__)
    report.add("graph", reports.graph_lines(g, name))
    report.add("spectrum", reports.spectrum_lines(pairs))
    lines = ["pair_index edge A B k"]
    for p in pairs:
        for f in p.basis:
            for t in f.traces:
                lines.append(f"{p.index_range[0]} {t.edge} {t.A!r} {t.B!r} {t.k!r}")
    report.add("eigenfunctions", lines)
    _emit(report, cfg, started)
    return 0


def cmd_hotspots(cfg: RunConfig) -> int:
    started = time.time()
    g, name = _load_source(cfg)
    pair, hrep = _mu2_and_report(g, cfg)
    outcomes = [hotspots.verify_location(g, hrep)]
    for f in pair.basis:
        outcomes.append(hotspots.verify_no_disconnect(g, f))
    report = Report(cfg, __version__)
    report.add("graph", reports.graph_lines(g, name))
    report.add("spectrum", reports.spectrum_lines(spectral.eigenvalues(g, max(cfg.k, 3))))
    report.add("hotspots", reports.hotspot_lines(hrep))
    report.add("verifiers", reports.verifier_lines(outcomes))
    if cfg.out and cfg.fmt == "csv":
        rows = []
        for comps in (hrep.m_components, hrep.m_loc_components):
            for c in comps:
                for off in sorted({c.lo, c.hi}):
                    rows.append([c.edge, off, c.value, c.kind])
        reports.write_csv(cfg.out, ["edge", "offset", "value", "kind"], rows)
    _emit(report, cfg, started)
    return 0 if all(o.passed for o in outcomes) else 1


def cmd_verify(cfg: RunConfig) -> int:
    started = time.time()
    g, name = _load_source(cfg)
    outcomes = []
    failed = False
    for check in cfg.checks or ("location", "no-disconnect"):
        try:
            outcomes.extend(_run_check(g, check, cfg))
        except (NotAStar, InapplicableCheck) as exc:
            outcomes.append(
                hotspots.VerifierOutcome(
                    theorem=check, passed=True, details=f"inapplicable: {exc}"
                )
            )
    failed = any(not o.passed for o in outcomes)
    report = Report(cfg, __version__)
    report.add("graph", reports.graph_lines(g, name))
    report.add("verifiers", reports.verifier_lines(outcomes))
    _emit(report, cfg, started)
    return 1 if failed else 0


def _run_check(g, check: str, cfg: RunConfig):
    if check in ("location", "tree-boundary"):
        pair, hrep = _mu2_and_report(g, cfg)
        out = hotspots.verify_location(g, hrep)
        if check == "tree-boundary":
            from .graphs import betti

            if betti(g) != 0:
                raise InapplicableCheck("tree-boundary needs a tree")
            out = hotspots.VerifierOutcome(
                theorem="tree-boundary", passed=out.passed,
                witnesses=out.witnesses, tolerances=out.tolerances,
                details=out.details,
            )
        return [out]
    if check == "no-disconnect":
        pair = spectral.mu2_pair(g)
        return [hotspots.verify_no_disconnect(g, f) for f in pair.basis]
    if check == "star-diameter":
        return [hotspots.star_diameter_check(g, seed=cfg.seed)]
    raise ValidationError(f"unknown check {check!r}")


def cmd_reproduce(cfg: RunConfig) -> int:
    started = time.time()
    if cfg.example is None:
        raise ValidationError("reproduce needs --example ID")
    g = catalog.build_example(cfg.example, **cfg.params)
    facts, extra = _facts_for(cfg.example, cfg.params, g, cfg)
    report = Report(cfg, __version__)
    report.add("graph", reports.graph_lines(g, cfg.example))
    for name, lines in extra:
        report.add(name, lines)
    report.add("facts", reports.facts_lines(facts))
    _emit(report, cfg, started)
    return 0 if all(ok for _, _, _, ok in facts) else 1


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _facts_for(example: str, params: dict, g, cfg: RunConfig):
    facts: list[tuple[str, str, str, bool]] = []
    extra: list[tuple[str, list[str]]] = []

    def fact(name, expected, computed, ok):
        facts.append((name, expected, computed, bool(ok)))

    def rel_ok(a, b, tol):
        return abs(a - b) <= tol * max(1.0, abs(b))

    if example in ("pumpkin_on_stick", "pumpkin_necklace", "fig_m3"):
        pairs = spectral.eigenvalues(g, 3)
        extra.append(("spectrum", reports.spectrum_lines(pairs)))
        fact("builder_only_no_claims", "-", "-", True)
        return facts, extra

    pairs = spectral.eigenvalues(g, 3)
    pair = pairs[1]
    extra.append(("spectrum", reports.spectrum_lines(pairs)))

    if example == "path":
        L = g.total_length
        fact("mu2", _fmt(math.pi**2 / L**2), _fmt(pair.mu),
             rel_ok(pair.mu, math.pi**2 / L**2, 1e-9))
        gpts, _ = hotspots.extrema_single(pair.basis[0])
        bnd = boundary(g).vertices
        fact("extrema_at_endpoints", "2", str(len(gpts)),
             len(gpts) == 2 and all(g.point_vertex(p.location) in bnd for p in gpts))
        r = hotspots.ratio_of_function(g, pair.basis[0])
        fact("distance_ratio", "1", _fmt(r), abs(r - 1.0) <= 1e-9)
    elif example == "cycle":
        L = g.total_length
        fact("mu2", _fmt(4 * math.pi**2 / L**2), _fmt(pair.mu),
             rel_ok(pair.mu, 4 * math.pi**2 / L**2, 1e-9))
        fact("multiplicity", "2", str(pair.multiplicity), pair.multiplicity == 2)
        counts = [len(hotspots.extrema_single(f)[1]) for f in pair.basis]
        fact("extrema_per_eigenfunction", "2", str(counts), all(c == 2 for c in counts))
    elif example == "pumpkin":
        E = len(g.edges)
        ell = g.lengths[0]
        equilateral = all(abs(L - ell) < 1e-12 for L in g.lengths)
        if equilateral:
            fact("mu2", _fmt(math.pi**2 / ell**2), _fmt(pair.mu),
                 rel_ok(pair.mu, math.pi**2 / ell**2, 1e-9))
            fact("multiplicity", str(E), str(pair.multiplicity), pair.multiplicity == E)
            hrep = hotspots.hotspot_sets(g, pair, directions=cfg.directions or 720, seed=cfg.seed)
            cov = [hrep.covered_fraction(e.id) for e in g.edges]
            fact("edges_fully_covered", "1.0",
                 ",".join(_fmt(c) for c in cov), all(c > 1 - 1e-9 for c in cov))
    elif example == "star":
        E = len(g.edges)
        ell = g.lengths[0]
        if all(abs(L - ell) < 1e-12 for L in g.lengths):
            fact("mu2", _fmt(math.pi**2 / (4 * ell**2)), _fmt(pair.mu),
                 rel_ok(pair.mu, math.pi**2 / (4 * ell**2), 1e-9))
            fact("multiplicity", str(E - 1), str(pair.multiplicity),
                 pair.multiplicity == E - 1)
        out = hotspots.star_diameter_check(g, seed=cfg.seed)
        fact("star_diameter_ratio_1", "pass", "pass" if out.passed else "FAIL", out.passed)
    elif example in ("flower", "figure8"):
        hrep = hotspots.hotspot_sets(g, pair, directions=cfg.directions, seed=cfg.seed)
        mids = []
        ok = True
        for c in hrep.m_loc_components:
            mid = g.length(c.edge) / 2.0
            for off in {c.lo, c.hi}:
                mids.append(off)
                ok = ok and abs(off - mid) <= 1e-8
        fact("extrema_at_petal_midpoints", "all", f"{len(mids)} checked", ok)
        out = hotspots.star_diameter_check(g, seed=cfg.seed)
        fact("distance_equals_diameter", "pass", "pass" if out.passed else "FAIL", out.passed)
    elif example == "complete":
        n = len(g.vertices)
        fact("multiplicity", str(n - 1), str(pair.multiplicity), pair.multiplicity == n - 1)
        psi = catalog.complete_symmetric_eigenfunction(g, pair)
        gpts, lpts = hotspots.extrema_single(psi)
        n_far = (n - 1) * (n - 2) // 2
        maxima = [p for p in lpts if p.kind == "max"]
        minima = [p for p in lpts if p.kind == "min"]
        ok = (
            len(maxima) == 1
            and g.point_vertex(maxima[0].location) == g.vertices[0]
            and len(minima) == n_far
            and all(
                abs(p.location.offset - g.length(p.location.edge) / 2) <= 1e-8
                for p in minima
            )
        )
        fact("lemma_symmetric_extrema", f"max@v0+{n_far}midpoints",
             f"{len(maxima)}max,{len(minima)}min", ok)
    elif example == "lasso":
        fact("mu2_simple", "1", str(pair.multiplicity), pair.multiplicity == 1)
        gpts, _ = hotspots.extrema_single(pair.basis[0])
        locs = {(p.location.edge, round(p.location.offset, 8)) for p in gpts}
        expect = {("loop", round(g.length("loop") / 2, 8)), ("tail", round(g.length("tail"), 8))}
        fact("extrema_leaf_and_loop_midpoint", str(sorted(expect)), str(sorted(locs)),
             locs == expect)
        out = hotspots.verify_no_disconnect(g, pair.basis[0])
        fact("no_disconnect", "pass", "pass" if out.passed else "FAIL", out.passed)
    elif example == "perturbed_figure8":
        fact("mu2", "1", _fmt(pair.mu), abs(pair.mu - 1.0) <= 1e-8)
        hrep = hotspots.hotspot_sets(g, pair, directions=cfg.directions, seed=cfg.seed)
        bnd = boundary(g).vertices
        on_b = [p for p in hrep.m_points() + hrep.m_loc_points()
                if g.point_vertex(p) in bnd]
        fact("M_avoids_boundary", "0", str(len(on_b)), not on_b)
        out = hotspots.verify_location(g, hrep)
        fact("location_theorem", "pass", "pass" if out.passed else "FAIL", out.passed)
    elif example == "loop_dumbbell":
        fact("mu2_simple", "1", str(pair.multiplicity), pair.multiplicity == 1)
        gpts, _ = hotspots.extrema_single(pair.basis[0])
        ok = len(gpts) == 2 and all(
            p.location.edge in ("loop_a", "loop_b")
            and abs(p.location.offset - g.length(p.location.edge) / 2) <= 1e-8
            for p in gpts
        )
        fact("extrema_at_loop_midpoints", "2", str(len(gpts)), ok)
    elif example == "krpamm_tree":
        eps = float(params.get("eps", 0.05))
        m = int(params.get("m", 5))
        prs = spectral.eigenvalues(g, 4)
        mu_pi2 = [p for p in prs if abs(p.mu - math.pi**2) <= 1e-8 * math.pi**2]
        fact("pi2_in_spectrum", "mult 3",
             f"mult {mu_pi2[0].multiplicity}" if mu_pi2 else "absent",
             bool(mu_pi2) and mu_pi2[0].multiplicity == 3)
        d = diameter(g)
        fact("diameter", "1", _fmt(d), abs(d - 1.0) <= 1e-12)
        psi = catalog.krpamm_eigenfunction(g, eps, m)
        r = hotspots.ratio_of_function(g, psi)
        expect = catalog.krpamm_ratio(eps, m)
        fact("extrema_distance_ratio", _fmt(expect), _fmt(r), abs(r - expect) <= 1e-6)
    elif example == "n_star_long_short":
        n = int(params.get("n", 5))
        fact("mu2_simple", "1", str(pair.multiplicity), pair.multiplicity == 1)
        gpts, lpts = hotspots.extrema_single(pair.basis[0])
        fact("M_size", str(n), str(len(gpts)), len(gpts) == n)
        fact("M_loc_size", str(n), str(len(lpts)), len(lpts) == n)
    else:
        fact("no_facts_table", "-", "-", True)
    return facts, extra


def cmd_sweep(cfg: RunConfig) -> int:
    started = time.time()
    g, name = _load_source(cfg)
    if cfg.edge is None or not cfg.lengths:
        raise ValidationError("sweep needs --edge and --lengths")
    g.length(cfg.edge)  # validate
    positive = [x for x in cfg.lengths if x > 0]
    to_zero = any(x == 0 for x in cfg.lengths)
    if len(positive) + int(to_zero) != len(cfg.lengths) or not positive:
        raise ValidationError("lengths must be positive, with at most a trailing 0")

    family = None
    limit_rows = {}
    if to_zero:
        fixed = {e.id: L for e, L in zip(g.edges, g.lengths) if e.id != cfg.edge}
        family = catalog.LimitFamily(
            topology=g.graph,
            unit_edges=tuple(i for i in g.edge_ids if i != cfg.edge),
            shrinking_edges=(cfg.edge,),
            name="sweep",
            fixed_lengths=fixed,
        )
        for delta, eig_err, sup_err in catalog.limit_compare(
            family, positive, index=cfg.track
        ):
            limit_rows[delta] = (eig_err, sup_err)

    rows = []
    mult_ref = None
    for L in positive:
        g2 = g.with_lengths({cfg.edge: L})
        prs = spectral.eigenvalues(g2, max(cfg.track + 1, 3))
        tracked = next(
            p for p in prs if p.index_range[0] <= cfg.track <= p.index_range[1]
        )
        if tracked.multiplicity != 1 or (mult_ref not in (None, tracked.multiplicity)):
            raise MultiplicityChange(
                f"tracked eigenvalue has multiplicity {tracked.multiplicity} at length {L}"
            )
        mult_ref = tracked.multiplicity
        mus = []
        for p in prs:
            mus.extend([p.mu] * p.multiplicity)
        gap = mus[2] - mus[1]
        gpts, _ = hotspots.extrema_single(tracked.basis[0])
        locs = ";".join(
            f"{p.location.edge}:{p.location.offset!r}:{p.kind}" for p in gpts
        )
        row = [L, tracked.mu, gap, locs]
        if to_zero:
            eig_err, sup_err = limit_rows[L]
            row += [eig_err, sup_err]
        rows.append(row)

    header = ["length", "mu", "gap", "hotspot_locations"]
    if to_zero:
        header += ["eig_err", "supnorm_err"]
    report = Report(cfg, __version__)
    report.add("graph", reports.graph_lines(g, name))
    report.add("sweep", [" ".join(header)] + [" ".join(
        repr(x) if isinstance(x, float) else str(x) for x in row) for row in rows])
    if cfg.out:
        reports.write_csv(cfg.out, header, rows)
    _emit(report, cfg, started)
    return 0


def cmd_plot(cfg: RunConfig) -> int:
    started = time.time()
    from .plotting import plot_eigenfunction

    g, name = _load_source(cfg)
    if cfg.index < 2:
        raise ValidationError("plot index must be >= 2 (nonconstant eigenfunction)")
    prs = spectral.eigenvalues(g, cfg.index)
    target = next(
        (p for p in prs if p.index_range[0] <= cfg.index <= p.index_range[1]), None
    )
    if target is None:
        raise ValidationError(f"no eigenpair at index {cfg.index}")
    f = target.basis[0]
    hrep = None
    if target.index_range[0] == 2:
        hrep = hotspots.hotspot_sets(g, target, directions=cfg.directions, seed=cfg.seed)
    out = cfg.out or f"{name.replace('.json', '')}_mu{cfg.index}.svg"
    plot_eigenfunction(g, f, hrep, out, seed=cfg.seed,
                       title=f"{name}: mu_{cfg.index} = {target.mu:.6g}")
    report = Report(cfg, __version__)
    report.add("plot", [f"file = {out}", f"mu = {target.mu!r}",
                        f"multiplicity = {target.multiplicity}"])
    _emit(report, cfg, started)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qghot", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("solve", "hotspots", "verify", "reproduce", "sweep", "plot"):
        p = sub.add_parser(name)
        p.add_argument("example_pos", nargs="?", default=None,
                       help="example id (shorthand for --example)")
        p.add_argument("--graph", default=None)
        p.add_argument("--example", default=None)
        p.add_argument("--param", action="append", default=[])
        p.add_argument("--k", type=int, default=6)
        p.add_argument("--backend", choices=("secular", "fem"), default="secular")
        p.add_argument("--h", type=float, default=1e-3)
        p.add_argument("--directions", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", dest="fmt", choices=("report", "csv"), default="report")
        if name == "verify":
            p.add_argument("--checks", default="")
        if name == "sweep":
            p.add_argument("--edge", default=None)
            p.add_argument("--lengths", default="")
            p.add_argument("--track", type=int, default=2)
        if name == "plot":
            p.add_argument("--index", type=int, default=2)
    return ap


DEFAULT_TOL = 1e-9


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    tol = float(os.environ.get("QGHOT_TOL", DEFAULT_TOL))
    spectral.TAU_EIG = tol
    try:
        cfg = RunConfig(
            command=args.command,
            graph=args.graph,
            example=args.example or args.example_pos,
            params=_parse_params(args.param),
            k=args.k,
            backend=args.backend,
            h=args.h,
            directions=args.directions,
            seed=args.seed,
            out=args.out,
            fmt=args.fmt,
            tol=tol,
            checks=tuple(x for x in getattr(args, "checks", "").split(",") if x),
            edge=getattr(args, "edge", None),
            lengths=tuple(
                float(x) for x in getattr(args, "lengths", "").split(",") if x
            ),
            track=getattr(args, "track", 2),
            index=getattr(args, "index", 2),
        )
        handler = {
            "solve": cmd_solve,
            "hotspots": cmd_hotspots,
            "verify": cmd_verify,
            "reproduce": cmd_reproduce,
            "sweep": cmd_sweep,
            "plot": cmd_plot,
        }[cfg.command]
        return handler(cfg)
    except (ValidationError, UnknownExample) as exc:
        print(f"qghot: input error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"qghot: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
