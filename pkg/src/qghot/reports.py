"""Report and CSV emission for the command-line front end.

Reports are a line-oriented text format with a schema version header,
bracketed sections, and space-separated tables.  Lines starting with '#'
are comments (timing lives there); a report replayed from its embedded
config is byte-identical on the non-comment lines.  All floats are printed
with repr (shortest round-trip), so output is deterministic given
(config, seed, tool version).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA = "qghot-report 1"


@dataclass
class RunConfig:
    command: str
    graph: str | None = None          # path of a graph description file
    example: str | None = None        # example id
    params: dict = field(default_factory=dict)
    k: int = 6
    backend: str = "secular"
    h: float = 1e-3
    directions: int | None = None
    seed: int = 0
    out: str | None = None
    fmt: str = "report"
    tol: float = 1e-9
    checks: tuple[str, ...] = ()
    edge: str | None = None           # sweep
    lengths: tuple[float, ...] = ()   # sweep ladder
    track: int = 2                    # sweep tracked eigenvalue index
    index: int = 2                    # plot eigenfunction index

    def source_label(self) -> str:
        if self.example is not None:
            return f"example:{self.example}"
        return f"file:{self.graph}"

    def config_lines(self) -> list[str]:
        items = [
            ("command", self.command),
            ("source", self.source_label()),
            ("params", ",".join(f"{k}={v!r}" for k, v in sorted(self.params.items())) or "-"),
            ("k", self.k),
            ("backend", self.backend),
            ("h", repr(self.h)),
            ("directions", self.directions if self.directions is not None else "default"),
            ("seed", self.seed),
            ("tol", repr(self.tol)),
        ]
        if self.checks:
            items.append(("checks", ",".join(self.checks)))
        if self.edge is not None:
            items.append(("edge", self.edge))
            items.append(("lengths", ",".join(repr(x) for x in self.lengths)))
            items.append(("track", self.track))
        if self.command == "plot":
            items.append(("index", self.index))
        return [f"{k} = {v}" for k, v in items]


class Report:
    """Accumulates sections and renders the stable text format."""

    def __init__(self, config: RunConfig, tool_version: str):
        self.config = config
        self.tool_version = tool_version
        self.sections: list[tuple[str, list[str]]] = []
        self.timing_ms: float | None = None

    def add(self, name: str, lines: list[str]) -> None:
        self.sections.append((name, list(lines)))

    def render(self) -> str:
        out = [SCHEMA, f"tool = qghot {self.tool_version}"]
        if self.timing_ms is not None:
            out.append(f"# timing_ms: {self.timing_ms:.1f}")
        out.append("[config]")
        out.extend(self.config.config_lines())
        for name, lines in self.sections:
            out.append(f"[{name}]")
            out.extend(lines)
        out.append("[end]")
        return "\n".join(out) + "\n"


def spectrum_lines(pairs) -> list[str]:
    lines = ["index mu k multiplicity residual"]
    for p in pairs:
        lines.append(
            f"{p.index_range[0]} {p.mu!r} {p.k!r} {p.multiplicity} {p.residual!r}"
        )
    if len(pairs) >= 2:
        mus = []
        for p in pairs:
            mus.extend([p.mu] * p.multiplicity)
        if len(mus) >= 3:
            lines.append(f"gap_mu3_mu2 = {mus[2] - mus[1]!r}")
        lines.append(f"mu2_multiplicity = {pairs[1].multiplicity}")
    return lines


def graph_lines(g, name: str) -> list[str]:
    from .graphs import betti

    return [
        f"name = {name}",
        f"vertices = {len(g.vertices)}",
        f"edges = {len(g.edges)}",
        f"total_length = {g.total_length!r}",
        f"betti = {betti(g)}",
    ]


def hotspot_lines(report) -> list[str]:
    lines = ["set edge lo hi kind value"]
    for tag, comps in (("M", report.m_components), ("M_loc", report.m_loc_components)):
        for c in comps:
            lines.append(f"{tag} {c.edge} {c.lo!r} {c.hi!r} {c.kind} {c.value!r}")
    lines.append(
        "meta: directions=%d method=%s seed=%d closure_merges=%d "
        "subset_certified=%s equality_claimed=%s"
        % (
            report.n_directions,
            report.method,
            report.seed,
            report.closure_merges,
            report.subset_certified,
            report.equality_claimed,
        )
    )
    return lines


def verifier_lines(outcomes) -> list[str]:
    lines = ["check result details"]
    for o in outcomes:
        status = "pass" if o.passed else ("inapplicable" if o.details.startswith("inapplicable") else "FAIL")
        lines.append(f"{o.theorem} {status} {o.details or '-'}")
    return lines


def facts_lines(facts: list[tuple[str, str, str, bool]]) -> list[str]:
    lines = ["fact expected computed result"]
    for name, expected, computed, ok in facts:
        lines.append(f"{name} {expected} {computed} {'PASS' if ok else 'FAIL'}")
    return lines


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    atomic_write(path, "\n".join(lines) + "\n")


def strip_comments(text: str) -> str:
    """The byte-identity normal form: comment lines removed."""
    return "\n".join(
        line for line in text.splitlines() if not line.startswith("#")
    ) + "\n"
