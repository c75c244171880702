"""Full per-group analysis and the StructureReport record."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from dergraph.errors import InvariantViolation
from dergraph.extremal import (
    DEFAULT_BUDGET,
    DEFAULT_ENUM_CAP,
    DensityRecord,
    EKRFlags,
    ekr_flags,
    intersection_density,
    max_clique,
    max_coclique,
)
from dergraph.graph import (
    DEFAULT_VERTEX_CAP,
    DerangementGraph,
    JoinDecomposition,
    build_graph,
    has_triangle,
    is_bipartite,
    join_decomposition,
)
from dergraph.perms import PermutationGroup, is_primitive, is_transitive

INDETERMINATE = "indeterminate"

REPORT_FIELDS = (
    "name",
    "degree",
    "order",
    "transitive",
    "primitive",
    "derangement_count",
    "h_g_order",
    "h_g_index",
    "join_kind",
    "multipartite_parts",
    "bipartite",
    "triangle_witness",
    "alpha",
    "omega",
    "rho",
    "ekr",
    "strict_ekr",
    "ekr_module",
    "exact_flags",
    "timings",
)


def format_rho(rho: Fraction | None) -> str:
    if rho is None:
        return INDETERMINATE
    return f"{rho.numerator}/{rho.denominator}"


def parse_rho(text: str) -> Fraction:
    p, q = text.split("/")
    return Fraction(int(p), int(q))


def _tri(x):
    return INDETERMINATE if x is None else x


@dataclass
class StructureReport:
    name: str
    degree: int
    order: int
    transitive: bool
    primitive: Any
    derangement_count: int
    h_g_order: Any
    h_g_index: Any
    join_kind: str
    multipartite_parts: int
    bipartite: bool
    triangle_witness: list[int] | None
    alpha: Any
    omega: Any
    rho: str
    ekr: Any
    strict_ekr: Any
    ekr_module: Any
    exact_flags: dict[str, bool]
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        d = asdict(self)
        if not timings:
            d.pop("timings")
        return d


@dataclass
class Analysis:
    """Everything computed for one group, kept for the property checks."""

    group: PermutationGroup
    graph: DerangementGraph
    report: StructureReport
    decomposition: JoinDecomposition | None = None
    density: DensityRecord | None = None
    flags: EKRFlags | None = None
    errors: list[str] = field(default_factory=list)


def analyze_group(
    G: PermutationGroup,
    name: str | None = None,
    budget: int = DEFAULT_BUDGET,
    enum_cap: int = DEFAULT_ENUM_CAP,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    graph: DerangementGraph | None = None,
) -> Analysis:
    """Run the whole pipeline: graph, decomposition, extremal values and flags.

    A failed cross-check inside one stage is recorded in ``Analysis.errors``
    and the remaining stages still run, falling back to the generic solver.
    """
    timings = {}
    clock = time.perf_counter()

    def lap(key):
        nonlocal clock
        now = time.perf_counter()
        timings[key] = round(now - clock, 6)
        clock = now

    errors = []
    transitive = is_transitive(G)
    if graph is None:
        graph = build_graph(G, vertex_cap)
    lap("graph")

    dec = None
    try:
        dec = join_decomposition(G, graph)
    except InvariantViolation as e:
        errors.append(f"decomposition: {e}")
    lap("decomposition")

    bip = is_bipartite(graph)
    tri = has_triangle(graph)
    lap("bipartite_triangle")

    density = flags = None
    alpha = omega = None
    exact = {"alpha": False, "omega": False, "strict_ekr_enumeration": False}
    try:
        if transitive:
            density = intersection_density(G, graph, budget, decomposition=dec, structural=dec is not None)
            alpha, omega = density.alpha, density.omega
            exact["alpha"], exact["omega"] = density.exact, density.omega_exact
        else:
            a = max_coclique(graph, budget, structural=False)
            w = max_clique(graph, budget)
            alpha, omega = a.size, w.size
            exact["alpha"], exact["omega"] = a.exact, w.exact
    except InvariantViolation as e:
        errors.append(f"extremal: {e}")
    lap("extremal")

    if density is not None:
        try:
            flags = ekr_flags(G, graph, density, budget, enum_cap)
            exact["strict_ekr_enumeration"] = flags.enumeration_complete
        except InvariantViolation as e:
            errors.append(f"ekr: {e}")
    lap("ekr")

    report = StructureReport(
        name=name or G.name or "group",
        degree=G.degree,
        order=G.order,
        transitive=transitive,
        primitive=is_primitive(G) if transitive else INDETERMINATE,
        derangement_count=graph.derangement_count,
        h_g_order=dec.h_g_order if dec else INDETERMINATE,
        h_g_index=dec.index if dec else INDETERMINATE,
        join_kind=dec.kind if dec else INDETERMINATE,
        multipartite_parts=dec.index if dec and dec.complete_multipartite else 0,
        bipartite=bip.bipartite,
        triangle_witness=list(tri) if tri else None,
        alpha=alpha if alpha is not None and exact["alpha"] else INDETERMINATE,
        omega=omega if omega is not None and exact["omega"] else INDETERMINATE,
        rho=format_rho(density.rho if density else None),
        ekr=_tri(flags.ekr if flags else None),
        strict_ekr=_tri(flags.strict_ekr if flags else None),
        ekr_module=_tri(flags.ekr_module if flags else None),
        exact_flags=exact,
        timings=timings,
    )
    return Analysis(G, graph, report, dec, density, flags, errors)
