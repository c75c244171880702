"""Cliques, cocliques, intersection density and EKR-type properties.

Everything here works on a :class:`DerangementGraph`. A coclique is a set of
pairwise intersecting permutations; the canonical ones are the sets of all
elements sending a point ``a`` to a point ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from dergraph.errors import GroupError, IntransitiveGroupError, InvariantViolation
from dergraph.graph import (
    DerangementGraph,
    JoinDecomposition,
    build_graph,
    join_decomposition,
    mask_of,
)
from dergraph.perms import (
    Permutation,
    PermutationGroup,
    find_regular_cycle,
    is_transitive,
    stabilizer_indices,
    subgroup_closure_indices,
    transporter_indices,
)
from dergraph.search import enumerate_cliques_of_size, max_clique_bitset
from dergraph.span import RationalSpan

DEFAULT_BUDGET = 10**8
DEFAULT_ENUM_CAP = 10_000
DEFAULT_ENUM_BUDGET = 2_000_000

Classification = Literal["canonical", "union-of-canonical-span", "other", "indeterminate"]


@dataclass(frozen=True)
class SolverResult:
    size: int
    witness: tuple[int, ...]
    exact: bool
    lower: int
    upper: int
    method: str = "branch-and-bound"


@dataclass(frozen=True)
class CocliqueCertificate:
    vertices: tuple[int, ...]
    size: int
    classification: Classification


@dataclass(frozen=True)
class DensityRecord:
    degree: int
    order: int
    alpha: int
    omega: int
    exact: bool
    alpha_lower: int
    alpha_upper: int
    omega_exact: bool = True
    rho: Fraction | None = None

    def __post_init__(self):
        if self.exact and self.rho != Fraction(self.degree * self.alpha, self.order):
            raise InvariantViolation("rho must equal degree * alpha / |G|")

    @property
    def rho_bounds(self) -> tuple[Fraction, Fraction]:
        return (
            Fraction(self.degree * self.alpha_lower, self.order),
            Fraction(self.degree * self.alpha_upper, self.order),
        )

    def violations(self) -> list[str]:
        """Names of violated density invariants (empty when all hold)."""
        out = []
        if self.alpha_lower * self.omega > self.order:
            out.append("clique-coclique")
        if self.exact:
            if self.rho < 1:
                out.append("density-lower-bound")
            if self.degree >= 3 and self.rho > Fraction(self.degree, 3):
                out.append("density-upper-bound")
            if self.degree >= 2 and self.rho >= self.degree:
                out.append("density-below-degree")
        return out


def _check_clique(rows, vs):
    for a in vs:
        if mask_of(b for b in vs if b != a) & ~rows[a]:
            raise InvariantViolation("clique witness has a non-edge")


def _check_coclique(rows, vs):
    m = mask_of(vs)
    for a in vs:
        if rows[a] & m:
            raise InvariantViolation("coclique witness has an edge")


def _cycle_clique(G: PermutationGroup) -> list[int]:
    c = find_regular_cycle(G)
    if c is None:
        return []
    members = subgroup_closure_indices(G, [G.index(c)])
    return members


def max_clique(graph: DerangementGraph, budget: int = DEFAULT_BUDGET) -> SolverResult:
    """Maximum clique, seeded by the cyclic group of an ``n``-cycle when one exists.

    Members of a clique disagree pairwise on point 0, so ``n`` caps the
    clique number and a regular cyclic subgroup settles it immediately.
    """
    G = graph.group
    cap = min(G.degree, graph.num_vertices)
    seed = _cycle_clique(G)
    res = max_clique_bitset(graph.rows, forced=(), initial=seed, stop_at=cap, budget=budget)
    _check_clique(graph.rows, res.vertices)
    return SolverResult(res.size, res.vertices, res.exact, res.size, res.upper)


def _coclique_in(rows, initial=(), clique_cap=None, budget=DEFAULT_BUDGET, bounds=True):
    """Maximum coclique of a vertex-transitive graph through vertex 0."""
    m = len(rows)
    full = (1 << m) - 1
    comp = [full ^ r ^ (1 << i) for i, r in enumerate(rows)]
    stop_at = None
    if bounds:
        # clique-coclique bound for vertex-transitive graphs
        om = max_clique_bitset(rows, stop_at=clique_cap, budget=budget)
        stop_at = m // om.size
    res = max_clique_bitset(
        comp,
        candidates=comp[0],
        forced=[0],
        initial=initial if bounds else (),
        stop_at=stop_at,
        budget=budget,
    )
    upper = res.upper if stop_at is None else min(res.upper, stop_at)
    return SolverResult(res.size, res.vertices, res.exact, res.size, upper)


def max_coclique(
    graph: DerangementGraph,
    budget: int = DEFAULT_BUDGET,
    structural: bool = True,
    bounds: bool = True,
    decomposition: JoinDecomposition | None = None,
) -> SolverResult:
    """Maximum coclique (largest intersecting family).

    With ``structural`` the join structure is used first: a complete
    multipartite graph returns a part, and a non-trivial join recurses into
    the part holding the identity. Otherwise a branch-and-bound runs with the
    identity forced into the solution, which loses nothing because the graph
    is vertex-transitive. ``bounds`` enables the stabilizer incumbent and the
    clique-coclique stopping rule.
    """
    G = graph.group
    rows = graph.rows
    if structural:
        dec = decomposition or join_decomposition(G, graph)
        if dec.complete_multipartite:
            w = tuple(dec.h_g)
            _check_coclique(rows, w)
            return SolverResult(len(w), w, True, len(w), len(w), "multipartite")
        if dec.kind == "nontrivial-join":
            h = list(dec.h_g)
            sub = graph.induced(h)
            pos = {v: k for k, v in enumerate(h)}
            init = [pos[v] for v in stabilizer_indices(G, 0)]
            r = _coclique_in(sub, init, min(G.degree, len(h)), budget, bounds)
            w = tuple(sorted(h[k] for k in r.witness))
            _check_coclique(rows, w)
            return SolverResult(r.size, w, r.exact, r.lower, r.upper, "join")
    init = stabilizer_indices(G, 0)
    r = _coclique_in(rows, init, min(G.degree, len(rows)), budget, bounds)
    _check_coclique(rows, r.witness)
    return r


def intersection_density(
    G: PermutationGroup,
    graph: DerangementGraph,
    budget: int = DEFAULT_BUDGET,
    decomposition: JoinDecomposition | None = None,
    structural: bool = True,
) -> DensityRecord:
    if not is_transitive(G):
        raise IntransitiveGroupError("intersection density is computed for transitive groups only")
    a = max_coclique(graph, budget, structural=structural, decomposition=decomposition)
    w = max_clique(graph, budget)
    rho = Fraction(G.degree * a.size, G.order) if a.exact else None
    upper = a.upper
    if not a.exact:
        upper = min(upper, G.order // w.size)
    return DensityRecord(G.degree, G.order, a.size, w.size, a.exact, a.lower, upper, w.exact, rho)


def density_via_h_g_part(
    G: PermutationGroup,
    graph: DerangementGraph,
    decomposition: JoinDecomposition,
    budget: int = DEFAULT_BUDGET,
) -> Fraction | None:
    """Density from the coclique number of the subgraph induced on ``H_G``."""
    h = list(decomposition.h_g)
    r = _coclique_in(graph.induced(h), budget=budget, bounds=False)
    if not r.exact:
        return None
    return Fraction(G.degree * r.size, G.order)


def canonical_cocliques(G: PermutationGroup, graph: DerangementGraph | None = None) -> list[tuple[int, ...]]:
    """The ``n**2`` sets of elements mapping ``a`` to ``b``, ordered by ``(a, b)``."""
    if not is_transitive(G):
        raise IntransitiveGroupError("canonical cocliques need a transitive group")
    n = G.degree
    out = []
    for a in range(n):
        for b in range(n):
            s = tuple(transporter_indices(G, a, b))
            if len(s) * n != G.order:
                raise InvariantViolation("canonical set has the wrong size")
            if graph is not None:
                _check_coclique(graph.rows, s)
            out.append(s)
    return out


@dataclass(frozen=True)
class EKRFlags:
    ekr: bool | None
    strict_ekr: bool | None
    ekr_module: bool | None
    certificates: tuple[CocliqueCertificate, ...] = field(default=(), repr=False)
    enumeration_complete: bool = False


def ekr_flags(
    G: PermutationGroup,
    graph: DerangementGraph,
    density: DensityRecord | None = None,
    budget: int = DEFAULT_BUDGET,
    enum_cap: int = DEFAULT_ENUM_CAP,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> EKRFlags:
    """EKR, strict-EKR and EKR-module flags; ``None`` means indeterminate.

    Only maximum cocliques through the identity are enumerated. Right
    multiplication is a graph automorphism that permutes the canonical sets,
    so both canonicity and span membership transfer to all translates.
    """
    if density is None:
        density = intersection_density(G, graph, budget)
    if not density.exact:
        return EKRFlags(None, None, None)
    n, order, alpha = G.degree, G.order, density.alpha
    ekr = alpha * n == order

    rows = graph.rows
    full = graph.full_mask
    comp = [full ^ r ^ (1 << i) for i, r in enumerate(rows)]
    enum = enumerate_cliques_of_size(
        comp, alpha, candidates=comp[0], forced=[0], cap=enum_cap, budget=enum_budget
    )
    canon = canonical_cocliques(G)
    canon_sets = {frozenset(s) for s in canon}
    span = RationalSpan(canon)

    certs = []
    all_canonical = True
    all_in_span = True
    for c in enum.cliques:
        _check_coclique(rows, c)
        if frozenset(c) in canon_sets:
            kind = "canonical"
        elif span.contains(c):
            kind = "union-of-canonical-span"
            all_canonical = False
        else:
            kind = "other"
            all_canonical = False
            all_in_span = False
        certs.append(CocliqueCertificate(c, len(c), kind))

    if not ekr:
        strict = False
    elif not all_canonical:
        strict = False
    else:
        strict = True if enum.complete else None
    if not all_in_span:
        module = False
    else:
        module = True if enum.complete else None
    return EKRFlags(ekr, strict, module, tuple(certs), enum.complete)


def classify_coclique(G: PermutationGroup, vertices: Sequence[int]) -> Classification:
    canon = canonical_cocliques(G)
    if frozenset(vertices) in {frozenset(s) for s in canon}:
        return "canonical"
    if RationalSpan(canon).contains(vertices):
        return "union-of-canonical-span"
    return "other"


def is_intersecting(graph: DerangementGraph, vertices: Sequence[int]) -> bool:
    m = mask_of(vertices)
    return not any(graph.rows[v] & m for v in vertices)


def subgroup_intersecting_check(graph: DerangementGraph, members: Sequence[int]) -> tuple[bool, bool]:
    """``(intersecting, derangement_free)`` for a subgroup; the two must agree."""
    inter = is_intersecting(graph, members)
    free = not any(graph.derangement_flags[i] for i in members)
    return inter, free


def conjugacy_closure(G: PermutationGroup, members: Sequence[int]) -> set[int]:
    """Indices of all conjugates of the given elements."""
    seen = set(int(i) for i in members)
    frontier = list(seen)
    gens = [np.asarray(g.images, dtype=G.table.dtype) for g in G.generators]
    invs = [np.argsort(g) for g in gens]
    while frontier:
        rows = G.table[frontier]
        new = []
        for g, gi in zip(gens, invs):
            for i in G.indices_of(g[rows[:, gi]]):
                i = int(i)
                if i not in seen:
                    seen.add(i)
                    new.append(i)
        frontier = new
    return seen


def check_normal_covering(G: PermutationGroup, subgroups: Sequence[Sequence[Permutation]]) -> bool:
    """Whether the conjugates of the given proper subgroups cover ``G``."""
    covered: set[int] = set()
    for sub in subgroups:
        try:
            idx = sorted({G.index(p) for p in sub})
        except KeyError:
            raise GroupError("subgroup element is not in G") from None
        if 0 not in idx or subgroup_closure_indices(G, idx) != idx:
            raise GroupError("input is not a subgroup")
        if len(idx) == G.order:
            raise GroupError("normal coverings use proper subgroups")
        covered |= conjugacy_closure(G, idx)
    return len(covered) == G.order


def density_monotonicity_check(
    G: PermutationGroup,
    H: PermutationGroup,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Whether ``rho(G) <= rho(H)`` for a transitive subgroup ``H`` of ``G``."""
    if H.degree != G.degree or any(h not in G for h in H.elements):
        raise GroupError("H is not a subgroup of G")
    if not (is_transitive(G) and is_transitive(H)):
        raise IntransitiveGroupError("both groups must be transitive")
    dg = intersection_density(G, build_graph(G), budget)
    dh = intersection_density(H, build_graph(H), budget)
    if not (dg.exact and dh.exact):
        raise ValueError("densities could not be computed exactly within the budget")
    return dg.rho <= dh.rho
