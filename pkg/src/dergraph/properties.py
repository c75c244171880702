"""Property suite run by the batch command on every analysed group.

Each check returns a list of :class:`Violation`; an empty list means the
property held. Degree-2 groups are allowed a bipartite graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dergraph.extremal import density_via_h_g_part, subgroup_intersecting_check
from dergraph.graph import complement_components, is_normal, mask_of
from dergraph.perms import (
    block_system,
    is_primitive,
    orbits_of,
    stabilizer_indices,
    subgroup_closure_indices,
    find_regular_cycle,
)
from dergraph.report import Analysis, format_rho


@dataclass(frozen=True, order=True)
class Violation:
    group: str
    prop: str
    detail: str

    def __str__(self):
        return f"{self.group}: {self.prop}: {self.detail}"


PROPERTIES = (
    "analysis-consistency",
    "derangement-closure",
    "no-bipartite",
    "triangle",
    "density-lower-bound",
    "density-upper-bound",
    "density-below-degree",
    "clique-coclique",
    "prime-degree",
    "join-complement",
    "hg-structure",
    "join-imprimitive",
    "join-density-paths",
    "subgroup-intersecting",
    "expected-values",
)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def check_properties(a: Analysis, expected: dict | None = None) -> list[Violation]:
    name = a.report.name
    out: list[Violation] = []

    def bad(prop, detail):
        out.append(Violation(name, prop, detail))

    G, graph, rep = a.group, a.graph, a.report
    n = G.degree
    rows = graph.rows
    transitive = rep.transitive

    for e in a.errors:
        bad("analysis-consistency", e)

    # connection set: inverse- and conjugation-closed, constant valency
    flags = np.array(graph.derangement_flags)
    d_idx = np.flatnonzero(flags)
    inv = G.indices_of(np.argsort(G.table[d_idx], axis=1))
    if not flags[inv].all():
        bad("derangement-closure", "derangements not closed under inverse")
    for g in G.generators:
        ga = np.asarray(g.images, dtype=G.table.dtype)
        conj = G.indices_of(ga[G.table[d_idx][:, np.argsort(ga)]])
        if not flags[conj].all():
            bad("derangement-closure", "derangements not closed under conjugation")
            break
    if any(r.bit_count() != graph.derangement_count for r in rows):
        bad("derangement-closure", "vertex degrees differ from the number of derangements")

    if transitive and n >= 3:
        if rep.bipartite:
            bad("no-bipartite", f"bipartite derangement graph on degree {n}")
        t = rep.triangle_witness
        if t is None:
            bad("triangle", "no triangle found")
        elif not (graph.has_edge(t[0], t[1]) and graph.has_edge(t[1], t[2]) and graph.has_edge(t[0], t[2])):
            bad("triangle", f"witness {t} is not a triangle")

    d = a.density
    if d is not None:
        for v in d.violations():
            bad(v, f"alpha={d.alpha} omega={d.omega} rho={format_rho(d.rho)} n={n}")
        if _is_prime(n) and d.exact:
            if d.rho != 1:
                bad("prime-degree", f"rho={format_rho(d.rho)} on prime degree {n}")
            if d.omega < n:
                bad("prime-degree", f"largest clique found has size {d.omega} < {n}")
            if find_regular_cycle(G) is None:
                bad("prime-degree", "no regular n-cycle")

    dec = a.decomposition
    if dec is not None:
        comps = complement_components(rows)
        from_group = 1 < dec.h_g_order < G.order
        from_graph = 1 < len(comps) < G.order
        if from_group != from_graph:
            bad("join-complement", f"subgroup says join={from_group}, complement says {from_graph}")

        h = list(dec.h_g)
        if dec.h_g_order < G.order and transitive:
            hs = [G.elements[i] for i in h]
            orbs = orbits_of(hs, n)
            if not is_normal(G, h):
                bad("hg-structure", "not normal")
            if len(orbs) == 1:
                bad("hg-structure", "transitive")
            if len(orbs) != dec.index:
                bad("hg-structure", f"{len(orbs)} orbits but index {dec.index}")
            for o in orbs:
                try:
                    bs = block_system(G, o)
                    if len(bs.blocks[0]) != len(o) or any(len(b) != len(o) for b in bs.blocks):
                        raise ValueError
                except ValueError:
                    bad("hg-structure", f"orbit {sorted(o)} is not a block")
                    break

        if transitive and dec.kind == "nontrivial-join" and is_primitive(G):
            bad("join-imprimitive", "non-trivial join but the group is primitive")
        if transitive and dec.complete_multipartite and is_primitive(G):
            bad("join-imprimitive", "complete multipartite but the group is primitive")

        if transitive and 1 < dec.h_g_order < G.order and d is not None and d.exact:
            rho2 = density_via_h_g_part(G, graph, dec)
            if rho2 != d.rho:
                bad("join-density-paths", f"{format_rho(d.rho)} vs {format_rho(rho2)} via the subgroup part")
            hmask = mask_of(h)
            for part in dec.parts:
                x = part[0]
                shifted = G.right_translate(h, x)
                pos = dict(zip(h, shifted))
                if sorted(shifted) != list(part):
                    bad("join-density-paths", "coset part is not a translate of the subgroup")
                    break
                if any(
                    rows[u] >> v & 1 != rows[pos[u]] >> pos[v] & 1
                    for u in h
                    for v in h
                    if hmask >> v & 1
                ):
                    bad("join-density-paths", "coset part is not a translate of the subgroup part")
                    break

        subgroups = [("H_G", h)]
        if transitive:
            subgroups.append(("stabilizer", stabilizer_indices(G, 0)))
        c = find_regular_cycle(G)
        if c is not None:
            subgroups.append(("cycle", subgroup_closure_indices(G, [G.index(c)])))
        for label, members in subgroups:
            inter, free = subgroup_intersecting_check(graph, members)
            if inter != free:
                bad("subgroup-intersecting", f"{label}: intersecting={inter}, derangement-free={free}")

    rd = rep.to_dict()
    for k, v in (expected or {}).items():
        if rd.get(k) != v:
            bad("expected-values", f"{k}: expected {v!r}, got {rd.get(k)!r}")
    return sorted(out)
