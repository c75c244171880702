"""Derangement graphs of permutation groups and their join structure.

Vertices are the group elements, indexed as in ``G.elements``; ``g`` and
``h`` are adjacent when ``g * h^-1`` is a derangement, which happens exactly
when ``g`` and ``h`` disagree on every point. Rows of the adjacency matrix
are packed into Python ints (bit ``j`` of ``rows[i]`` is the edge ``i-j``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

import numpy as np

from dergraph.errors import InvariantViolation, VertexCapExceeded
from dergraph.perms import (
    Permutation,
    PermutationGroup,
    stabilizer_indices,
    subgroup_closure_indices,
)

DEFAULT_VERTEX_CAP = 4096

JoinKind = Literal["complete-graph", "nontrivial-join", "not-a-join"]


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


@dataclass(frozen=True, eq=False)
class DerangementGraph:
    group: PermutationGroup
    derangement_flags: tuple[bool, ...]
    rows: tuple[int, ...]
    derangement_count: int

    @property
    def num_vertices(self) -> int:
        return len(self.rows)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.rows)) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        return list(iter_bits(self.rows[i]))

    def complement_rows(self) -> list[int]:
        full = self.full_mask
        return [full ^ r ^ (1 << i) for i, r in enumerate(self.rows)]

    def induced(self, vertices: Sequence[int]) -> list[int]:
        """Rows of the induced subgraph, relabelled ``0..len(vertices)-1``."""
        pos = {v: k for k, v in enumerate(vertices)}
        out = []
        for v in vertices:
            r = 0
            for u in iter_bits(self.rows[v] & mask_of(vertices)):
                r |= 1 << pos[u]
            out.append(r)
        return out

    def to_matrix(self) -> np.ndarray:
        m = len(self.rows)
        nbytes = (m + 7) // 8
        packed = np.frombuffer(
            b"".join(r.to_bytes(nbytes, "little") for r in self.rows), dtype=np.uint8
        ).reshape(m, nbytes)
        return np.unpackbits(packed, axis=1, count=m, bitorder="little").astype(bool)


def derangement_set(G: PermutationGroup) -> tuple[tuple[bool, ...], int]:
    """Per-element derangement flags and their count.

    The count is cross-checked against ``|G| - |union of point stabilizers|``.
    """
    flags = np.all(G.table != np.arange(G.degree, dtype=G.table.dtype), axis=1)
    count = int(flags.sum())
    fixers: set[int] = set()
    for pt in range(G.degree):
        fixers.update(stabilizer_indices(G, pt))
    if count != G.order - len(fixers):
        raise InvariantViolation("derangement count disagrees with the union of stabilizers")
    return tuple(bool(f) for f in flags), count


def _pack_rows(adj: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(adj, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def build_graph(G: PermutationGroup, vertex_cap: int = DEFAULT_VERTEX_CAP) -> DerangementGraph:
    if G.order > vertex_cap:
        raise VertexCapExceeded(f"|G| = {G.order} exceeds the vertex cap {vertex_cap}")
    flags, count = derangement_set(G)
    t = G.table
    agree = np.zeros((G.order, G.order), dtype=bool)
    for pt in range(G.degree):
        col = t[:, pt]
        agree |= col[:, None] == col[None, :]
    rows = _pack_rows(~agree)
    graph = DerangementGraph(G, flags, rows, count)
    # row of the identity is exactly the connection set
    if graph.rows[0] != mask_of(i for i, f in enumerate(flags) if f):
        raise InvariantViolation("identity row differs from the derangement set")
    return graph


def h_g_indices(G: PermutationGroup, flags: Sequence[bool] | None = None) -> list[int]:
    """Indices of the subgroup generated by all elements fixing some point."""
    if flags is None:
        flags, _ = derangement_set(G)
    fixers = [i for i, f in enumerate(flags) if not f]
    members = subgroup_closure_indices(G, fixers)
    if not is_normal(G, members):
        raise InvariantViolation("subgroup generated by point-fixing elements is not normal")
    return members


def compute_H_G(G: PermutationGroup) -> list[Permutation]:
    return [G.elements[i] for i in h_g_indices(G)]


def is_normal(G: PermutationGroup, members: Sequence[int]) -> bool:
    rows = G.table[list(members)]
    inside = set(members)
    for g in G.generators:
        g_arr = np.asarray(g.images, dtype=G.table.dtype)
        ginv = np.argsort(g_arr)
        conj = g_arr[rows[:, ginv]]  # g^-1 h g
        if not all(int(i) in inside for i in G.indices_of(conj)):
            return False
    return True


def right_cosets(G: PermutationGroup, members: Sequence[int]) -> list[list[int]]:
    """Right cosets ``H x`` in order of their smallest element index."""
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for x in range(G.order):
        if seen[x]:
            continue
        coset = sorted(G.right_translate(members, x))
        seen[coset] = True
        out.append(coset)
    return out


def complement_components(rows: Sequence[int]) -> list[list[int]]:
    """Connected components of the complement graph, by bitset BFS."""
    m = len(rows)
    full = (1 << m) - 1
    unseen = full
    comps = []
    while unseen:
        start = (unseen & -unseen).bit_length() - 1
        comp = 1 << start
        unseen ^= comp
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                new = (full ^ rows[v]) & unseen
                if new:
                    unseen &= ~new
                    comp |= new
                    nxt.extend(iter_bits(new))
            frontier = nxt
        comps.append(list(iter_bits(comp)))
    return comps


def is_complete_multipartite_graph(rows: Sequence[int]) -> tuple[bool, int]:
    """Test the bitmap directly: complement is a disjoint union of >= 2 cliques of size >= 2.

    Returns ``(answer, number_of_parts)``.
    """
    m = len(rows)
    full = (1 << m) - 1
    comps = complement_components(rows)
    if len(comps) < 2 or any(len(c) < 2 for c in comps):
        return False, 0
    for comp in comps:
        cm = mask_of(comp)
        want = full & ~cm
        if any(rows[v] != want for v in comp):
            return False, 0
    return True, len(comps)


@dataclass(frozen=True)
class JoinDecomposition:
    h_g: tuple[int, ...]
    index: int
    parts: tuple[tuple[int, ...], ...]
    kind: JoinKind
    complete_multipartite: bool
    complement_components: int

    @property
    def h_g_order(self) -> int:
        return len(self.h_g)


def join_decomposition(G: PermutationGroup, graph: DerangementGraph) -> JoinDecomposition:
    """Classify the graph by the subgroup generated by non-derangements.

    Join structure and complete-multipartiteness are each computed twice,
    once from the group and once from the bitmap alone; any disagreement
    raises InvariantViolation.
    """
    h = h_g_indices(G, graph.derangement_flags)
    order = G.order
    index = order // len(h)
    if len(h) == 1:
        kind = "complete-graph"
    elif len(h) == order:
        kind = "not-a-join"
    else:
        kind = "nontrivial-join"
    parts = right_cosets(G, h)

    comps = complement_components(graph.rows)
    if len(comps) != index:
        raise InvariantViolation(
            f"complement has {len(comps)} components but the subgroup has index {index}"
        )

    full = graph.full_mask
    if kind == "nontrivial-join":
        for part in parts:
            outside = full & ~mask_of(part)
            if any(graph.rows[v] & outside != outside for v in part):
                raise InvariantViolation("missing edge between distinct cosets")

    h_free = not any(graph.derangement_flags[i] for i in h)
    structural = kind == "nontrivial-join" and h_free
    direct, nparts = is_complete_multipartite_graph(graph.rows)
    if structural != direct or (direct and nparts != index):
        raise InvariantViolation("structural and direct multipartite tests disagree")
    return JoinDecomposition(tuple(h), index, tuple(tuple(p) for p in parts), kind, structural, len(comps))


def has_triangle(graph: DerangementGraph) -> tuple[int, int, int] | None:
    """Lexicographically least triangle ``(i, j, k)`` with ``i < j < k``, if any."""
    rows = graph.rows
    for i, ri in enumerate(rows):
        for j in iter_bits(ri >> (i + 1)):
            j += i + 1
            common = (ri & rows[j]) >> (j + 1)
            if common:
                return i, j, j + 1 + ((common & -common).bit_length() - 1)
    return None


@dataclass(frozen=True)
class BipartiteResult:
    bipartite: bool
    coloring: tuple[int, ...] | None = None
    odd_cycle: tuple[int, ...] | None = None


def is_bipartite(graph: DerangementGraph | Sequence[int]) -> BipartiteResult:
    """BFS 2-colouring; returns the colouring or an odd cycle."""
    rows = graph.rows if isinstance(graph, DerangementGraph) else list(graph)
    m = len(rows)
    color = [-1] * m
    parent = [-1] * m
    depth = [0] * m
    masks = [0, 0]
    for root in range(m):
        if color[root] != -1:
            continue
        color[root] = 0
        masks[0] |= 1 << root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            c = color[u]
            clash = rows[u] & masks[c]
            if clash:
                v = (clash & -clash).bit_length() - 1
                return BipartiteResult(False, odd_cycle=_odd_cycle(u, v, parent, depth))
            fresh = rows[u] & ~(masks[0] | masks[1])
            for v in iter_bits(fresh):
                color[v] = 1 - c
                parent[v] = u
                depth[v] = depth[u] + 1
                masks[1 - c] |= 1 << v
                queue.append(v)
    return BipartiteResult(True, coloring=tuple(color))


def _odd_cycle(u, v, parent, depth):
    pu, pv = [u], [v]
    a, b = u, v
    while depth[a] > depth[b]:
        a = parent[a]
        pu.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        pv.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        pu.append(a)
        pv.append(b)
    # pu ends at the common ancestor; pv too
    return tuple(pu + pv[-2::-1])
