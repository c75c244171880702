"""Permutations and small permutation groups held as explicit element lists.

Points are 0-based internally. Permutations act on the right: ``p * q``
applies ``p`` first and then ``q``, so ``i ** (p * q) == q(p(i))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from dergraph.errors import (
    GroupError,
    IntransitiveGroupError,
    OrderCapExceeded,
    PermutationParseError,
)

DEFAULT_MAX_ORDER = 20_000


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise PermutationParseError(f"not a bijection on 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build from 0-based cycles; points not mentioned are fixed."""
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < n:
                    raise PermutationParseError(f"point {a} outside 0..{n - 1}")
                if a in seen:
                    raise PermutationParseError(f"point {a} repeated in cycles")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise GroupError("degree mismatch in product")
        q = other.images
        return Permutation(tuple(q[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __str__(self):
        return format_permutation(self)


def fixed_points(p: Permutation) -> set[int]:
    return {i for i, x in enumerate(p.images) if i == x}


def is_derangement(p: Permutation) -> bool:
    return all(i != x for i, x in enumerate(p.images))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int, one_based: bool = True) -> Permutation:
    """Parse cycle notation like ``"(1,2)(3,4)"`` or an image list ``"[2,1,3]"``.

    ``one_based`` selects the point labelling of the text; the result is
    always 0-based.
    """
    s = "".join(str(text).split())
    off = 1 if one_based else 0
    if s.startswith("["):
        if not s.endswith("]"):
            raise PermutationParseError(f"malformed image list: {text!r}")
        body = s[1:-1]
        try:
            images = [int(x) - off for x in body.split(",")] if body else []
        except ValueError:
            raise PermutationParseError(f"malformed image list: {text!r}") from None
        if len(images) != degree:
            raise PermutationParseError(f"image list has {len(images)} entries, degree is {degree}")
        if any(not 0 <= x < degree for x in images):
            raise PermutationParseError(f"image outside point range in {text!r}")
        return Permutation(tuple(images))

    if s in ("", "()"):
        return Permutation.identity(degree)
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        if m.start() != pos:
            raise PermutationParseError(f"malformed cycle notation: {text!r}")
        pos = m.end()
        body = m.group(1)
        if not body:
            continue
        try:
            pts = [int(x) - off for x in body.split(",")]
        except ValueError:
            raise PermutationParseError(f"malformed cycle notation: {text!r}") from None
        if any(x < 0 or x >= degree for x in pts):
            raise PermutationParseError(f"point out of range for degree {degree} in {text!r}")
        cycles.append(pts)
    if pos != len(s):
        raise PermutationParseError(f"malformed cycle notation: {text!r}")
    return Permutation.from_cycles(cycles, degree)


def format_permutation(p: Permutation, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + ",".join(str(x + off) for x in c) + ")" for c in cyc)


@dataclass(frozen=True, eq=False)
class PermutationGroup:
    """A permutation group with every element enumerated.

    Build instances with :func:`generate_group`. ``elements[0]`` is the
    identity and the order of ``elements`` is canonical, so element indices
    can double as vertex labels.
    """

    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]
    name: str | None = None
    table: np.ndarray = field(repr=False, default=None)
    _index: dict = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, p: Permutation | np.ndarray | Sequence[int]) -> int:
        """Vertex index of an element; ``KeyError`` if not in the group."""
        imgs = p.images if isinstance(p, Permutation) else p
        return self._index[_key(np.asarray(imgs, dtype=np.int16))]

    def __contains__(self, p: Permutation) -> bool:
        return p.degree == self.degree and _key(np.asarray(p.images, dtype=np.int16)) in self._index

    def indices_of(self, rows: np.ndarray) -> np.ndarray:
        """Vertex indices for each row of an ``(k, degree)`` image array."""
        rows = np.ascontiguousarray(rows, dtype=np.int16)
        return np.fromiter((self._index[r.tobytes()] for r in rows), dtype=np.int64, count=len(rows))

    def multiply(self, i: int, j: int) -> int:
        """Index of ``elements[i] * elements[j]``."""
        return self._index[_key(self.table[j][self.table[i]])]

    def inverse_index(self, i: int) -> int:
        return self._index[_key(np.argsort(self.table[i]).astype(np.int16))]

    def right_translate(self, idx: Iterable[int], x: int) -> list[int]:
        """Indices of ``{elements[i] * elements[x]}``."""
        idx = np.fromiter(idx, dtype=np.int64)
        return self.indices_of(self.table[x][self.table[idx]]).tolist()


def _key(row: np.ndarray) -> bytes:
    return np.ascontiguousarray(row, dtype=np.int16).tobytes()


def _closure(degree: int, gens: np.ndarray, max_order: int):
    """Layered breadth-first closure from the identity.

    Each new layer is sorted lexicographically by image array, so the
    resulting order depends only on the generated group and the generators.
    """
    ident = np.arange(degree, dtype=np.int16)
    layers = [ident[None, :]]
    index = {_key(ident): 0}
    frontier = ident[None, :]
    total = 1
    while len(frontier):
        cand = []
        for g in gens:
            # (f * g)(i) = g(f(i))
            cand.append(g[frontier])
        cand = np.concatenate(cand, axis=0)
        fresh = []
        for row in cand:
            k = row.tobytes()
            if k not in index:
                index[k] = -1
                fresh.append(row)
        if not fresh:
            break
        total += len(fresh)
        if total > max_order:
            raise OrderCapExceeded(f"group order exceeds max_order={max_order}")
        fresh = np.array(fresh, dtype=np.int16)
        fresh = fresh[np.lexsort(fresh.T[::-1])]
        layers.append(fresh)
        frontier = fresh
    table = np.concatenate(layers, axis=0)
    index = {row.tobytes(): i for i, row in enumerate(table)}
    return table, index


def generate_group(
    generators: Sequence[Permutation],
    max_order: int = DEFAULT_MAX_ORDER,
    name: str | None = None,
    degree: int | None = None,
) -> PermutationGroup:
    """Enumerate the group generated by ``generators``.

    Raises OrderCapExceeded once more than ``max_order`` elements appear.
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    gens = tuple(generators)
    if not gens:
        if degree is None:
            raise GroupError("need at least one generator or an explicit degree")
        gens = (Permutation.identity(degree),)
    n = gens[0].degree
    if degree is not None and degree != n:
        raise GroupError(f"generator degree {n} does not match degree {degree}")
    if any(g.degree != n for g in gens):
        raise GroupError("generators do not share one degree")
    garr = np.array([g.images for g in gens], dtype=np.int16).reshape(len(gens), n)
    table, index = _closure(n, garr, max_order)
    table.setflags(write=False)
    elements = tuple(Permutation(tuple(int(x) for x in row)) for row in table)
    return PermutationGroup(n, gens, elements, name, table, index)


def orbit(G: PermutationGroup, point: int) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        a = stack.pop()
        for g in G.generators:
            b = g.images[a]
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def orbits_of(elements: Iterable[Permutation], degree: int) -> list[set[int]]:
    """Orbits on points of the group generated by ``elements``, sorted by minimum."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in elements:
        for i, x in enumerate(p.images):
            a, b = find(i), find(x)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, set[int]] = {}
    for i in range(degree):
        groups.setdefault(find(i), set()).add(i)
    return [groups[k] for k in sorted(groups)]


def is_transitive(G: PermutationGroup) -> bool:
    return len(orbit(G, 0)) == G.degree


def stabilizer(G: PermutationGroup, point: int) -> list[Permutation]:
    return [G.elements[i] for i in stabilizer_indices(G, point)]


def stabilizer_indices(G: PermutationGroup, point: int) -> list[int]:
    return np.flatnonzero(G.table[:, point] == point).tolist()


def transporter_indices(G: PermutationGroup, src: int, dst: int) -> list[int]:
    """Indices of all elements mapping ``src`` to ``dst``."""
    return np.flatnonzero(G.table[:, src] == dst).tolist()


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[frozenset[int], ...]

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def count(self) -> int:
        return len(self.blocks)

    def is_trivial(self) -> bool:
        return self.block_size == 1 or self.count == 1


def _is_block_system(gens: Iterable[Permutation], classes: list[frozenset[int]]) -> bool:
    """Every generator maps every class onto a class."""
    cls = set(classes)
    return all(frozenset(g.images[x] for x in c) in cls for g in gens for c in classes)


def minimal_block(G: PermutationGroup, alpha: int, beta: int) -> frozenset[int]:
    """Smallest block of imprimitivity containing ``alpha`` and ``beta``.

    Union-find refinement: join ``alpha ~ beta`` and close under
    ``x ~ y => g(x) ~ g(y)`` for every generator ``g``.
    """
    if not is_transitive(G):
        raise IntransitiveGroupError("minimal_block needs a transitive group")
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(alpha, beta)]
    while pending:
        a, b = pending.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[rb] = ra
        for g in G.generators:
            pending.append((g.images[a], g.images[b]))
    classes: dict[int, set[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), set()).add(x)
    parts = [frozenset(c) for c in classes.values()]
    if len({len(c) for c in parts}) != 1 or not _is_block_system(G.generators, parts):
        raise GroupError("union-find refinement produced a non-block")
    return frozenset(classes[find(alpha)])


def block_system(G: PermutationGroup, block: Iterable[int]) -> BlockSystem:
    """The system of imprimitivity generated by one block."""
    block = frozenset(block)
    found = {block}
    stack = [block]
    while stack:
        b = stack.pop()
        for g in G.generators:
            img = frozenset(g.images[x] for x in b)
            if img not in found:
                found.add(img)
                stack.append(img)
    blocks = tuple(sorted(found, key=min))
    if sum(len(b) for b in blocks) != G.degree:
        raise GroupError("images of the block do not partition the points")
    return BlockSystem(blocks)


def is_primitive(G: PermutationGroup) -> bool:
    if not is_transitive(G):
        raise IntransitiveGroupError("primitivity is defined for transitive groups")
    n = G.degree
    return all(len(minimal_block(G, 0, b)) in (1, n) for b in range(1, n))


def subgroup_closure_indices(G: PermutationGroup, subset: Iterable[int]) -> list[int]:
    """Indices (sorted) of the subgroup generated by the given element indices.

    Elements are adjoined one at a time, and an element already inside the
    current subgroup is skipped, so the number of closure passes is at most
    log2 of the subgroup order.
    """
    members = {0}
    gens: list[int] = []
    table = G.table
    for s in subset:
        if s in members:
            continue
        gens.append(s)
        garr = table[gens]
        frontier = np.array(sorted(members), dtype=np.int64)
        while len(frontier):
            prods = np.concatenate([g[table[frontier]] for g in garr], axis=0)
            idx = G.indices_of(prods)
            new = [int(i) for i in np.unique(idx) if int(i) not in members]
            members.update(new)
            frontier = np.array(new, dtype=np.int64)
    return sorted(members)


def subgroup_generated(G: PermutationGroup, subset: Iterable[Permutation]) -> list[Permutation]:
    idx = subgroup_closure_indices(G, (G.index(p) for p in subset))
    return [G.elements[i] for i in idx]


def find_regular_cycle(G: PermutationGroup) -> Permutation | None:
    """First element (in canonical order) that is a single ``n``-cycle."""
    n = G.degree
    if n == 1:
        return G.elements[0]
    for p in G.elements:
        c = p.cycles()
        if len(c) == 1 and len(c[0]) == n:
            return p
    return None
